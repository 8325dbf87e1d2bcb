# fractricomi/core/events.py

"""
Run events of the solvers. Each event carries a name, plain-typed parameters
and a timestamp, and belongs to the stage (direct, verify, inverse) that
emitted it. Solvers emit into an optional EventLog; every emitted event is
also logged at DEBUG level.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence

logger = logging.getLogger(__name__)

EVENT_STAGES: Dict[str, str] = {
    "TracesBuilt": "direct",
    "ResidualChecked": "verify",
    "ScanCompleted": "inverse",
    "BracketEstablished": "inverse",
    "RootIteration": "inverse",
    "AlphaRecovered": "inverse",
}


@dataclass(frozen=True)
class Event:
    """A single solver event: a name, its parameters and when it happened."""
    name: str
    params: Dict[str, Any]
    timestamp: datetime = field(default_factory=datetime.now)

    @property
    def stage(self) -> str:
        return EVENT_STAGES.get(self.name, "other")

    def to_dict(self) -> dict:
        return {"name": self.name, "stage": self.stage, "params": dict(self.params),
                "timestamp": self.timestamp.isoformat()}

    @classmethod
    def traces_built(cls, alpha: float, grid_n: int, c2: float, residual: float) -> "Event":
        """Traces tau and nu were built; residual is the worse functional relation residual."""
        return cls("TracesBuilt", {"alpha": float(alpha), "grid_n": int(grid_n),
                                   "c2": float(c2), "residual": float(residual)})

    @classmethod
    def residual_checked(cls, check: str, residual: float, tolerance: float) -> "Event":
        return cls("ResidualChecked", {"check": check, "residual": float(residual),
                                       "tolerance": float(tolerance),
                                       "passed": bool(residual <= tolerance)})

    @classmethod
    def scan_completed(cls, grid_m: int, monotone: bool,
                       value_range: Sequence[float]) -> "Event":
        return cls("ScanCompleted", {"grid_m": int(grid_m), "monotone": bool(monotone),
                                     "range": [float(value_range[0]), float(value_range[1])]})

    @classmethod
    def bracket(cls, lower: float, upper: float) -> "Event":
        return cls("BracketEstablished", {"lower": float(lower), "upper": float(upper)})

    @classmethod
    def root_iteration(cls, iteration: int, alpha: float, residual: float,
                       method: str) -> "Event":
        """One root-search step; method is "bisection" or "regula-falsi"."""
        return cls("RootIteration", {"iteration": int(iteration), "alpha": float(alpha),
                                     "residual": float(residual), "method": method})

    @classmethod
    def alpha_recovered(cls, alpha: float, iterations: int, residual: float) -> "Event":
        return cls("AlphaRecovered", {"alpha": float(alpha), "iterations": int(iterations),
                                      "residual": float(residual)})


class EventLog:
    """Ordered log of the events of one run."""

    def __init__(self):
        self._events: List[Event] = []

    def __len__(self) -> int:
        return len(self._events)

    def emit(self, event: Event):
        logger.debug("%s %s", event.name, event.params)
        self._events.append(event)

    def get_events(self, event_name: Optional[str] = None) -> List[Event]:
        """All events in emission order, or only those with the given name."""
        if event_name is None:
            return self._events.copy()
        return [e for e in self._events if e.name == event_name]

    def by_stage(self, stage: str) -> List[Event]:
        return [e for e in self._events if e.stage == stage]

    def summary(self) -> Dict[str, int]:
        """Event counts by name, in order of first appearance."""
        return dict(Counter(e.name for e in self._events))

    def clear(self):
        self._events = []


def emit(event_log: Optional[EventLog], event: Event):
    """Emit into an optional log; solvers run without one by default."""
    if event_log is not None:
        event_log.emit(event)
