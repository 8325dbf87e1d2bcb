# tests/test_events.py

import logging
from dataclasses import FrozenInstanceError
from datetime import datetime

import numpy as np
import pytest

from fractricomi.core.events import EVENT_STAGES, Event, EventLog, emit


def test_event_creation():
    """Test basic event creation."""
    event = Event("TestEvent", {"param1": "value1"})
    assert event.name == "TestEvent"
    assert event.params["param1"] == "value1"
    assert isinstance(event.timestamp, datetime)
    assert event.stage == "other"
    with pytest.raises(FrozenInstanceError):
        event.name = "Other"


def test_event_log():
    """Test EventLog keeps events in emission order."""
    log = EventLog()
    log.emit(Event.traces_built(0.5, 513, 0.1, 1e-9))
    log.emit(Event.residual_checked("boundary", 1e-12, 1e-9))

    events = log.get_events()
    assert len(log) == 2
    assert [e.name for e in events] == ["TracesBuilt", "ResidualChecked"]


def test_event_filtering():
    """Test filtering events by name and by stage."""
    log = EventLog()
    log.emit(Event.root_iteration(1, 0.6, 1e-3, "bisection"))
    log.emit(Event.scan_completed(33, True, (0.1, 0.2)))
    log.emit(Event.traces_built(0.5, 513, 0.1, 1e-9))
    log.emit(Event.root_iteration(2, 0.65, 1e-5, "regula-falsi"))

    iterations = log.get_events("RootIteration")
    assert [e.params["iteration"] for e in iterations] == [1, 2]
    assert len(log.by_stage("inverse")) == 3
    assert [e.name for e in log.by_stage("direct")] == ["TracesBuilt"]
    assert log.summary() == {"RootIteration": 2, "ScanCompleted": 1, "TracesBuilt": 1}


def test_factories_cover_every_stage():
    """Test each factory produces a named event with a known stage."""
    events = [Event.traces_built(0.5, 513, 0.1, 1e-9),
              Event.residual_checked("wave", 1e-5, 1e-4),
              Event.scan_completed(17, True, (0.0, 1.0)),
              Event.bracket(0.5, 1.0),
              Event.root_iteration(1, 0.7, 1e-6, "bisection"),
              Event.alpha_recovered(0.7, 12, 1e-15)]
    assert {e.name for e in events} == set(EVENT_STAGES)
    assert all(e.stage != "other" for e in events)


def test_emit_without_log():
    """Test emitting into no log is a no-op."""
    emit(None, Event.traces_built(0.5, 513, 0.1, 1e-9))


def test_events_logged_at_debug(caplog):
    """Test every emitted event is logged at DEBUG."""
    log = EventLog()
    with caplog.at_level(logging.DEBUG, logger="fractricomi"):
        emit(log, Event.alpha_recovered(0.7, 12, 1e-15))
    assert any("AlphaRecovered" in r.getMessage() for r in caplog.records)


def test_residual_checked_event():
    """Test the residual event records whether the check passed."""
    ok = Event.residual_checked("boundary", 1e-12, 1e-9)
    bad = Event.residual_checked("wave", 1e-2, 1e-4)
    assert ok.name == "ResidualChecked"
    assert ok.params["passed"] is True
    assert bad.params["passed"] is False


def test_event_params_are_plain_types():
    """Test numpy scalars are stored as plain Python values."""
    event = Event.scan_completed(np.int64(17), np.bool_(False), np.array([1, 2]))
    assert event.params == {"grid_m": 17, "monotone": False, "range": [1.0, 2.0]}
    assert type(event.params["monotone"]) is bool
    data = event.to_dict()
    assert data["stage"] == "inverse"
    assert data["timestamp"] == event.timestamp.isoformat()


def test_event_log_clear():
    """Test clearing the event log."""
    log = EventLog()
    log.emit(Event.bracket(0.5, 1.0))
    log.emit(Event.bracket(0.6, 0.9))

    assert len(log.get_events()) == 2
    log.clear()
    assert len(log) == 0
