# fractricomi/config.py

"""
Run configuration documents.

A configuration is a YAML mapping with the top-level keys command,
output_path, output_format, seed and problem; problem is the only nested
mapping and its keys depend on the command:

    command: direct-solve
    output_format: csv
    problem:
      psi: parabola
      f: zero
      alpha: 0.5
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, NamedTuple, Optional, Tuple

import numpy as np
import yaml

from .core.data import DecayingSource, parse_profile, parse_source
from .core.direct_bounded import DEFAULT_GRID, DEFAULT_HORIZON, DEFAULT_MODES, ProblemSpec
from .core.direct_line import DEFAULT_WINDOW, DEFAULT_XI_MAX, LineSpec, line_spec_from_profiles
from .core.errors import ConfigError, InvalidSpecError, ValidationError
from .core.inverse import (DEFAULT_SCAN, InverseObservation, observation_from_problem,
                           observation_from_profiles)
from .core.verification import ReportGrid

logger = logging.getLogger(__name__)

COMMANDS = ("ml-eval", "direct-solve", "inverse-recover", "inverse-scan", "verify")
FORMATS = ("csv", "json")
TOP_KEYS = ("command", "output_path", "output_format", "seed", "problem")
DEFAULT_FORMATS = {
    "ml-eval": "csv",
    "direct-solve": "csv",
    "inverse-recover": "json",
    "inverse-scan": "json",
    "verify": "json",
}

_REQUIRED = object()


class _Field(NamedTuple):
    kind: str
    default: Any = _REQUIRED


_FIELD_GRID = {
    "grid_n": _Field("int", DEFAULT_GRID),
    "horizon": _Field("float", DEFAULT_HORIZON),
    "nx": _Field("int", 21),
    "nt": _Field("int", 10),
}

ML_FIELDS = {
    "rho": _Field("float"),
    "mu": _Field("float"),
    "z": _Field("floats"),
}

BOUNDED_FIELDS = {
    "domain": _Field("str", "bounded"),
    "psi": _Field("str"),
    "f": _Field("str", "zero"),
    "alpha": _Field("float"),
    "modes_N": _Field("int", DEFAULT_MODES),
    **_FIELD_GRID,
}

LINE_FIELDS = {
    "domain": _Field("str", "line"),
    "tau": _Field("str"),
    "f": _Field("str", "zero"),
    "alpha": _Field("float"),
    "window_L": _Field("float", DEFAULT_WINDOW),
    "xi_max": _Field("float", DEFAULT_XI_MAX),
    "refinement": _Field("int", 1),
    "x_extent": _Field("float", 3.0),
    **_FIELD_GRID,
}

VERIFY_FIELDS = {
    **{k: v for k, v in BOUNDED_FIELDS.items() if k != "domain"},
    "points": _Field("int", ReportGrid.points),
    "samples": _Field("int", ReportGrid.samples),
}

INVERSE_BOUNDED_FIELDS = {
    "mode": _Field("str", "bounded"),
    "k0": _Field("int"),
    "t0": _Field("float"),
    "d0": _Field("float"),
    "alpha0": _Field("float"),
    "tau_coeff": _Field("float", None),
    "f_coeff": _Field("float", None),
    "psi": _Field("str", None),
    "f": _Field("str", None),
    "alpha": _Field("float", None),
    "grid_n": _Field("int", DEFAULT_GRID),
    "grid": _Field("int", DEFAULT_SCAN),
}

INVERSE_LINE_FIELDS = {
    "mode": _Field("str", "line"),
    "xi0": _Field("float"),
    "t0": _Field("float"),
    "d1": _Field("float"),
    "alpha0": _Field("float"),
    "tau_coeff": _Field("float", None),
    "f_coeff": _Field("float", None),
    "tau": _Field("str", None),
    "f": _Field("str", None),
    "window_L": _Field("float", DEFAULT_WINDOW),
    "grid": _Field("int", DEFAULT_SCAN),
}


@dataclass(frozen=True)
class RunConfig:
    """
    A validated run configuration.

    Attributes:
        command: One of COMMANDS
        problem: Problem payload with all defaults filled in
        output_path: Output file; None writes to standard output
        output_format: "csv" or "json"
        seed: Seed of randomized checks
    """
    command: str
    problem: Dict[str, Any] = field(default_factory=dict)
    output_path: Optional[str] = None
    output_format: str = "csv"
    seed: int = 0

    def to_dict(self) -> dict:
        out = asdict(self)
        return {key: out[key] for key in TOP_KEYS}


def _key_lines(text: str) -> Dict[Tuple[str, ...], int]:
    """1-based line numbers of the mapping keys, addressed by their path."""
    lines: Dict[Tuple[str, ...], int] = {}
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError:
        return lines

    def walk(node, path):
        if not isinstance(node, yaml.MappingNode):
            return
        for key, value in node.value:
            if isinstance(key, yaml.ScalarNode):
                lines[path + (key.value,)] = key.start_mark.line + 1
                walk(value, path + (key.value,))
    walk(root, ())
    return lines


def _coerce(value: Any, kind: str, key: str, line: Optional[int]) -> Any:
    def fail():
        raise ConfigError(f"expected {kind}, got {value!r}", key=key, line=line)

    if isinstance(value, bool):
        fail()
    if kind == "str":
        if not isinstance(value, str):
            fail()
        return value
    if kind == "int":
        if not isinstance(value, int):
            fail()
        return int(value)
    if kind == "float":
        if not isinstance(value, (int, float)):
            fail()
        return float(value)
    if kind == "floats":
        if isinstance(value, list):
            return [_coerce(v, "float", key, line) for v in value]
        return _coerce(value, "float", key, line)
    raise ValueError(f"unknown field kind {kind}")


def _problem_fields(command: str, problem: Dict[str, Any]) -> Dict[str, _Field]:
    if command == "ml-eval":
        return ML_FIELDS
    if command == "verify":
        return VERIFY_FIELDS
    if command == "direct-solve":
        return LINE_FIELDS if problem.get("domain", "bounded") == "line" else BOUNDED_FIELDS
    return INVERSE_LINE_FIELDS if problem.get("mode", "bounded") == "line" else INVERSE_BOUNDED_FIELDS


def _check_ranges(command: str, problem: Dict[str, Any], where) -> None:
    def check(key, ok, message):
        if key in problem and problem[key] is not None and not ok(problem[key]):
            raise ConfigError(message, key=f"problem.{key}", line=where(key))

    check("alpha", lambda v: 0 < v <= 1, "alpha out of (0,1]")
    check("alpha0", lambda v: 0 < v < 1, "alpha0 out of (0,1)")
    check("rho", lambda v: 0 < v <= 1, "rho out of (0,1]")
    check("mu", lambda v: np.isfinite(v), "mu must be finite")
    check("t0", lambda v: v > 0, "t0 must be positive")
    check("horizon", lambda v: v > 0, "horizon must be positive")
    check("k0", lambda v: v >= 1, "k0 must be a positive integer")
    check("xi0", lambda v: v != 0, "xi0 must be non-zero")
    check("window_L", lambda v: v > 0, "window_L must be positive")
    check("xi_max", lambda v: v > 0, "xi_max must be positive")
    for key in ("grid_n", "modes_N", "nx", "nt", "points", "samples", "refinement"):
        check(key, lambda v: v >= 1, f"{key} must be at least 1")
    if command == "direct-solve":
        check("domain", lambda v: v in ("bounded", "line"), "domain must be 'bounded' or 'line'")
    if command.startswith("inverse"):
        check("mode", lambda v: v in ("bounded", "line"), "mode must be 'bounded' or 'line'")
        direct = problem.get("tau_coeff") is not None and problem.get("f_coeff") is not None
        data = "psi" if problem.get("mode") == "bounded" else "tau"
        if not direct and problem.get(data) is None:
            raise ConfigError(f"give tau_coeff and f_coeff, or {data} and f",
                              key="problem.tau_coeff", line=where("mode"))
        if not direct and data == "psi" and problem.get("alpha") is None:
            raise ConfigError("coefficients from psi need the reference alpha",
                              key="problem.alpha", line=where("psi"))


def parse_config(text: str, domain: Optional[str] = None) -> RunConfig:
    """
    Parse and validate a YAML configuration document.

    Args:
        text: Document text
        domain: Overrides problem.domain of a direct-solve document

    Returns:
        RunConfig with defaults filled in

    Raises:
        ConfigError: syntax errors, unknown or missing keys, values out of range
    """
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ConfigError(f"invalid YAML: {getattr(e, 'problem', e)}",
                          line=mark.line + 1 if mark is not None else None)
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a mapping")
    lines = _key_lines(text)

    for key in raw:
        if key not in TOP_KEYS:
            raise ConfigError("unknown key", key=str(key), line=lines.get((str(key),)))
    command = raw.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"command must be one of {COMMANDS}, got {command!r}",
                          key="command", line=lines.get(("command",)))

    problem_raw = raw.get("problem") or {}
    if not isinstance(problem_raw, dict):
        raise ConfigError("problem must be a mapping", key="problem",
                          line=lines.get(("problem",)))

    def where(key):
        return lines.get(("problem", key))

    if domain is not None and command == "direct-solve":
        problem_raw = {**problem_raw, "domain": domain}
    fields = _problem_fields(command, problem_raw)
    problem: Dict[str, Any] = {}
    for key in problem_raw:
        if key not in fields:
            raise ConfigError("unknown key", key=f"problem.{key}", line=where(key))
    for key, spec in fields.items():
        if key in problem_raw and problem_raw[key] is not None:
            problem[key] = _coerce(problem_raw[key], spec.kind, f"problem.{key}", where(key))
        elif spec.default is _REQUIRED:
            raise ConfigError("missing required key", key=f"problem.{key}",
                              line=lines.get(("problem",)))
        else:
            problem[key] = spec.default
    if command.startswith("inverse") and (problem["tau_coeff"] is None) != (problem["f_coeff"] is None):
        # One coefficient alone means the other vanishes.
        for key in ("tau_coeff", "f_coeff"):
            if problem[key] is None:
                problem[key] = 0.0
    _check_ranges(command, problem, where)

    output_format = raw.get("output_format") or DEFAULT_FORMATS[command]
    if output_format not in FORMATS:
        raise ConfigError(f"output_format must be one of {FORMATS}", key="output_format",
                          line=lines.get(("output_format",)))
    output_path = raw.get("output_path")
    if output_path is not None and not isinstance(output_path, str):
        raise ConfigError("output_path must be a string", key="output_path",
                          line=lines.get(("output_path",)))
    seed = raw.get("seed", 0)
    seed = 0 if seed is None else _coerce(seed, "int", "seed", lines.get(("seed",)))

    config = RunConfig(command=command, problem=problem, output_path=output_path,
                       output_format=output_format, seed=seed)
    if command in ("direct-solve", "verify") and problem.get("domain", "bounded") == "bounded":
        try:
            build_problem_spec(config)
        except ValidationError as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(str(e), key="problem")
    return config


def emit_config(config: RunConfig) -> str:
    """YAML text that parses back to the same RunConfig."""
    return yaml.safe_dump(config.to_dict(), sort_keys=False, default_flow_style=False)


def load_config(path: str, domain: Optional[str] = None) -> RunConfig:
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read configuration {path}: {e}")
    logger.info("Loaded configuration %s", path)
    return parse_config(text, domain)


def ml_config(rho: float, mu: float, z) -> RunConfig:
    """Configuration of an ml-eval run given on the command line."""
    return parse_config(yaml.safe_dump({"command": "ml-eval",
                                        "problem": {"rho": rho, "mu": mu, "z": z}}))


def build_problem_spec(config: RunConfig) -> ProblemSpec:
    p = config.problem
    return ProblemSpec(psi=parse_profile(p["psi"]), source=parse_source(p["f"]),
                       alpha=p["alpha"], grid_n=p["grid_n"], modes_N=p["modes_N"],
                       horizon=p["horizon"])


def line_source_parts(text: str):
    """Spatial profile and time factor of a line source."""
    source = parse_source(text, domain="line")
    if source.time_independent:
        return source, source.spatial(), None
    if isinstance(source, DecayingSource):
        return source, source.profile, lambda t: np.exp(-np.asarray(t, dtype=float))
    raise InvalidSpecError(f"source '{text}' cannot be transformed on the line")


def build_line_spec(config: RunConfig) -> LineSpec:
    p = config.problem
    _, profile, source_time = line_source_parts(p["f"])
    return line_spec_from_profiles(parse_profile(p["tau"], domain="line"), profile, p["alpha"],
                                   window_L=p["window_L"], xi_max=p["xi_max"],
                                   source_time=source_time, refinement=p["refinement"])


def build_observation(config: RunConfig) -> InverseObservation:
    p = config.problem
    if p["mode"] == "line":
        if p["tau_coeff"] is not None and p["f_coeff"] is not None:
            return InverseObservation(mode="line", xi0=p["xi0"], t0=p["t0"], target=p["d1"],
                                      alpha0=p["alpha0"], tau_coeff=p["tau_coeff"],
                                      f_coeff=p["f_coeff"])
        _, profile, source_time = line_source_parts(p["f"] or "zero")
        if source_time is not None:
            raise InvalidSpecError("the inverse problem needs a time independent source")
        return observation_from_profiles(parse_profile(p["tau"], domain="line"), profile,
                                         xi0=p["xi0"], t0=p["t0"], target=p["d1"],
                                         alpha0=p["alpha0"], window_L=p["window_L"])
    if p["tau_coeff"] is not None and p["f_coeff"] is not None:
        return InverseObservation(mode="bounded", k0=p["k0"], t0=p["t0"], target=p["d0"],
                                  alpha0=p["alpha0"], tau_coeff=p["tau_coeff"],
                                  f_coeff=p["f_coeff"])
    spec = ProblemSpec(psi=parse_profile(p["psi"]), source=parse_source(p["f"] or "zero"),
                       alpha=p["alpha"], grid_n=p["grid_n"])
    return observation_from_problem(spec, k0=p["k0"], t0=p["t0"], target=p["d0"],
                                    alpha0=p["alpha0"])


def build_report_grid(config: RunConfig) -> ReportGrid:
    p = config.problem
    return ReportGrid(points=p["points"], samples=p["samples"], seed=config.seed)
