# fractricomi/cli.py

"""
Command line entry point.

    frac-tricomi ml eval --rho R --mu M --z Z [--z Z ...]
    frac-tricomi direct solve --config PATH [--domain bounded|line]
    frac-tricomi inverse recover --config PATH
    frac-tricomi inverse scan --config PATH [--grid M]
    frac-tricomi verify --config PATH

Exit status is 0 on success, 2 for invalid input and 3 when a numerical
method fails or a verification report does not pass.
"""

import argparse
import dataclasses
import json
import logging
import sys
from typing import List, Optional

import numpy as np
import pandas as pd

from .config import (FORMATS, RunConfig, build_line_spec, build_observation, build_problem_spec,
                     build_report_grid, line_source_parts, load_config, ml_config)
from .core.data import parse_profile
from .core.direct_bounded import build_solution, sample_field, sample_triangle
from .core.direct_line import line_traces, sample_line_field
from .core.errors import (ConvergenceError, NotMonotoneError, NumericalError, OutOfRangeError,
                          TricomiError, ValidationError)
from .core.events import EventLog
from .core.inverse import check_range, monotonicity_scan, recover_alpha
from .core.special_functions import MLParams, mittag_leffler
from .core.verification import verify_solution

logger = logging.getLogger("fractricomi")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"


def configure_logging(verbosity: int):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root = logging.getLogger("fractricomi")
    root.handlers[:] = [handler]
    root.setLevel(level)


def write_frame(frame: pd.DataFrame, path: Optional[str]):
    """CSV with a header row, ',' separator, '\\n' line ends and 17 significant digits."""
    text = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    _write_text(text, path)


def write_json(payload: dict, path: Optional[str]):
    _write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", path)


def _write_text(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as f:
        f.write(text)
    logger.info("Wrote %s", path)


def _emit(config: RunConfig, frame: pd.DataFrame, summary: dict):
    if config.output_format == "csv":
        write_frame(frame, config.output_path)
    else:
        write_json({**summary, "field": frame.to_dict(orient="list")}, config.output_path)


def run_ml_eval(config: RunConfig, event_log: EventLog) -> int:
    p = config.problem
    params = MLParams(p["rho"], p["mu"])
    zs = np.atleast_1d(np.asarray(p["z"], dtype=float))
    values = [mittag_leffler(params, z) for z in zs]
    frame = pd.DataFrame({"rho": params.rho, "mu": params.mu, "z": zs, "value": values})
    _emit(config, frame, {"rho": params.rho, "mu": params.mu})
    return EXIT_OK


def run_direct_solve(config: RunConfig, event_log: EventLog) -> int:
    p = config.problem
    if p["domain"] == "line":
        spec = build_line_spec(config)
        xs = np.linspace(-p["x_extent"], p["x_extent"], p["nx"])
        ts = p["horizon"] * np.arange(1, p["nt"] + 1) / p["nt"]
        source, _, _ = line_source_parts(p["f"])
        traces = line_traces(parse_profile(p["tau"], domain="line"), p["alpha"], p["grid_n"])
        frame = pd.concat([sample_line_field(spec, xs, ts),
                           sample_triangle(traces, source, p["nx"], p["nt"])],
                          ignore_index=True)
        _emit(config, frame, {"alpha": spec.alpha, "domain": "line",
                              "window_L": spec.window_L, "xi_max": spec.xi_max})
        return EXIT_OK

    sol = build_solution(build_problem_spec(config), event_log)
    frame = sample_field(sol, p["nx"], p["nt"])
    _emit(config, frame, {"alpha": sol.alpha, "domain": "bounded", "modes": int(sol.modes.size),
                          "reconstruction": sol.reconstruction_error})
    return EXIT_OK


def run_verify(config: RunConfig, event_log: EventLog) -> int:
    sol = build_solution(build_problem_spec(config), event_log)
    report = verify_solution(sol, build_report_grid(config), event_log)
    payload = report.to_dict()
    if config.output_format == "csv":
        rows = [(name, value) for name, value in payload.items()
                if name not in ("nu_endpoints", "passed")]
        write_frame(pd.DataFrame(rows, columns=["check", "value"]), config.output_path)
    else:
        write_json(payload, config.output_path)
    if not report.passed():
        logger.error("Verification report does not pass")
        return EXIT_NUMERICAL
    return EXIT_OK


def run_inverse_recover(config: RunConfig, event_log: EventLog) -> int:
    obs = build_observation(config)
    try:
        result = recover_alpha(obs, config.problem["grid"], event_log)
    except OutOfRangeError as e:
        logger.error("%s", e)
        write_json({"error": "out-of-range", "range": list(e.range)}, config.output_path)
        return EXIT_NUMERICAL
    except NotMonotoneError as e:
        logger.error("%s", e)
        write_json({"error": "not-monotone"}, config.output_path)
        return EXIT_NUMERICAL
    except ConvergenceError as e:
        logger.error("%s", e)
        write_json({"error": "no-convergence"}, config.output_path)
        return EXIT_NUMERICAL
    write_json(result.to_dict(), config.output_path)
    return EXIT_OK


def run_inverse_scan(config: RunConfig, event_log: EventLog) -> int:
    obs = build_observation(config)
    scan = monotonicity_scan(obs, config.problem["grid"], event_log)
    verdict = check_range(obs, config.problem["grid"], scan)
    if config.output_format == "csv":
        payload = scan.to_dict()
        frame = pd.DataFrame({key: payload[key] for key in
                              ("alpha", "E", "derivative_sign", "de1", "de2",
                               "de1_predicted", "de2_predicted", "de1_envelope")})
        write_frame(frame, config.output_path)
    else:
        write_json({**scan.to_dict(), **{f"target_{k}": v for k, v in
                                         dataclasses.asdict(verdict).items()}},
                   config.output_path)
    return EXIT_OK


RUNNERS = {
    "ml-eval": run_ml_eval,
    "direct-solve": run_direct_solve,
    "verify": run_verify,
    "inverse-recover": run_inverse_recover,
    "inverse-scan": run_inverse_scan,
}


def run(config: RunConfig, event_log: Optional[EventLog] = None) -> int:
    """
    Dispatch a configuration to its command.

    Returns:
        Exit status
    """
    event_log = event_log if event_log is not None else EventLog()
    logger.info("Running %s", config.command)
    try:
        return RUNNERS[config.command](config, event_log)
    except ValidationError as e:
        logger.error("%s", e)
        return EXIT_VALIDATION
    except NumericalError as e:
        logger.error("%s", e)
        return EXIT_NUMERICAL
    finally:
        if len(event_log):
            logger.info("Events: %s", event_log.summary())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frac-tricomi",
                                     description="Mixed fractional-subdiffusion/wave problems")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="log progress (-v) or debug events (-vv) to stderr")
    groups = parser.add_subparsers(dest="group", required=True)

    def with_output(sub):
        sub.add_argument("--output", help="output file, standard output by default")
        sub.add_argument("--format", choices=FORMATS, help="output format")
        return sub

    ml = groups.add_parser("ml", help="Mittag-Leffler function").add_subparsers(
        dest="action", required=True)
    ml_eval = with_output(ml.add_parser("eval", help="evaluate E_{rho,mu}(z)"))
    ml_eval.add_argument("--rho", type=float, required=True)
    ml_eval.add_argument("--mu", type=float, required=True)
    ml_eval.add_argument("--z", type=float, action="append", required=True)

    direct = groups.add_parser("direct", help="direct problem").add_subparsers(
        dest="action", required=True)
    solve = with_output(direct.add_parser("solve", help="sample the solution field"))
    solve.add_argument("--config", required=True)
    solve.add_argument("--domain", choices=("bounded", "line"))

    inverse = groups.add_parser("inverse", help="recover the fractional order").add_subparsers(
        dest="action", required=True)
    recover = with_output(inverse.add_parser("recover", help="solve E(alpha) = d"))
    recover.add_argument("--config", required=True)
    scan = with_output(inverse.add_parser("scan", help="scan E over [alpha0, 1]"))
    scan.add_argument("--config", required=True)
    scan.add_argument("--grid", type=int)

    verify = with_output(groups.add_parser("verify", help="residual report of a series solution"))
    verify.add_argument("--config", required=True)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.group == "ml":
        config = ml_config(args.rho, args.mu, args.z)
    else:
        if args.group == "inverse":
            command = f"inverse-{args.action}"
        else:
            command = {"direct": "direct-solve", "verify": "verify"}[args.group]
        config = load_config(args.config, domain=getattr(args, "domain", None))
        if config.command != command:
            raise ValidationError(f"configuration is for '{config.command}', not '{command}'")
        if getattr(args, "grid", None) is not None:
            config = dataclasses.replace(config, problem={**config.problem, "grid": args.grid})
    if args.output is not None:
        config = dataclasses.replace(config, output_path=args.output)
    if args.format is not None:
        config = dataclasses.replace(config, output_format=args.format)
    return config


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = _config_from_args(args)
    except TricomiError as e:
        logger.error("%s", e)
        return EXIT_VALIDATION if isinstance(e, ValidationError) else EXIT_NUMERICAL
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
