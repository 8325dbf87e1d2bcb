# tests/test_verification.py

import numpy as np
import pytest

from fractricomi.core.data import (DecayingSource, ParabolaProfile, ProfileSource, SineProfile,
                                   TraceSineProfile, ZeroSource)
from fractricomi.core.direct_bounded import ProblemSpec, build_solution
from fractricomi.core.events import EventLog
from fractricomi.core.verification import TOLERANCES, ReportGrid, verify_solution

SMALL_GRID = ReportGrid(points=9, samples=6, seed=3)


def single_mode(alpha):
    spec = ProblemSpec(psi=TraceSineProfile(1, alpha), source=ZeroSource(), alpha=alpha,
                       modes_N=16)
    return build_solution(spec)


def test_single_mode_heat_residuals():
    """Test every residual of the manufactured alpha = 1 problem is small."""
    report = verify_solution(single_mode(1.0))
    assert report.passed()
    for name in ("gl1", "gl2", "boundary", "characteristic", "subdiffusion",
                 "first_relation", "second_relation"):
        assert getattr(report, name) <= 1e-6, name
    assert report.wave <= TOLERANCES["wave"]
    assert report.weighted_rate_gap <= 1e-5


@pytest.mark.parametrize("alpha", [0.5, 0.8])
def test_single_mode_fractional_passes(alpha):
    """Test the fractional single-mode problem passes all checks."""
    report = verify_solution(single_mode(alpha), SMALL_GRID)
    assert report.passed()
    assert report.subdiffusion is not None


def test_report_dict():
    """Test the report dictionary carries every check and the verdict."""
    report = verify_solution(single_mode(1.0), SMALL_GRID)
    data = report.to_dict()
    for name in TOLERANCES:
        assert name in data
    assert data["passed"] is True
    assert isinstance(data["nu_endpoints"], list) and len(data["nu_endpoints"]) == 2
    assert data["tail_estimate"] >= 0


def test_report_is_deterministic():
    """Test the same seed gives the same report."""
    sol = single_mode(0.5)
    first = verify_solution(sol, SMALL_GRID).to_dict()
    second = verify_solution(sol, SMALL_GRID).to_dict()
    assert first == second


def test_checks_emit_events():
    """Test one ResidualChecked event is emitted per performed check."""
    log = EventLog()
    report = verify_solution(single_mode(1.0), SMALL_GRID, log)
    events = log.get_events("ResidualChecked")
    performed = [name for name, value in report.checks().items() if value is not None]
    assert [e.params["check"] for e in events] == performed
    assert all(e.params["passed"] for e in events)


def test_time_dependent_source_skips_subdiffusion():
    """Test checks that need static source coefficients are skipped."""
    spec = ProblemSpec(psi=ParabolaProfile(), source=DecayingSource(SineProfile(1)), alpha=1.0,
                       modes_N=16)
    report = verify_solution(build_solution(spec), SMALL_GRID)
    assert report.subdiffusion is None
    assert report.weighted_rate_gap is None
    assert report.boundary <= TOLERANCES["boundary"]
    assert np.isfinite(report.gl1)


def test_wave_residual_with_full_data():
    """Test the d'Alembert side at 50 random points with nonzero tau, nu and f."""
    spec = ProblemSpec(psi=ParabolaProfile(), source=ProfileSource(SineProfile(1)), alpha=0.5,
                       modes_N=32)
    sol = build_solution(spec)
    assert np.max(np.abs(sol.traces.tau)) > 1e-2
    assert np.max(np.abs(sol.traces.nu)) > 1e-2
    report = verify_solution(sol, ReportGrid(points=9, samples=50, seed=11))
    assert report.wave <= TOLERANCES["wave"]


@pytest.mark.slow
@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
def test_acceptance_run(alpha):
    """Test psi = x(1 - x), f = 0, N = 64 on 513 points passes with every residual below 1e-3."""
    spec = ProblemSpec(psi=ParabolaProfile(), source=ZeroSource(), alpha=alpha,
                       grid_n=513, modes_N=64)
    report = verify_solution(build_solution(spec))
    assert report.passed()
    assert all(value <= 1e-3 for value in report.checks().values() if value is not None)
