# tests/test_config.py

import pytest

from fractricomi.config import (build_line_spec, build_observation, build_problem_spec,
                                build_report_grid, emit_config, load_config, ml_config,
                                parse_config)
from fractricomi.core.data import ParabolaProfile, ZeroSource
from fractricomi.core.errors import ConfigError, ValidationError

DIRECT = """\
command: direct-solve
problem:
  psi: parabola
  alpha: 0.5
"""

INVERSE = """\
command: inverse-recover
problem:
  k0: 1
  t0: 100.0
  d0: 0.01
  alpha0: 0.5
  tau_coeff: 1.0
  f_coeff: 1.0
"""

LINE = """\
command: direct-solve
problem:
  domain: line
  tau: gaussian
  alpha: 0.7
  window_L: 8.0
  xi_max: 8.0
"""

VERIFY = """\
command: verify
seed: 4
problem:
  psi: trace-sine:1,1
  alpha: 1.0
  modes_N: 16
  points: 9
"""


def test_direct_defaults():
    """Test defaults are filled in."""
    config = parse_config(DIRECT)
    assert config.command == "direct-solve"
    assert config.problem["modes_N"] == 64
    assert config.problem["grid_n"] == 513
    assert config.problem["f"] == "zero"
    assert config.problem["domain"] == "bounded"
    assert config.output_format == "csv"
    assert config.output_path is None
    assert config.seed == 0


def test_inverse_defaults():
    """Test inverse commands default to JSON and a 33-point scan."""
    config = parse_config(INVERSE)
    assert config.output_format == "json"
    assert config.problem["grid"] == 33
    assert config.problem["mode"] == "bounded"


def test_alpha_out_of_range():
    """Test an order above one is reported with its key and line."""
    with pytest.raises(ConfigError, match=r"alpha out of \(0,1\]") as info:
        parse_config(DIRECT.replace("alpha: 0.5", "alpha: 1.5"))
    assert info.value.key == "problem.alpha"
    assert info.value.line == 4
    assert isinstance(info.value, ValueError)


def test_missing_key():
    """Test a missing observation value names the key."""
    with pytest.raises(ConfigError, match="missing required key") as info:
        parse_config(INVERSE.replace("  d0: 0.01\n", ""))
    assert info.value.key == "problem.d0"


def test_unknown_keys():
    """Test unknown keys at both levels are rejected with their line."""
    with pytest.raises(ConfigError, match="unknown key") as info:
        parse_config(DIRECT + "  beta: 2\n")
    assert info.value.key == "problem.beta"
    assert info.value.line == 5
    with pytest.raises(ConfigError, match="unknown key") as info:
        parse_config("verbose: true\n" + DIRECT)
    assert info.value.key == "verbose"
    assert info.value.line == 1


def test_syntax_error_line():
    """Test YAML syntax errors report a line."""
    with pytest.raises(ConfigError) as info:
        parse_config("command: verify\nproblem:\n  psi: [parabola\n  alpha: 0.5\n")
    assert info.value.line is not None


def test_type_errors():
    """Test values of the wrong type are rejected."""
    with pytest.raises(ConfigError, match="expected float"):
        parse_config(DIRECT.replace("alpha: 0.5", "alpha: half"))
    with pytest.raises(ConfigError, match="expected int"):
        parse_config(DIRECT + "  modes_N: 8.5\n")
    with pytest.raises(ConfigError):
        parse_config(DIRECT.replace("direct-solve", "solve"))
    with pytest.raises(ConfigError):
        parse_config("- a\n- b\n")


def test_invalid_problem_data():
    """Test problem data rejected by the solver surface as configuration errors."""
    with pytest.raises(ConfigError, match="psi"):
        parse_config(DIRECT.replace("parabola", "gaussian"))
    with pytest.raises(ConfigError):
        parse_config(DIRECT.replace("parabola", "hat"))


@pytest.mark.parametrize("text", [DIRECT, INVERSE, LINE, VERIFY])
def test_round_trip(text):
    """Test emitted configurations parse back unchanged."""
    config = parse_config(text)
    assert parse_config(emit_config(config)) == config


def test_ml_config():
    """Test the command line Mittag-Leffler configuration."""
    config = ml_config(0.5, 1.0, [-1.0, 0.0])
    assert config.problem == {"rho": 0.5, "mu": 1.0, "z": [-1.0, 0.0]}
    assert config.output_format == "csv"
    with pytest.raises(ConfigError):
        ml_config(0.0, 1.0, [0.0])
    assert ml_config(1.0, -1.0, [0.0]).problem["mu"] == -1.0
    with pytest.raises(ConfigError, match="mu must be finite"):
        ml_config(1.0, float("inf"), [0.0])


def test_single_coefficient_defaults_other():
    """Test giving only one coefficient sets the other to zero."""
    config = parse_config(INVERSE.replace("  f_coeff: 1.0\n", ""))
    assert config.problem["f_coeff"] == 0.0
    obs = build_observation(config)
    assert (obs.tau_coeff, obs.f_coeff) == (1.0, 0.0)


def test_inverse_from_problem_data():
    """Test coefficients computed from characteristic data."""
    text = INVERSE.replace("  tau_coeff: 1.0\n  f_coeff: 1.0\n",
                           "  psi: parabola\n  f: profile:sine:1\n  alpha: 0.6\n")
    obs = build_observation(parse_config(text))
    assert obs.k0 == 1
    assert obs.f_coeff == pytest.approx(1.0, abs=1e-12)
    assert obs.tau_coeff != 0.0
    with pytest.raises(ConfigError, match="alpha"):
        parse_config(text.replace("  alpha: 0.6\n", ""))


def test_inverse_needs_coefficients_or_data():
    """Test an observation without coefficients or data is rejected."""
    with pytest.raises(ConfigError):
        parse_config(INVERSE.replace("  tau_coeff: 1.0\n  f_coeff: 1.0\n", ""))


def test_line_configuration():
    """Test the line problem configuration and its domain override."""
    config = parse_config(LINE)
    assert config.problem["refinement"] == 1
    spec = build_line_spec(config)
    assert spec.alpha == 0.7
    assert spec.time_independent
    overridden = parse_config(LINE.replace("  domain: line\n", ""), domain="line")
    assert overridden.problem["domain"] == "line"


def test_builders():
    """Test problem and report grid construction."""
    spec = build_problem_spec(parse_config(DIRECT))
    assert isinstance(spec.psi, ParabolaProfile)
    assert isinstance(spec.source, ZeroSource)
    grid = build_report_grid(parse_config(VERIFY))
    assert (grid.points, grid.seed) == (9, 4)


def test_load_config(tmp_path):
    """Test configurations load from disk."""
    path = tmp_path / "run.yaml"
    path.write_text(DIRECT)
    assert load_config(str(path)) == parse_config(DIRECT)
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.yaml"))
