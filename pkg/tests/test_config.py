import pytest

from harmonic_tori.config import Config, load_config
from harmonic_tori.exceptions import HarmonicToriConfigError


def test_defaults():
    config = Config()
    assert config.detect_tol == 1e-9
    assert config.max_den == 64
    assert (config.k_min, config.k_max) == (0.05, 0.95)
    assert config.seed == 42


def test_fields_listing():
    assert Config.fields()[:3] == ('boundary_eps', 'quad_tol', 'solver_tol')
    assert str(Config()).startswith('Config:\n  boundary_eps: 1e-09\n')


@pytest.mark.parametrize('kwargs,msg', [
    ({'solver_tol': 0}, 'solver_tol must be positive, got 0'),
    ({'k_min': 0.5, 'k_max': 0.4}, 'k range must satisfy 0 < k_min < k_max < 1, got (0.5, 0.4)'),
    ({'k_grid': 0}, 'grid sizes must be at least 2, got k_grid=0 angle_grid=16'),
    ({'max_den': 0}, 'max_den must be at least 1, got 0'),
])
def test_invalid(kwargs, msg):
    with pytest.raises(HarmonicToriConfigError) as excinfo:
        Config(**kwargs)
    assert excinfo.value.args[0] == msg


def test_from_file(config_file):
    config = Config.from_file(config_file, seed=3)
    assert config.max_den == 16
    assert config.k_grid == 3
    assert config.seed == 3


def test_unknown_key(tmp_path):
    path = tmp_path / 'bad.cfg'
    path.write_text('colour = red\n')
    with pytest.raises(HarmonicToriConfigError) as excinfo:
        Config.read_file(path)
    assert excinfo.value.args[0] == '%s:1: unknown config key "colour"' % path


def test_bad_value(tmp_path):
    path = tmp_path / 'bad.cfg'
    path.write_text('\n# comment\nmax_den = lots\n')
    with pytest.raises(HarmonicToriConfigError) as excinfo:
        Config.read_file(path)
    assert excinfo.value.args[0] == '%s:3: invalid value for max_den: "lots"' % path


def test_missing_file(tmp_path):
    with pytest.raises(HarmonicToriConfigError):
        Config.read_file(tmp_path / 'missing.cfg')


def test_load_config_env(config_file):
    config = load_config(max_den=None, angle_grid=9)
    assert config.max_den == 16
    assert config.angle_grid == 9


def test_load_config_no_env():
    assert load_config(seed=None).seed == 42
