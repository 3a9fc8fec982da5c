import numpy as np
import pytest

from harmonic_tori.config import CONFIG_ENV, Config
from harmonic_tori.verify import random_branch_pair, random_contour_frame

SIMPLE_CONFIG = """\
# small grids for quick sweeps
max_den = 16
k_grid = 3
angle_grid = 5
seed = 7
"""


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def config():
    return Config()


@pytest.fixture
def branch_pairs(rng):
    return [random_branch_pair(rng) for _ in range(10)]


@pytest.fixture
def contour_frame(rng):
    return random_contour_frame(rng)


@pytest.fixture
def config_file(tmp_path, monkeypatch):
    path = tmp_path / 'htori.cfg'
    path.write_text(SIMPLE_CONFIG)
    monkeypatch.setenv(CONFIG_ENV, str(path))
    return path


@pytest.fixture(autouse=True)
def no_config_env(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV, raising=False)
