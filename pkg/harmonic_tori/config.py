import inspect
import os
from pathlib import Path

from .exceptions import HarmonicToriConfigError
from .log import main_logger as logger

CONFIG_ENV = 'HTORI_CONFIG'

TOLERANCE_FIELDS = (
    'boundary_eps',
    'quad_tol',
    'solver_tol',
    'band_shrink',
    'detect_tol',
    'path_clearance',
)


class Config:
    def __init__(self, *,
        boundary_eps: float=1e-9,
        quad_tol: float=1e-13,
        solver_tol: float=1e-10,
        band_shrink: float=1e-6,
        detect_tol: float=1e-9,
        max_den: int=64,
        path_clearance: float=1e-3,
        gauss_nodes: int=48,
        k_min: float=0.05,
        k_max: float=0.95,
        k_grid: int=8,
        angle_grid: int=16,
        seed: int=42,
        energy_warning: float=1000.0,
        out_dir: str='.'):
        self.boundary_eps = boundary_eps
        self.quad_tol = quad_tol
        self.solver_tol = solver_tol
        self.band_shrink = band_shrink
        self.detect_tol = detect_tol
        self.max_den = max_den
        self.path_clearance = path_clearance
        self.gauss_nodes = gauss_nodes
        self.k_min = k_min
        self.k_max = k_max
        self.k_grid = k_grid
        self.angle_grid = angle_grid
        self.seed = seed
        self.energy_warning = energy_warning
        self.out_dir = Path(out_dir)
        self._validate()
        logger.debug('config loaded:\n%s', self)

    def _validate(self):
        for name in TOLERANCE_FIELDS:
            if not getattr(self, name) > 0:
                raise HarmonicToriConfigError('%s must be positive, got %r' % (name, getattr(self, name)))
        if not 0 < self.k_min < self.k_max < 1:
            raise HarmonicToriConfigError('k range must satisfy 0 < k_min < k_max < 1, got (%r, %r)'
                                          % (self.k_min, self.k_max))
        if self.k_grid < 2 or self.angle_grid < 2:
            raise HarmonicToriConfigError('grid sizes must be at least 2, got k_grid=%r angle_grid=%r'
                                          % (self.k_grid, self.angle_grid))
        if self.max_den < 1:
            raise HarmonicToriConfigError('max_den must be at least 1, got %r' % self.max_den)
        if self.gauss_nodes < 2:
            raise HarmonicToriConfigError('gauss_nodes must be at least 2, got %r' % self.gauss_nodes)

    @classmethod
    def fields(cls):
        return tuple(inspect.signature(cls.__init__).parameters)[1:]

    @classmethod
    def read_file(cls, path) -> dict:
        """
        Parse a flat ``key = value`` file into keyword arguments for Config.

        Blank lines and lines starting with ``#`` are skipped; values are coerced with the
        annotation of the matching ``__init__`` parameter.
        """
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as e:
            raise HarmonicToriConfigError('unable to read config file "%s": %s' % (path, e)) from e

        params = inspect.signature(cls.__init__).parameters
        values = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            if '=' not in line:
                raise HarmonicToriConfigError('%s:%d: expected "key = value", got "%s"' % (path, lineno, line))
            key, _, raw = (s.strip() for s in line.partition('='))
            if key not in params or key == 'self':
                raise HarmonicToriConfigError('%s:%d: unknown config key "%s"' % (path, lineno, key))
            kind = params[key].annotation
            try:
                values[key] = kind(raw)
            except ValueError as e:
                raise HarmonicToriConfigError('%s:%d: invalid value for %s: "%s"' % (path, lineno, key, raw)) from e
        logger.debug('read %d config values from %s', len(values), path)
        return values

    @classmethod
    def from_file(cls, path, **overrides):
        values = cls.read_file(path)
        values.update(overrides)
        return cls(**values)

    def __str__(self):
        return 'Config:\n' + '\n'.join('  {0}: {1!r}'.format(f, getattr(self, f)) for f in self.fields())


def load_config(**overrides) -> Config:
    """
    Build the run configuration: the file named by HTORI_CONFIG (if set) overlaid with any
    non-None overrides, typically CLI options.
    """
    active = {k: v for k, v in overrides.items() if v is not None}
    path = os.environ.get(CONFIG_ENV)
    if path:
        logger.debug('loading config from %s=%s', CONFIG_ENV, path)
        return Config.from_file(path, **active)
    return Config(**active)
