"""
Line integrals on the Jacobi curve w² = (1 - z²)(1 - k²z²).

A path is a chain of segments and circular arcs in the z-plane together with the sheet of w at
its start, given relative to the branch w⁺ = √(1 - z²)·√(1 - k²z²) (principal roots), which is
positive on the imaginary axis. Along the path w is continued by nearest continuation: each
sample takes the root closest to the previous one.

Integrals use composite Gauss-Legendre panels whose length follows the distance to the nearest
branch point or pole, halved until two successive passes agree.
"""
import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .exceptions import PathError
from .log import quad_logger as logger

GAUSS_NODES = 48
PANEL_FRACTION = 0.5
MAX_PANEL = 0.5
MIN_PANEL = 1e-7
MAX_REFINE = 6
STEP_RATIO = 0.5


@dataclass(frozen=True)
class Segment:
    start: complex
    end: complex

    @property
    def length(self) -> float:
        return abs(self.end - self.start)

    def point(self, t):
        return self.start + (self.end - self.start) * t

    def tangent(self, t):
        return (self.end - self.start) * np.ones_like(t)

    def distance_to(self, z: complex) -> float:
        d = self.end - self.start
        if d == 0:
            return abs(z - self.start)
        t = ((z - self.start) * d.conjugate()).real / abs(d) ** 2
        return abs(z - self.point(min(1.0, max(0.0, t))))


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    theta1: float

    @property
    def start(self) -> complex:
        return self.point(0.0)

    @property
    def end(self) -> complex:
        return self.point(1.0)

    @property
    def length(self) -> float:
        return abs(self.theta1 - self.theta0) * self.radius

    def point(self, t):
        return self.center + self.radius * np.exp(1j * (self.theta0 + (self.theta1 - self.theta0) * t))

    def tangent(self, t):
        span = self.theta1 - self.theta0
        return 1j * span * self.radius * np.exp(1j * (self.theta0 + span * t))

    def distance_to(self, z: complex) -> float:
        # whole-circle distance: a lower bound that is exact for the full loops used here
        return abs(abs(z - self.center) - self.radius)


Piece = Union[Segment, Arc]


@dataclass(frozen=True)
class PathSpec:
    pieces: Tuple[Piece, ...]
    start_sheet: int = 1
    name: str = ''

    def __post_init__(self):
        if self.start_sheet not in (1, -1):
            raise PathError('start sheet must be +1 or -1, got %r' % self.start_sheet)
        for before, after in zip(self.pieces, self.pieces[1:]):
            if abs(complex(before.end) - complex(after.start)) > 1e-12:
                raise PathError('path %s is not connected at %r' % (self.name or '?', before.end))

    @property
    def start(self) -> complex:
        return complex(self.pieces[0].start)

    @property
    def end(self) -> complex:
        return complex(self.pieces[-1].end)

    def distance_to(self, z: complex) -> float:
        return min(piece.distance_to(z) for piece in self.pieces)


def w_principal(z, k: float):
    z = np.asarray(z, dtype=complex)
    return np.sqrt(1 - z * z) * np.sqrt(1 - k * k * z * z)


def branch_points(k: float):
    return (1.0, -1.0, 1 / k, -1 / k)


def track_sheet(z, k: float, start_sheet: int = 1):
    """
    Continue w along the samples z, starting on ``start_sheet`` times w⁺ at z[0].

    Raises PathError when consecutive samples are too far apart for the continuation to be
    unambiguous.
    """
    principal = w_principal(z, k)
    flips = np.abs(principal[1:] - principal[:-1]) > np.abs(principal[1:] + principal[:-1])
    signs = start_sheet * np.concatenate(([1], np.cumprod(np.where(flips, -1, 1))))
    w = principal * signs
    step = np.abs(w[1:] - w[:-1])
    scale = np.maximum(np.abs(w[:-1]), np.abs(w[1:]))
    if np.any(step > STEP_RATIO * np.maximum(scale, 1e-300)):
        raise PathError('sheet continuation is ambiguous: samples too far apart')
    return w


def _panel_breaks(piece: Piece, singular: Sequence[complex], fraction: float):
    length = piece.length
    if length == 0:
        return [0.0]
    breaks = [0.0]
    t = 0.0
    while t < 1.0:
        z = complex(piece.point(t))
        step = MAX_PANEL
        if singular:
            dist = min(abs(z - s) for s in singular)
            step = min(MAX_PANEL, max(MIN_PANEL, fraction * dist, fraction * 0.05 * abs(z)))
        t = min(1.0, t + step / length)
        breaks.append(t)
    return breaks


def path_nodes(path: PathSpec, singular: Sequence[complex], fraction: float = PANEL_FRACTION,
               nodes: int = GAUSS_NODES):
    """
    Quadrature nodes along the path in order: (z, weight·dz/dt).
    """
    x, wts = np.polynomial.legendre.leggauss(nodes)
    zs, ws = [], []
    for piece in path.pieces:
        breaks = _panel_breaks(piece, singular, fraction)
        for a, b in zip(breaks, breaks[1:]):
            t = (b - a) / 2 * x + (a + b) / 2
            zs.append(piece.point(t))
            ws.append((b - a) / 2 * wts * piece.tangent(t))
    return np.concatenate(zs), np.concatenate(ws)


def check_clearance(path: PathSpec, points: Sequence[complex], clearance: float):
    for point in points:
        d = path.distance_to(point)
        if d < clearance:
            raise PathError('path %s passes within %.3g of singular point %r' % (path.name or '?', d, point))


def integrate(coefficient, path: PathSpec, k: float, poles: Sequence[complex] = (),
              tol: float = 1e-11, clearance: float = 1e-3, nodes: int = GAUSS_NODES) -> complex:
    """
    ∫ coefficient(z, w) dz along the path with w continued from the path's start sheet.

    ``coefficient`` is vectorised over numpy arrays of z and w.
    """
    singular = list(branch_points(k)) + list(poles)
    check_clearance(path, poles, clearance)
    previous = None
    fraction = PANEL_FRACTION
    for attempt in range(MAX_REFINE):
        try:
            z, weights = path_nodes(path, singular, fraction, nodes)
            w = track_sheet(z, k, path.start_sheet)
        except PathError:
            fraction /= 2
            continue
        value = complex(np.sum(coefficient(z, w) * weights))
        if previous is not None and abs(value - previous) <= tol * max(1.0, abs(value)):
            logger.debug('path %s converged after %d passes with %d nodes', path.name, attempt + 1, len(z))
            return value
        previous = value
        fraction /= 2
    raise PathError('quadrature along path %s did not converge' % (path.name or '?'))


def track_endpoints(path: PathSpec, k: float, singular: Sequence[complex] = ()):
    """
    The continued w at the first and last quadrature node: used to confirm which sheet a path
    ends on.
    """
    z, _ = path_nodes(path, list(branch_points(k)) + list(singular), PANEL_FRACTION / 4)
    w = track_sheet(z, k, path.start_sheet)
    return (z[0], w[0]), (z[-1], w[-1])


def loop_samples(center: complex, radius: float, count: int):
    theta = 2 * math.pi * np.arange(count) / count
    return center + radius * np.exp(1j * theta), 1j * radius * np.exp(1j * theta) * (2 * math.pi / count)
