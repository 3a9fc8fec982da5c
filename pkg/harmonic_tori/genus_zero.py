"""
Homogeneous tori: harmonic maps of tori into SU(2) whose spectral curve has genus zero.

A map g(w) = exp(-4 w_R X) exp(4 w_I Y) is fixed by the ratio x = |Y|/|X| and the angle δ
between X and Y. Its spectral curve η² = (ζ - α)(1 - ᾱζ) is fixed by the single branch point
α, the Cayley transform of x·e^{iδ}, and the pair of differentials by an integer matrix.
"""
import cmath
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .exceptions import DomainError

IntMatrix = Tuple[Tuple[int, int], Tuple[int, int]]

INT_BOUND = 2 ** 31
ROOT_TOL = 1e-9


@dataclass(frozen=True)
class Genus0Map:
    x: float
    delta: float

    def __post_init__(self):
        if not self.x > 0:
            raise DomainError('length ratio x must be positive, got %r' % self.x)
        if not 0 < self.delta < math.pi:
            raise DomainError('angle delta must lie in (0, pi), got %r' % self.delta)

    @property
    def z(self) -> complex:
        return self.x * cmath.exp(1j * self.delta)


@dataclass(frozen=True)
class Genus0Data:
    alpha: complex
    matrix: IntMatrix

    def __post_init__(self):
        if not abs(self.alpha) < 1:
            raise DomainError('branch point must lie in the unit disc, got %r' % self.alpha)
        for row in self.matrix:
            for entry in row:
                if abs(entry) > INT_BOUND:
                    raise DomainError('matrix entry %r exceeds the supported integer range' % entry)
        if lattice_det(self.matrix) == 0:
            raise DomainError('differentials are not linearly independent: det %r = 0' % (self.matrix,))


@dataclass(frozen=True)
class PeriodLattice:
    kappa1: complex
    kappa2: complex

    def period(self, n: int, m: int) -> complex:
        return n * self.kappa1 + m * self.kappa2


def lattice_det(matrix: IntMatrix) -> int:
    """
    m¹n² - n¹m² for rows (n¹, m¹), (n², m²): the signed area factor in the energy.
    """
    (n1, m1), (n2, m2) = matrix
    return m1 * n2 - n1 * m2


def branch_point(m: Genus0Map) -> complex:
    z = m.z
    return (z - 1j) / (z + 1j)


def map_params(alpha: complex) -> Genus0Map:
    if not abs(alpha) < 1:
        raise DomainError('branch point must lie in the unit disc, got %r' % alpha)
    z = 1j * (1 + alpha) / (1 - alpha)
    return Genus0Map(abs(z), cmath.phase(z))


def invert_params(m: Genus0Map) -> Genus0Map:
    """
    Parameters of the inverse map g⁻¹, whose branch point is -α.
    """
    return Genus0Map(1 / m.x, math.pi - m.delta)


def latitude(m: Genus0Map) -> float:
    """
    The image is the Hopf torus over the circle of latitude δ - π/2.
    """
    return m.delta - math.pi / 2


def su2_generators(m: Genus0Map):
    x_mat = np.array([[0, 1], [-1, 0]], dtype=complex)
    e = cmath.exp(1j * m.delta)
    y_mat = m.x * np.array([[0, e], [-e.conjugate(), 0]], dtype=complex)
    return x_mat, y_mat


def su2_exp(z_mat) -> np.ndarray:
    """
    exp Z = I cos|Z| + Ẑ sin|Z| for traceless anti-hermitian Z, |Z| = √det Z.
    """
    z_mat = np.asarray(z_mat, dtype=complex)
    norm = math.sqrt(max(np.linalg.det(z_mat).real, 0.0))
    if norm == 0:
        return np.eye(2, dtype=complex) + z_mat
    return np.eye(2) * math.cos(norm) + z_mat * (math.sin(norm) / norm)


def harmonic_map_eval(m: Genus0Map, w: complex) -> np.ndarray:
    x_mat, y_mat = su2_generators(m)
    w = complex(w)
    return su2_exp(-4 * w.real * x_mat) @ su2_exp(4 * w.imag * y_mat)


def period_lattice(x: float) -> PeriodLattice:
    if not x > 0:
        raise DomainError('length ratio x must be positive, got %r' % x)
    return PeriodLattice(
        kappa1=math.pi / 4 * (1 - 1j / x),
        kappa2=-math.pi / 4 * (1 + 1j / x),
    )


def conformal_type(matrix: IntMatrix, x: float, normalize: bool = False) -> complex:
    """
    τ = τ₂/τ₁. With ``normalize`` the lattice basis (τ₁, -τ₂) is used when needed so that
    Im τ > 0; the lattice, and so the domain torus, is unchanged.
    """
    (n1, m1), (n2, m2) = matrix
    if lattice_det(matrix) == 0:
        raise DomainError('differentials are not linearly independent: det %r = 0' % (matrix,))
    denominator = (n1 + m1) + 1j * x * (n1 - m1)
    if denominator == 0:
        raise DomainError('first period of %r vanishes' % (matrix,))
    tau = ((n2 + m2) + 1j * x * (n2 - m2)) / denominator
    if normalize and tau.imag < 0:
        tau = -tau
    return tau


def periods(matrix: IntMatrix, x: float):
    """
    (τ₁, τ₂) for the lattice choice given by the matrix rows.
    """
    lattice = period_lattice(x)
    (n1, m1), (n2, m2) = matrix
    return lattice.period(n1, m1), lattice.period(n2, m2)


def _holonomy_entries(zeta: complex, m: Genus0Map, tau: complex):
    z = m.z
    zc = z.conjugate()
    scale = (tau + tau.conjugate() * zeta) / zeta
    upper = (-(1 + 1j * z), -1 + 1j * z)
    lower = (1 + 1j * zc, 1 - 1j * zc)
    return scale, upper, lower


def holonomy_B(l: int, zeta: complex, m: Genus0Map, tau_l: complex) -> np.ndarray:
    """
    Log of the holonomy along [0, τ_l] of the flat connection at spectral parameter ζ.

    ``l`` only labels the period; the matrix depends on it through τ_l.
    """
    if l not in (1, 2):
        raise DomainError('holonomy index must be 1 or 2, got %r' % l)
    if zeta == 0:
        raise DomainError('spectral parameter must be non-zero')
    scale, upper, lower = _holonomy_entries(zeta, m, tau_l)
    return scale * np.array([
        [0, upper[0] + upper[1] * zeta],
        [lower[0] + lower[1] * zeta, 0],
    ], dtype=complex)


def eigenvalue_squared(zeta: complex, m: Genus0Map, tau_l: complex) -> complex:
    """
    The right side of -det B = ν²: -ζ⁻²(τ + τ̄ζ)² |1 - ixe^{iδ}|² (ζ - α)(1 - ᾱζ).
    """
    alpha = branch_point(m)
    factor = abs(1 - 1j * m.z) ** 2
    return -((tau_l + tau_l.conjugate() * zeta) / zeta) ** 2 * factor * (zeta - alpha) * (1 - alpha.conjugate() * zeta)


def eigenline_roots(m: Genus0Map, tau_l: complex = None):
    """
    Where the eigenlines of the holonomy coincide: the roots of the off-diagonal product,
    smaller first, with the second root as ``inf`` when the product is linear.
    """
    if tau_l is None:
        tau_l = period_lattice(m.x).kappa1
    _, upper, lower = _holonomy_entries(1.0, m, tau_l)
    coeffs = [
        upper[1] * lower[1],
        upper[1] * lower[0] + upper[0] * lower[1],
        upper[0] * lower[0],
    ]
    if abs(coeffs[0]) < 1e-14 * max(abs(c) for c in coeffs):
        return complex(-coeffs[2] / coeffs[1]), complex('inf')
    first, second = sorted((complex(r) for r in np.roots(coeffs)), key=abs)
    return first, second


def eigenline_branch_points(m: Genus0Map, tau_l: complex = None):
    """
    Returns (α, 1/ᾱ) with the second root as ``inf`` when α = 0.
    """
    roots = eigenline_roots(m, tau_l)
    expected = branch_point(m)
    if abs(roots[0] - expected) > ROOT_TOL:
        raise DomainError('eigenline coincidence %r disagrees with branch point %r' % (roots[0], expected))
    return roots


def energy(d: Genus0Data) -> float:
    a = d.alpha
    return math.pi ** 2 * (1 + abs(a) ** 2) * lattice_det(d.matrix) / abs(1 - a * a)


def differential_scalars(alpha: complex):
    """
    (r₁, r₂) with r_l = iκ_l|1 - ixe^{iδ}|.

    r₁ equals (π/2)(1/|1+α| + i/|1-α|) and r₂ is its conjugate.
    """
    if alpha in (1, -1):
        raise DomainError('differential scalars are singular at alpha = %r' % alpha)
    m = map_params(alpha)
    lattice = period_lattice(m.x)
    length = abs(1 - 1j * m.z)
    return 1j * lattice.kappa1 * length, 1j * lattice.kappa2 * length


def differential_scalars_alpha(alpha: complex) -> complex:
    return math.pi / 2 * (1 / abs(1 + alpha) + 1j / abs(1 - alpha))


def genus0_differential(l: int, zeta: complex, d: Genus0Data) -> complex:
    """
    dζ-coefficient of Θ^l = n^l Ψ¹ + m^l Ψ², Ψ^j = d{ζ⁻¹(r_j + r̄_j ζ) η}, on the sheet
    continuing η = √((ζ - α)(1 - ᾱζ)) from the principal root.
    """
    alpha = d.alpha
    ac = alpha.conjugate()
    eta = cmath.sqrt((zeta - alpha) * (1 - ac * zeta))
    d_eta = ((1 - ac * zeta) - ac * (zeta - alpha)) / (2 * eta)
    n, m = d.matrix[l - 1]
    total = 0j
    for coeff, r in zip((n, m), differential_scalars(alpha)):
        # d/dζ [(r/ζ + r̄) η]
        total += coeff * (-r / zeta ** 2 * eta + (r / zeta + r.conjugate()) * d_eta)
    return total


def invert_map(d: Genus0Data) -> Genus0Data:
    return Genus0Data(-d.alpha, d.matrix)
