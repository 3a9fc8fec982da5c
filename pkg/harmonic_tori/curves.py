"""
Genus one curves η² = (ζ - α)(1 - ᾱζ)(ζ - β)(1 - β̄ζ) with α, β in the unit disc.

A curve is put in Jacobi normal form w² = (1 - z²)(1 - k²z²) by the Möbius map f sending
α, 1/ᾱ, β, 1/β̄ to 1, -1, 1/k, -1/k. Möbius maps are kept as homogeneous 2x2 matrices so that
0 and ∞ (α = 0, f(ν) = ∞) need no special cases. The coordinates (p, k, ũ, ṽ) on the universal
cover record S, the modulus and lifts of the angles of f(1) = iu and f(-1) = iv on the imaginary
axis.
"""
import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .elliptic import BOUNDARY_EPS, angle_terms, check_modulus, wind
from .exceptions import DomainError

INF = complex('inf')
DIAGONAL_TOL = 1e-12
MODULUS_TOL = 1e-12
TWO_PI = 2 * math.pi


def _homogeneous(z):
    if z == INF or (isinstance(z, complex) and cmath.isinf(z)):
        return np.array([1, 0], dtype=complex)
    return np.array([z, 1], dtype=complex)


def _dehomogenize(vec):
    top, bottom = complex(vec[0]), complex(vec[1])
    if abs(bottom) <= 1e-300 * max(abs(top), 1e-300):
        return INF
    return top / bottom


def mobius_apply(matrix, z):
    return _dehomogenize(matrix @ _homogeneous(z))


def mobius_inverse(matrix):
    (a, b), (c, d) = matrix
    return np.array([[d, -b], [-c, a]], dtype=complex)


def mobius_to_standard(z1, z2, z3):
    """
    The Möbius matrix sending z1, z2, z3 to 0, ∞, 1.
    """
    x1, y1 = _homogeneous(z1)
    x2, y2 = _homogeneous(z2)
    x3, y3 = _homogeneous(z3)
    scale = (y2 * x3 - x2 * y3) / (y1 * x3 - x1 * y3)
    return np.array([[scale * y1, -scale * x1], [y2, -x2]], dtype=complex)


def reflect(z):
    """
    ρ(ζ) = 1/ζ̄, reflection through the unit circle.
    """
    if z == 0:
        return INF
    if z == INF:
        return 0j
    return 1 / complex(z).conjugate()


@dataclass(frozen=True)
class BranchPair:
    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, 'alpha', complex(self.alpha))
        object.__setattr__(self, 'beta', complex(self.beta))
        for name in ('alpha', 'beta'):
            if not abs(getattr(self, name)) < 1:
                raise DomainError('%s must lie in the open unit disc, got %r' % (name, getattr(self, name)))
        if abs(self.alpha - self.beta) < DIAGONAL_TOL:
            raise DomainError('branch points coincide: alpha = beta = %r' % self.alpha)

    def polynomial(self, zeta: complex) -> complex:
        a, b = self.alpha, self.beta
        return (zeta - a) * (1 - a.conjugate() * zeta) * (zeta - b) * (1 - b.conjugate() * zeta)

    def branch_points(self):
        return self.alpha, reflect(self.alpha), self.beta, reflect(self.beta)

    def distance(self, other: 'BranchPair') -> float:
        return max(abs(self.alpha - other.alpha), abs(self.beta - other.beta))

    def unordered_distance(self, other: 'BranchPair') -> float:
        return min(self.distance(other), self.distance(lambda_swap(other)))


@dataclass(frozen=True)
class ModuliPoint:
    p: float
    k: float
    u_tilde: float
    v_tilde: float

    def __post_init__(self):
        if not self.p > 0:
            raise DomainError('p must be positive, got %r' % self.p)
        check_modulus(self.k)
        if not self.u_tilde < self.v_tilde < self.u_tilde + TWO_PI:
            raise DomainError('lifted angles violate u < v < u + 2pi: (%r, %r)' % (self.u_tilde, self.v_tilde))

    @property
    def u(self) -> float:
        wind(self.u_tilde)
        return math.tan(self.u_tilde / 2)

    @property
    def v(self) -> float:
        wind(self.v_tilde)
        return math.tan(self.v_tilde / 2)

    def finite_chart(self, eps: float = BOUNDARY_EPS):
        """
        (u, v) = (tan(ũ/2), tan(ṽ/2)), raising AtInfinity when either angle is within eps of the
        point at infinity.
        """
        wind(self.u_tilde, eps)
        wind(self.v_tilde, eps)
        return math.tan(self.u_tilde / 2), math.tan(self.v_tilde / 2)

    @property
    def U_tilde(self) -> float:
        return rescale_angle(self.u_tilde, self.k)

    @property
    def V_tilde(self) -> float:
        return rescale_angle(self.v_tilde, self.k)

    def windings(self):
        return wind(self.u_tilde), wind(self.v_tilde)


@dataclass(frozen=True, eq=False)
class JacobiFrame:
    bp: BranchPair
    k: float
    mu: complex
    nu: complex
    z0: complex
    matrix: np.ndarray = field(repr=False)
    inverse: np.ndarray = field(repr=False)

    def f(self, zeta):
        return mobius_apply(self.matrix, zeta)

    def f_inv(self, z):
        return mobius_apply(self.inverse, z)

    def f_homogeneous(self, zeta):
        return self.matrix @ _homogeneous(zeta)

    @property
    def poles(self):
        """
        Images of ζ = 0 and ζ = ∞, where the differentials have their double poles.
        """
        return self.z0, -self.z0.conjugate()


def jacobi_modulus(bp: BranchPair) -> float:
    a, b = bp.alpha, bp.beta
    far = abs(1 - a.conjugate() * b)
    near = abs(a - b)
    k = (far - near) / (far + near)
    if k < MODULUS_TOL or k > 1 - MODULUS_TOL:
        raise DomainError('curve %r degenerates: modulus %r at the boundary of (0, 1)' % (bp, k))
    return k


def circle_points(bp: BranchPair):
    """
    The points μ, ν where the circle through the four branch points meets the unit circle.

    The branch circle is straightened by the map sending α, 1/ᾱ, β to 0, ∞, 1; on the real
    line the unit circle condition |ζ| = 1 becomes a real quadratic. μ sits on the arc from α
    to 1/ᾱ away from β (negative parameter), ν on the other arc.
    """
    straighten = mobius_to_standard(bp.alpha, reflect(bp.alpha), bp.beta)
    (a, b), (c, d) = mobius_inverse(straighten)
    quad = abs(a) ** 2 - abs(c) ** 2
    lin = 2 * (a * b.conjugate() - c * d.conjugate()).real
    const = abs(b) ** 2 - abs(d) ** 2
    disc = lin * lin - 4 * quad * const
    if quad == 0 or disc <= 0:
        raise DomainError('branch circle of %r does not cross the unit circle' % (bp,))
    roots = sorted(((-lin - math.sqrt(disc)) / (2 * quad), (-lin + math.sqrt(disc)) / (2 * quad)))
    if not roots[0] < 0 < roots[1]:
        raise DomainError('unit circle crossings of %r are not separated by the branch points' % (bp,))
    mu, nu = ((a * t + b) / (c * t + d) for t in roots)
    return mu / abs(mu), nu / abs(nu)


def build_frame(bp: BranchPair) -> JacobiFrame:
    k = jacobi_modulus(bp)
    mu, nu = circle_points(bp)
    source = mobius_to_standard(bp.alpha, reflect(bp.alpha), bp.beta)
    target = mobius_to_standard(1, -1, 1 / k)
    matrix = mobius_inverse(target) @ source
    inverse = mobius_inverse(matrix)
    z0 = mobius_apply(matrix, 0j)
    return JacobiFrame(bp=bp, k=k, mu=mu, nu=nu, z0=z0, matrix=matrix, inverse=inverse)


def S_ratio(bp: BranchPair) -> float:
    a, b = bp.alpha, bp.beta
    return abs(1 - a) * abs(1 - b) / (abs(1 + a) * abs(1 + b))


def _axis_angle(vec) -> float:
    """
    Angle θ in (-π, π] with tan(θ/2) = -i·a/b for a homogeneous point (a:b) on the imaginary axis.

    Both coordinates are rotated by the phase of the larger one, which leaves a real pair (X, Y)
    with X/Y = -i·a/b; the point at infinity is Y = 0 and gets θ = π.
    """
    a, b = complex(vec[0]), complex(vec[1])
    if abs(b) >= abs(a):
        phase = b.conjugate() / abs(b)
        x, y = (-1j * a * phase).real, abs(b)
    else:
        phase = a.conjugate() / abs(a)
        x, y = abs(a), (1j * b * phase).real
    theta = math.remainder(2 * math.atan2(x, y), TWO_PI)
    if theta <= -math.pi:
        theta += TWO_PI
    return theta


def forward_coords(bp: BranchPair, frame: JacobiFrame = None) -> ModuliPoint:
    frame = frame or build_frame(bp)
    u_tilde = _axis_angle(frame.f_homogeneous(1))
    v_tilde = _axis_angle(frame.f_homogeneous(-1))
    if v_tilde <= u_tilde:
        v_tilde += TWO_PI
    return ModuliPoint(S_ratio(bp), frame.k, u_tilde, v_tilde)


def center_image(mp: ModuliPoint) -> complex:
    """
    z0 = f(0) recovered from (p, k, ũ, ṽ), written in half angles so it stays finite when
    u or v is at infinity.
    """
    su, cu, wu = angle_terms(mp.u_tilde, mp.k)
    sv, cv, wv = angle_terms(mp.v_tilde, mp.k)
    sigma = math.sin((mp.u_tilde - mp.v_tilde) / 2)
    denominator = mp.p * wv * cu * cu + wu * cv * cv
    x = math.sqrt(mp.p * wu * wv) * abs(sigma) / denominator
    y = (mp.p * su * cu * wv + sv * cv * wu) / denominator
    return complex(x, y)


def inverse_coords(mp: ModuliPoint) -> BranchPair:
    z0 = center_image(mp)
    su, cu = math.sin(mp.u_tilde / 2), math.cos(mp.u_tilde / 2)
    rotation = (1j * su + cu * z0.conjugate()) / (1j * su - cu * z0)

    def f_inv(z):
        return rotation * (z - z0) / (z + z0.conjugate())

    return BranchPair(f_inv(1), f_inv(1 / mp.k))


def lambda_swap(bp: BranchPair) -> BranchPair:
    return BranchPair(bp.beta, bp.alpha)


def chi_negate(bp: BranchPair) -> BranchPair:
    return BranchPair(-bp.alpha, -bp.beta)


def rescale_angle(x_tilde: float, k: float) -> float:
    """
    Lift of U = √k·u: tan(X̃/2) = √k·tan(x̃/2), continuous and commuting with +2π.
    """
    r = math.sqrt(k)
    s, c = math.sin(x_tilde / 2), math.cos(x_tilde / 2)
    return x_tilde + 2 * math.atan((r - 1) * s * c / (c * c + r * s * s))


def unscale_angle(big_tilde: float, k: float) -> float:
    r = 1 / math.sqrt(k)
    s, c = math.sin(big_tilde / 2), math.cos(big_tilde / 2)
    return big_tilde + 2 * math.atan((r - 1) * s * c / (c * c + r * s * s))


def deck_lambda_tilde(mp: ModuliPoint, turns: int = 1) -> ModuliPoint:
    shift = turns * math.pi
    return ModuliPoint(
        mp.p,
        mp.k,
        unscale_angle(rescale_angle(mp.u_tilde, mp.k) + shift, mp.k),
        unscale_angle(rescale_angle(mp.v_tilde, mp.k) + shift, mp.k),
    )


def iota_tilde(mp: ModuliPoint, turns: int = 1) -> ModuliPoint:
    return ModuliPoint(mp.p, mp.k, mp.u_tilde + turns * TWO_PI, mp.v_tilde + turns * TWO_PI)


def chi_lift(mp: ModuliPoint) -> ModuliPoint:
    """
    Lift of χ: (p, k, ũ, ṽ) ↦ (1/p, k, ṽ - 2π, ũ).
    """
    return ModuliPoint(1 / mp.p, mp.k, mp.v_tilde - TWO_PI, mp.u_tilde)


def lambda_coords(p: float, k: float, u: float, v: float):
    return p, k, -1 / (k * u), -1 / (k * v)


def chi_coords(p: float, k: float, u: float, v: float):
    return 1 / p, k, v, u
