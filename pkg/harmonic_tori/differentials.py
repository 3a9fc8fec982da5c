"""
Differentials on a genus one spectral curve and the pair Ψ^E, Ψ^P that closes it.

In the Jacobi frame of a curve:

* ω = dz/w is holomorphic, e = (1 - k²z²)dz/w is of the second kind with its pole at z = ∞;
* ε = e + dg moves that pole to the images z0, -z̄0 of ζ = 0, ∞;
* Θ^P = 2Eω - 2Kε has periods (0, 2πi) on the loops A, B;
* Θ^E = i·d(η/ζ) is exact.

Closed forms use the imaginary-axis integrals of ``elliptic``; ``contour_integral`` evaluates
any of them numerically along a ``PathSpec`` and is the oracle for the closed forms.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from . import contour
from .contour import Arc, PathSpec, Segment
from .curves import INF, BranchPair, JacobiFrame, ModuliPoint, S_ratio, forward_coords
from .elliptic import (QUAD_TOL, angle_terms, complete_E, complete_K, incomplete_E_reg_imag, incomplete_F_imag,
                       lifted_G, w_imag)
from .exceptions import AtInfinity, DomainError, PathError
from .log import quad_logger as logger

DIFFERENTIALS = ('omega', 'e', 'epsilon', 'theta_E', 'theta_P')
PRINCIPAL_TOL = 1e-9
MATCH_TOL = 1e-9
MAX_AXIS = 1e6
TWO_PI_I = 2j * math.pi


def eta_plus(zeta: complex, bp: BranchPair) -> complex:
    """
    η⁺(ζ) = ζ|ζ - α||ζ - β| for |ζ| = 1, the root of P fixed on the unit circle.
    """
    if abs(abs(zeta) - 1) > 1e-12:
        raise DomainError('eta_plus is defined on the unit circle, got |zeta| = %r' % abs(zeta))
    return zeta * abs(zeta - bp.alpha) * abs(zeta - bp.beta)


def eta_scale(frame: JacobiFrame) -> complex:
    """
    The constant C with η = C·w/(cz + d)² on the branches η⁺ ↔ w⁺, where f⁻¹ = [[a, b], [c, d]].
    """
    d = frame.inverse[1, 1]
    return eta_plus(frame.mu, frame.bp) * d * d


def eta_plus_sheet(zeta: complex, frame: JacobiFrame) -> int:
    """
    The sign s with η⁺(ζ) = s·C·w⁺(f(ζ))/(cf(ζ) + d)²; +1 all around the unit circle.
    """
    z = frame.f(zeta)
    if z == INF:
        raise AtInfinity('zeta = %r maps to infinity' % zeta)
    (_, _), (c, d) = frame.inverse
    w = complex(contour.w_principal(z, frame.k))
    ratio = eta_plus(zeta, frame.bp) * (c * z + d) ** 2 / (eta_scale(frame) * w)
    return 1 if ratio.real > 0 else -1


class Forms:
    """
    dz-coefficients of ω, e, ε, Θ^E and Θ^P in one frame, vectorised over z and w.
    """
    def __init__(self, frame: JacobiFrame):
        self.frame = frame
        self.k = frame.k
        self.K = complete_K(frame.k)
        self.E = complete_E(frame.k)
        self.C = eta_scale(frame)
        (self.a, self.b), (self.c, self.d) = frame.inverse
        self.z0 = frame.z0
        self.z0c = frame.z0.conjugate()
        self.Y = frame.z0.imag

    def _dw(self, z, w):
        k2 = self.k * self.k
        return (-2 * z * (1 - k2 * z * z) - 2 * k2 * z * (1 - z * z)) / (2 * w)

    def g(self, z, w):
        return (z - 1j * self.Y) * w / ((z - self.z0) * (z + self.z0c))

    def dg(self, z, w):
        den = (z - self.z0) * (z + self.z0c)
        num = (z - 1j * self.Y) * w
        d_num = w + (z - 1j * self.Y) * self._dw(z, w)
        d_den = 2 * z + self.z0c - self.z0
        return (d_num * den - num * d_den) / (den * den)

    def h(self, z, w):
        """
        η/ζ in the z chart.
        """
        return self.C * w / ((self.c * z + self.d) * (self.a * z + self.b))

    def dh(self, z, w):
        den = (self.c * z + self.d) * (self.a * z + self.b)
        d_den = self.c * (self.a * z + self.b) + self.a * (self.c * z + self.d)
        return self.C * (self._dw(z, w) * den - w * d_den) / (den * den)

    def omega(self, z, w):
        return 1 / w

    def e(self, z, w):
        return (1 - self.k * self.k * z * z) / w

    def epsilon(self, z, w):
        return self.e(z, w) + self.dg(z, w)

    def theta_E(self, z, w):
        return 1j * self.dh(z, w)

    def theta_P(self, z, w):
        return 2 * self.E * self.omega(z, w) - 2 * self.K * self.epsilon(z, w)

    def coefficient(self, name: str):
        if name not in DIFFERENTIALS:
            raise DomainError('unknown differential "%s", expected one of %s' % (name, ', '.join(DIFFERENTIALS)))
        return getattr(self, name)

    def poles(self, name: str):
        # ω and e have no finite poles; ε, Θ^P and Θ^E have double poles over ζ = 0, ∞
        if name in ('omega', 'e'):
            return ()
        return self.frame.poles


def contour_integral(diff: str, path: PathSpec, frame: JacobiFrame, *, tol: float = 1e-11,
                     clearance: float = 1e-3, nodes: int = contour.GAUSS_NODES) -> complex:
    forms = Forms(frame)
    value = contour.integrate(forms.coefficient(diff), path, frame.k, forms.poles(diff), tol=tol, clearance=clearance,
                              nodes=nodes)
    logger.debug('integral of %s along %s: %r', diff, path.name, value)
    return value


def _best_margin(candidates, build, poles):
    best, best_gap = None, -1.0
    for margin in candidates:
        path = build(margin)
        gap = min((path.distance_to(p) for p in poles), default=math.inf)
        if gap > best_gap:
            best, best_gap = path, gap
    return best


def _rectangle(left: float, right: float, height: float, start: complex, clockwise: bool):
    corners = [complex(right, height), complex(right, -height), complex(left, -height), complex(left, height)]
    if not clockwise:
        corners = [complex(left, -height), complex(right, -height), complex(right, height), complex(left, height)]
    points = [start] + corners + [start]
    return tuple(Segment(a, b) for a, b in zip(points, points[1:]))


def loop_A(frame: JacobiFrame) -> PathSpec:
    """
    Clockwise rectangle around [-1, 1], starting at iδ on w⁺.
    """
    limit = min(0.3, 0.45 * (1 / frame.k - 1))

    def build(margin):
        pieces = _rectangle(-1 - margin, 1 + margin, margin, complex(0, margin), clockwise=True)
        return PathSpec(pieces, start_sheet=1, name='A')

    return _best_margin(np.linspace(0.2 * limit, limit, 9), build, frame.poles)


def loop_B(frame: JacobiFrame) -> PathSpec:
    """
    Anticlockwise rectangle around [1, 1/k], starting at 1 - δ on the sheet where w < 0.
    """
    right = 1 / frame.k

    def build(margin):
        pieces = _rectangle(1 - margin, right + margin, margin, complex(1 - margin, 0), clockwise=False)
        return PathSpec(pieces, start_sheet=-1, name='B')

    return _best_margin(np.linspace(0.05, 0.3, 11), build, frame.poles)


def nu_loop(frame: JacobiFrame) -> PathSpec:
    """
    A loop around ζ = ν: a large circle in the z-plane, on w⁺.
    """
    radius = 2 * max(1 / frame.k, abs(frame.z0)) + 1
    return PathSpec((Arc(0j, radius, 0.0, 2 * math.pi),), start_sheet=1, name='nu')


def axis_point(sign: int, frame: JacobiFrame) -> float:
    """
    x with f(±1) = ix. Raises AtInfinity when ν is ±1, so that f(±1) = ∞.
    """
    if abs(frame.nu - sign) < PRINCIPAL_TOL:
        raise AtInfinity('f(%+d) is at infinity: nu = %r; use a deck-translated representative' % (sign, frame.nu))
    z = frame.f(sign)
    x = (z / 1j).real
    if abs(x) > MAX_AXIS:
        raise AtInfinity('f(%+d) = %r is too close to infinity for a principal path' % (sign, z))
    return x


def gamma0_path(sign: int, frame: JacobiFrame) -> PathSpec:
    """
    The principal path γ₀± from f(±1) on w⁻ to f(±1) on w⁺: down the imaginary axis to 0, along
    the real axis to 1 - δ, once around z = 1 and back the same way. The two straight legs are
    bent away from the poles of ε when needed; no branch point lies between a leg and its bend.
    """
    end = 1j * axis_point(sign, frame)
    radius = min(0.25, 0.45 * (1 / frame.k - 1))
    poles = frame.poles

    def build(bend):
        axis_bend, real_bend = bend
        turn = complex(1 - radius, 0)
        axis_mid = complex(axis_bend, end.imag / 2)
        real_mid = complex(turn.real / 2, real_bend)
        out = (Segment(end, axis_mid), Segment(axis_mid, 0j), Segment(0j, real_mid), Segment(real_mid, turn))
        back = tuple(Segment(piece.end, piece.start) for piece in reversed(out))
        circle = Arc(1.0, radius, math.pi, 3 * math.pi)
        return PathSpec(out + (circle,) + back, start_sheet=-1, name='gamma0%s' % ('+' if sign > 0 else '-'))

    bends = [(a, r) for a in (0.0, -0.3, 0.3) for r in (0.0, 0.2, -0.2)]
    return _best_margin(bends, build, poles)


def periods(diff: str, frame: JacobiFrame, **kwargs) -> Tuple[complex, complex]:
    return (contour_integral(diff, loop_A(frame), frame, **kwargs),
            contour_integral(diff, loop_B(frame), frame, **kwargs))


def theta_E_gamma(sign: int, bp: BranchPair) -> complex:
    """
    ∫γ± Θ^E: 2iη⁺(1) for γ⁺ and -2iη⁺(-1) for γ⁻, both on the positive imaginary axis.
    """
    if sign > 0:
        return 2j * eta_plus(1, bp)
    return -2j * eta_plus(-1, bp)


def theta_P_gamma_closed(sign: int, frame: JacobiFrame) -> complex:
    x = axis_point(sign, frame)
    k = frame.k
    big_k, big_e = complete_K(k), complete_E(k)
    z0 = frame.z0
    w = w_imag(x, k)
    shifted = x - z0.imag
    algebraic = shifted * w / (shifted * shifted + z0.real * z0.real)
    value = 4 * big_e * incomplete_F_imag(x, k) - 4 * big_k * (incomplete_E_reg_imag(x, k) + k * x) + 4 * big_k * algebraic
    return 1j * value


def angle_brackets(mp: ModuliPoint):
    """
    The algebraic terms of the γ-integrals in half-angle form:
    A_u = w(iu)/(u - v) - ku and A_v = w(iv)/(u - v) + kv, finite at u or v = ∞.
    """
    k = mp.k
    su, cu, wu = angle_terms(mp.u_tilde, k)
    sv, cv, wv = angle_terms(mp.v_tilde, k)
    sigma = math.sin((mp.u_tilde - mp.v_tilde) / 2)
    if sigma == 0:
        raise DomainError('u and v coincide at %r' % (mp,))
    a_u = (cu * cv * (1 + k * k * su * su) / (wu + k * su * su) + k * su * sv) / sigma
    a_v = (cu * cv * (1 + k * k * sv * sv) / (wv + k * sv * sv) + k * su * sv) / sigma
    return a_u, a_v


def lifted_gamma_integrals(mp: ModuliPoint, tol: float = QUAD_TOL) -> Tuple[complex, complex]:
    """
    ∫ Θ^P over the γ± paths continued over the universal cover; p·I⁻ - I⁺ = 2πi·T̃.
    """
    big_k = complete_K(mp.k)
    a_u, a_v = angle_brackets(mp)
    plus = 1j * (4 * lifted_G(mp.u_tilde, mp.k, tol) + 4 * big_k * a_u)
    minus = 1j * (4 * lifted_G(mp.v_tilde, mp.k, tol) - 4 * big_k * a_v)
    return plus, minus


def lifted_T(mp: ModuliPoint) -> float:
    plus, minus = lifted_gamma_integrals(mp)
    return ((mp.p * minus - plus) / TWO_PI_I).real


def _circle_radius(center: complex, frame: JacobiFrame) -> float:
    others = [s for s in contour.branch_points(frame.k)] + [p for p in frame.poles if abs(p - center) > 1e-12]
    return 0.5 * min(abs(center - s) for s in others)


def laurent_coefficients(diff: str, frame: JacobiFrame, center: complex, count: int = 256,
                         forms: Forms = None) -> Tuple[complex, complex]:
    """
    (c₋₂, c₋₁) of the differential at ``center`` by the trapezoid rule on a small circle.
    """
    forms = forms or Forms(frame)
    z, dz = contour.loop_samples(center, _circle_radius(center, frame), count)
    w = contour.track_sheet(np.append(z, z[0]), frame.k, 1)
    if abs(w[-1] - w[0]) > 1e-8 * abs(w[0]):
        raise PathError('laurent circle at %r encloses a branch point' % center)
    values = forms.coefficient(diff)(z, w[:-1])
    c_minus1 = np.sum(values * dz) / TWO_PI_I
    c_minus2 = np.sum(values * (z - center) * dz) / TWO_PI_I
    return complex(c_minus2), complex(c_minus1)


def theta_P_characterization_check(frame: JacobiFrame, shift: float = 0.0) -> float:
    """
    |Re r|/|r| for r the ratio of the leading coefficients of Θ^P + shift·Θ^E and Θ^E over ζ = 0.

    Θ^P is the real differential whose principal part is an imaginary multiple of that of Θ^E.
    """
    forms = Forms(frame)
    p2, _ = laurent_coefficients('theta_P', frame, frame.z0, forms=forms)
    e2, _ = laurent_coefficients('theta_E', frame, frame.z0, forms=forms)
    ratio = (p2 + shift * e2) / e2
    return abs(ratio.real) / abs(ratio)


def bezout(n: int, m: int) -> Tuple[int, int]:
    """
    (x, y) with n·x - m·y = 1 and y of least absolute value.
    """
    old_r, r = n, m
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_s, s = s, old_s - quotient * s
        old_t, t = t, old_t - quotient * t
    if abs(old_r) != 1:
        raise DomainError('%d and %d are not coprime' % (n, m))
    x, y = old_s * old_r, -old_t * old_r
    # shift along (m, n) to the smallest |y|
    j = round(-y / n)
    return x + j * m, y + j * n


def closing_level(n: int, m: int, n_prime: int, m_prime: int) -> int:
    return m_prime // math.gcd(m_prime, m * n_prime)


def closing_solvable(n: int, m: int, n_prime: int, m_prime: int, l: int) -> bool:
    """
    Whether m'(n·Γ⁻ - m·Γ⁺) = l·m·n' has an integer solution Γ±.
    """
    return (l * m * n_prime) % m_prime == 0


@dataclass(frozen=True)
class ClosingData:
    n: int
    m: int
    n_prime: int
    m_prime: int
    l: int
    a: float
    b: complex
    gamma_plus: int
    gamma_minus: int
    theta_E_plus: complex
    theta_E_minus: complex
    theta_P_plus: complex
    theta_P_minus: complex

    def closing_integrals(self):
        """
        (Ψ^E over γ⁺, Ψ^E over γ⁻, Ψ^P over γ⁺, Ψ^P over γ⁻), each divided by 2πi.
        """
        return (
            self.a * self.theta_E_plus / TWO_PI_I,
            self.a * self.theta_E_minus / TWO_PI_I,
            (self.b * self.theta_E_plus + self.l * self.theta_P_plus) / TWO_PI_I,
            (self.b * self.theta_E_minus + self.l * self.theta_P_minus) / TWO_PI_I,
        )

    def combine(self, x: int, y: int) -> Tuple[int, int]:
        """
        Closing multipliers of x·Ψ^E + y·Ψ^P over γ⁺ and γ⁻.
        """
        return x * self.n + y * self.gamma_plus, x * self.m + y * self.gamma_minus

    def max_residual(self) -> float:
        return max(abs(v - round(v.real)) for v in self.closing_integrals())


def construct_psi(S: Fraction, T: Fraction, frame: JacobiFrame, mp: ModuliPoint = None,
                  tol: float = MATCH_TOL, quad_tol: float = QUAD_TOL) -> ClosingData:
    """
    The minimal closing pair Ψ^E = aΘ^E, Ψ^P = bΘ^E + lΘ^P of a spectral curve.

    ``T`` may be any representative of T modulo ℤ + Sℤ; the integers returned belong to the
    lifted γ-paths at ``mp`` (the principal lift of the frame by default).
    """
    S, T = Fraction(S), Fraction(T)
    n, m = S.numerator, S.denominator
    if n <= 0:
        raise DomainError('S must be positive, got %s' % S)
    mp = mp or forward_coords(frame.bp, frame)
    if abs(S_ratio(frame.bp) - n / m) > tol:
        raise DomainError('curve has S = %r, not %s' % (S_ratio(frame.bp), S))
    plus, minus = lifted_gamma_integrals(mp, quad_tol)
    t_lift = ((mp.p * minus - plus) / TWO_PI_I).real
    offset = m * (t_lift - T)
    if abs(offset - round(offset)) > tol * max(1.0, abs(m * t_lift)):
        raise DomainError('curve has T = %r, not %s modulo Z + %sZ' % (t_lift, T, S))
    T_lift = T + Fraction(round(offset), m)
    n_prime, m_prime = T_lift.numerator, T_lift.denominator

    l = closing_level(n, m, n_prime, m_prime)
    theta_plus = theta_E_gamma(1, frame.bp)
    theta_minus = theta_plus / S_ratio(frame.bp)
    a = math.pi * n / eta_plus(1, frame.bp).real
    g = math.gcd(m_prime, m * n_prime)
    x, y = bezout(n, m)
    gamma_plus, gamma_minus = (m * n_prime // g) * y, (m * n_prime // g) * x
    b = (TWO_PI_I * gamma_plus - l * plus) / theta_plus
    data = ClosingData(
        n=n, m=m, n_prime=n_prime, m_prime=m_prime, l=l, a=a, b=b,
        gamma_plus=gamma_plus, gamma_minus=gamma_minus,
        theta_E_plus=theta_plus, theta_E_minus=theta_minus, theta_P_plus=plus, theta_P_minus=minus,
    )
    logger.debug('closing pair for S=%s T=%s: l=%d gamma=(%d, %d) residual %.3g',
                 S, T_lift, l, gamma_plus, gamma_minus, data.max_residual())
    return data
