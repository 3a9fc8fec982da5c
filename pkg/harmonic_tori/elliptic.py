"""
Legendre elliptic integrals restricted to the imaginary axis, and their lifts to the universal
cover of the real projective line.

Lifted angles x̃ parameterize the imaginary axis through x = tan(x̃/2); one turn of 2π in x̃ runs
once around the axis closed up through infinity. The incomplete integrals are evaluated on the
lifted integrands, which are smooth and bounded, so the same code serves the finite chart and
the point at infinity.
"""
import math
from functools import lru_cache

from scipy import integrate

from .exceptions import AtInfinity, DomainError

BOUNDARY_EPS = 1e-9
QUAD_TOL = 1e-13
QUAD_LIMIT = 200
AGM_MAX_ITER = 64


def check_modulus(k: float) -> float:
    if not 0 < k < 1:
        raise DomainError('elliptic modulus must lie in (0, 1), got %r' % k)
    return k


def complementary(k: float) -> float:
    check_modulus(k)
    return math.sqrt((1 - k) * (1 + k))


def agm(a: float, b: float):
    """
    Arithmetic-geometric mean of a and b.

    :return: (mean, list of the half-differences c_1, c_2, ... of the iteration)
    """
    cs = []
    for _ in range(AGM_MAX_ITER):
        c = (a - b) / 2
        a, b = (a + b) / 2, math.sqrt(a * b)
        cs.append(c)
        if abs(c) < 1e-15 * a:
            break
    return a, cs


def _legendre_pair(modulus: float, complement: float):
    mean, cs = agm(1.0, complement)
    big_k = math.pi / (2 * mean)
    # c_0 = modulus enters with weight 2**-1, c_n with 2**(n-1)
    defect = modulus * modulus / 2 + sum(2.0 ** n * c * c for n, c in enumerate(cs))
    return big_k, big_k * (1 - defect)


@lru_cache(maxsize=1024)
def _complete(k: float):
    return _legendre_pair(k, complementary(k))


@lru_cache(maxsize=1024)
def _complete_prime(k: float):
    # taken from k itself: the complement of a rounded k' loses digits near k = 0
    return _legendre_pair(complementary(k), k)


def complete_K(k: float) -> float:
    return _complete(k)[0]


def complete_E(k: float) -> float:
    return _complete(k)[1]


def complete_K_prime(k: float) -> float:
    return _complete_prime(k)[0]


def complete_E_prime(k: float) -> float:
    return _complete_prime(k)[1]


def legendre_defect(k: float) -> float:
    big_k, big_e = _complete(k)
    kp_k, kp_e = _complete_prime(k)
    return kp_k * big_e + big_k * kp_e - big_k * kp_k - math.pi / 2


def w_imag(u: float, k: float) -> float:
    """
    w(iu) on the positive sheet, where w(z)**2 = (1 - z**2)(1 - k**2 z**2).
    """
    return math.sqrt((1 + u * u) * (1 + k * k * u * u))


def angle_terms(x_tilde: float, k: float):
    """
    Half-angle data of a lifted angle: (sin(x̃/2), cos(x̃/2), W) with W = √(cos² + k² sin²).

    On the finite chart w(i·tan(x̃/2)) = W / cos²(x̃/2).
    """
    s = math.sin(x_tilde / 2)
    c = math.cos(x_tilde / 2)
    return s, c, math.sqrt(c * c + k * k * s * s)


def wind(x_tilde: float, eps: float = BOUNDARY_EPS) -> int:
    """
    The band index W with -π < x̃ - 2πW < π.

    Raises AtInfinity when x̃ is within eps of an odd multiple of π, where the finite chart
    value tan(x̃/2) does not exist.
    """
    band = math.floor((x_tilde + math.pi) / (2 * math.pi))
    offset = x_tilde - 2 * math.pi * band
    if offset < -math.pi + eps or offset > math.pi - eps:
        raise AtInfinity('lifted angle %r lies on the point at infinity' % x_tilde)
    return band


def _reduce(x_tilde: float):
    band = math.floor((x_tilde + math.pi) / (2 * math.pi))
    return band, x_tilde - 2 * math.pi * band


def _quad(func, stop: float, tol: float = QUAD_TOL) -> float:
    if stop == 0:
        return 0.0
    value, _ = integrate.quad(func, 0.0, stop, epsabs=tol, epsrel=tol, limit=QUAD_LIMIT)
    return value


def lifted_F(x_tilde: float, k: float, tol: float = QUAD_TOL) -> float:
    check_modulus(k)
    band, rest = _reduce(x_tilde)
    k2 = k * k

    def integrand(s):
        c = math.cos(s / 2)
        sn = math.sin(s / 2)
        return 0.5 / math.sqrt(c * c + k2 * sn * sn)

    return 2 * band * complete_K_prime(k) + _quad(integrand, rest, tol)


def lifted_E(x_tilde: float, k: float, tol: float = QUAD_TOL) -> float:
    check_modulus(k)
    band, rest = _reduce(x_tilde)
    k2 = k * k
    scale = 0.5 * (1 - k2)

    def integrand(s):
        c = math.cos(s / 2)
        sn = math.sin(s / 2)
        return scale / (math.sqrt(c * c + k2 * sn * sn) + k)

    period = 2 * (complete_K_prime(k) - complete_E_prime(k))
    return band * period + _quad(integrand, rest, tol)


def lifted_G(x_tilde: float, k: float, tol: float = QUAD_TOL) -> float:
    """
    E·F̃(x̃) - K·Ẽ(x̃), which gains exactly π per turn by Legendre's relation.
    """
    big_k, big_e = _complete(k)
    return big_e * lifted_F(x_tilde, k, tol) - big_k * lifted_E(x_tilde, k, tol)


def incomplete_F_imag(x: float, k: float) -> float:
    """
    Im F(ix; k) = ∫_0^x dt / √((1 + t²)(1 + k²t²)).
    """
    return lifted_F(2 * math.atan(x), k)


def incomplete_E_reg_imag(x: float, k: float) -> float:
    """
    Im(E(ix; k) - kix) = ∫_0^x ((1 + k²t²) / w(it) - k) dt.
    """
    return lifted_E(2 * math.atan(x), k)
