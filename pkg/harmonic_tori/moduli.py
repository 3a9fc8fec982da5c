"""
The closing-condition functions S, T₀, T̃ on the space of branch pairs and its universal cover,
level sets of T̃ and the components of the space of genus one spectral curves.

A curve is spectral when S = p and T̃ = q are both rational. For fixed (p, q, k) the level set
{T̃ = q} is a graph over one lifted angle: over ṽ when p > 1, where T̃ increases in ũ, and
over ũ when p ≤ 1, where T̃ decreases in ṽ.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
from scipy import optimize

from .config import Config
from .curves import (TWO_PI, BranchPair, ModuliPoint, S_ratio, forward_coords, inverse_coords, rescale_angle,
                     unscale_angle)
from .differentials import angle_brackets, closing_level, lifted_gamma_integrals
from .elliptic import (QUAD_TOL, angle_terms, complete_E, complete_K, incomplete_E_reg_imag, incomplete_F_imag,
                       lifted_G, w_imag)
from .exceptions import ConvergenceError, DomainError
from .log import solver_logger as logger

NEWTON_STEPS = 2
MONODROMY_WIGGLE = 0.25
MONODROMY_TOL = 1e-6


def S_value(bp: BranchPair) -> float:
    return S_ratio(bp)


def t0_finite(p: float, k: float, u: float, v: float) -> float:
    """
    T₀ in the finite chart, from the imaginary-axis integrals.
    """
    if u == v:
        raise DomainError('T0 is undefined at u = v = %r' % u)
    big_k, big_e = complete_K(k), complete_E(k)

    def bracket(x):
        return big_e * incomplete_F_imag(x, k) - big_k * incomplete_E_reg_imag(x, k)

    algebraic = p * (w_imag(v, k) / (u - v) + k * v) + (w_imag(u, k) / (u - v) - k * u)
    return (4 * p * bracket(v) - 4 * bracket(u) - 4 * big_k * algebraic) / TWO_PI


def T0_value(mp: ModuliPoint) -> float:
    return t0_finite(mp.p, mp.k, mp.u, mp.v)


def T_tilde(mp: ModuliPoint, tol: float = QUAD_TOL) -> float:
    big_k = complete_K(mp.k)
    a_u, a_v = angle_brackets(mp)
    value = (4 * mp.p * lifted_G(mp.v_tilde, mp.k, tol) - 4 * lifted_G(mp.u_tilde, mp.k, tol)
             - 4 * big_k * (mp.p * a_v + a_u))
    return value / TWO_PI


def dT0_du(p: float, k: float, u: float, v: float) -> float:
    if u == v:
        raise DomainError('T0 is undefined at u = v = %r' % u)
    big_k, big_e = complete_K(k), complete_E(k)
    wu, wv = w_imag(u, k), w_imag(v, k)
    d = u - v
    q = 1 + u * u + v * v + (k * k - 1) * u * v + k * k * u * u * v * v
    return 2 * (-big_e * d * d + p * big_k * wu * wv + big_k * q) / (math.pi * wu * d * d)


def dT0_du_limit(p: float, k: float, v: float) -> float:
    """
    ∂T̃/∂ũ at ũ = π, where u = ∞.
    """
    big_k, big_e = complete_K(k), complete_E(k)
    return (-big_e + p * k * big_k * w_imag(v, k) + big_k * (1 + k * k * v * v)) / (math.pi * k)


def _dT_dfirst(p: float, k: float, first: float, second: float) -> float:
    big_k, big_e = complete_K(k), complete_E(k)
    s1, c1, w1 = angle_terms(first, k)
    s2, c2, w2 = angle_terms(second, k)
    sigma = math.sin((first - second) / 2)
    if sigma == 0:
        raise DomainError('lifted angles coincide modulo 2pi: %r, %r' % (first, second))
    q = (c1 * c1 * c2 * c2 + s1 * s1 * c2 * c2 + s2 * s2 * c1 * c1
         + (k * k - 1) * s1 * c1 * s2 * c2 + k * k * s1 * s1 * s2 * s2)
    return (-sigma * sigma * big_e + p * big_k * w1 * w2 + big_k * q) / (math.pi * w1 * sigma * sigma)


def dT_du_tilde(mp: ModuliPoint) -> float:
    """
    ∂T̃/∂ũ in half-angle form, valid through ũ ∈ π + 2πℤ.
    """
    return _dT_dfirst(mp.p, mp.k, mp.u_tilde, mp.v_tilde)


def dT_dv(mp: ModuliPoint) -> float:
    # T₀(p, k, u, v) = -p·T₀(1/p, k, v, u)
    return -mp.p * _dT_dfirst(1 / mp.p, mp.k, mp.v_tilde, mp.u_tilde)


def solve_level(p: float, q: float, k: float, fixed_angle: float, config: Config = None) -> ModuliPoint:
    """
    The point of {T̃ = q} over ``fixed_angle``: ṽ when p > 1 (solving for ũ in (ṽ - 2π, ṽ)),
    ũ when p ≤ 1 (solving for ṽ in (ũ, ũ + 2π)).
    """
    config = config or Config()
    q = float(q)
    shrink = config.band_shrink
    if p > 1:
        def build(x):
            return ModuliPoint(p, k, x, fixed_angle)

        def slope(mp):
            return dT_du_tilde(mp)

        lo, hi = fixed_angle - TWO_PI + shrink, fixed_angle - shrink
    else:
        def build(x):
            return ModuliPoint(p, k, fixed_angle, x)

        def slope(mp):
            return dT_dv(mp)

        lo, hi = fixed_angle + shrink, fixed_angle + TWO_PI - shrink

    def residual(x):
        return T_tilde(build(x), config.quad_tol) - q

    try:
        root = optimize.brentq(residual, lo, hi, xtol=1e-15, maxiter=200)
    except (ValueError, RuntimeError) as e:
        raise ConvergenceError('level T=%r not bracketed at p=%r k=%r angle=%r: %s' % (q, p, k, fixed_angle, e),
                               bracket=(lo, hi)) from e
    for _ in range(NEWTON_STEPS):
        mp = build(root)
        step = (T_tilde(mp, config.quad_tol) - q) / slope(mp)
        if lo < root - step < hi:
            root -= step
    mp = build(root)
    error = abs(T_tilde(mp, config.quad_tol) - q)
    if error > config.solver_tol:
        raise ConvergenceError('level T=%r at p=%r k=%r angle=%r: residual %.3g' % (q, p, k, fixed_angle, error),
                               bracket=(lo, hi))
    logger.debug('solved T=%r at p=%r k=%r angle=%r -> %r', q, p, k, fixed_angle, root)
    return mp


@dataclass(frozen=True)
class LevelRecord:
    k: float
    free_angle: float
    solved_angle: float
    point: Optional[ModuliPoint]
    bp: Optional[BranchPair]
    error: str = ''

    @property
    def ok(self) -> bool:
        return self.bp is not None


@dataclass
class LevelSetMesh:
    p: Fraction
    q: Fraction
    k_values: List[float]
    angle_span: float
    angle_grid: int
    records: List[LevelRecord] = field(default_factory=list)

    @property
    def gaps(self) -> List[Tuple[int, int]]:
        width = self.angle_grid
        return [divmod(i, width) for i, r in enumerate(self.records) if not r.ok]

    @property
    def deck_turns(self) -> float:
        """
        The sweep measured in deck translations λ̃; each one moves the level by p - 1.
        """
        return self.angle_span / math.pi

    def row(self, i: int) -> List[LevelRecord]:
        return self.records[i * self.angle_grid:(i + 1) * self.angle_grid]


def sweep_level_set(p: Fraction, q: Fraction, k_grid: int, angle_grid: int, angle_span: float = TWO_PI,
                    config: Config = None, start_angle: float = 0.0) -> LevelSetMesh:
    """
    Solve the level set {S = p, T̃ = q} over a (k, angle) grid.

    The free angle advances uniformly in the rescaled lift Ũ (or Ṽ), so a span of π ends at the
    λ̃-translate of the start. Solver failures are kept as gaps.
    """
    config = config or Config()
    if k_grid < 2 or angle_grid < 2:
        raise DomainError('grid sizes must be at least 2, got k_grid=%r angle_grid=%r' % (k_grid, angle_grid))
    p, q = Fraction(p), Fraction(q)
    if p <= 0:
        raise DomainError('p must be positive, got %s' % p)
    k_values = [float(k) for k in np.linspace(config.k_min, config.k_max, k_grid)]
    offsets = np.linspace(0.0, angle_span, angle_grid)
    mesh = LevelSetMesh(p=p, q=q, k_values=k_values, angle_span=angle_span, angle_grid=angle_grid)
    for k in k_values:
        start = rescale_angle(start_angle, k)
        for offset in offsets:
            free = unscale_angle(start + offset, k)
            try:
                mp = solve_level(float(p), float(q), k, free, config)
                bp = inverse_coords(mp)
            except (ConvergenceError, DomainError) as e:
                logger.warning('gap at k=%.6g angle=%.6g: %s', k, free, e)
                mesh.records.append(LevelRecord(k, free, math.nan, None, None, str(e)))
                continue
            solved = mp.u_tilde if p > 1 else mp.v_tilde
            mesh.records.append(LevelRecord(k, free, solved, mp, bp))
    logger.info('level set p=%s q=%s: %d points, %d gaps', p, q, len(mesh.records), len(mesh.gaps))
    return mesh


def parse_rational(text) -> Fraction:
    """
    Parse "n/m" (or an integer) exactly; floats are refused.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    text = str(text).strip()
    num, sep, den = text.partition('/')
    try:
        value = Fraction(int(num), int(den) if sep else 1)
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError('expected a rational "n/m", got "%s"' % text) from e
    return value


def format_rational(value: Fraction) -> str:
    return '%d/%d' % (value.numerator, value.denominator)


@dataclass(frozen=True)
class ComponentId:
    kind: str
    p: Fraction
    q: Fraction

    def __str__(self):
        if self.kind == 'annulus':
            return 'Annulus(%s)' % self.q
        return 'Helicoid(%s, [%s] mod %s)' % (self.p, self.q, abs(self.p - 1))


def classify_component(p: Fraction, q: Fraction) -> ComponentId:
    p, q = Fraction(p), Fraction(q)
    if p <= 0:
        raise DomainError('p must be positive, got %s' % p)
    if p == 1:
        return ComponentId('annulus', p, q)
    return ComponentId('helicoid', p, q % abs(p - 1))


def q_shift(p: Fraction, q: Fraction, turns: int = 1) -> Fraction:
    return Fraction(q) + turns * (Fraction(p) - 1)


def levels_equivalent(p: Fraction, q1: Fraction, q2: Fraction) -> bool:
    """
    Whether q1 and q2 are the same value of T, which is defined modulo ℤ + pℤ.
    """
    p = Fraction(p)
    return (p.denominator * (Fraction(q1) - Fraction(q2))).denominator == 1


def chi_image(p: Fraction, q: Fraction) -> Tuple[Fraction, Fraction]:
    """
    (p, q) ↦ (1/p, 2 - q/p), the action of (α, β) ↦ (-α, -β) on levels.
    """
    p, q = Fraction(p), Fraction(q)
    return 1 / p, 2 - q / p


def spectral_residuals(bp: BranchPair, max_den: int, quad_tol: float = QUAD_TOL):
    """
    Best rationals with denominator ≤ max_den for S and the principal T̃, with their residuals.
    """
    if max_den < 1:
        raise DomainError('max_den must be at least 1, got %r' % max_den)
    s = S_ratio(bp)
    t = T_tilde(forward_coords(bp), quad_tol)
    p = Fraction(s).limit_denominator(max_den)
    q = Fraction(t).limit_denominator(max_den)
    return p, q, abs(s - float(p)), abs(t - float(q)), s, t


def spectral_test(bp: BranchPair, max_den: int, tol: float = 1e-9) -> Optional[Tuple[Fraction, Fraction]]:
    p, q, res_p, res_q, _, _ = spectral_residuals(bp, max_den)
    if res_p < tol and res_q < tol:
        return p, q
    return None


def canonical_fibre_matrix(matrix, m_prime: int):
    """
    Representative of M·B_q, B_q = {[[1, 0], [c, 1]] : c ∈ m'ℤ}, acting on rows (x, y) ↦ (x + cy, y).
    The first row with y ≠ 0 has x reduced into [0, m'|y|).
    """
    (x1, y1), (x2, y2) = ((int(a), int(b)) for a, b in matrix)
    if x1 * y2 - y1 * x2 == 0:
        raise DomainError('matrix %r is singular' % (matrix,))
    if m_prime < 1:
        raise DomainError('m\' must be positive, got %r' % m_prime)
    pivot_x, pivot_y = (x1, y1) if y1 else (x2, y2)
    modulus = m_prime * abs(pivot_y)
    c = m_prime * (-(1 if pivot_y > 0 else -1) * (pivot_x // modulus))
    return (x1 + c * y1, y1), (x2 + c * y2, y2)


@dataclass(frozen=True)
class ModuliSummary:
    component: ComponentId
    n: int
    m: int
    n_prime: int
    m_prime: int
    l: int
    monodromy: Optional[int]
    fibre: str
    chi_component: ComponentId


def moduli_summary(p: Fraction, q: Fraction) -> ModuliSummary:
    p, q = Fraction(p), Fraction(q)
    component = classify_component(p, q)
    n, m = p.numerator, p.denominator
    n_prime, m_prime = q.numerator, q.denominator
    if component.kind == 'annulus':
        fibre = 'Mat2*Z / B_q, B_q lower unipotent with subdiagonal in %dZ' % m_prime
        monodromy = -m_prime
    else:
        fibre = 'Mat2*Z x S1'
        monodromy = None
    return ModuliSummary(
        component=component, n=n, m=m, n_prime=n_prime, m_prime=m_prime,
        l=closing_level(n, m, n_prime, m_prime), monodromy=monodromy, fibre=fibre,
        chi_component=classify_component(*chi_image(p, q)),
    )


def enumerate_components(p: Fraction, max_den: int, q_bound: Fraction = Fraction(1)) -> List[ComponentId]:
    """
    Distinct components with S = p and q-denominator ≤ max_den: one per residue class mod p - 1
    for helicoids, every q in [-q_bound, q_bound] for annuli.
    """
    p = Fraction(p)
    if p <= 0:
        raise DomainError('p must be positive, got %s' % p)
    if max_den < 1:
        raise DomainError('max_den must be at least 1, got %r' % max_den)
    if p == 1:
        lo, hi = -Fraction(q_bound), Fraction(q_bound)
    else:
        lo, hi = Fraction(0), abs(p - 1)
    found = []
    seen = set()
    for den in range(1, max_den + 1):
        for num in range(math.floor(lo * den), math.ceil(hi * den) + 1):
            q = Fraction(num, den)
            if not lo <= q <= hi or (p != 1 and q == hi):
                continue
            component = classify_component(p, q)
            if component not in seen:
                seen.add(component)
                found.append(component)
    return sorted(found, key=lambda c: c.q)


def monodromy_track(q: Fraction, loop_samples: int, k: float = 0.5, start_angle: float = 0.3, turns: int = 1,
                    config: Config = None) -> int:
    """
    The integer c with Ψ^P ↦ Ψ^P + c·Ψ^E after a loop in the annulus S = 1, T̃ = q.

    The loop advances Ũ by π·turns with a wiggle that vanishes at both ends; turns = 1 winds the
    annulus once, turns = 0 is contractible.
    """
    config = config or Config()
    if loop_samples < 2:
        raise DomainError('loop_samples must be at least 2, got %r' % loop_samples)
    q = Fraction(q)
    n_prime, m_prime = q.numerator, q.denominator
    l = closing_level(1, 1, n_prime, m_prime)
    start = rescale_angle(start_angle, k)
    values = []
    for t in np.linspace(0.0, 1.0, loop_samples + 1):
        big = start + math.pi * turns * t + MONODROMY_WIGGLE * math.sin(2 * math.pi * t)
        mp = solve_level(1.0, float(q), k, unscale_angle(big, k), config)
        values.append(lifted_gamma_integrals(mp, config.quad_tol)[0])
    jumps = np.abs(np.diff(values))
    logger.debug('monodromy loop q=%s: %d samples, largest step %.3g', q, loop_samples, jumps.max())
    shift = -l * (values[-1] - values[0]) / (2j * math.pi)
    c = round(shift.real)
    if abs(shift - c) > MONODROMY_TOL:
        raise ConvergenceError('monodromy shift %r is not an integer' % shift)
    return c
