"""
Invariant suites: each check samples with a seeded generator and reports the largest residual.
"""
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np
from scipy import integrate, special

from . import differentials as diffs
from . import genus_zero as g0
from .config import Config
from .contour import w_principal
from .curves import (INF, BranchPair, ModuliPoint, build_frame, chi_negate, deck_lambda_tilde, forward_coords,
                     inverse_coords, jacobi_modulus, lambda_swap, reflect, rescale_angle, unscale_angle)
from .elliptic import complete_E, complete_K, legendre_defect, lifted_E, lifted_F
from .exceptions import AtInfinity, DomainError, HarmonicToriException, PathError, VerificationFailure
from .log import report_line, verify_logger as logger
from .moduli import (S_value, T_tilde, dT0_du, dT0_du_limit, dT_du_tilde, monodromy_track, solve_level, spectral_test,
                     t0_finite)

P_VALUES = (Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3))
CLOSING_TARGETS = ((1, 0), (1, Fraction(1, 2)), (Fraction(1, 3), 0), (Fraction(1, 3), Fraction(1, 4)),
                   (2, Fraction(1, 3)))
PERIOD_FRAMES = 10
GAMMA_FRAMES = 20
CLOSING_ANGLES = (0.3, 1.1, -0.7, 2.0)


@dataclass
class SuiteResult:
    name: str
    max_residual: float
    tolerance: float
    passed: bool
    sample: Dict = field(default_factory=dict)


def random_branch_pair(rng: np.random.Generator, radius: float = 0.85, k_range=(0.1, 0.9),
                       separation: float = 0.05) -> BranchPair:
    while True:
        a, b = (radius * math.sqrt(rng.uniform()) * complex(math.cos(t), math.sin(t))
                for t in rng.uniform(0, 2 * math.pi, 2))
        if abs(a - b) < separation:
            continue
        bp = BranchPair(a, b)
        if k_range[0] < jacobi_modulus(bp) < k_range[1]:
            return bp


def random_contour_frame(rng: np.random.Generator, clearance: float = 0.05):
    """
    A frame whose principal paths and homology loops keep ``clearance`` from the poles.
    """
    while True:
        frame = build_frame(random_branch_pair(rng))
        try:
            paths = [diffs.loop_A(frame), diffs.loop_B(frame), diffs.gamma0_path(1, frame), diffs.gamma0_path(-1, frame)]
        except AtInfinity:
            continue
        if all(path.distance_to(p) > clearance for path in paths for p in frame.poles):
            return frame


def random_moduli_point(rng: np.random.Generator, p: float, margin: float = 0.2) -> ModuliPoint:
    """
    A point in the principal band with u, v finite.
    """
    while True:
        k = rng.uniform(0.1, 0.9)
        u_tilde = rng.uniform(-math.pi + margin, math.pi - margin)
        v_tilde = u_tilde + rng.uniform(margin, 2 * math.pi - margin)
        offset = (v_tilde - math.pi) % (2 * math.pi)
        if margin < offset < 2 * math.pi - margin:
            return ModuliPoint(float(p), k, u_tilde, v_tilde)


def _bp_sample(bp: BranchPair):
    return {'alpha': [bp.alpha.real, bp.alpha.imag], 'beta': [bp.beta.real, bp.beta.imag]}


def _mp_sample(mp: ModuliPoint):
    return {'p': mp.p, 'k': mp.k, 'u_tilde': mp.u_tilde, 'v_tilde': mp.v_tilde}


def _collect(name: str, tolerance: float, samples) -> SuiteResult:
    worst, worst_sample = 0.0, {}
    for residual, sample in samples:
        if math.isnan(residual) or residual > worst:
            worst, worst_sample = residual, sample
    return SuiteResult(name, worst, tolerance, bool(worst < tolerance), worst_sample)


# elliptic

def check_legendre(rng, config):
    return _collect('legendre relation', 1e-11,
                    ((abs(legendre_defect(k)), {'k': k}) for k in np.linspace(0.02, 0.98, 50)))


def check_complete_integrals(rng, config):
    def samples():
        for k in rng.uniform(0.01, 0.99, 50):
            residual = max(abs(complete_K(k) - special.ellipk(k * k)), abs(complete_E(k) - special.ellipe(k * k)))
            yield residual, {'k': k}

    return _collect('complete integrals against scipy', 1e-12, samples())


def _turn_integrands(k):
    def f(s):
        return 0.5 / math.sqrt(math.cos(s / 2) ** 2 + k * k * math.sin(s / 2) ** 2)

    def e(s):
        return 0.5 * (1 - k * k) / (math.sqrt(math.cos(s / 2) ** 2 + k * k * math.sin(s / 2) ** 2) + k)

    return f, e


def check_lifted_turn(rng, config):
    def samples():
        for _ in range(30):
            k, x = rng.uniform(0.05, 0.95), rng.uniform(-3 * math.pi, 3 * math.pi)
            f, e = _turn_integrands(k)
            kp, ep = special.ellipk(1 - k * k), special.ellipe(1 - k * k)
            turn_f, _ = integrate.quad(f, x, x + 2 * math.pi, epsabs=config.quad_tol, epsrel=config.quad_tol)
            turn_e, _ = integrate.quad(e, x, x + 2 * math.pi, epsabs=config.quad_tol, epsrel=config.quad_tol)
            raw_f, _ = integrate.quad(f, 0, x, epsabs=config.quad_tol, epsrel=config.quad_tol, limit=400)
            raw_e, _ = integrate.quad(e, 0, x, epsabs=config.quad_tol, epsrel=config.quad_tol, limit=400)
            residual = max(abs(turn_f - 2 * kp), abs(turn_e - 2 * (kp - ep)),
                           abs(lifted_F(x, k, config.quad_tol) - raw_f), abs(lifted_E(x, k, config.quad_tol) - raw_e))
            yield residual, {'k': k, 'x': x}
        for k in (0.1, 0.5, 0.9):
            f, e = _turn_integrands(k)
            h = 1e-6
            for edge in (-math.pi, math.pi, 3 * math.pi):
                jump_f = lifted_F(edge + h, k, config.quad_tol) - lifted_F(edge - h, k, config.quad_tol)
                jump_e = lifted_E(edge + h, k, config.quad_tol) - lifted_E(edge - h, k, config.quad_tol)
                yield max(abs(jump_f - 2 * h * f(edge)), abs(jump_e - 2 * h * e(edge))), {'k': k, 'edge': edge}

    return _collect('lifted integrals against raw quadrature over turns and band edges', 1e-10, samples())


# genus zero

def check_genus0_periodic(rng, config):
    def samples():
        for _ in range(20):
            m = g0.Genus0Map(rng.uniform(0.2, 5), rng.uniform(0.1, math.pi - 0.1))
            w = complex(*rng.uniform(-2, 2, 2))
            lattice = g0.period_lattice(m.x)
            base = g0.harmonic_map_eval(m, w)
            residual = max(np.abs(g0.harmonic_map_eval(m, w + kappa) - base).max()
                           for kappa in (lattice.kappa1, lattice.kappa2))
            yield residual, {'x': m.x, 'delta': m.delta, 'w': [w.real, w.imag]}

    return _collect('homogeneous map is doubly periodic', 1e-11, samples())


def check_genus0_branch_points(rng, config):
    def samples():
        for _ in range(20):
            m = g0.Genus0Map(rng.uniform(0.2, 5), rng.uniform(0.1, math.pi - 0.1))
            inner, _ = g0.eigenline_roots(m)
            expected = g0.branch_point(m)
            yield abs(inner - expected), {'x': m.x, 'delta': m.delta, 'root': [inner.real, inner.imag]}

    return _collect('eigenline coincidences at the branch point', 1e-9, samples())


def check_genus0_energy(rng, config):
    def samples():
        unit = g0.Genus0Data(0j, ((0, 1), (1, 0)))
        yield abs(g0.energy(unit) - math.pi ** 2), {'alpha': [0, 0]}
        for r, t in zip(0.9 * np.sqrt(rng.uniform(size=20)), rng.uniform(0, 2 * math.pi, 20)):
            a = complex(r * math.cos(t), r * math.sin(t))
            d = g0.Genus0Data(a, ((1, 2), (3, 1)))
            yield abs(g0.energy(g0.invert_map(d)) - g0.energy(d)), {'alpha': [a.real, a.imag]}

    return _collect('energy normalisation and inversion symmetry', 1e-12, samples())


# curves

def check_frames(rng, config):
    def samples():
        for _ in range(100):
            bp = random_branch_pair(rng)
            frame = build_frame(bp)
            k = frame.k
            targets = ((bp.alpha, 1), (reflect(bp.alpha), -1), (bp.beta, 1 / k), (reflect(bp.beta), -1 / k))
            residual = max(abs(frame.f(z) - t) for z, t in targets)
            for theta in np.linspace(0, 2 * math.pi, 16, endpoint=False):
                z = frame.f(complex(math.cos(theta), math.sin(theta)))
                if z != INF:
                    residual = max(residual, abs(z.real) / max(1.0, abs(z)))
            residual = max(residual, abs(frame.f(INF) + frame.z0.conjugate()))
            yield residual, _bp_sample(bp)

    return _collect('Jacobi frame invariants', 1e-10, samples())


def check_round_trip(rng, config):
    def samples():
        for _ in range(200):
            bp = random_branch_pair(rng)
            yield inverse_coords(forward_coords(bp)).distance(bp), _bp_sample(bp)

    return _collect('branch pair coordinate round trip', 1e-9, samples())


def check_symmetries(rng, config):
    def samples():
        for _ in range(100):
            bp = random_branch_pair(rng)
            mp = forward_coords(bp)
            swapped = inverse_coords(deck_lambda_tilde(mp))
            residual = max(abs(S_value(bp) * S_value(chi_negate(bp)) - 1),
                           abs(jacobi_modulus(chi_negate(bp)) - jacobi_modulus(bp)),
                           abs(S_value(lambda_swap(bp)) - S_value(bp)),
                           swapped.unordered_distance(bp))
            yield residual, _bp_sample(bp)

    return _collect('swap and negation symmetries', 1e-9, samples())


# differentials

def check_periods(rng, config):
    def samples():
        for _ in range(PERIOD_FRAMES):
            frame = random_contour_frame(rng)
            k = frame.k
            big_k, big_e = complete_K(k), complete_E(k)
            kp = complete_K(math.sqrt(1 - k * k))
            ep = complete_E(math.sqrt(1 - k * k))
            table = {
                'omega': (4 * big_k, 2j * kp),
                'e': (4 * big_e, 2j * (kp - ep)),
                'epsilon': (4 * big_e, 2j * (kp - ep)),
                'theta_P': (0, 2j * math.pi),
                'theta_E': (0, 0),
            }
            residual = 0.0
            for name, expected in table.items():
                got = diffs.periods(name, frame, clearance=config.path_clearance, nodes=config.gauss_nodes)
                residual = max(residual, *(abs(g - x) / max(1.0, abs(x)) for g, x in zip(got, expected)))
            yield residual, _bp_sample(frame.bp)

    return _collect('period table by quadrature', 1e-8, samples())


def check_gamma_closed_form(rng, config):
    def samples():
        for _ in range(GAMMA_FRAMES):
            frame = random_contour_frame(rng)
            residual = 0.0
            forms = diffs.Forms(frame)
            for sign in (1, -1):
                path = diffs.gamma0_path(sign, frame)
                closed = diffs.theta_P_gamma_closed(sign, frame)
                numeric = diffs.contour_integral('theta_P', path, frame, clearance=config.path_clearance,
                                                 nodes=config.gauss_nodes)
                # Θ^E = i·dh with h odd under the sheet involution
                end = path.start
                expected = 2j * forms.h(end, w_principal(end, frame.k))
                exact = diffs.contour_integral('theta_E', path, frame, clearance=config.path_clearance,
                                               nodes=config.gauss_nodes)
                residual = max(residual, abs(closed - numeric), abs(exact - expected) / max(1.0, abs(expected)))
            yield residual, _bp_sample(frame.bp)

    return _collect('closed gamma integrals against quadrature', 1e-6, samples())


def check_characterization(rng, config):
    def samples():
        for _ in range(PERIOD_FRAMES):
            frame = random_contour_frame(rng)
            residual = diffs.theta_P_characterization_check(frame)
            epsilon = diffs.contour_integral('epsilon', diffs.nu_loop(frame), frame, clearance=config.path_clearance,
                                             nodes=config.gauss_nodes)
            residual = max(residual, abs(epsilon))
            yield residual, _bp_sample(frame.bp)

    return _collect('principal part of theta_P and regularity of epsilon at nu', 1e-8, samples())


def _closing_point(p, q, config, angle):
    p, q = Fraction(p), Fraction(q)
    mp = solve_level(float(p), float(q), 0.5, angle, config)
    return mp, build_frame(inverse_coords(mp))


def _principal_theta_P(frame, config):
    return [diffs.contour_integral('theta_P', diffs.gamma0_path(sign, frame), frame, clearance=config.path_clearance,
                                   nodes=config.gauss_nodes)
            for sign in (1, -1)]


def check_closing(rng, config):
    def samples():
        for p, q in CLOSING_TARGETS:
            p, q = Fraction(p), Fraction(q)
            target = {'p': str(p), 'q': str(q)}
            errors = []
            for angle in CLOSING_ANGLES:
                mp, frame = _closing_point(p, q, config, angle)
                try:
                    theta_p = _principal_theta_P(frame, config)
                except (AtInfinity, PathError) as e:
                    errors.append(str(e))
                    continue
                break
            else:
                yield math.inf, {**target, 'error': '; '.join(errors)}
                continue
            data = diffs.construct_psi(p, q, frame, mp, quad_tol=config.quad_tol)
            residual = data.max_residual()
            if data.l != diffs.closing_level(p.numerator, p.denominator, q.numerator, q.denominator):
                residual = math.inf
            for theta_e, value_p in zip((data.theta_E_plus, data.theta_E_minus), theta_p):
                value = (data.b * theta_e + data.l * value_p) / (2j * math.pi)
                residual = max(residual, abs(value - round(value.real)))
            yield residual, {**target, **_mp_sample(mp)}

    return _collect('closing pair integrality', 1e-6, samples())


# moduli

def check_t0_symmetry(rng, config):
    def samples():
        for i in range(200):
            p = float(P_VALUES[i % len(P_VALUES)])
            mp = random_moduli_point(rng, p)
            u, v = mp.finite_chart(config.boundary_eps)
            yield abs(t0_finite(p, mp.k, u, v) + p * t0_finite(1 / p, mp.k, v, u)), _mp_sample(mp)

    return _collect('T0 symmetry under (p, u, v) -> (1/p, v, u)', 1e-9, samples())


def check_deck_shift(rng, config):
    def samples():
        for i in range(200):
            p = float(P_VALUES[i % len(P_VALUES)])
            mp = random_moduli_point(rng, p)
            yield abs(T_tilde(deck_lambda_tilde(mp)) - T_tilde(mp) - (p - 1)), _mp_sample(mp)

    return _collect('deck translation shifts T by S - 1', 1e-9, samples())


def check_derivative(rng, config):
    def samples():
        for _ in range(50):
            p = rng.choice([1.0, 1.5, 2.0, 3.0])
            mp = random_moduli_point(rng, p)
            (u, v), k = mp.finite_chart(config.boundary_eps), mp.k
            h = 1e-5 * max(1.0, abs(u))
            exact = dT0_du(p, k, u, v)
            numeric = (t0_finite(p, k, u + h, v) - t0_finite(p, k, u - h, v)) / (2 * h)
            residual = abs(exact - numeric) / abs(exact)
            if exact <= 0 or dT_du_tilde(mp) <= 0:
                residual = math.inf
            limit = ModuliPoint(p, k, math.pi, mp.v_tilde if mp.v_tilde > math.pi else mp.v_tilde + 2 * math.pi)
            if limit.v_tilde - math.pi < 2 * math.pi and dT_du_tilde(limit) <= 0:
                residual = math.inf
            yield residual, _mp_sample(mp)
        for v in (-2.0, 0.3, 4.0):
            mp = ModuliPoint(1.5, 0.5, math.pi, 2 * math.pi + 2 * math.atan(v))
            yield abs(dT_du_tilde(mp) - dT0_du_limit(1.5, 0.5, v)) / abs(dT0_du_limit(1.5, 0.5, v)), _mp_sample(mp)

    return _collect('u-derivative of T: closed form, positivity, limit at infinity', 1e-6, samples())


def check_chi_annulus(rng, config):
    def samples():
        for _ in range(50):
            r, t = 0.85 * math.sqrt(rng.uniform(0.01, 1)), rng.uniform(0, 2 * math.pi)
            a = r * complex(math.cos(t), math.sin(t))
            bp = BranchPair(a, -a)
            mp = forward_coords(bp)
            try:
                u, v = mp.finite_chart(config.boundary_eps)
                value, chart = t0_finite(mp.p, mp.k, u, v), 'finite'
            except AtInfinity:
                # a real pair puts f(±1) at infinity; only the angle form exists there
                value, chart = T_tilde(mp, config.quad_tol), 'angle'
            residual = abs(value - round(value))
            if spectral_test(bp, config.max_den, config.detect_tol) != (Fraction(1), Fraction(1)):
                residual = math.inf
            yield residual, {**_bp_sample(bp), 'chart': chart}

    return _collect('negation-fixed annulus has integral T', 1e-9, samples())


def check_monodromy(rng, config):
    def samples():
        for q in (Fraction(0), Fraction(1, 2)):
            c = monodromy_track(q, 16, config=config)
            yield abs(c + q.denominator), {'q': str(q), 'c': c}

    return _collect('monodromy shift around the p = 1 annuli', 1e-9, samples())


def check_topology(rng, config):
    def samples():
        for k in (0.3, 0.5, 0.8):
            start = solve_level(1.0, 1.0, k, 0.4, config)
            turned = unscale_angle(rescale_angle(0.4, k) + math.pi, k)
            end = solve_level(1.0, 1.0, k, turned, config)
            yield inverse_coords(end).unordered_distance(inverse_coords(start)), {'p': 1, 'k': k}
            half = solve_level(0.5, 0.0, k, 0.4, config)
            shifted = solve_level(0.5, -0.5, k, turned, config)
            image = deck_lambda_tilde(half)
            yield abs(shifted.v_tilde - image.v_tilde), {'p': 0.5, 'k': k}

    return _collect('p = 1 sweeps close, p = 1/2 sweeps shift q by -1/2', 1e-8, samples())


SUITES: Dict[str, List[Callable]] = {
    'elliptic': [check_legendre, check_complete_integrals, check_lifted_turn],
    'genus0': [check_genus0_periodic, check_genus0_branch_points, check_genus0_energy],
    'curves': [check_frames, check_round_trip, check_symmetries],
    'differentials': [check_periods, check_gamma_closed_form, check_characterization, check_closing],
    'moduli': [check_t0_symmetry, check_deck_shift, check_derivative, check_chi_annulus, check_monodromy,
               check_topology],
}
SUITE_NAMES = ('all',) + tuple(SUITES)


def run_suite(name: str, config: Config = None) -> List[SuiteResult]:
    config = config or Config()
    if name not in SUITE_NAMES:
        raise DomainError('unknown suite "%s", expected one of %s' % (name, ', '.join(SUITE_NAMES)))
    names = list(SUITES) if name == 'all' else [name]
    rng = np.random.default_rng(config.seed)
    results = []
    start = time.perf_counter()
    for suite in names:
        for check in SUITES[suite]:
            try:
                result = check(rng, config)
            except HarmonicToriException as e:
                result = SuiteResult(check.__name__[len('check_'):], math.inf, 0.0, False, {'error': str(e)})
            results.append(result)
            elapsed = '%7.2fs' % (time.perf_counter() - start)
            msg = '%-60s max %.3g  tol %.0e  %s' % (result.name, result.max_residual, result.tolerance,
                                                     'ok' if result.passed else 'FAILED')
            extra = {} if result.passed else {'details': result.sample}
            logger.info(report_line(elapsed, suite, msg, dim=result.passed), extra=extra)
    return results


def require(results: List[SuiteResult]):
    failed = [r for r in results if not r.passed]
    if failed:
        raise VerificationFailure('%d of %d checks failed, first: %s' % (len(failed), len(results), failed[0].name),
                                  sample=failed[0].sample)
