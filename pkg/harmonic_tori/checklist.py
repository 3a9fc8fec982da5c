"""
Numerical form of the characterization of spectral data, applied to one genus one curve.

Each condition is reported with the residual it was judged on, never as a bare boolean.
"""
import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from .config import Config
from .contour import branch_points, w_principal
from .curves import BranchPair, build_frame, forward_coords, jacobi_modulus
from .differentials import ClosingData, Forms, construct_psi, laurent_coefficients, periods
from .exceptions import HarmonicToriException
from .log import verify_logger as logger
from .moduli import ComponentId, classify_component, format_rational, spectral_residuals

LINE_BUNDLE_NOTE = 'P.10: the quaternionic line bundle is a circle of choices; not constructed'
SAMPLE_CLEARANCE = 0.05


@dataclass(frozen=True)
class CheckEntry:
    code: str
    title: str
    value: float
    tolerance: float
    passed: bool
    note: str = ''


@dataclass
class CurveReport:
    alpha: complex
    beta: complex
    k: float
    p: float
    t: float
    p_rational: Optional[str] = None
    q_rational: Optional[str] = None
    component: Optional[ComponentId] = None
    closing: Optional[ClosingData] = None
    checks: List[CheckEntry] = field(default_factory=list)

    @property
    def spectral(self) -> bool:
        return self.closing is not None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        def pair(z):
            return [z.real, z.imag]

        closing = None
        if self.closing:
            c = self.closing
            closing = {
                'n': c.n, 'm': c.m, 'n_prime': c.n_prime, 'm_prime': c.m_prime, 'l': c.l,
                'a': c.a, 'b': pair(c.b), 'gamma_plus': c.gamma_plus, 'gamma_minus': c.gamma_minus,
                'closing_integrals': [pair(v) for v in c.closing_integrals()],
            }
        return {
            'alpha': pair(self.alpha),
            'beta': pair(self.beta),
            'k': self.k,
            'p': self.p,
            'T': self.t,
            'p_rational': self.p_rational,
            'q_rational': self.q_rational,
            'component': str(self.component) if self.component else None,
            'closing': closing,
            'checklist': [asdict(c) for c in self.checks],
            'notes': [LINE_BUNDLE_NOTE],
        }


def _curve_samples(frame, count: int = 12):
    """
    z-plane points with w on w⁺, away from branch points and poles.
    """
    singular = list(branch_points(frame.k)) + list(frame.poles)
    angles = np.linspace(0.1, 2 * math.pi + 0.1, count, endpoint=False)
    points = []
    for radius in (0.45, 1.7, 3.1):
        for theta in angles:
            z = radius * complex(math.cos(theta), math.sin(theta))
            if min(abs(z - s) for s in singular) > SAMPLE_CLEARANCE:
                points.append(z)
    z = np.array(points)
    return z, w_principal(z, frame.k)


def reality_of_polynomial(bp: BranchPair) -> float:
    """
    max |ζ⁴·conj P(1/ζ̄) - P(ζ)| on sample points off the unit circle.
    """
    worst = 0.0
    for radius in (0.5, 0.9, 1.5):
        for theta in np.linspace(0, 2 * math.pi, 16, endpoint=False):
            zeta = radius * complex(math.cos(theta), math.sin(theta))
            image = bp.polynomial(1 / zeta.conjugate()).conjugate()
            worst = max(worst, abs(zeta ** 4 * image - bp.polynomial(zeta)))
    return worst


def _entry(code, title, value, tolerance, passed=None, note=''):
    if passed is None:
        passed = bool(value < tolerance)
    return CheckEntry(code, title, float(value), tolerance, passed, note)


def _failed(code, title, tolerance, error):
    return CheckEntry(code, title, math.inf, tolerance, False, str(error))


def build_report(bp: BranchPair, config: Config = None) -> CurveReport:
    config = config or Config()
    frame = build_frame(bp)
    mp = forward_coords(bp, frame)
    p_frac, q_frac, res_p, res_q, s, t = spectral_residuals(bp, config.max_den, config.quad_tol)
    report = CurveReport(alpha=bp.alpha, beta=bp.beta, k=jacobi_modulus(bp), p=s, t=t)
    spectral = res_p < config.detect_tol and res_q < config.detect_tol
    if spectral:
        report.p_rational = format_rational(p_frac)
        report.q_rational = format_rational(q_frac)
        report.component = classify_component(p_frac, q_frac)
        report.closing = construct_psi(p_frac, q_frac, frame, mp, tol=config.detect_tol,
                                       quad_tol=config.quad_tol)

    forms = Forms(frame)
    # Ψ^E = aΘ^E and Ψ^P = bΘ^E + lΘ^P, or Θ^E, Θ^P themselves for a non-spectral curve
    if report.closing:
        c = report.closing
        combos = {'psi_E': (c.a, 0.0), 'psi_P': (c.b, c.l)}
    else:
        combos = {'theta_E': (1.0, 0.0), 'theta_P': (0.0, 1.0)}

    def combo_values(z, w, weights):
        x, y = weights
        return x * forms.theta_E(z, w) + y * forms.theta_P(z, w)

    checks = report.checks
    checks.append(_entry('P.1', 'reality of the spectral polynomial', reality_of_polynomial(bp), 1e-12))
    margin = 1 - max(abs(bp.alpha), abs(bp.beta))
    checks.append(_entry('P.2', 'no branch points on the unit circle', margin, 0.0, passed=margin > 0))

    try:
        worst = 0.0
        leading = {}
        for center in frame.poles:
            for name in ('theta_E', 'theta_P'):
                c2, c1 = laurent_coefficients(name, frame, center, forms=forms)
                worst = max(worst, abs(c1) / abs(c2))
                if center == frame.z0:
                    leading[name] = c2
        checks.append(_entry('P.3', 'double poles without residue over 0 and infinity', worst, 1e-8))
    except HarmonicToriException as e:
        leading = {}
        checks.append(_failed('P.3', 'double poles without residue over 0 and infinity', 1e-8, e))

    z, w = _curve_samples(frame)
    antisym = max(
        float(np.max(np.abs(combo_values(z, -w, wt) + combo_values(z, w, wt)) / np.abs(combo_values(z, w, wt))))
        for wt in combos.values()
    )
    checks.append(_entry('P.4', 'odd under the sheet involution', antisym, 1e-12))
    real = max(
        float(np.max(np.abs(combo_values(-z.conj(), w.conj(), wt) - combo_values(z, w, wt).conj())
                     / np.abs(combo_values(z, w, wt))))
        for wt in combos.values()
    )
    checks.append(_entry('P.5', 'real under the antiholomorphic involution', real, 1e-9))

    try:
        kwargs = {'clearance': config.path_clearance, 'nodes': config.gauss_nodes}
        e_periods = periods('theta_E', frame, **kwargs)
        p_periods = periods('theta_P', frame, **kwargs)
        values = [x * pe + y * pp for x, y in combos.values() for pe, pp in zip(e_periods, p_periods)]
        checks.append(_entry('P.6', 'purely imaginary periods', max(abs(v.real) for v in values), 1e-8))
        scaled = [v / (2j * math.pi) for v in values]
        checks.append(_entry('P.7', 'periods in 2 pi i Z', max(abs(v - round(v.real)) for v in scaled), 1e-8))
    except HarmonicToriException as e:
        checks.append(_failed('P.6', 'purely imaginary periods', 1e-8, e))
        checks.append(_failed('P.7', 'periods in 2 pi i Z', 1e-8, e))

    if report.closing:
        checks.append(_entry('P.8', 'closing integrals in 2 pi i Z', report.closing.max_residual(), 1e-6))
    else:
        checks.append(_entry('P.8', 'closing integrals in 2 pi i Z', max(res_p, res_q), config.detect_tol,
                             passed=False, note='S, T not rational at denominator <= %d' % config.max_den))

    if len(leading) == 2:
        (xe, ye), (xp, yp) = combos.values()
        first = xe * leading['theta_E'] + ye * leading['theta_P']
        second = xp * leading['theta_E'] + yp * leading['theta_P']
        det = abs((first * second.conjugate()).imag) / (abs(first) * abs(second))
        checks.append(_entry('P.9', 'real linear independence of the principal parts', det, 1e-6, passed=det > 1e-6))
    else:
        checks.append(_failed('P.9', 'real linear independence of the principal parts', 1e-6,
                              'principal parts unavailable'))

    for entry in checks:
        logger.debug('%s %s: %.3g (%s)', entry.code, entry.title, entry.value, 'ok' if entry.passed else 'FAILED')
    return report
