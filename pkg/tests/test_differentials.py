import math
from fractions import Fraction
from types import SimpleNamespace

import numpy as np
import pytest
from scipy import special

from harmonic_tori import differentials as diffs
from harmonic_tori.contour import w_principal
from harmonic_tori.curves import BranchPair, build_frame, forward_coords, inverse_coords
from harmonic_tori.exceptions import AtInfinity, DomainError
from harmonic_tori.moduli import T_tilde, solve_level


def _sample_points(frame):
    z = np.array([0.3 + 0.2j, -0.7 + 0.5j, 1.5 - 0.4j, -2.5 - 1.1j, 0.1 - 3j])
    z = np.array([p for p in z if min(abs(p - q) for q in frame.poles) > 0.1])
    return z, w_principal(z, frame.k)


def test_forms_odd_and_real(contour_frame):
    forms = diffs.Forms(contour_frame)
    z, w = _sample_points(contour_frame)
    for name in diffs.DIFFERENTIALS:
        coefficient = forms.coefficient(name)
        assert np.allclose(coefficient(z, -w), -coefficient(z, w), rtol=1e-12, atol=0)
        assert np.allclose(coefficient(-z.conj(), w.conj()), coefficient(z, w).conj(), rtol=1e-9, atol=1e-12)


def test_unknown_differential(contour_frame):
    with pytest.raises(DomainError) as excinfo:
        diffs.Forms(contour_frame).coefficient('xi')
    assert excinfo.value.args[0] == 'unknown differential "xi", expected one of omega, e, epsilon, theta_E, theta_P'


def test_period_table(contour_frame):
    k = contour_frame.k
    big_k, big_e = special.ellipk(k * k), special.ellipe(k * k)
    kp, ep = special.ellipk(1 - k * k), special.ellipe(1 - k * k)
    expected = {
        'omega': (4 * big_k, 2j * kp),
        'e': (4 * big_e, 2j * (kp - ep)),
        'epsilon': (4 * big_e, 2j * (kp - ep)),
        'theta_E': (0, 0),
        'theta_P': (0, 2j * math.pi),
    }
    for name, (a_period, b_period) in expected.items():
        a_value, b_value = diffs.periods(name, contour_frame)
        assert a_value == pytest.approx(a_period, abs=1e-8), name
        assert b_value == pytest.approx(b_period, abs=1e-8), name


def test_gamma_closed_form(contour_frame):
    for sign in (1, -1):
        path = diffs.gamma0_path(sign, contour_frame)
        numeric = diffs.contour_integral('theta_P', path, contour_frame)
        assert diffs.theta_P_gamma_closed(sign, contour_frame) == pytest.approx(numeric, abs=1e-7)


def test_gamma_path_shape(contour_frame):
    path = diffs.gamma0_path(1, contour_frame)
    assert path.start == path.end
    assert path.start_sheet == -1
    assert path.start == pytest.approx(contour_frame.f(1), abs=1e-12)


def test_axis_point_at_infinity():
    frame = SimpleNamespace(nu=1 + 0j)
    with pytest.raises(AtInfinity):
        diffs.axis_point(1, frame)


def test_epsilon_regular_at_nu(contour_frame):
    assert abs(diffs.contour_integral('epsilon', diffs.nu_loop(contour_frame), contour_frame)) < 1e-8


def test_laurent_no_residue(contour_frame):
    forms = diffs.Forms(contour_frame)
    for center in contour_frame.poles:
        for name in ('epsilon', 'theta_E', 'theta_P'):
            c2, c1 = diffs.laurent_coefficients(name, contour_frame, center, forms=forms)
            assert abs(c1) < 1e-8 * abs(c2)


def test_characterization(contour_frame):
    assert diffs.theta_P_characterization_check(contour_frame) < 1e-8


def test_eta_plus():
    bp = BranchPair(0.3, -0.2j)
    assert diffs.eta_plus(1, bp) == pytest.approx(0.7 * abs(1 + 0.2j))
    with pytest.raises(DomainError):
        diffs.eta_plus(0.5, bp)


def test_eta_plus_sheet(contour_frame):
    for theta in (0.3, 1.9, 4.0):
        zeta = complex(math.cos(theta), math.sin(theta))
        if abs(zeta - contour_frame.nu) > 0.1:
            assert diffs.eta_plus_sheet(zeta, contour_frame) == 1


def test_theta_E_gamma():
    bp = BranchPair(0.3, -0.2j)
    assert diffs.theta_E_gamma(1, bp) == 2j * diffs.eta_plus(1, bp)
    assert diffs.theta_E_gamma(-1, bp) == -2j * diffs.eta_plus(-1, bp)


@pytest.mark.parametrize('n,m,expected', [(1, 3, (1, 0)), (3, 5, (2, 1)), (1, 1, (1, 0)), (5, 2, (1, 2))])
def test_bezout(n, m, expected):
    x, y = diffs.bezout(n, m)
    assert n * x - m * y == 1
    assert (x, y) == expected


def test_bezout_not_coprime():
    with pytest.raises(DomainError) as excinfo:
        diffs.bezout(4, 6)
    assert excinfo.value.args[0] == '4 and 6 are not coprime'


@pytest.mark.parametrize('p,q,l', [
    (Fraction(1), Fraction(0), 1),
    (Fraction(1), Fraction(1, 2), 2),
    (Fraction(1, 3), Fraction(1, 4), 4),
    (Fraction(2), Fraction(1, 3), 3),
    (Fraction(1, 2), Fraction(1, 4), 2),
])
def test_closing_level(p, q, l):
    level = diffs.closing_level(p.numerator, p.denominator, q.numerator, q.denominator)
    assert level == l
    assert diffs.closing_solvable(p.numerator, p.denominator, q.numerator, q.denominator, level)
    if level > 1:
        assert not diffs.closing_solvable(p.numerator, p.denominator, q.numerator, q.denominator, 1)


def test_lifted_T_matches_T_tilde():
    mp = forward_coords(BranchPair(0.2 + 0.3j, -0.5 + 0.1j))
    assert diffs.lifted_T(mp) == pytest.approx(T_tilde(mp), abs=1e-12)


@pytest.mark.parametrize('p,q', [(Fraction(1), Fraction(0)), (Fraction(1, 3), Fraction(1, 4)),
                                 (Fraction(2), Fraction(1, 3))])
def test_construct_psi(p, q):
    mp = solve_level(float(p), float(q), 0.5, 0.3)
    frame = build_frame(inverse_coords(mp))
    data = diffs.construct_psi(p, q, frame, mp)
    assert data.max_residual() < 1e-6
    e_plus, e_minus, p_plus, p_minus = data.closing_integrals()
    assert e_plus == pytest.approx(p.numerator, abs=1e-6)
    assert e_minus == pytest.approx(p.denominator, abs=1e-6)
    assert p_plus == pytest.approx(data.gamma_plus, abs=1e-6)
    assert p_minus == pytest.approx(data.gamma_minus, abs=1e-6)
    assert data.combine(2, 3) == (2 * data.n + 3 * data.gamma_plus, 2 * data.m + 3 * data.gamma_minus)


def test_construct_psi_wrong_level():
    mp = solve_level(1.0, 0.25, 0.5, 0.3)
    frame = build_frame(inverse_coords(mp))
    with pytest.raises(DomainError):
        diffs.construct_psi(Fraction(1), Fraction(1, 3), frame, mp)
    with pytest.raises(DomainError):
        diffs.construct_psi(Fraction(2), Fraction(1, 4), frame, mp)
