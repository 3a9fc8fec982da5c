import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from harmonic_tori import genus_zero as g0
from harmonic_tori.exceptions import DomainError

ratios = st.floats(min_value=0.1, max_value=10)
angles = st.floats(min_value=0.05, max_value=math.pi - 0.05)


def test_branch_point_square_torus():
    assert abs(g0.branch_point(g0.Genus0Map(1.0, math.pi / 2))) < 1e-15


@given(ratios, angles)
def test_branch_point_in_disc(x, delta):
    m = g0.Genus0Map(x, delta)
    alpha = g0.branch_point(m)
    assert abs(alpha) < 1
    back = g0.map_params(alpha)
    assert back.x == pytest.approx(x, rel=1e-10)
    assert back.delta == pytest.approx(delta, abs=1e-10)


@pytest.mark.parametrize('x,delta', [(0, 1.0), (-1, 1.0), (1, 0), (1, math.pi)])
def test_invalid_map(x, delta):
    with pytest.raises(DomainError):
        g0.Genus0Map(x, delta)


def test_invalid_data():
    with pytest.raises(DomainError) as excinfo:
        g0.Genus0Data(0.2j, ((1, 2), (2, 4)))
    assert excinfo.value.args[0] == 'differentials are not linearly independent: det ((1, 2), (2, 4)) = 0'
    with pytest.raises(DomainError):
        g0.Genus0Data(1.0, ((0, 1), (1, 0)))
    with pytest.raises(DomainError):
        g0.Genus0Data(0j, ((2 ** 32, 1), (1, 0)))


def test_harmonic_map_special_unitary():
    m = g0.Genus0Map(1.7, 0.9)
    g = g0.harmonic_map_eval(m, 0.3 - 0.8j)
    assert np.allclose(g @ g.conj().T, np.eye(2), atol=1e-14)
    assert abs(np.linalg.det(g) - 1) < 1e-14


@given(ratios, angles, st.floats(min_value=-3, max_value=3), st.floats(min_value=-3, max_value=3))
@settings(max_examples=30)
def test_doubly_periodic(x, delta, re, im):
    m = g0.Genus0Map(x, delta)
    w = complex(re, im)
    lattice = g0.period_lattice(x)
    base = g0.harmonic_map_eval(m, w)
    for kappa in (lattice.kappa1, lattice.kappa2, lattice.period(2, -3)):
        assert np.abs(g0.harmonic_map_eval(m, w + kappa) - base).max() < 1e-10


def test_conformal_type_square():
    assert g0.conformal_type(((0, 1), (1, 0)), 1.0) == pytest.approx(1j)


def test_conformal_type_normalized():
    tau = g0.conformal_type(((1, 0), (0, 1)), 2.0)
    assert tau.imag < 0
    assert g0.conformal_type(((1, 0), (0, 1)), 2.0, normalize=True) == -tau


def test_conformal_type_singular():
    with pytest.raises(DomainError):
        g0.conformal_type(((1, 1), (2, 2)), 1.0)


def test_holonomy_traceless():
    m = g0.Genus0Map(0.8, 1.2)
    tau = g0.period_lattice(m.x).kappa1
    b = g0.holonomy_B(1, 0.4 + 0.3j, m, tau)
    assert abs(np.trace(b)) == 0
    assert b[0, 0] == 0 and b[1, 1] == 0
    with pytest.raises(DomainError):
        g0.holonomy_B(3, 1.0, m, tau)
    with pytest.raises(DomainError):
        g0.holonomy_B(1, 0, m, tau)


@pytest.mark.parametrize('zeta', [0.4 + 0.3j, -1.5j, 2.0])
def test_eigenvalue_squared(zeta):
    m = g0.Genus0Map(0.8, 1.2)
    tau = g0.period_lattice(m.x).kappa2
    b = g0.holonomy_B(2, zeta, m, tau)
    assert -np.linalg.det(b) == pytest.approx(g0.eigenvalue_squared(zeta, m, tau), rel=1e-12)


def test_eigenline_branch_points_square():
    alpha, other = g0.eigenline_branch_points(g0.Genus0Map(1.0, math.pi / 2))
    assert abs(alpha) < 1e-12
    assert cmath.isinf(other)


@given(ratios, angles)
@settings(max_examples=30)
def test_eigenline_branch_points(x, delta):
    m = g0.Genus0Map(x, delta)
    alpha, other = g0.eigenline_branch_points(m)
    assert abs(alpha - g0.branch_point(m)) < 1e-9
    if not cmath.isinf(other):
        assert abs(other - 1 / alpha.conjugate()) < 1e-6 * max(1, abs(other))


def test_energy():
    assert g0.energy(g0.Genus0Data(0j, ((0, 1), (1, 0)))) == pytest.approx(math.pi ** 2)
    assert g0.energy(g0.Genus0Data(0.5, ((0, 1), (1, 0)))) == pytest.approx(5 * math.pi ** 2 / 3)
    assert g0.energy(g0.Genus0Data(0j, ((1, 0), (0, 1)))) == pytest.approx(-math.pi ** 2)


def test_energy_grows_near_the_circle():
    assert g0.energy(g0.Genus0Data(0.999, ((0, 1), (1, 0)))) > 1000


@given(st.floats(min_value=-0.9, max_value=0.9), st.floats(min_value=-0.9, max_value=0.9))
def test_energy_inversion_symmetric(re, im):
    alpha = complex(re, im)
    assume(abs(alpha) < 0.95)
    d = g0.Genus0Data(alpha, ((1, 2), (3, 1)))
    assert g0.invert_map(d).alpha == -alpha
    assert g0.energy(g0.invert_map(d)) == pytest.approx(g0.energy(d), rel=1e-14)


def test_invert_params():
    m = g0.Genus0Map(2.0, 0.7)
    inverse = g0.invert_params(m)
    assert g0.branch_point(inverse) == pytest.approx(-g0.branch_point(m), abs=1e-14)
    assert g0.latitude(m) == pytest.approx(0.7 - math.pi / 2)


@pytest.mark.parametrize('alpha', [0j, 0.5, 0.3 - 0.4j, -0.8j])
def test_differential_scalars(alpha):
    r1, r2 = g0.differential_scalars(alpha)
    assert r1 == pytest.approx(g0.differential_scalars_alpha(alpha), abs=1e-12)
    assert r2 == pytest.approx(r1.conjugate(), abs=1e-12)


def test_genus0_differential_exact():
    d = g0.Genus0Data(0.2 + 0.1j, ((1, 0), (0, 1)))
    r1, _ = g0.differential_scalars(d.alpha)

    def primitive(zeta):
        eta = cmath.sqrt((zeta - d.alpha) * (1 - d.alpha.conjugate() * zeta))
        return (r1 / zeta + r1.conjugate()) * eta

    zeta, h = 0.7 + 0.4j, 1e-6
    numeric = (primitive(zeta + h) - primitive(zeta - h)) / (2 * h)
    assert g0.genus0_differential(1, zeta, d) == pytest.approx(numeric, rel=1e-8)
