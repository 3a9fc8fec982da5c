import math

import numpy as np
import pytest
from scipy import special

from harmonic_tori import contour
from harmonic_tori.contour import (GAUSS_NODES, Arc, PathSpec, Segment, check_clearance, integrate, loop_samples,
                                   path_nodes, track_endpoints, track_sheet, w_principal)
from harmonic_tori.exceptions import PathError

K = 0.5


def _rectangle(points, **kwargs):
    return PathSpec(tuple(Segment(a, b) for a, b in zip(points, points[1:])), **kwargs)


def loop_a():
    """
    Clockwise around [-1, 1].
    """
    return _rectangle([0.2j, 1.2 + 0.2j, 1.2 - 0.2j, -1.2 - 0.2j, -1.2 + 0.2j, 0.2j], name='A')


def test_principal_branch():
    assert w_principal(0, K) == 1
    z = np.array([0.5j, 3j, -2j])
    w = w_principal(z, K)
    assert np.all(np.abs(w.imag) < 1e-15)
    assert np.all(w.real > 0)
    assert np.allclose(w * w, (1 - z * z) * (1 - K * K * z * z))


def test_track_sheet_around_branch_point():
    z = 1 + 0.3 * np.exp(1j * np.linspace(0, 2 * math.pi, 200))
    w = track_sheet(z, K)
    assert w[-1] == pytest.approx(-w[0])


def test_track_sheet_around_both_cuts():
    z = 3 * np.exp(1j * np.linspace(0, 2 * math.pi, 400))
    w = track_sheet(z, K, start_sheet=-1)
    assert w[0] == pytest.approx(-w_principal(z[0], K))
    assert w[-1] == pytest.approx(w[0])


def test_track_sheet_ambiguous():
    with pytest.raises(PathError) as excinfo:
        track_sheet(np.array([0, 5j]), K)
    assert excinfo.value.args[0] == 'sheet continuation is ambiguous: samples too far apart'


def test_path_validation():
    with pytest.raises(PathError) as excinfo:
        PathSpec((Segment(0, 1), Segment(2, 3)), name='broken')
    assert excinfo.value.args[0] == 'path broken is not connected at 1'
    with pytest.raises(PathError):
        PathSpec((Segment(0, 1),), start_sheet=0)


def test_segment_distance():
    seg = Segment(0j, 2 + 0j)
    assert seg.distance_to(1 + 1j) == pytest.approx(1)
    assert seg.distance_to(3 + 0j) == pytest.approx(1)
    assert Arc(0j, 2.0, 0.0, math.pi).distance_to(0.5j) == pytest.approx(1.5)


def test_path_nodes_refine_near_singular_points():
    path = PathSpec((Segment(-0.5 + 0j, 0.5 + 0j),))
    coarse, _ = path_nodes(path, [], 0.5)
    assert len(coarse) == 2 * GAUSS_NODES
    fine, weights = path_nodes(path, [0.52 + 0j], 0.5)
    assert len(fine) > 4 * GAUSS_NODES
    assert np.all(np.diff(fine.real) > 0)
    assert np.sum(weights) == pytest.approx(1.0)


def test_a_period_of_omega():
    value = integrate(lambda z, w: 1 / w, loop_a(), K)
    assert value == pytest.approx(4 * special.ellipk(K * K), abs=1e-10)


def test_a_period_of_e():
    value = integrate(lambda z, w: (1 - K * K * z * z) / w, loop_a(), K)
    assert value == pytest.approx(4 * special.ellipe(K * K), abs=1e-10)


def test_b_period_of_omega():
    path = _rectangle([0.9 + 0j, 0.9 - 0.1j, 2.1 - 0.1j, 2.1 + 0.1j, 0.9 + 0.1j, 0.9 + 0j], start_sheet=-1, name='B')
    value = integrate(lambda z, w: 1 / w, path, K)
    assert value == pytest.approx(2j * special.ellipk(1 - K * K), abs=1e-10)


def test_exact_differential():
    # d(z·w) integrates to zero around a closed loop
    def coefficient(z, w):
        dw = (-2 * z * (1 - K * K * z * z) - 2 * K * K * z * (1 - z * z)) / (2 * w)
        return w + z * dw

    assert abs(integrate(coefficient, loop_a(), K)) < 1e-10


def test_pole_clearance():
    with pytest.raises(PathError) as excinfo:
        integrate(lambda z, w: 1 / w, loop_a(), K, poles=[1.2 + 0.1j + 1e-4])
    assert excinfo.value.args[0].startswith('path A passes within ')
    check_clearance(loop_a(), [5j], 1e-3)


def test_track_endpoints():
    (z_start, w_start), (z_end, w_end) = track_endpoints(loop_a(), K)
    assert abs(z_start - 0.2j) < 0.05
    assert w_start.real > 0
    assert w_end == pytest.approx(w_start, abs=0.1)


def test_loop_samples():
    z, dz = loop_samples(1j, 0.5, 64)
    assert np.allclose(np.abs(z - 1j), 0.5)
    assert np.sum(dz / (z - 1j)) == pytest.approx(2j * math.pi)


def test_integrate_node_count(mocker):
    spy = mocker.spy(contour, 'path_nodes')
    value = integrate(lambda z, w: 1 / w, loop_a(), K, nodes=24)
    assert value == pytest.approx(4 * special.ellipk(K * K), abs=1e-10)
    assert all(call[0][3] == 24 for call in spy.call_args_list)
