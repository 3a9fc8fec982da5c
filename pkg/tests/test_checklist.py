import json

import pytest

from harmonic_tori.checklist import LINE_BUNDLE_NOTE, build_report, reality_of_polynomial
from harmonic_tori.curves import BranchPair


@pytest.fixture(scope='module')
def chi_annulus_report():
    return build_report(BranchPair(0.3, -0.3))


def test_symmetric_pair_is_spectral(chi_annulus_report):
    report = chi_annulus_report
    assert report.spectral
    assert (report.p_rational, report.q_rational) == ('1/1', '1/1')
    assert str(report.component) == 'Annulus(1)'
    assert report.p == pytest.approx(1)
    assert report.closing.l == 1


def test_symmetric_pair_passes(chi_annulus_report):
    failed = [(c.code, c.value, c.note) for c in chi_annulus_report.checks if not c.passed]
    assert failed == []
    assert chi_annulus_report.passed


def test_checklist_codes(chi_annulus_report):
    assert [c.code for c in chi_annulus_report.checks] == ['P.%d' % i for i in range(1, 10)]


def test_to_dict(chi_annulus_report):
    d = chi_annulus_report.to_dict()
    assert set(d) == {'alpha', 'beta', 'k', 'p', 'T', 'p_rational', 'q_rational', 'component', 'closing',
                      'checklist', 'notes'}
    assert d['alpha'] == [0.3, 0.0]
    assert d['notes'] == [LINE_BUNDLE_NOTE]
    assert d['closing']['l'] == 1
    assert len(d['closing']['closing_integrals']) == 4
    assert d['checklist'][0]['code'] == 'P.1'
    json.dumps(d)


def test_generic_pair_not_spectral():
    report = build_report(BranchPair(0.1234 + 0.2j, -0.431 + 0.05j))
    assert not report.spectral
    assert report.p_rational is None
    assert report.to_dict()['closing'] is None
    p8 = next(c for c in report.checks if c.code == 'P.8')
    assert not p8.passed
    assert p8.note == 'S, T not rational at denominator <= 64'
    # the reality and symmetry conditions hold for every curve
    for code in ('P.1', 'P.2', 'P.4', 'P.5'):
        assert next(c for c in report.checks if c.code == code).passed, code


def test_reality_of_polynomial(branch_pairs):
    for bp in branch_pairs:
        assert reality_of_polynomial(bp) < 1e-12
