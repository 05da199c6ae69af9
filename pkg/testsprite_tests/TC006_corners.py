"""
TC006: Skew Corners

Over M2(F2) with p = e11, q = e22, u = e21 and v = e12 we have 1 - p = uv
and 1 - q = vu, so the corner pRq translates into the coset u + pRq.
"""

import pytest

from src.corners import (corner_reducer, corner_transfer, extend_to_quasi_invertible, full_corner_criterion,
                         is_qb_corner, qb_corner_dichotomy, skew_corner_qinv, unit_coset_corner_criterion)
from src.errors import BadEquivalenceData, NoReducer, NotIdempotent, NotInCorner, PreconditionViolated
from src.quasi import qinv_mask
from src.regular import corner, extends

E11, E12, E21, E22 = 1, 2, 4, 8


def test_corner_quasi_inverse(m2f2):
    assert skew_corner_qinv(m2f2, E11, E22, E12) == E21
    assert skew_corner_qinv(m2f2, E11, E22, 0) is None


def test_corner_input_validation(m2f2):
    with pytest.raises(NotInCorner):
        skew_corner_qinv(m2f2, E11, E22, E21)
    with pytest.raises(NotIdempotent):
        skew_corner_qinv(m2f2, E12, E22, E12)
    with pytest.raises(PreconditionViolated):
        skew_corner_qinv(m2f2, E11, 0, 0)


def test_corner_transfer(m2f2):
    for x in corner(m2f2, E11, E22).tolist():
        report = corner_transfer(m2f2, E21, E12, E11, E22, x)
        assert report.agree, report.to_payload()
    report = corner_transfer(m2f2, E21, E12, E11, E22, E12)
    assert report.corner_side and report.ambient_side
    assert report.applicable


def test_transfer_rejects_bad_equivalence_data(m2f2):
    with pytest.raises(BadEquivalenceData):
        corner_transfer(m2f2, E12, E21, E11, E22, E12)


def test_unit_coset_criterion(m2f2):
    report = unit_coset_corner_criterion(m2f2, E21, E12, E11, E22)
    assert report.agree
    assert report.corner_qb


def test_full_corner_criterion(m2f2):
    report = full_corner_criterion(m2f2, E11)
    assert report.agree
    assert report.corner_qb and report.corner_ring_qb


def test_corner_verdict_reports_each_side(m2f2):
    verdict = is_qb_corner(m2f2, E11, E22)
    assert verdict.left_full and verdict.right_full
    assert verdict.left_missing == [] and verdict.right_missing == []


@pytest.mark.parametrize("name", ["Z6", "F2xF2", "T2F2", "M2F2"])
def test_qb_corner_dichotomy(zoo, name):
    assert qb_corner_dichotomy(zoo(name)) == []


def test_corner_reducer(m2f2):
    assert corner_reducer(m2f2, E11, E22, 0, E11) == E12
    with pytest.raises(NoReducer):
        corner_reducer(m2f2, E11, E22, 0, 0)


@pytest.mark.parametrize("a", [E11, E12, 3])
def test_extend_to_quasi_invertible(m2f2, a):
    u = extend_to_quasi_invertible(m2f2, a)
    assert qinv_mask(m2f2)[u]
    assert extends(m2f2, a, u) is not None


def test_extension_needs_a_regular_element(z4):
    with pytest.raises(PreconditionViolated):
        extend_to_quasi_invertible(z4, 2)
