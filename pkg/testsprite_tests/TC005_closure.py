"""
TC005: Closure Operators and the QB Property

Every finite ring is a QB-ring and a B-ring, cl and cr fill the ring
together, and the closure laws hold on sampled subsets.
"""

import numpy as np
import pytest

from conftest import SMALL_NONUNITAL, SMALL_UNITAL
from src.closure import (cl, cl_nonunital, cl_nonunital_right, closure_law_suite, cr, find_mirror_reducer,
                         ideal_is_qb, ideal_unit_transfer, is_b_nonunital, is_b_ring, is_qb_nonunital,
                         is_qb_ring, mirror_reducer, quotient_transfer, symmetry_check,
                         unimodular_ideal_conditions)
from src.config import CONFIG
from src.errors import NotInIdeal, PreconditionViolated, ScaleCapExceeded
from src.ideals import enumerate_ideals, ideal_generated_by
from src.quasi import qinv_mask
from src.ring_specs import zn
from src.rings import mask_of, units


@pytest.mark.parametrize("name", SMALL_UNITAL)
def test_finite_rings_are_qb_and_b(zoo, name):
    R = zoo(name)
    qb, b = is_qb_ring(R), is_b_ring(R)
    assert qb.holds, f"{name}: cl(R_q⁻¹) misses {qb.counterexample}"
    assert b.holds, f"{name}: cl(R⁻¹) misses {b.counterexample}"
    assert qb.counterexample is None


def test_closures_of_special_subsets(z4):
    empty = np.zeros(z4.order, dtype=bool)
    assert not cl(z4, empty).any()
    assert np.flatnonzero(cl(z4, mask_of(z4, [0]))).tolist() == [0, 2], "cl(0) is the radical"
    assert cl(z4, units(z4)).all()
    assert cr(z4, units(z4)).all()


@pytest.mark.parametrize("name", ["Z4", "Z6", "F2xF2", "T2F2", "M2F2"])
def test_closure_laws(zoo, name):
    results = closure_law_suite(zoo(name), seed=7)
    failing = {k: v.counterexample for k, v in results.items() if not v.holds}
    assert not failing, f"{name}: {failing}"
    assert "unit invariance of cl(R_q⁻¹)" in results


@pytest.mark.parametrize("name", ["Z6", "T2F2", "M2F2"])
def test_left_right_symmetry(zoo, name):
    report = symmetry_check(zoo(name))
    assert report.biconditional and report.op_agrees
    assert report.cl_full and report.cr_full


def test_mirror_reducer_in_z6(z6):
    out = mirror_reducer(z6, 2, 2, 3, 1, 5)
    assert (out.y, out.d) == (1, 5)
    assert out.ok, out.identities
    assert z6.plus(2, z6.times(3, out.y)) == 5


def test_mirror_reducer_search(zoo):
    R = zoo("M2F2")
    # e11·e11 + e22 = 1
    found = find_mirror_reducer(R, 1, 1, 8)
    assert found is not None and found.ok


def test_mirror_reducer_preconditions(z6):
    with pytest.raises(PreconditionViolated):
        mirror_reducer(z6, 2, 1, 3, 1, 5)
    with pytest.raises(PreconditionViolated):
        mirror_reducer(z6, 2, 2, 3, 1, 2)


@pytest.mark.parametrize("name", ["Z4", "Z6", "Z12"])
def test_unimodular_ideal_conditions_agree(zoo, name):
    R = zoo(name)
    for I in enumerate_ideals(R):
        for a in I.elements:
            for b in range(R.order):
                conditions = unimodular_ideal_conditions(R, I, a, b)
                assert conditions.equivalent, f"{name}: I={I.elements}, a={a}, b={b}"


def test_unit_transfer_between_ideal_and_ring(z6):
    for I in enumerate_ideals(z6):
        for t in I.elements:
            assert ideal_unit_transfer(z6, I, t).consistent, f"I={I.elements}, t={t}"
    with pytest.raises(NotInIdeal):
        ideal_unit_transfer(z6, ideal_generated_by(z6, [3]), 1)


@pytest.mark.parametrize("name", ["Z4", "Z6", "T2F2"])
def test_ideals_of_qb_rings_are_qb(zoo, name):
    R = zoo(name)
    for I in enumerate_ideals(R):
        assert ideal_is_qb(R, I) == (True, True), f"{name}: I={I.elements}"


@pytest.mark.parametrize("name", ["Z6", "Z12", "T2F2"])
def test_quotients_inherit_the_qb_property(zoo, name):
    assert quotient_transfer(zoo(name)) == []


@pytest.mark.parametrize("name", SMALL_NONUNITAL)
def test_rings_without_identity(zoo, name):
    R = zoo(name)
    assert is_qb_nonunital(R).holds
    assert is_b_nonunital(R).holds
    assert cl_nonunital(R).all() and cl_nonunital_right(R).all()


def test_closure_scale_cap(monkeypatch):
    R = zn(8)
    monkeypatch.setitem(CONFIG, "closure_cap", 4)
    with pytest.raises(ScaleCapExceeded):
        cl(R, qinv_mask(R))
