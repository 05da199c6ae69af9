"""
TC008: Extensions, B-Ideals and I_qb
"""

import numpy as np
import pytest

from src.config import CONFIG
from src.errors import IdealCapExceeded, PreconditionViolated
from src.extensions import (SCENARIOS, additively_generated_by_units, b_ideal_perturbation, compute_iqb,
                            extension_conditions, iqb_by_translation, is_b_ideal, is_qb_ideal,
                            lift_quasi_invertible, quasi_invertibles_lift, unit_perturbations, units_lift)
from src.ideals import enumerate_ideals, ideal_generated_by, jacobson_radical, whole_ring
from src.ring_specs import zn
from src.rings import mask_of


def test_lift_through_quotient(z6):
    I = ideal_generated_by(z6, [3])
    assert lift_quasi_invertible(z6, I, 2) == 5
    assert quasi_invertibles_lift(z6, I) == (True, None)
    assert units_lift(z6, I)


def test_lift_requires_a_proper_ideal(z6):
    with pytest.raises(PreconditionViolated):
        lift_quasi_invertible(z6, whole_ring(z6), 1)


def test_iqb_with_restricted_closure(z4):
    assert compute_iqb(z4, cl_mask=mask_of(z4, [1, 3])).elements == [0, 2]
    assert compute_iqb(z4).is_whole()
    assert not compute_iqb(z4).partial


def test_iqb_over_capped_ideal_lattice(monkeypatch):
    monkeypatch.setitem(CONFIG, "ideal_cap", 1)
    R = zn(6)
    with pytest.raises(IdealCapExceeded):
        enumerate_ideals(R)
    iqb = compute_iqb(R)
    assert iqb.partial
    assert iqb.is_whole()


@pytest.mark.parametrize("name", ["Z4", "Z6", "T2F2"])
def test_iqb_matches_translation_form(zoo, name):
    R = zoo(name)
    assert np.array_equal(compute_iqb(R).members, iqb_by_translation(R))


@pytest.mark.parametrize("name", ["Z4", "Z6", "Z12", "T2F2"])
def test_extension_criterion(zoo, name):
    R = zoo(name)
    for I in enumerate_ideals(R):
        if I.is_whole():
            continue
        report = extension_conditions(R, I, scenarios=SCENARIOS)
        assert report.consistent, f"{name} mod {I.elements}: {report.to_payload()}"
        assert report.qb and report.quotient_qb and report.lifting and report.absorbs


def test_radical_is_a_b_ideal(zoo):
    for name in ("Z4", "T2F2"):
        R = zoo(name)
        J = jacobson_radical(R)
        assert is_b_ideal(R, J) and is_qb_ideal(R, J)


def test_perturbation_by_a_b_ideal(z4):
    J = jacobson_radical(z4)
    assert b_ideal_perturbation(z4, J, 1)
    assert b_ideal_perturbation(z4, J, 3, kind="qb")
    with pytest.raises(PreconditionViolated):
        b_ideal_perturbation(z4, J, 2)
    with pytest.raises(ValueError):
        b_ideal_perturbation(z4, J, 1, kind="left")
    assert unit_perturbations(z4, J) == {"units": True, "right_units": True, "left_units": True}


def test_additive_generation_by_units(zoo):
    assert additively_generated_by_units(zoo("Z6"))
    assert additively_generated_by_units(zoo("M2F2"))
    assert not additively_generated_by_units(zoo("F2xF2"))
