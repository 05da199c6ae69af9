"""
TC004: Quasi-Invertible and Quasi-Adversible Elements

In a finite ring the quasi-invertible elements are the units. The fast
mask, the single-element decision and the exhaustive (a, b) search must
agree, and every quasi-inverse must generate the whole family.
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import SMALL_UNITAL
from src.closure import finite_consistency
from src.errors import InvalidWitness, NotAPartialInverse, NonUnitalRing, PreconditionViolated
from src.quasi import (QIWitness, adversibility_sets, centrally_orthogonal, converse_partial_inverse,
                       extend_regular_via_qinv, qadversible_mask, qinv_mask, quasi_adversible,
                       quasi_adversible_exhaustive, quasi_inverse_canonical, quasi_inverse_family,
                       quasi_invertible, quasi_invertible_exhaustive)
from src.regular import partial_inverses


def test_qinv_of_z6(z6):
    assert np.flatnonzero(qinv_mask(z6)).tolist() == [1, 5]
    assert quasi_invertible(z6, 5).v == 5
    assert quasi_invertible(z6, 2) is None
    assert quasi_invertible(z6, 3) is None


@pytest.mark.parametrize("name", SMALL_UNITAL)
def test_finite_rings_have_no_extra_quasi_invertibles(zoo, name):
    assert finite_consistency(zoo(name)) is None


@pytest.mark.parametrize("name", ["Z4", "Z6", "F2xF2", "T2F2"])
def test_exhaustive_search_agrees_with_mask(zoo, name):
    R = zoo(name)
    mask = qinv_mask(R)
    for u in range(R.order):
        assert (quasi_invertible_exhaustive(R, u) is not None) == bool(mask[u]), f"{name}: u={u}"


def test_central_orthogonality(z6):
    assert centrally_orthogonal(z6, 2, 3)
    assert not centrally_orthogonal(z6, 3, 3)
    assert centrally_orthogonal(z6, 0, 5)


def test_canonical_quasi_inverse(z6):
    assert quasi_inverse_canonical(z6, 5, 5, 5) == 5
    with pytest.raises(PreconditionViolated):
        quasi_inverse_canonical(z6, 2, 0, 0)


def test_witness_validation(z6):
    assert QIWitness(5, 5).valid_in(z6)
    with pytest.raises(InvalidWitness):
        quasi_inverse_family(z6, QIWitness(2, 2), 0, 0)
    with pytest.raises(NotAPartialInverse):
        converse_partial_inverse(z6, QIWitness(5, 5), 1)


def test_extend_regular_through_quasi_invertible(z6):
    assert extend_regular_via_qinv(z6, 2, 5) == 5
    with pytest.raises(PreconditionViolated):
        extend_regular_via_qinv(z6, 2, 2)


def test_unital_entry_points_reject_rings_without_identity(zoo):
    with pytest.raises(NonUnitalRing):
        qinv_mask(zoo("2Z4"))


@pytest.mark.parametrize("name", ["2Z4", "2Z8", "4Z8", "J(T2F2)"])
def test_nilpotent_rings_are_quasi_adversible(zoo, name):
    R = zoo(name)
    sets = adversibility_sets(R)
    assert sets["two_sided"].all(), f"{name}: every element of a nilpotent ring is adversible"
    assert qadversible_mask(R).all()


def test_adversible_oracle_agrees(zoo):
    R = zoo("2Z6")
    for x in range(R.order):
        assert (quasi_adversible(R, x) is not None) == (quasi_adversible_exhaustive(R, x) is not None)


@given(name=st.sampled_from(["Z6", "F2xF2", "T2F2", "M2F2"]), data=st.data())
def test_quasi_inverse_family(zoo, name, data):
    R = zoo(name)
    u = data.draw(st.sampled_from(np.flatnonzero(qinv_mask(R)).tolist()))
    a = data.draw(st.integers(0, R.order - 1))
    b = data.draw(st.integers(0, R.order - 1))
    w = quasi_invertible(R, u)
    check = quasi_inverse_family(R, w, a, b)
    assert check.ok, f"{name}: u={u}, a={a}, b={b} fails {check.failures()}"


@given(name=st.sampled_from(["Z6", "T2F2", "M2F2"]), data=st.data())
def test_every_partial_inverse_is_in_the_family(zoo, name, data):
    R = zoo(name)
    u = data.draw(st.sampled_from(np.flatnonzero(qinv_mask(R)).tolist()))
    w = quasi_invertible(R, u)
    for v2 in partial_inverses(R, u):
        check = converse_partial_inverse(R, w, v2)
        assert check.ok, f"{name}: u={u}, v'={v2} fails {check.failures()}"
