"""
TC003: Regular Elements and the Extension Order
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.errors import NotAnExtension, NotIdempotent, PreconditionViolated
from src.regular import (decompose_extension, extend_by_complement, extends, extends_via_idempotents,
                         extension_order_sweep, idempotents, maximal_regular_elements, mvn_equivalent,
                         partial_inverse, partial_inverses, realign_partial_inverse, regular_mask)


def test_regular_elements(zoo):
    assert np.flatnonzero(regular_mask(zoo("Z4"))).tolist() == [0, 1, 3]
    assert regular_mask(zoo("Z6")).all()
    assert regular_mask(zoo("M2F2")).all(), "matrices over a field are regular"


def test_idempotents_of_z6(z6):
    assert np.flatnonzero(idempotents(z6)).tolist() == [0, 1, 3, 4]


def test_partial_inverses_are_reflexive(z6):
    assert partial_inverses(z6, 2) == [2]
    assert partial_inverse(z6, 0) == 0
    assert partial_inverse(z6, 5) == 5


def test_partial_inverse_missing_for_non_regular(z4):
    assert partial_inverse(z4, 2) is None
    assert partial_inverses(z4, 2) == []


def test_extension_order_in_z6(z6):
    assert extends(z6, 2, 5) == 2
    assert extends(z6, 3, 1) is not None
    assert extends(z6, 1, 2) is None
    assert np.flatnonzero(maximal_regular_elements(z6)).tolist() == [1, 5]


@pytest.mark.parametrize("name", ["Z4", "Z6", "F2xF2", "T2F2", "M2F2"])
def test_extension_order_is_a_partial_order(zoo, name):
    violations = extension_order_sweep(zoo(name))
    assert all(not v for v in violations.values()), f"{name}: {violations}"


@pytest.mark.parametrize("name", ["Z6", "T2F2", "M2F2"])
def test_idempotent_criterion_matches_direct_check(zoo, name):
    R = zoo(name)
    reg = np.flatnonzero(regular_mask(R)).tolist()
    for a in reg:
        for b in reg:
            direct = extends(R, a, b) is not None
            assert extends_via_idempotents(R, a, b) == direct, f"{name}: a={a}, b={b}"


def test_murray_von_neumann_equivalence(m2f2):
    assert mvn_equivalent(m2f2, 1, 8) == (2, 4)
    assert mvn_equivalent(m2f2, 1, 9) is None
    with pytest.raises(NotIdempotent):
        mvn_equivalent(m2f2, 2, 1)


def test_decompose_and_rebuild_an_extension(z6):
    p, q, x = decompose_extension(z6, 2, 5)
    assert (p, q, x) == (4, 4, 2)
    assert extend_by_complement(z6, 2, 3) == 2
    with pytest.raises(NotAnExtension):
        decompose_extension(z6, 1, 2)


def test_realign_partial_inverse(z6):
    assert realign_partial_inverse(z6, 2, 5, 4, 4, 4) == 5
    with pytest.raises(PreconditionViolated):
        realign_partial_inverse(z6, 2, 5, 2, 4, 4)


def test_complement_must_lie_in_the_corner(z6):
    with pytest.raises(PreconditionViolated):
        extend_by_complement(z6, 2, 1)


@given(name=st.sampled_from(["Z6", "F2xF2", "M2F2"]), data=st.data())
def test_partial_inverse_solves_axa(zoo, name, data):
    R = zoo(name)
    a = data.draw(st.integers(0, R.order - 1))
    x = partial_inverse(R, a)
    assert x is not None
    assert R.times(a, x, a) == a
    assert R.times(x, a, x) == x
