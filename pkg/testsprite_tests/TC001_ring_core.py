"""
TC001: Ring Tables and Constructions

Zoo rings satisfy the ring axioms, coordinate layouts round through
encode/decode, and malformed specs are rejected with MalformedSpec.
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import SMALL_NONUNITAL, SMALL_UNITAL
from src.errors import ForeignElement, MalformedSpec, NonUnitalRing, OrderCapExceeded
from src.ring_specs import (build_ring, corner_ring, load_spec, matrix_index, matrix_unit, table_ring,
                            unitization, zn)
from src.rings import arithmetic, inverse, opposite, units, verify_tables


@pytest.mark.parametrize("name", SMALL_UNITAL + SMALL_NONUNITAL)
def test_zoo_rings_satisfy_axioms(zoo, name):
    R = zoo(name)
    assert verify_tables(R) is None, f"{name} violates {verify_tables(R)}"
    assert R.add[0, 0] == 0


def test_zn_arithmetic():
    R = zn(6)
    assert R.order == 6 and R.one == 1
    assert arithmetic(R, "add", 4, 5) == 3
    assert arithmetic(R, "mul", 4, 5) == 2
    assert arithmetic(R, "sub", 1, 4) == 3
    assert arithmetic(R, "neg", 2) == 4
    assert R.co(4) == 3
    assert R.total(1, 2, 3, 4) == 4


def test_units_of_z6_and_fields(zoo):
    assert np.flatnonzero(units(zoo("Z6"))).tolist() == [1, 5]
    assert np.flatnonzero(units(zoo("F4"))).tolist() == [1, 2, 3]
    assert inverse(zoo("Z6"), 5) == 5
    assert inverse(zoo("Z6"), 2) is None


def test_matrix_units_multiply_like_matrix_units(m2f2):
    e11, e12, e21, e22 = (matrix_unit(m2f2, i, j) for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)))
    assert (e11, e12, e21, e22) == (1, 2, 4, 8)
    assert m2f2.one == 9
    assert m2f2.times(e12, e21) == e11
    assert m2f2.times(e21, e12) == e22
    assert m2f2.times(e12, e12) == 0
    assert matrix_index(m2f2, [[1, 1], [0, 1]]) == 11
    assert m2f2.decode(11) == (1, 1, 0, 1)


def test_opposite_ring_reverses_products(m2f2):
    op = opposite(m2f2)
    assert op.times(2, 4) == m2f2.times(4, 2)
    assert verify_tables(op) is None


def test_unitization_of_a_ring_without_identity(zoo):
    S = zoo("2Z4")
    assert S.order == 2 and not S.unital
    U = unitization(S)
    assert U.order == 4, "exponent of 2Z4 as an additive group is 2"
    assert U.one == 2
    assert verify_tables(U) is None
    # (s, 0) keeps its index
    assert U.times(1, 1) == S.times(1, 1)


def test_corner_ring_of_matrix_unit(m2f2):
    C = corner_ring(m2f2, 1)
    assert C.order == 2
    assert C.unital


def test_table_ring_from_spec_file():
    import os
    path = os.path.join(os.path.dirname(__file__), "..", "specs", "z2_table.json")
    R = build_ring(load_spec(path))
    assert R.order == 2 and R.one == 1


def test_malformed_specs_are_rejected():
    with pytest.raises(MalformedSpec):
        build_ring({"kind": "zn"})
    with pytest.raises(MalformedSpec):
        build_ring({"kind": "no-such-kind"})
    with pytest.raises(MalformedSpec):
        build_ring(["zn", 6])
    with pytest.raises(MalformedSpec):
        table_ring([[0, 1], [1, 0]], [[0, 0], [0, 0]], one=1)
    with pytest.raises(MalformedSpec):
        table_ring([[0, 1], [0, 1]], [[0, 0], [0, 1]])


def test_order_cap_and_foreign_elements(z6):
    with pytest.raises(OrderCapExceeded):
        zn(10 ** 6)
    with pytest.raises(ForeignElement):
        z6.check(6)
    with pytest.raises(NonUnitalRing):
        build_ring({"kind": "ideal", "base": {"kind": "zn", "n": 4}, "generators": [2]}).co(1)


@given(name=st.sampled_from(SMALL_UNITAL), data=st.data())
def test_distributivity_on_samples(zoo, name, data):
    R = zoo(name)
    a, b, c = (data.draw(st.integers(0, R.order - 1)) for _ in range(3))
    assert R.times(a, R.plus(b, c)) == R.plus(R.times(a, b), R.times(a, c))
    assert R.times(R.plus(a, b), c) == R.plus(R.times(a, c), R.times(b, c))
