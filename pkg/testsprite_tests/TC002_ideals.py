"""
TC002: Ideals, Quotients and Primeness
"""

import pytest

from src.errors import DifferentRings, NotInIdeal
from src.ideals import (enumerate_ideals, ideal_as_ring, ideal_generated_by, ideal_sum, is_ideal,
                        is_primely_embedded, jacobson_radical, orthogonal_ideals, primeness, quotient,
                        zero_ideal)
from src.rings import subring_generated_by, units


def test_ideal_lattice_of_z6(z6):
    ideals = enumerate_ideals(z6)
    assert [I.elements for I in ideals] == [[0], [0, 3], [0, 2, 4], [0, 1, 2, 3, 4, 5]]
    assert all(is_ideal(z6, I.members) for I in ideals)
    assert ideals[0].is_zero() and ideals[-1].is_whole()


def test_simple_matrix_ring_has_two_ideals(m2f2):
    assert [I.size for I in enumerate_ideals(m2f2)] == [1, 16]


def test_jacobson_radical(zoo):
    assert jacobson_radical(zoo("Z4")).elements == [0, 2]
    assert jacobson_radical(zoo("Z6")).elements == [0]
    assert jacobson_radical(zoo("T2F2")).elements == [0, 2]
    assert jacobson_radical(zoo("M2F2")).is_zero()


def test_quotients(zoo):
    R = zoo("Z12")
    S, pi = quotient(R, ideal_generated_by(R, [4]))
    assert S.order == 4
    assert pi[4] == 0 and pi[5] == pi[1]
    assert S.one == pi[R.one]
    T = zoo("T2F2")
    S, _ = quotient(T, jacobson_radical(T))
    assert S.order == 4
    assert int(units(S).sum()) == 1, "T2(F2)/J is F2 x F2 with a single unit"


def test_primeness(zoo):
    z4 = primeness(zoo("Z4"))
    assert not z4.semiprime and z4.semiprime_witness == 2
    z6 = primeness(zoo("Z6"))
    assert z6.semiprime and not z6.prime
    assert z6.prime_witness == (2, 3)
    assert primeness(zoo("M2F2")).prime


def test_sums_and_orthogonality(z6):
    I, J = ideal_generated_by(z6, [3]), ideal_generated_by(z6, [2])
    assert ideal_sum(I, J).is_whole()
    assert orthogonal_ideals(I, J)
    assert ideal_sum(I, zero_ideal(z6)).same_as(I)
    with pytest.raises(NotInIdeal):
        I.require(1)


def test_cross_ring_operations_are_rejected(zoo):
    with pytest.raises(DifferentRings):
        ideal_sum(zero_ideal(zoo("Z4")), zero_ideal(zoo("Z6")))


def test_ideal_as_ring_without_identity(zoo):
    T = zoo("T2F2")
    S, embed = ideal_as_ring(jacobson_radical(T))
    assert S.order == 2 and not S.unital
    assert S.times(1, 1) == 0
    assert embed.tolist() == [0, 2]


def test_prime_subring_embedding(m2f2):
    S, embed = subring_generated_by(m2f2, [])
    assert S.order == 2
    assert is_primely_embedded(S, m2f2, embed)
