"""
TC009: Exchange Rings and the Monoid of Idempotent Classes
"""

import pytest

from src.config import CONFIG
from src.errors import HypothesisFailed, ScaleCapExceeded
from src.exchange import (MonoidClass, VMonoid, exchange_qb_equivalence, is_exchange, is_exchange_ring,
                          maximal_regular_equals_qinv, monoid_orthogonal_cancellation, monoid_refinement_check,
                          vr_monoid)
from src.ring_specs import zn


@pytest.mark.parametrize("name", ["Z4", "Z6", "F2xF2", "T2F2", "M2F2"])
def test_finite_rings_are_exchange(zoo, name):
    assert is_exchange_ring(zoo(name)) is None


def test_exchange_idempotent(z6):
    p = is_exchange(z6, 2)
    assert z6.times(p, p) == p
    assert p in z6.mul[2, :].tolist()


def test_exchange_without_identity(zoo):
    assert is_exchange_ring(zoo("2Z4")) is None
    assert is_exchange(zoo("2Z4"), 1) == 0


def test_maximal_regular_elements_are_the_quasi_invertibles(zoo):
    assert maximal_regular_equals_qinv(zoo("Z6"))
    assert maximal_regular_equals_qinv(zoo("M2F2"))
    with pytest.raises(HypothesisFailed):
        maximal_regular_equals_qinv(zoo("Z4"))


@pytest.mark.parametrize("name", ["Z4", "Z6", "T2F2", "M2F2"])
def test_exchange_qb_equivalence(zoo, name):
    report = exchange_qb_equivalence(zoo(name))
    assert report.agree and report.qb
    assert report.witness is None


def test_monoid_of_z2():
    monoid = vr_monoid(zn(2), 2)
    assert len(monoid.classes) == 3, "zero, rank one and rank two"
    assert monoid.level_one == [0, 1]
    assert monoid.zero == 0
    assert monoid.add(1, 1) == 2
    assert monoid.add(0, 1) == 1
    assert all(t["order_ideal"] for t in monoid.traces)


def test_level_one_monoid_of_matrix_ring(m2f2):
    monoid = vr_monoid(m2f2, 1)
    assert len(monoid.classes) == 3
    assert monoid.addition == {}


def test_monoid_levels_are_capped(monkeypatch):
    with pytest.raises(ScaleCapExceeded):
        vr_monoid(zn(2), 3)
    monkeypatch.setitem(CONFIG, "level2_cap", 4)
    with pytest.raises(ScaleCapExceeded):
        vr_monoid(zn(6), 2)


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z4", "F2xF2", "M2F2"])
def test_cancellation_and_refinement_sweeps(zoo, name):
    R = zoo(name)
    cancellation = monoid_orthogonal_cancellation(R)
    refinement = monoid_refinement_check(R)
    assert cancellation.status == "pass", cancellation.to_payload()
    assert not cancellation.failures and not cancellation.inconclusive
    assert refinement.status in ("pass", "inconclusive")
    assert cancellation.equations >= cancellation.trivial
    assert refinement.equations == refinement.resolved + len(refinement.inconclusive)


def test_cancellation_needs_level_two_sums(m2f2):
    sweep = monoid_orthogonal_cancellation(m2f2, vr_monoid(m2f2, 1))
    assert sweep.status == "inconclusive"
    assert sweep.equations == 0 and not sweep.failures


def test_unresolved_cancellation_fails_on_a_qb_ring():
    R = zn(2)
    # 1 + 1 = 1 + 2 with 1 != 2, and no sum with the zero class is recorded
    monoid = VMonoid(R.label, 2, [MonoidClass(i, 1, [i]) for i in range(3)],
                     addition={(1, 1): 2, (1, 2): 2},
                     traces=[{"ideal": [0], "classes": [0]}, {"ideal": [0, 1], "classes": [0, 1, 2]}])
    sweep = monoid_orthogonal_cancellation(R, monoid)
    assert sweep.status == "fail"
    assert [1, 1, 2] in sweep.failures
    assert sweep.to_payload()["status"] == "fail"
