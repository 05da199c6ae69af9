"""
TC007: Row Reduction in M2(R)

Random certified rows over QB base rings reduce through the staged
construction, and the reducer certifies the original row.
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.errors import NotAUnit, PreconditionViolated, ScaleCapExceeded
from src.matrix_qb import (Mat2Algebra, brute_force_row_reduction, defect_corner_report, make_row,
                           mat2_orthogonal, random_elementary_unit, random_unimodular_row, reduce_row_m2,
                           row_transform)


def test_matrix_arithmetic(z6):
    M = Mat2Algebra(z6)
    X = M.make(1, 2, 3, 4)
    assert M.mul(X, M.one) == X
    assert M.add(X, M.co(X)) == M.one
    assert M.inverse((1, 5, 0, 1)) == (1, 1, 0, 1)
    assert M.describe(M.one) == "[[1,0],[0,1]]"


def test_orthogonality_of_matrices(z6):
    assert mat2_orthogonal(z6, (2, 0, 0, 2), (3, 3, 0, 0))
    assert not mat2_orthogonal(z6, (1, 0, 0, 0), (1, 0, 0, 0))


def test_row_certificate_is_required(z6):
    zero = (0, 0, 0, 0)
    with pytest.raises(PreconditionViolated):
        make_row(z6, zero, zero, zero, zero)
    row = make_row(z6, (1, 0, 0, 1), zero, (1, 0, 0, 1), zero)
    assert row.certified()


@given(seed=st.integers(0, 2 ** 16), name=st.sampled_from(["Z4", "Z6", "F2xF2", "T2F2", "M2F2"]))
def test_random_rows_reduce(zoo, seed, name):
    R = zoo(name)
    rng = np.random.default_rng(seed)
    row = random_unimodular_row(R, rng)
    out = reduce_row_m2(R, row, rng)
    M = row.algebra
    reduced = M.add(row.A, M.mul(row.B, out.reducer))
    assert M.is_quasi_inverse(reduced, out.quasi_inverse), f"{name} seed {seed}: {out.to_payload()}"
    assert [step["stage"] for step in out.trace] == ["1", "2", "3", "4", "5", "6", "7"]
    assert all(step.get("skipped") for step in out.trace if step["stage"] in ("5", "6"))


def test_deterministic_reduction_is_reproducible(z6):
    row = random_unimodular_row(z6, np.random.default_rng(3))
    first = reduce_row_m2(z6, row)
    second = reduce_row_m2(z6, row)
    assert first.to_payload() == second.to_payload()


def test_row_transform_keeps_certificate(z6):
    rng = np.random.default_rng(11)
    row = random_unimodular_row(z6, rng)
    M = row.algebra
    u, _ = random_elementary_unit(M, rng)
    v, _ = random_elementary_unit(M, rng)
    moved = row_transform(row, u, v, (2, 1, 0, 5))
    assert moved.certified()
    with pytest.raises(NotAUnit):
        row_transform(row, (2, 0, 0, 1), v, M.zero)


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z4"])
def test_staged_reduction_agrees_with_brute_force(zoo, name):
    R = zoo(name)
    rng = np.random.default_rng(5)
    for _ in range(5):
        row = random_unimodular_row(R, rng)
        M = row.algebra
        Y = brute_force_row_reduction(R, row)
        assert Y is not None
        assert M.is_qinv(M.add(row.A, M.mul(row.B, Y)))
        staged = reduce_row_m2(R, row)
        reduced = M.add(row.A, M.mul(row.B, staged.reducer))
        assert M.is_qinv(reduced), row.to_payload()
        assert M.is_quasi_inverse(reduced, staged.quasi_inverse)


def test_brute_force_is_size_gated(z6):
    row = random_unimodular_row(z6, np.random.default_rng(0))
    with pytest.raises(ScaleCapExceeded):
        brute_force_row_reduction(z6, row)


def test_defect_corner_of_units(z6):
    report = defect_corner_report(z6, 1, 1, 5, 5)
    assert report.zero and report.conclusion_holds
    with pytest.raises(PreconditionViolated):
        defect_corner_report(z6, 2, 2, 1, 1)


def test_defect_corner_in_matrix_ring(m2f2):
    # the swap matrix e12 + e21 is its own inverse
    report = defect_corner_report(m2f2, 9, 9, 6, 6)
    assert report.zero and report.hypothesis
    assert report.qb_corner is None
