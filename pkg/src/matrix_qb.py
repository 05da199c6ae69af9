"""
2x2 Matrices over a QB-Ring

Matrices are 4-tuples (a, b, c, d) of base-ring indices in row-major order, so
M2(R) is never tabulated unless an oracle asks for it. A right unimodular row
(A, B) carries its certificate AX + BW = 1; reducing it means finding Y with
A + BY quasi-invertible in M2(R).

The staged reduction conjugates the row by elementary matrices until both
diagonal entries are quasi-invertible and the off-diagonal entries live in
skew corners, then reads off an explicit quasi-inverse and carries the
reducer back to the original row.

Over a finite base the quasi-invertible (1,1) entry left by stage 4 is a unit,
so 1 - ax = 0 and the skew corners of stages 5 and 6 are zero. Those stages
only do work over an infinite base; on tabulated rings they are recorded as
skipped.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src import console
from src.closure import cl, cr
from src.config import CONFIG
from src.corners import corner_reducer, corner_qinv_mask, is_qb_corner, skew_corner_qinv
from src.errors import (NoReducer, NotAUnit, PreconditionViolated, ScaleCapExceeded, StageInvariantFailed,
                        StageWitnessNotFound)
from src.ideals import annihilated_pairs
from src.quasi import centrally_orthogonal, qinv_mask, quasi_invertible
from src.regular import corner
from src.ring_specs import matrix_ring
from src.rings import FiniteRing

Mat = Tuple[int, int, int, int]


class Mat2Algebra:
    """Arithmetic in M2(R) on top of the base tables."""

    def __init__(self, R: FiniteRing):
        self.R = R
        self.one_base = R.require_unital("M2 arithmetic")
        self.zero: Mat = (0, 0, 0, 0)
        self.one: Mat = (self.one_base, 0, 0, self.one_base)

    def make(self, *entries: int) -> Mat:
        self.R.check(*entries)
        return tuple(int(e) for e in entries)

    def add(self, X: Mat, Y: Mat) -> Mat:
        return tuple(self.R.plus(x, y) for x, y in zip(X, Y))

    def sub(self, X: Mat, Y: Mat) -> Mat:
        return tuple(self.R.minus(x, y) for x, y in zip(X, Y))

    def mul(self, X: Mat, Y: Mat) -> Mat:
        R = self.R
        a, b, c, d = X
        e, f, g, h = Y
        return (R.plus(R.times(a, e), R.times(b, g)), R.plus(R.times(a, f), R.times(b, h)),
                R.plus(R.times(c, e), R.times(d, g)), R.plus(R.times(c, f), R.times(d, h)))

    def times(self, *factors: Mat) -> Mat:
        acc = factors[0]
        for F in factors[1:]:
            acc = self.mul(acc, F)
        return acc

    def co(self, X: Mat) -> Mat:
        return self.sub(self.one, X)

    def orthogonal(self, S: Mat, T: Mat) -> bool:
        """S ⊥ T in M2(R): every S_ik r T_lj and T_ik r S_lj vanishes."""
        Z = annihilated_pairs(self.R)
        s, t = list(S), list(T)
        return bool(Z[np.ix_(s, t)].all() and Z[np.ix_(t, s)].all())

    def is_quasi_inverse(self, A: Mat, Z: Mat) -> bool:
        return (self.times(A, Z, A) == A
                and self.orthogonal(self.co(self.mul(A, Z)), self.co(self.mul(Z, A))))

    # oracles over the tabulated ring
    def table(self) -> FiniteRing:
        cap = CONFIG["order_cap"]
        if self.R.order ** 4 > cap:
            raise ScaleCapExceeded(f"M2({self.R.label}) exceeds order cap {cap}", cap=cap)
        return self.R.memo("m2_table", lambda: matrix_ring(self.R, 2))

    def index(self, X: Mat) -> int:
        return self.table().encode(X)

    def entries(self, index: int) -> Mat:
        return tuple(int(e) for e in self.table().decode(index))

    def is_qinv(self, X: Mat) -> bool:
        return bool(qinv_mask(self.table())[self.index(X)])

    def inverse(self, U: Mat) -> Optional[Mat]:
        elementary = self._elementary_inverse(U)
        if elementary is not None:
            return elementary
        T = self.table()
        i = self.index(U)
        hits = np.flatnonzero((T.mul[i, :] == T.one) & (T.mul[:, i] == T.one))
        return self.entries(int(hits[0])) if hits.size else None

    def _elementary_inverse(self, U: Mat) -> Optional[Mat]:
        one = self.one_base
        a, b, c, d = U
        if a == one and d == one and c == 0:
            return (one, self.R.negate(b), 0, one)
        if a == one and d == one and b == 0:
            return (one, 0, self.R.negate(c), one)
        return None

    def describe(self, X: Mat) -> str:
        a, b, c, d = (self.R.describe(e) for e in X)
        return f"[[{a},{b}],[{c},{d}]]"


def mat2_orthogonal(R: FiniteRing, S: Mat, T: Mat) -> bool:
    return Mat2Algebra(R).orthogonal(S, T)


# ---------------------------------------------------------------------------
# Rows and their transforms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnimodularRow:
    """(A, B) with AX + BW = 1 in M2(R)."""
    algebra: Mat2Algebra
    A: Mat
    B: Mat
    X: Mat
    W: Mat

    def certified(self) -> bool:
        M = self.algebra
        return M.add(M.mul(self.A, self.X), M.mul(self.B, self.W)) == M.one

    def to_payload(self) -> dict:
        return {"A": list(self.A), "B": list(self.B), "X": list(self.X), "W": list(self.W)}


def make_row(R: FiniteRing, A: Mat, B: Mat, X: Mat, W: Mat) -> UnimodularRow:
    M = Mat2Algebra(R)
    row = UnimodularRow(M, M.make(*A), M.make(*B), M.make(*X), M.make(*W))
    if not row.certified():
        raise PreconditionViolated("AX + BW != 1", equation="AX + BW = 1", row=row.to_payload())
    return row


def row_transform(row: UnimodularRow, u: Mat, v: Mat, c: Mat) -> UnimodularRow:
    """
    (A, B) -> (vAu + vBc, vB) with certificate X' = u⁻¹Xv⁻¹ and
    W' = (W - cu⁻¹X)v⁻¹. Right reducibility is preserved in both directions.
    """
    M = row.algebra
    u_inv, v_inv = M.inverse(u), M.inverse(v)
    if u_inv is None or v_inv is None:
        raise NotAUnit("row transform needs two units of M2(R)", u=list(u), v=list(v))
    A1 = M.add(M.times(v, row.A, u), M.times(v, row.B, c))
    B1 = M.mul(v, row.B)
    X1 = M.times(u_inv, row.X, v_inv)
    W1 = M.mul(M.sub(row.W, M.times(c, u_inv, row.X)), v_inv)
    out = UnimodularRow(M, A1, B1, X1, W1)
    if not out.certified():
        raise StageInvariantFailed("transformed row lost its certificate", row=out.to_payload())
    return out


def random_elementary_unit(M: Mat2Algebra, rng: np.random.Generator, length: int = 3) -> Tuple[Mat, Mat]:
    """A product of elementary matrices together with its inverse."""
    one, n = M.one_base, M.R.order
    G, G_inv = M.one, M.one
    for _ in range(length):
        k = int(rng.integers(n))
        E = (one, k, 0, one) if rng.random() < 0.5 else (one, 0, k, one)
        G, G_inv = M.mul(G, E), M.mul(M._elementary_inverse(E), G_inv)
    return G, G_inv


def random_unimodular_row(R: FiniteRing, rng: np.random.Generator) -> UnimodularRow:
    """A random A and X, a random unit G, then B = (1 - AX)G and W = G⁻¹."""
    M = Mat2Algebra(R)
    A = tuple(int(e) for e in rng.integers(R.order, size=4))
    X = tuple(int(e) for e in rng.integers(R.order, size=4))
    G, G_inv = random_elementary_unit(M, rng)
    B = M.mul(M.co(M.mul(A, X)), G)
    return make_row(R, A, B, X, G_inv)


# ---------------------------------------------------------------------------
# Staged reduction
# ---------------------------------------------------------------------------

@dataclass
class _Step:
    u_inv: Mat
    v: Mat
    u: Mat
    c: Mat
    W: Mat


@dataclass
class RowReduction:
    """Reducer Y for the (A, 1 - AX) form, the reducer WY for B, and the quasi-inverse of A + BWY."""
    Y: Mat
    reducer: Mat
    quasi_inverse: Mat
    trace: List[Dict[str, Any]] = field(default_factory=list)

    def to_payload(self) -> dict:
        return {"Y": list(self.Y), "reducer": list(self.reducer),
                "quasi_inverse": list(self.quasi_inverse), "trace": self.trace}


class _Reduction:
    """Mutable state (A, A') of the reduction with E = 1 - AA'."""

    def __init__(self, M: Mat2Algebra, A: Mat, A_prime: Mat, rng: Optional[np.random.Generator]):
        self.M, self.R = M, M.R
        self.A, self.Ap = A, A_prime
        self.rng = rng
        self.steps: List[_Step] = []
        self.trace: List[Dict[str, Any]] = []
        self.Q = qinv_mask(self.R)

    @property
    def E(self) -> Mat:
        return self.M.co(self.M.mul(self.A, self.Ap))

    def candidates(self) -> np.ndarray:
        e = self.R.elements
        return self.rng.permutation(e) if self.rng is not None else e

    def find_reducer(self, stage: str, target: int, coefficient: int) -> int:
        R = self.R
        pool = self.candidates()
        hits = np.flatnonzero(self.Q[R.add[target, R.mul[coefficient, pool]]])
        if hits.size == 0:
            raise StageWitnessNotFound(stage, f"no z makes {target} + {coefficient}z quasi-invertible",
                                       target=target, coefficient=coefficient)
        return int(pool[hits[0]])

    def transform(self, u: Mat, v: Mat, c: Mat) -> None:
        M = self.M
        u_inv, v_inv = M.inverse(u), M.inverse(v)
        E = self.E
        A1 = M.add(M.times(v, self.A, u), M.times(v, E, c))
        Ap1 = M.times(u_inv, self.Ap, v_inv)
        W1 = M.mul(M.co(M.times(c, u_inv, self.Ap)), v_inv)
        if M.co(M.mul(A1, Ap1)) != M.times(v, E, W1):
            raise StageInvariantFailed("1 - A1A1' != vEW1 after a row transform", A=list(A1))
        self.steps.append(_Step(u_inv=u_inv, v=v, u=u, c=c, W=W1))
        self.A, self.Ap = A1, Ap1

    def require(self, stage: str, checks: List[Tuple[str, bool]]) -> Dict[str, bool]:
        for equation, holds in checks:
            if not holds:
                raise StageInvariantFailed(f"stage {stage}: {equation} fails", stage=stage, equation=equation,
                                           A=list(self.A), A_prime=list(self.Ap))
        return {equation: True for equation, _ in checks}

    def record(self, stage: str, title: str, **data: Any) -> None:
        console.trace(f"STAGE {stage}: {title} {data}")
        self.trace.append({"stage": stage, "title": title, **data})

    def quasi_pair(self, stage: str, element: int) -> int:
        w = quasi_invertible(self.R, element)
        if w is None:
            raise StageInvariantFailed(f"stage {stage}: {element} is not quasi-invertible", stage=stage)
        return w.v


def reduce_row_m2(R: FiniteRing, row: UnimodularRow, rng: Optional[np.random.Generator] = None) -> RowReduction:
    """
    Find Y with A + BY quasi-invertible in M2(R) for a certified row.

    Works on (A, A') with A' = X and E = 1 - AX = BW. Stages:
      1. make the (1,1) entry quasi-invertible;
      2. clear it against its row and column, giving axb = cxa = 0;
      3. make the (2,2) entry quasi-invertible;
      4. clear it likewise, giving byd = dyc = 0;
      5. push b into ((1-ax)R(1-yd))_q⁻¹ unless that corner is zero;
      6. push c into ((1-dy)R(1-xa))_q⁻¹ likewise;
      7. assemble the quasi-inverse [[x, t], [s, y]].
    """
    M = row.algebra
    if M.R is not R:
        M = Mat2Algebra(R)
    if not row.certified():
        raise PreconditionViolated("row certificate fails", equation="AX + BW = 1", row=row.to_payload())
    one = M.one_base
    state = _Reduction(M, row.A, row.X, rng)

    # 1
    a, b, c, d = state.A
    ap, bp, cp, dp = state.Ap
    e, f, g, h = state.E
    z1 = state.find_reducer("1", a, R.plus(R.times(b, cp), e))
    state.transform(u=(one, 0, R.times(cp, z1), one), v=M.one, c=(z1, 0, 0, 0))
    a = state.A[0]
    state.record("1", "quasi-invertible (1,1) entry", z1=z1, a=a,
                 invariants=state.require("1", [("a quasi-invertible", bool(state.Q[a]))]))

    # 2
    x = state.quasi_pair("2", a)
    a, b, c, d = state.A
    a_before = a
    cx, xb = R.times(c, x), R.times(x, b)
    state.transform(u=(one, R.negate(xb), 0, one), v=(one, 0, R.negate(cx), one), c=M.zero)
    a, b, c, d = state.A
    state.record("2", "clear the (1,1) row and column", x=x, invariants=state.require("2", [
        ("a unchanged", a == a_before),
        ("axb = 0", R.times(a, x, b) == 0),
        ("cxa = 0", R.times(c, x, a) == 0),
    ]))

    # 3
    ap, bp, cp, dp = state.Ap
    e, f, g, h = state.E
    z2 = state.find_reducer("3", d, R.plus(R.times(c, bp), h))
    state.transform(u=(one, R.times(bp, z2), 0, one), v=M.one, c=(0, 0, 0, z2))
    a, b, c, d = state.A
    state.record("3", "quasi-invertible (2,2) entry", z2=z2, invariants=state.require("3", [
        ("d quasi-invertible", bool(state.Q[d])),
        ("axb = 0", R.times(a, x, b) == 0),
        ("cxa = 0", R.times(c, x, a) == 0),
    ]))

    # 4
    y = state.quasi_pair("4", d)
    by, yc = R.times(b, y), R.times(y, c)
    a_before = a
    state.transform(u=(one, 0, R.negate(yc), one), v=(one, R.negate(by), 0, one), c=M.zero)
    a, b, c, d = state.A
    state.record("4", "clear the (2,2) row and column", y=y, invariants=state.require("4", [
        ("byc = 0", a == a_before),
        ("axb = 0", R.times(a, x, b) == 0),
        ("cxa = 0", R.times(c, x, a) == 0),
        ("byd = 0", R.times(b, y, d) == 0),
        ("dyc = 0", R.times(d, y, c) == 0),
    ]))

    # 5
    p, q = R.co(R.times(a, x)), R.co(R.times(y, d))
    if corner(R, p, q).size == 1:
        state.require("5", [("b = 0 in a zero corner", b == 0)])
        state.record("5", "b corner is zero", skipped=True)
    else:
        e, f, g, h = state.E
        try:
            z3 = corner_reducer(R, p, q, b, R.times(p, e, p))
        except NoReducer as exc:
            raise StageWitnessNotFound("5", "no corner reducer for b", p=p, q=q, b=b) from exc
        state.transform(u=(one, R.negate(R.times(x, e, z3)), 0, one), v=M.one, c=(0, z3, 0, 0))
        a, b, c, d = state.A
        state.record("5", "b into its skew corner", z3=z3, skipped=False, invariants=state.require("5", [
            ("b corner quasi-invertible", bool(corner_qinv_mask(R, p, q)[b])),
            ("d = dyd", R.times(d, y, d) == d),
            ("(1-dy) ⊥ (1-yd)", centrally_orthogonal(R, R.co(R.times(d, y)), R.co(R.times(y, d)))),
            ("axb = 0", R.times(a, x, b) == 0),
            ("byd = 0", R.times(b, y, d) == 0),
            ("dyc = 0", R.times(d, y, c) == 0),
        ]))

    # 6
    p2, q2 = R.co(R.times(d, y)), R.co(R.times(x, a))
    if corner(R, p2, q2).size == 1:
        state.require("6", [("c = 0 in a zero corner", c == 0)])
        state.record("6", "c corner is zero", skipped=True)
    else:
        e, f, g, h = state.E
        try:
            z4 = corner_reducer(R, p2, q2, c, R.times(p2, h, p2))
        except NoReducer as exc:
            raise StageWitnessNotFound("6", "no corner reducer for c", p=p2, q=q2, c=c) from exc
        xa_before = R.times(x, a)
        state.transform(u=(one, 0, R.negate(R.times(y, h, z4)), one), v=M.one, c=(0, 0, z4, 0))
        a, b, c, d = state.A
        state.record("6", "c into its skew corner", z4=z4, skipped=False, invariants=state.require("6", [
            ("c corner quasi-invertible", bool(corner_qinv_mask(R, p2, q2)[c])),
            ("a = axa", R.times(a, x, a) == a),
            ("xa unchanged", R.times(x, a) == xa_before),
            ("(1-ax) ⊥ (1-xa)", centrally_orthogonal(R, R.co(R.times(a, x)), R.co(R.times(x, a)))),
        ]))

    # 7
    a, b, c, d = state.A
    s = 0 if b == 0 else skew_corner_qinv(R, R.co(R.times(a, x)), R.co(R.times(y, d)), b)
    t = 0 if c == 0 else skew_corner_qinv(R, R.co(R.times(d, y)), R.co(R.times(x, a)), c)
    if s is None or t is None:
        raise StageWitnessNotFound("7", "an off-diagonal entry has no corner quasi-inverse", b=b, c=c)
    Z = (x, t, s, y)
    AZ, ZA = M.mul(state.A, Z), M.mul(Z, state.A)
    state.record("7", "assemble the quasi-inverse", s=s, t=t, invariants=state.require("7", [
        ("AZ diagonal", AZ[1] == 0 and AZ[2] == 0),
        ("ZA diagonal", ZA[1] == 0 and ZA[2] == 0),
        ("AZA = A", M.times(state.A, Z, state.A) == state.A),
        ("(1-AZ) ⊥ (1-ZA)", M.orthogonal(M.co(AZ), M.co(ZA))),
    ]))

    # carry the reducer and the quasi-inverse back to the original row
    Y: Mat = M.zero
    for step in reversed(state.steps):
        Y = M.mul(M.add(step.c, M.mul(step.W, Y)), step.u_inv)
        Z = M.times(step.u, Z, step.v)
    original_E = M.co(M.mul(row.A, row.X))
    reduced = M.add(row.A, M.mul(original_E, Y))
    reducer = M.mul(row.W, Y)
    if M.add(row.A, M.mul(row.B, reducer)) != reduced or not M.is_quasi_inverse(reduced, Z):
        raise StageInvariantFailed("back-propagated reducer does not certify the original row",
                                   Y=list(Y), Z=list(Z))
    return RowReduction(Y=Y, reducer=reducer, quasi_inverse=Z, trace=state.trace)


def brute_force_row_reduction(R: FiniteRing, row: UnimodularRow) -> Optional[Mat]:
    """First Y in M2(R), by table index, with A + BY quasi-invertible. Base order at most 4."""
    if R.order > 4:
        raise ScaleCapExceeded("exhaustive row reduction is limited to base rings of order 4", order=R.order)
    M = Mat2Algebra(R)
    T = M.table()
    Q = qinv_mask(T)
    a, b = M.index(row.A), M.index(row.B)
    hits = np.flatnonzero(Q[T.add[a, T.mul[b, :]]])
    return M.entries(int(hits[0])) if hits.size else None


# ---------------------------------------------------------------------------
# Corners cut out by two quasi-invertible elements
# ---------------------------------------------------------------------------

@dataclass
class DefectCorner:
    zero: bool
    hypothesis: bool
    qb_corner: Optional[bool] = None

    @property
    def conclusion_holds(self) -> bool:
        return not self.hypothesis or self.zero or bool(self.qb_corner)

    def to_payload(self) -> dict:
        return {"zero": self.zero, "hypothesis": self.hypothesis, "qb_corner": self.qb_corner,
                "conclusion_holds": self.conclusion_holds}


def defect_corner_report(R: FiniteRing, u: int, x: int, v: int, y: int) -> DefectCorner:
    """
    For quasi-inverse pairs (u, x) and (v, y), uv + (1-ux)R(1-yv) inside
    cl(R_q⁻¹) ∩ cr(R_q⁻¹) makes (1-ux)R(1-yv) zero or a QB-corner.
    """
    R.require_unital("defect_corner_report")
    R.check(u, x, v, y)
    for name, s, w in (("(u, x)", u, x), ("(v, y)", v, y)):
        if R.times(s, w, s) != s or not centrally_orthogonal(R, R.co(R.times(s, w)), R.co(R.times(w, s))):
            raise PreconditionViolated(f"{name} is not a normalized quasi-inverse pair", pair=[s, w])
    p, q = R.co(R.times(u, x)), R.co(R.times(y, v))
    ahead = corner(R, p, q)
    Q = qinv_mask(R)
    both = cl(R, Q) & cr(R, Q)
    hypothesis = bool(both[R.add[R.times(u, v), ahead]].all())
    if ahead.size == 1:
        return DefectCorner(zero=True, hypothesis=hypothesis)
    return DefectCorner(zero=False, hypothesis=hypothesis, qb_corner=is_qb_corner(R, p, q).is_qb)
