"""
Von Neumann regularity, idempotents, Murray-von Neumann equivalence and the
extension order on regular elements.

a ≤ b (b extends a) when a = axb = bxa = axa for some x, with b regular.
"""

from typing import Dict, List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from src.config import CONFIG
from src.errors import (ConstructionFailed, NotAnExtension, NotIdempotent, PreconditionViolated,
                        ScaleCapExceeded, StageInvariantFailed)
from src.rings import FiniteRing, Mask


def partial_inverses(R: FiniteRing, a: int) -> List[int]:
    """All x with axa = a, each replaced by xax so that x is reflexive."""
    R.check(a)
    xs = np.flatnonzero(R.mul[R.mul[a, :], a] == a)
    if xs.size == 0:
        return []
    normalized = R.mul[R.mul[xs, a], xs]
    return np.unique(normalized).tolist()


def partial_inverse(R: FiniteRing, a: int) -> Optional[int]:
    """First reflexive partial inverse by ascending index of the raw solution."""
    xs = np.flatnonzero(R.mul[R.mul[a, :], a] == a)
    if xs.size == 0:
        return None
    x = int(xs[0])
    return R.times(x, a, x)


def regular_mask(R: FiniteRing) -> Mask:
    def build() -> Mask:
        e = R.elements
        axa = R.mul[R.mul, e[:, None]]
        return (axa == e[:, None]).any(axis=1)
    return R.memo("regular", build)


def idempotents(R: FiniteRing) -> Mask:
    return R.memo("idempotents", lambda: R.mul[R.elements, R.elements] == R.elements)


def is_idempotent(R: FiniteRing, p: int) -> bool:
    return R.times(p, p) == p


def right_ideal_of(R: FiniteRing, a: int) -> Mask:
    """aR, including a itself when R has no identity."""
    mask = np.zeros(R.order, dtype=bool)
    mask[R.mul[a, :]] = True
    if R.one is None:
        mask[a] = True
    return mask


def left_ideal_of(R: FiniteRing, a: int) -> Mask:
    mask = np.zeros(R.order, dtype=bool)
    mask[R.mul[:, a]] = True
    if R.one is None:
        mask[a] = True
    return mask


def corner(R: FiniteRing, p: int, q: int) -> NDArray[np.intp]:
    """The elements of pRq, sorted."""
    return np.unique(R.mul[R.mul[p, :], q])


def in_corner(R: FiniteRing, x: int, p: int, q: int) -> bool:
    return R.times(p, x, q) == x


def mvn_equivalent(R: FiniteRing, p: int, q: int) -> Optional[Tuple[int, int]]:
    """
    Witnesses u ∈ pRq, v ∈ qRp with uv = p and vu = q, or None.
    """
    for e in (p, q):
        if not is_idempotent(R, e):
            raise NotIdempotent(f"{e} is not idempotent", element=e)
    U = corner(R, p, q)
    V = corner(R, q, p)
    hits = np.argwhere((R.mul[np.ix_(U, V)] == p) & (R.mul[np.ix_(V, U)].T == q))
    if hits.size == 0:
        return None
    i, j = hits[0]
    return int(U[i]), int(V[j])


def extends(R: FiniteRing, a: int, b: int) -> Optional[int]:
    """First x (ascending) with a = axb = bxa = axa, provided b is regular."""
    R.check(a, b)
    if not regular_mask(R)[b]:
        return None
    ax = R.mul[a, :]
    ok = (R.mul[ax, b] == a) & (R.mul[R.mul[b, :], a] == a) & (R.mul[ax, a] == a)
    hits = np.flatnonzero(ok)
    return int(hits[0]) if hits.size else None


def extension_matrix(R: FiniteRing, elements: NDArray[np.intp]) -> NDArray[np.bool_]:
    """L[i, j] is True when elements[i] ≤ elements[j]; all inputs must be regular."""
    e = R.elements
    L = np.zeros((elements.size, elements.size), dtype=bool)
    for i, a in enumerate(elements):
        ax = R.mul[a, :]
        third = R.mul[ax, a] == a
        first = R.mul[ax[:, None], elements[None, :]] == a
        second = R.mul[R.mul[elements[:, None], e[None, :]], a].T == a
        L[i] = (first & second & third[:, None]).any(axis=0)
    return L


def maximal_regular_elements(R: FiniteRing) -> Mask:
    """Regular a with no regular b ≠ a extending it."""
    R.require_unital("maximal_regular_elements")
    cap = CONFIG["maxreg_cap"]
    if R.order > cap:
        raise ScaleCapExceeded(f"maximal regular sweep on {R.label} exceeds order cap {cap}", cap=cap)

    def build() -> Mask:
        reg = np.flatnonzero(regular_mask(R))
        L = extension_matrix(R, reg)
        np.fill_diagonal(L, False)
        mask = np.zeros(R.order, dtype=bool)
        mask[reg[~L.any(axis=1)]] = True
        return mask

    return R.memo("maxreg", build)


def extension_order_sweep(R: FiniteRing) -> Dict[str, list]:
    """
    Reflexivity, antisymmetry and transitivity of ≤ over all regular elements,
    plus the rule a ≤ b with aR = bR forces a = b. Returns the violations found.
    """
    reg = np.flatnonzero(regular_mask(R))
    L = extension_matrix(R, reg)
    violations: Dict[str, list] = {"reflexive": [], "antisymmetric": [], "transitive": [], "same_right_ideal": []}
    for i in np.flatnonzero(~np.diag(L)):
        violations["reflexive"].append([int(reg[i])])
    both = L & L.T
    np.fill_diagonal(both, False)
    for i, j in np.argwhere(both):
        violations["antisymmetric"].append([int(reg[i]), int(reg[j])])
    two_step = (L.astype(np.int64) @ L.astype(np.int64)) > 0
    for i, k in np.argwhere(two_step & ~L):
        j = int(np.flatnonzero(L[i] & L[:, k])[0])
        violations["transitive"].append([int(reg[i]), int(reg[j]), int(reg[k])])
    right = {int(a): right_ideal_of(R, int(a)) for a in reg}
    for i, j in np.argwhere(L):
        if i != j and (right[int(reg[i])] == right[int(reg[j])]).all():
            violations["same_right_ideal"].append([int(reg[i]), int(reg[j])])
    return violations


def extends_via_idempotents(R: FiniteRing, a: int, b: int) -> bool:
    """
    a ≤ b iff there are idempotents p, q with pR = aR, Rq = Ra and pb = a = bq.
    """
    if not (regular_mask(R)[a] and regular_mask(R)[b]):
        return False
    aR = right_ideal_of(R, a)
    Ra = left_ideal_of(R, a)
    idem = np.flatnonzero(idempotents(R))
    ps = [int(p) for p in idem if (right_ideal_of(R, int(p)) == aR).all()]
    qs = [int(q) for q in idem if (left_ideal_of(R, int(q)) == Ra).all()]
    return any(R.times(p, b) == a for p in ps) and any(R.times(b, q) == a for q in qs)


def realign_partial_inverse(R: FiniteRing, a: int, b: int, p: int, q: int, q2: int) -> int:
    """
    Given pb = a = bq with aR = pR, Ra = Rq and Rq = Rq2, return
    b2 = a + (1-p)b(1-q2), which satisfies Rb = Rb2, bR = b2R and pb2 = a = b2q2.
    """
    R.require_unital("realign_partial_inverse")
    for name, e in (("p", p), ("q", q), ("q'", q2)):
        if not is_idempotent(R, e):
            raise PreconditionViolated(f"{name} = {e} is not idempotent", equation=f"{name}^2 = {name}")
    checks = [
        ("aR = pR", (right_ideal_of(R, a) == right_ideal_of(R, p)).all()),
        ("Ra = Rq", (left_ideal_of(R, a) == left_ideal_of(R, q)).all()),
        ("pb = a", R.times(p, b) == a),
        ("bq = a", R.times(b, q) == a),
        ("Rq = Rq'", (left_ideal_of(R, q) == left_ideal_of(R, q2)).all()),
        ("b regular", bool(regular_mask(R)[b])),
    ]
    for equation, holds in checks:
        if not holds:
            raise PreconditionViolated(f"precondition {equation} fails", equation=equation,
                                       a=a, b=b, p=p, q=q, q2=q2)
    b2 = R.plus(a, R.times(R.co(p), b, R.co(q2)))
    posts = [
        ("Rb = Rb'", (left_ideal_of(R, b) == left_ideal_of(R, b2)).all()),
        ("bR = b'R", (right_ideal_of(R, b) == right_ideal_of(R, b2)).all()),
        ("pb' = a", R.times(p, b2) == a),
        ("b'q' = a", R.times(b2, q2) == a),
    ]
    for equation, holds in posts:
        if not holds:
            raise StageInvariantFailed(f"realigned element violates {equation}", equation=equation, b2=b2)
    return b2


def decompose_extension(R: FiniteRing, a: int, b: int) -> Tuple[int, int, int]:
    """
    For a ≤ b with witness x return (p, q, x), p = ax and q = xa, with
    pb = a = bq and b - a ∈ (1-p)R(1-q).
    """
    x = extends(R, a, b)
    if x is None:
        raise NotAnExtension(f"{b} does not extend {a}", a=a, b=b)
    p, q = R.times(a, x), R.times(x, a)
    diff = R.minus(b, a)
    if R.times(p, b) != a or R.times(b, q) != a:
        raise StageInvariantFailed("pb = a = bq fails for the extension witness", a=a, b=b, x=x)
    if R.times(R.co(p), diff, R.co(q)) != diff:
        raise StageInvariantFailed("b - a is not in (1-p)R(1-q)", a=a, b=b, x=x)
    return p, q, x


def extend_by_complement(R: FiniteRing, a: int, c: int) -> int:
    """
    With x a partial inverse of a, p = ax, q = xa and a regular c in
    (1-p)R(1-q), the sum a + c extends a. Returns the extension witness.
    """
    R.require_unital("extend_by_complement")
    x = partial_inverse(R, a)
    if x is None:
        raise PreconditionViolated(f"{a} is not regular", a=a)
    p, q = R.times(a, x), R.times(x, a)
    if R.times(R.co(p), c, R.co(q)) != c:
        raise PreconditionViolated(f"{c} is not in (1-p)R(1-q)", c=c, p=p, q=q)
    if not regular_mask(R)[c]:
        raise PreconditionViolated(f"{c} is not regular", c=c)
    witness = extends(R, a, R.plus(a, c))
    if witness is None:
        raise ConstructionFailed(f"a + c does not extend a for a={a}, c={c}", a=a, c=c)
    return witness
