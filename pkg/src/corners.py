"""
Skew Corners

For idempotents p, q with pRq ≠ 0, an element x of pRq is corner
quasi-invertible when (p - xa) ⊥ (q - bx) for some a, b in qRp. When
1 - p = uv and 1 - q = vu, this happens exactly when u + x is quasi-invertible
in R, and the corner closures match cl(R_q⁻¹) through the same translation.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src import console
from src.closure import cl, cr, is_qb_ring
from src.errors import (BadEquivalenceData, HypothesisFailed, NoReducer, NotIdempotent, NotInCorner,
                        PreconditionViolated, StageInvariantFailed)
from src.quasi import centrally_orthogonal, find_orthogonal_pair, qinv_mask
from src.regular import corner, extends, idempotents, in_corner, is_idempotent, mvn_equivalent, partial_inverse
from src.ring_specs import corner_ring
from src.rings import FiniteRing, Mask, left_units, right_units


def _require_corner(R: FiniteRing, p: int, q: int) -> None:
    R.require_unital("skew corner")
    R.check(p, q)
    for e in (p, q):
        if not is_idempotent(R, e):
            raise NotIdempotent(f"{e} is not idempotent", element=e)
    if corner(R, p, q).size == 1:
        raise PreconditionViolated("pRq = 0", equation="pRq != 0", p=p, q=q)


def skew_corner_qinv(R: FiniteRing, p: int, q: int, x: int) -> Optional[int]:
    """
    A y in qRp with x = xyx, y = yxy and (p - xy) ⊥ (q - yx), or None.
    Built as a + b - axb from the first orthogonal pair and then replaced by yxy.
    """
    _require_corner(R, p, q)
    R.check(x)
    if not in_corner(R, x, p, q):
        raise NotInCorner(f"{x} is not in pRq", element=x, p=p, q=q)
    back = corner(R, q, p)
    E = R.sub[p, R.mul[x, back]]
    F = R.sub[q, R.mul[back, x]]
    pair = find_orthogonal_pair(R, E, F)
    if pair is None:
        return None
    a, b = int(back[pair[0]]), int(back[pair[1]])
    y = R.minus(R.plus(a, b), R.times(a, x, b))
    y = R.times(y, x, y)
    if R.times(x, y, x) != x or not centrally_orthogonal(R, R.minus(p, R.times(x, y)), R.minus(q, R.times(y, x))):
        raise StageInvariantFailed("normalized corner quasi-inverse fails its equations",
                                   p=p, q=q, x=x, a=a, b=b, y=y)
    return y


def corner_qinv_mask(R: FiniteRing, p: int, q: int) -> Mask:
    """(pRq)_q⁻¹ as a mask over R."""
    def build() -> Mask:
        mask = np.zeros(R.order, dtype=bool)
        for x in corner(R, p, q):
            mask[x] = skew_corner_qinv(R, p, q, int(x)) is not None
        return mask
    _require_corner(R, p, q)
    return R.memo(f"corner_qinv:{p}:{q}", build)


def corner_closure_left(R: FiniteRing, p: int, q: int) -> Mask:
    """
    The a in pRq such that whenever xa + b = q with x in qRp and b in qRq,
    some y in pRq puts a + yb in (pRq)_q⁻¹.
    """
    def build() -> Mask:
        Qc = corner_qinv_mask(R, p, q)
        ahead, back = corner(R, p, q), corner(R, q, p)
        mask = np.zeros(R.order, dtype=bool)
        for a in ahead:
            b_values = np.unique(R.sub[q, R.mul[back, a]])
            reached = Qc[R.add[a, R.mul[ahead[:, None], b_values[None, :]]]].any(axis=0)
            mask[a] = bool(reached.all())
        return mask
    return R.memo(f"corner_cl:{p}:{q}", build)


def corner_closure_right(R: FiniteRing, p: int, q: int) -> Mask:
    """The mirror: ax + b = p with x in qRp and b in pRp gives a + by in (pRq)_q⁻¹."""
    def build() -> Mask:
        Qc = corner_qinv_mask(R, p, q)
        ahead, back = corner(R, p, q), corner(R, q, p)
        mask = np.zeros(R.order, dtype=bool)
        for a in ahead:
            b_values = np.unique(R.sub[p, R.mul[a, back]])
            reached = Qc[R.add[a, R.mul[b_values[:, None], ahead[None, :]]]].any(axis=1)
            mask[a] = bool(reached.all())
        return mask
    return R.memo(f"corner_cr:{p}:{q}", build)


@dataclass
class CornerVerdict:
    left_full: bool
    right_full: bool
    left_missing: List[int] = field(default_factory=list)
    right_missing: List[int] = field(default_factory=list)

    @property
    def is_qb(self) -> bool:
        return self.left_full and self.right_full

    def to_payload(self) -> dict:
        return {"left_full": self.left_full, "right_full": self.right_full, "qb_corner": self.is_qb,
                "left_missing": self.left_missing[:8], "right_missing": self.right_missing[:8]}


def is_qb_corner(R: FiniteRing, p: int, q: int) -> CornerVerdict:
    """Both corner closures, each reported on its own."""
    ahead = corner(R, p, q)
    left, right = corner_closure_left(R, p, q), corner_closure_right(R, p, q)
    lm = [int(a) for a in ahead if not left[a]]
    rm = [int(a) for a in ahead if not right[a]]
    return CornerVerdict(not lm, not rm, lm, rm)


def corner_reducer(R: FiniteRing, p: int, q: int, b: int, w: int) -> int:
    """First z in pRq with b + wz corner quasi-invertible in pRq."""
    Qc = corner_qinv_mask(R, p, q)
    ahead = corner(R, p, q)
    hits = np.flatnonzero(Qc[R.add[b, R.mul[w, ahead]]])
    if hits.size == 0:
        raise NoReducer("no z in pRq makes b + wz corner quasi-invertible", p=p, q=q, b=b, w=w)
    return int(ahead[hits[0]])


# ---------------------------------------------------------------------------
# Transfer between a corner and the ambient ring
# ---------------------------------------------------------------------------

def _require_equivalence(R: FiniteRing, u: int, v: int, p: int, q: int) -> None:
    cp, cq = R.co(p), R.co(q)
    checks = [
        ("1-p = uv", R.times(u, v) == cp),
        ("1-q = vu", R.times(v, u) == cq),
        ("(1-p)u = u", R.times(cp, u) == u),
        ("u(1-q) = u", R.times(u, cq) == u),
        ("(1-q)v = v", R.times(cq, v) == v),
        ("v(1-p) = v", R.times(v, cp) == v),
    ]
    for equation, holds in checks:
        if not holds:
            raise BadEquivalenceData(f"equivalence data violates {equation}", equation=equation,
                                     u=u, v=v, p=p, q=q)


@dataclass
class CornerTransfer:
    corner_side: bool
    ambient_side: bool
    closure_corner: bool
    closure_ambient: bool
    stability_violations: List[dict] = field(default_factory=list)
    applicable: bool = True

    @property
    def agree(self) -> bool:
        if not self.applicable:
            return not self.stability_violations
        return (self.corner_side == self.ambient_side and self.closure_corner == self.closure_ambient
                and not self.stability_violations)

    def to_payload(self) -> dict:
        return {"x_in_corner_qinv": self.corner_side, "u_plus_x_in_qinv": self.ambient_side,
                "x_in_corner_closure": self.closure_corner, "u_plus_x_in_closure": self.closure_ambient,
                "applicable": self.applicable, "agree": self.agree,
                "stability_violations": self.stability_violations[:8]}


def corner_transfer(R: FiniteRing, u: int, v: int, p: int, q: int, x: int) -> CornerTransfer:
    """
    x ∈ (pRq)_q⁻¹ iff u + x ∈ R_q⁻¹, and x ∈ cl̃ iff u + x ∈ cl(R_q⁻¹), both sides
    computed independently. The perturbation sweep checks that quasi-invertibility
    and one-sided invertibility of u + x survive adding any y in (1-p)Rq.
    The equivalence is only claimed for x ≠ 0.
    """
    _require_corner(R, p, q)
    R.check(u, v, x)
    _require_equivalence(R, u, v, p, q)
    if not in_corner(R, x, p, q):
        raise NotInCorner(f"{x} is not in pRq", element=x, p=p, q=q)
    Q = qinv_mask(R)
    shifted = R.plus(u, x)
    report = CornerTransfer(
        corner_side=bool(corner_qinv_mask(R, p, q)[x]),
        ambient_side=bool(Q[shifted]),
        closure_corner=bool(corner_closure_left(R, p, q)[x]),
        closure_ambient=bool(cl(R, Q)[shifted]),
        applicable=x != 0,
    )
    perturbations = R.add[shifted, corner(R, R.co(p), q)]
    for name, mask in (("quasi-invertible", Q), ("left invertible", left_units(R)),
                       ("right invertible", right_units(R))):
        if mask[shifted]:
            for z in perturbations[~mask[perturbations]]:
                report.stability_violations.append({"property": name, "element": int(z)})
    return report


@dataclass
class CriterionReport:
    corner_qb: bool
    criterion: bool

    @property
    def agree(self) -> bool:
        return self.corner_qb == self.criterion

    def to_payload(self) -> dict:
        return {"corner_qb": self.corner_qb, "criterion": self.criterion, "agree": self.agree}


def unit_coset_corner_criterion(R: FiniteRing, u: int, v: int, p: int, q: int) -> CriterionReport:
    """With 1 - p = uv and 1 - q = vu: pRq is a QB-corner iff u + pRq ⊆ cl(R_q⁻¹) ∩ cr(R_q⁻¹)."""
    _require_corner(R, p, q)
    _require_equivalence(R, u, v, p, q)
    Q = qinv_mask(R)
    both = cl(R, Q) & cr(R, Q)
    coset = R.add[u, corner(R, p, q)]
    return CriterionReport(is_qb_corner(R, p, q).is_qb, bool(both[coset].all()))


@dataclass
class FullCornerReport(CriterionReport):
    corner_ring_qb: bool = True

    @property
    def agree(self) -> bool:
        return self.corner_qb == self.criterion == self.corner_ring_qb

    def to_payload(self) -> dict:
        payload = super().to_payload()
        payload.update({"corner_ring_qb": self.corner_ring_qb, "agree": self.agree})
        return payload


def full_corner_criterion(R: FiniteRing, p: int) -> FullCornerReport:
    """pRp is a QB-corner iff 1 - p + pRp ⊆ cl(R_q⁻¹), and then pRp is a QB-ring in its own right."""
    _require_corner(R, p, p)
    coset = R.add[R.co(p), corner(R, p, p)]
    return FullCornerReport(
        corner_qb=is_qb_corner(R, p, p).is_qb,
        criterion=bool(cl(R, qinv_mask(R))[coset].all()),
        corner_ring_qb=is_qb_ring(corner_ring(R, p)).holds,
    )


def qb_corner_dichotomy(R: FiniteRing) -> List[dict]:
    """
    In a QB-ring every pRp with p ≠ 0 is a QB-corner, and 1 - p ~ 1 - q forces
    p ⊥ q or pRq a QB-corner. Returns the violations.
    """
    if not is_qb_ring(R).holds:
        raise HypothesisFailed(f"{R.label} is not a QB-ring", hypothesis="cl(R_q⁻¹) = R")
    idem = [int(e) for e in np.flatnonzero(idempotents(R))]
    violations = []
    for p in idem:
        if p != 0 and not is_qb_corner(R, p, p).is_qb:
            violations.append({"p": p, "q": p, "law": "full corner"})
    for p in idem:
        for q in idem:
            if corner(R, p, q).size == 1 or centrally_orthogonal(R, p, q):
                continue
            if mvn_equivalent(R, R.co(p), R.co(q)) is None:
                continue
            if not is_qb_corner(R, p, q).is_qb:
                violations.append({"p": p, "q": q, "law": "equivalent complements"})
    if violations:
        console.trace(f"corner dichotomy violations on {R.label}: {violations[:4]}")
    return violations


def extend_to_quasi_invertible(R: FiniteRing, a: int, x: Optional[int] = None) -> int:
    """
    For regular a in cl(R_q⁻¹) with partial inverse x, p = 1 - ax and q = 1 - xa:
    xa + q = 1, so some y puts a + yq in R_q⁻¹. Then u = a + pyq is
    quasi-invertible as well, and a ≤ u.
    """
    R.require_unital("extend_to_quasi_invertible")
    R.check(a)
    x = partial_inverse(R, a) if x is None else R.times(x, a, x)
    if x is None or R.times(a, x, a) != a:
        raise PreconditionViolated(f"{a} is not regular with the given partial inverse", a=a)
    Q = qinv_mask(R)
    p, q = R.co(R.times(a, x)), R.co(R.times(x, a))
    hits = np.flatnonzero(Q[R.add[a, R.mul[:, q]]])
    if hits.size == 0:
        raise NoReducer(f"{a} has no reducer for the pair (a, 1-xa); it lies outside cl(R_q⁻¹)", a=a, x=x)
    y = int(hits[0])
    u = R.plus(a, R.times(p, y, q))
    if not Q[u]:
        raise StageInvariantFailed("a + pyq is not quasi-invertible", a=a, x=x, y=y, u=u)
    if extends(R, a, u) is None:
        raise StageInvariantFailed("a + pyq does not extend a", a=a, x=x, y=y, u=u)
    return u
