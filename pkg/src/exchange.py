"""
Exchange rings and the monoid V(R).

V(R) is computed as a fragment: Murray-von Neumann classes of idempotents
in R and M2(R), with block-diagonal addition recorded only where the sum
still fits in M2(R).
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from src import console
from src.closure import is_qb_ring
from src.config import CONFIG
from src.errors import HypothesisFailed, NotExchange, ScaleCapExceeded
from src.ideals import enumerate_ideals, jacobson_radical, orthogonal_ideals
from src.quasi import qinv_mask
from src.regular import extension_matrix, idempotents, maximal_regular_elements, mvn_equivalent, regular_mask
from src.rings import FiniteRing, additive_exponent, members_of


# ---------------------------------------------------------------------------
# Exchange property
# ---------------------------------------------------------------------------

def _extended_right_ideal(R: FiniteRing, a: int) -> NDArray[np.bool_]:
    """aR̃ = {ar + na}: aR when R has an identity."""
    mask = np.zeros(R.order, dtype=bool)
    if R.unital:
        mask[R.mul[a, :]] = True
        return mask
    multiples = [0]
    for _ in range(additive_exponent(R) - 1):
        multiples.append(R.plus(multiples[-1], a))
    mask[R.add[np.ix_(R.mul[a, :], multiples)].ravel()] = True
    return mask


def is_exchange(R: FiniteRing, a: int) -> Optional[int]:
    """
    First idempotent p in aR with 1 - p ∈ (1-a)R, scanning p = ar by ascending r.
    Without identity, p = a + y - ay must be idempotent and lie in aR̃.
    """
    R.check(a)
    idem = idempotents(R)
    if R.unital:
        complement = np.zeros(R.order, dtype=bool)
        complement[R.mul[R.co(a), :]] = True
        candidates = R.mul[a, :]
        ok = idem[candidates] & complement[R.sub[R.one, candidates]]
    else:
        candidates = R.sub[R.add[a, :], R.mul[a, :]]
        ok = idem[candidates] & _extended_right_ideal(R, a)[candidates]
    hits = np.flatnonzero(ok)
    return int(candidates[hits[0]]) if hits.size else None


def is_exchange_ring(R: FiniteRing) -> Optional[int]:
    """The first element without an exchange idempotent, or None for an exchange ring."""
    def build() -> Optional[int]:
        for a in range(R.order):
            if is_exchange(R, a) is None:
                return a
        return None
    return R.memo("exchange_failure", build)


def maximal_regular_equals_qinv(R: FiniteRing) -> bool:
    """
    In a semiprimitive exchange ring the maximal regular elements are exactly
    the quasi-invertible ones.
    """
    R.require_unital("maximal_regular_equals_qinv")
    if not jacobson_radical(R).is_zero():
        raise HypothesisFailed(f"{R.label} has a nonzero Jacobson radical")
    if is_exchange_ring(R) is not None:
        raise HypothesisFailed(f"{R.label} is not an exchange ring")
    return bool((maximal_regular_elements(R) == qinv_mask(R)).all())


@dataclass
class ExchangeEquivalence:
    qb: bool
    regular_extend_into_qinv: bool
    qinv_partial_inverses: bool
    witness: Optional[int] = None

    @property
    def agree(self) -> bool:
        return self.qb == self.regular_extend_into_qinv == self.qinv_partial_inverses

    def to_payload(self) -> dict:
        return {"qb": self.qb, "regular_extend_into_qinv": self.regular_extend_into_qinv,
                "qinv_partial_inverses": self.qinv_partial_inverses, "agree": self.agree,
                "witness": self.witness}


def exchange_qb_equivalence(R: FiniteRing) -> ExchangeEquivalence:
    """
    For an exchange ring: QB, every regular element extends to a
    quasi-invertible, and every regular x has x = xvx with v quasi-invertible.
    """
    R.require_unital("exchange_qb_equivalence")
    failure = is_exchange_ring(R)
    if failure is not None:
        raise NotExchange(f"{R.label} is not an exchange ring", element=failure)
    Q = qinv_mask(R)
    reg = np.flatnonzero(regular_mask(R))
    L = extension_matrix(R, reg)
    extend = L[:, Q[reg]].any(axis=1)
    qs = np.flatnonzero(Q)
    xvx = R.mul[R.mul[reg[:, None], qs[None, :]], reg[:, None]] == reg[:, None]
    inner = xvx.any(axis=1)
    witness = None
    if not extend.all():
        witness = int(reg[np.flatnonzero(~extend)[0]])
    elif not inner.all():
        witness = int(reg[np.flatnonzero(~inner)[0]])
    return ExchangeEquivalence(qb=is_qb_ring(R).holds, regular_extend_into_qinv=bool(extend.all()),
                               qinv_partial_inverses=bool(inner.all()), witness=witness)


# ---------------------------------------------------------------------------
# Level-two matrices as coordinate arrays
# ---------------------------------------------------------------------------

def _all_level2(n: int) -> NDArray[np.intp]:
    idx = np.arange(n ** 4)
    return np.stack([idx % n, (idx // n) % n, (idx // n ** 2) % n, idx // n ** 3], axis=-1)


def _encode(n: int, M: NDArray[np.intp]) -> NDArray[np.intp]:
    return M[..., 0] + n * M[..., 1] + n ** 2 * M[..., 2] + n ** 3 * M[..., 3]


def _m2_mul(R: FiniteRing, X: NDArray[np.intp], Y: NDArray[np.intp]) -> NDArray[np.intp]:
    a, b, c, d = (X[..., k] for k in range(4))
    e, f, g, h = (Y[..., k] for k in range(4))
    add, mul = R.add, R.mul
    return np.stack([add[mul[a, e], mul[b, g]], add[mul[a, f], mul[b, h]],
                     add[mul[c, e], mul[d, g]], add[mul[c, f], mul[d, h]]], axis=-1)


class _Level2:
    """Idempotents of M2(R) and their Murray-von Neumann test."""

    def __init__(self, R: FiniteRing):
        self.R, self.n = R, R.order
        self.all = _all_level2(self.n)
        square = _m2_mul(R, self.all, self.all)
        self.idempotents = self.all[(square == self.all).all(axis=1)]

    def right_size(self, E: NDArray[np.intp]) -> int:
        return int(np.unique(_encode(self.n, _m2_mul(self.R, E[None, :], self.all))).size)

    def left_size(self, E: NDArray[np.intp]) -> int:
        return int(np.unique(_encode(self.n, _m2_mul(self.R, self.all, E[None, :]))).size)

    def corner(self, E: NDArray[np.intp], F: NDArray[np.intp]) -> NDArray[np.intp]:
        EXF = _m2_mul(self.R, _m2_mul(self.R, E[None, :], self.all), F[None, :])
        _, first = np.unique(_encode(self.n, EXF), return_index=True)
        return EXF[np.sort(first)]

    def equivalent(self, E: NDArray[np.intp], F: NDArray[np.intp], chunk: int = 256) -> bool:
        if (E == F).all():
            return True
        U_all, V_all = self.corner(E, F), self.corner(F, E)
        for start in range(0, U_all.shape[0], chunk):
            U = U_all[start:start + chunk]
            UV = _m2_mul(self.R, U[:, None, :], V_all[None, :, :])
            VU = _m2_mul(self.R, V_all[None, :, :], U[:, None, :])
            if ((UV == E).all(axis=-1) & (VU == F).all(axis=-1)).any():
                return True
        return False


# ---------------------------------------------------------------------------
# The monoid fragment
# ---------------------------------------------------------------------------

@dataclass
class MonoidClass:
    class_id: int
    level: int
    representative: List[int]

    def to_payload(self) -> dict:
        return {"id": self.class_id, "level": self.level, "representative": self.representative}


@dataclass
class VMonoid:
    label: str
    kmax: int
    classes: List[MonoidClass]
    addition: Dict[Tuple[int, int], int] = field(default_factory=dict)
    traces: List[dict] = field(default_factory=list)
    zero: int = 0

    @property
    def level_one(self) -> List[int]:
        return [c.class_id for c in self.classes if c.level == 1]

    def add(self, i: int, j: int) -> Optional[int]:
        return self.addition.get((i, j))

    def to_payload(self) -> dict:
        return {
            "ring": self.label,
            "kmax": self.kmax,
            "classes": [c.to_payload() for c in self.classes],
            "addition": [[i, j, k] for (i, j), k in sorted(self.addition.items())],
            "order_ideals": self.traces,
            "fragment": f"sums recorded only up to matrix level {self.kmax}",
        }


def _level_one_classes(R: FiniteRing) -> Dict[int, int]:
    """Idempotent -> index of its class representative, by ascending idempotent."""
    reps: List[int] = []
    owner: Dict[int, int] = {}
    for p in members_of(idempotents(R)):
        for r in reps:
            if mvn_equivalent(R, r, p) is not None:
                owner[p] = r
                break
        else:
            reps.append(p)
            owner[p] = p
    return owner


def vr_monoid(R: FiniteRing, kmax: int = 2) -> VMonoid:
    """Classes of idempotents at matrix levels up to kmax, their sums and the traces V(I)."""
    if kmax not in (1, 2):
        raise ScaleCapExceeded(f"matrix level {kmax} is outside the computed fragment", kmax=kmax)
    cap = CONFIG["level2_cap"]
    if kmax == 2 and R.order > cap:
        raise ScaleCapExceeded(f"M2({R.label}) idempotents exceed the level-two cap {cap}", cap=cap)

    def build() -> VMonoid:
        owner = _level_one_classes(R)
        if kmax == 1:
            reps = sorted(set(owner.values()))
            ids = {r: i for i, r in enumerate(reps)}
            classes = [MonoidClass(ids[r], 1, [r]) for r in reps]
            monoid = VMonoid(R.label, 1, classes)
            class_of_idem = {p: ids[owner[p]] for p in owner}
            monoid.traces = _traces(R, monoid, {}, class_of_idem, None)
            return monoid
        return _level_two_monoid(R, owner)

    return R.memo(f"vr:{kmax}", build)


def _level_two_monoid(R: FiniteRing, owner: Dict[int, int]) -> VMonoid:
    n = R.order
    level = _Level2(R)
    console.trace(f"{level.idempotents.shape[0]} idempotents in M2({R.label})")
    reps: List[Tuple[Tuple[int, int], NDArray[np.intp]]] = []
    class_of: Dict[int, int] = {}
    for E in level.idempotents:
        signature = (level.right_size(E), level.left_size(E))
        match = None
        for cid, (sig, F) in enumerate(reps):
            if sig == signature and level.equivalent(F, E):
                match = cid
                break
        if match is None:
            match = len(reps)
            reps.append((signature, E))
        class_of[int(_encode(n, E))] = match

    def diag(p: int, q: int) -> int:
        return int(_encode(n, np.array([p, 0, 0, q])))

    level_one_ids = {class_of[diag(p, 0)] for p in owner}
    classes = []
    for cid, (_, E) in enumerate(reps):
        if cid in level_one_ids:
            p = next(p for p in sorted(owner) if class_of[diag(p, 0)] == cid)
            classes.append(MonoidClass(cid, 1, [p]))
        else:
            classes.append(MonoidClass(cid, 2, [int(e) for e in E]))
    monoid = VMonoid(R.label, 2, classes, zero=class_of[diag(0, 0)])
    for p, q in product(sorted(owner), repeat=2):
        i, j = class_of[diag(p, 0)], class_of[diag(q, 0)]
        monoid.addition.setdefault((i, j), class_of[diag(p, q)])
    class_of_idem = {p: class_of[diag(p, 0)] for p in owner}
    monoid.traces = _traces(R, monoid, class_of, class_of_idem, level.idempotents)
    return monoid


def _traces(R: FiniteRing, monoid: VMonoid, class_of: Dict[int, int], class_of_idem: Dict[int, int],
            level2: Optional[NDArray[np.intp]]) -> List[dict]:
    out = []
    for I in enumerate_ideals(R):
        members = set(class_of_idem[p] for p in I.elements if p in class_of_idem)
        if level2 is not None:
            inside = I.members[level2].all(axis=1)
            members |= {class_of[int(k)] for k in _encode(R.order, level2[inside])}
        out.append({"ideal": I.elements, "classes": sorted(members),
                    "order_ideal": _is_order_ideal(monoid, members)})
    return out


def _is_order_ideal(monoid: VMonoid, members: set) -> bool:
    for (i, j), k in monoid.addition.items():
        if i in members and j in members and k not in members:
            return False
        if k in members and not (i in members and j in members):
            return False
    return True


# ---------------------------------------------------------------------------
# Cancellation and refinement inside the fragment
# ---------------------------------------------------------------------------

@dataclass
class MonoidSweep:
    equations: int = 0
    trivial: int = 0
    resolved: int = 0
    inconclusive: List[list] = field(default_factory=list)
    failures: List[list] = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.failures:
            return "fail"
        return "inconclusive" if self.inconclusive else "pass"

    def to_payload(self) -> dict:
        return {"equations": self.equations, "trivial": self.trivial, "resolved": self.resolved,
                "inconclusive": self.inconclusive, "failures": self.failures, "status": self.status}


def monoid_orthogonal_cancellation(R: FiniteRing, monoid: Optional[VMonoid] = None) -> MonoidSweep:
    """
    For each a + b1 = a + b2 among level-one classes, look for orthogonal
    ideals I1, I2 and c1 ∈ V(I1), c2 ∈ V(I2) with b1 + c1 = b2 + c2.

    Equations whose sums leave the fragment are inconclusive. On a QB-ring an
    unresolved equation among level-one classes is a failure.
    """
    monoid = vr_monoid(R) if monoid is None else monoid
    ones = monoid.level_one
    traces = {tuple(t["ideal"]): set(t["classes"]) for t in monoid.traces}
    ideals = enumerate_ideals(R)
    pairs = [(traces[tuple(I.elements)], traces[tuple(J.elements)])
             for I in ideals for J in ideals if orthogonal_ideals(I, J)]
    qb = is_qb_ring(R).holds
    sweep = MonoidSweep()
    for a, b1, b2 in product(ones, repeat=3):
        s1, s2 = monoid.add(a, b1), monoid.add(a, b2)
        if s1 is None or s2 is None:
            if b1 != b2:
                sweep.inconclusive.append([a, b1, b2])
            continue
        if s1 != s2:
            continue
        sweep.equations += 1
        if b1 == b2:
            sweep.trivial += 1
            continue
        found = any(monoid.add(b1, c1) is not None and monoid.add(b1, c1) == monoid.add(b2, c2)
                    for V1, V2 in pairs for c1 in V1 & set(ones) for c2 in V2 & set(ones))
        if found:
            sweep.resolved += 1
        elif qb:
            sweep.failures.append([a, b1, b2])
        else:
            sweep.inconclusive.append([a, b1, b2])
    if sweep.failures:
        console.warn(f"{len(sweep.failures)} cancellation equations of {R.label} have no orthogonal witnesses")
    return sweep


def monoid_refinement_check(R: FiniteRing, monoid: Optional[VMonoid] = None) -> MonoidSweep:
    """Every x1 + x2 = y1 + y2 among level-one classes has a 2x2 refinement of level-one classes."""
    monoid = vr_monoid(R) if monoid is None else monoid
    ones = monoid.level_one
    add = monoid.add
    sweep = MonoidSweep()
    for x1, x2, y1, y2 in product(ones, repeat=4):
        s = add(x1, x2)
        if s is None or s != add(y1, y2):
            continue
        sweep.equations += 1
        found = any(add(z11, z12) == x1 and add(z21, z22) == x2 and add(z11, z21) == y1 and add(z12, z22) == y2
                    for z11, z12, z21, z22 in product(ones, repeat=4))
        if found:
            sweep.resolved += 1
        else:
            sweep.inconclusive.append([x1, x2, y1, y2])
    return sweep
