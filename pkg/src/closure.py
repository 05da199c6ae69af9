"""
Closure Operators and the QB Property

cl(A) holds the a for which every left unimodular pair xa + b = 1 admits a
reducer y with a + yb in A. cr is the mirror image, read on ax + b = 1, and is
computed as cl on the opposite ring. R is a QB-ring when cl(R_q⁻¹) = R and a
B-ring when cl(R⁻¹) = R.

Rings without identity use cl°: whenever xa - x - a + b = 0 there must be y
with a - yb in the target set.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from src import console
from src.config import CONFIG
from src.errors import NotInIdeal, PreconditionViolated, ScaleCapExceeded
from src.ideals import Ideal, enumerate_ideals, ideal_as_ring, jacobson_radical, proper_quotients
from src.quasi import centrally_orthogonal, qadversible_mask, qinv_mask, quasi_invertible
from src.rings import FiniteRing, Mask, left_units, mask_of, members_of, opposite, units


@dataclass
class ClosureVerdict:
    """Whether a closure fills the ring, with the least unreduced pair when it does not."""
    holds: bool
    mask: Mask
    counterexample: Optional[Tuple[int, int, int]] = None

    def to_payload(self) -> dict:
        return {
            "holds": self.holds,
            "size": int(self.mask.sum()),
            "counterexample": list(self.counterexample) if self.counterexample else None,
        }


def _mirror(R: FiniteRing) -> FiniteRing:
    return R.memo("opposite", lambda: opposite(R))


def _require_scale(R: FiniteRing, what: str) -> None:
    cap = CONFIG["closure_cap"]
    if R.order > cap:
        raise ScaleCapExceeded(f"{what} on {R.label} exceeds order cap {cap}", cap=cap, order=R.order)


# ---------------------------------------------------------------------------
# Unital closures
# ---------------------------------------------------------------------------

def _cl_scan(R: FiniteRing, A: Mask) -> Tuple[Mask, Dict[int, Tuple[int, int]]]:
    one = R.require_unital("cl")
    _require_scale(R, "cl")
    inside = np.zeros(R.order, dtype=bool)
    failures: Dict[int, Tuple[int, int]] = {}
    for a in range(R.order):
        b_values, first_x = np.unique(R.sub[one, R.mul[:, a]], return_index=True)
        reached = A[R.add[a, R.mul[:, b_values]]].any(axis=0)
        if reached.all():
            inside[a] = True
        else:
            missed = np.flatnonzero(~reached)
            k = missed[np.argmin(first_x[missed])]
            failures[a] = (int(first_x[k]), int(b_values[k]))
    return inside, failures


def cl(R: FiniteRing, A: Mask) -> Mask:
    key = "cl:" + np.packbits(A).tobytes().hex()
    return R.memo(key, lambda: _cl_scan(R, A)[0])


def cr(R: FiniteRing, A: Mask) -> Mask:
    return cl(_mirror(R), A)


def _verdict(R: FiniteRing, A: Mask) -> ClosureVerdict:
    mask, failures = _cl_scan(R, A)
    if not failures:
        return ClosureVerdict(True, mask)
    a = min(failures)
    x, b = failures[a]
    return ClosureVerdict(False, mask, (a, x, b))


def is_b_ring(R: FiniteRing) -> ClosureVerdict:
    """Stable rank one: cl(R⁻¹) = R. The counterexample is (a, x, b) with xa + b = 1 unreduced."""
    return _verdict(R, units(R))


def is_qb_ring(R: FiniteRing) -> ClosureVerdict:
    return _verdict(R, qinv_mask(R))


# ---------------------------------------------------------------------------
# Closures for rings without identity
# ---------------------------------------------------------------------------

def _circle(R: FiniteRing) -> np.ndarray:
    return R.memo("circle", lambda: R.sub[R.add, R.mul])


def _cl_nonunital_scan(R: FiniteRing, A: Mask) -> Tuple[Mask, Dict[int, Tuple[int, int]]]:
    _require_scale(R, "cl°")
    C = _circle(R)
    inside = np.zeros(R.order, dtype=bool)
    failures: Dict[int, Tuple[int, int]] = {}
    for a in range(R.order):
        # xa - x - a + b = 0 forces b = x + a - xa
        b_values, first_x = np.unique(C[:, a], return_index=True)
        reached = A[R.sub[a, R.mul[:, b_values]]].any(axis=0)
        if reached.all():
            inside[a] = True
        else:
            missed = np.flatnonzero(~reached)
            k = missed[np.argmin(first_x[missed])]
            failures[a] = (int(first_x[k]), int(b_values[k]))
    return inside, failures


def cl_nonunital(R: FiniteRing, A: Optional[Mask] = None) -> Mask:
    """cl°(A), with A defaulting to the quasi-adversible elements."""
    A = qadversible_mask(R) if A is None else A
    key = "cl0:" + np.packbits(A).tobytes().hex()
    return R.memo(key, lambda: _cl_nonunital_scan(R, A)[0])


def cl_nonunital_right(R: FiniteRing, A: Optional[Mask] = None) -> Mask:
    """cr°(A): whenever ax - x - a + b = 0 there is y with a - by in A."""
    A = qadversible_mask(R) if A is None else A
    return cl_nonunital(_mirror(R), A)


def is_qb_nonunital(R: FiniteRing) -> ClosureVerdict:
    mask, failures = _cl_nonunital_scan(R, qadversible_mask(R))
    if not failures:
        return ClosureVerdict(True, mask)
    a = min(failures)
    return ClosureVerdict(False, mask, (a,) + failures[a])


def adversible_mask(R: FiniteRing) -> Mask:
    C = _circle(R)
    return (C == 0).any(axis=0) & (C == 0).any(axis=1)


def is_b_nonunital(R: FiniteRing) -> ClosureVerdict:
    """Stable rank one without identity: cl°(R°) = R over the adversible elements."""
    mask, failures = _cl_nonunital_scan(R, adversible_mask(R))
    if not failures:
        return ClosureVerdict(True, mask)
    a = min(failures)
    return ClosureVerdict(False, mask, (a,) + failures[a])


# ---------------------------------------------------------------------------
# Left-right symmetry
# ---------------------------------------------------------------------------

@dataclass
class MirrorReduction:
    """Reducer y and quasi-inverse d for a + by, with the two factorizations checked."""
    y: int
    d: int
    identities: Dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.identities.values())


def mirror_reducer(R: FiniteRing, a: int, x: int, b: int, c: int, z: int) -> MirrorReduction:
    """
    From ax + b = 1 and a quasi-inverse z for x + cb, put y = z(1 - ca) and
    d = x + (1 - xa)c. Then
        1 - (a + by)d = b(1 - z(x + cb))(1 - ac)
        1 - d(a + by) = (1 - xa)(1 - (x + cb)z)(1 - ca)
    and the two sides are centrally orthogonal, so a + by is quasi-invertible.
    """
    one = R.require_unital("mirror_reducer")
    R.check(a, x, b, c, z)
    if R.plus(R.times(a, x), b) != one:
        raise PreconditionViolated("ax + b != 1", equation="ax + b = 1", a=a, x=x, b=b)
    w = R.plus(x, R.times(c, b))
    if not centrally_orthogonal(R, R.co(R.times(w, z)), R.co(R.times(z, w))):
        raise PreconditionViolated("z is not a quasi-inverse for x + cb",
                                   equation="(1-(x+cb)z) ⊥ (1-z(x+cb))", x=x, c=c, b=b, z=z)
    y = R.times(z, R.co(R.times(c, a)))
    d = R.plus(x, R.times(R.co(R.times(x, a)), c))
    reduced = R.plus(a, R.times(b, y))
    left_defect = R.co(R.times(reduced, d))
    right_defect = R.co(R.times(d, reduced))
    out = MirrorReduction(y, d)
    out.identities["1-(a+by)d = b(1-z(x+cb))(1-ac)"] = (
        left_defect == R.times(b, R.co(R.times(z, w)), R.co(R.times(a, c))))
    out.identities["1-d(a+by) = (1-xa)(1-(x+cb)z)(1-ca)"] = (
        right_defect == R.times(R.co(R.times(x, a)), R.co(R.times(w, z)), R.co(R.times(c, a))))
    out.identities["(1-(a+by)d) ⊥ (1-d(a+by))"] = centrally_orthogonal(R, left_defect, right_defect)
    out.identities["a+by quasi-invertible"] = bool(qinv_mask(R)[reduced])
    return out


def find_mirror_reducer(R: FiniteRing, a: int, x: int, b: int) -> Optional[MirrorReduction]:
    """Locate c with x + cb quasi-invertible, then run mirror_reducer with its quasi-inverse."""
    Q = qinv_mask(R)
    candidates = np.flatnonzero(Q[R.add[x, R.mul[:, b]]])
    if candidates.size == 0:
        return None
    c = int(candidates[0])
    z = quasi_invertible(R, R.plus(x, R.times(c, b))).v
    return mirror_reducer(R, a, x, b, c, z)


@dataclass
class SymmetryReport:
    cl_full: bool
    cr_full: bool
    setwise_equal: bool
    op_agrees: bool

    @property
    def biconditional(self) -> bool:
        return self.cl_full == self.cr_full

    def to_payload(self) -> dict:
        return {"cl_full": self.cl_full, "cr_full": self.cr_full, "biconditional": self.biconditional,
                "setwise_equal": self.setwise_equal, "opposite_agrees": self.op_agrees}


def symmetry_check(R: FiniteRing) -> SymmetryReport:
    """
    cl(R_q⁻¹) = R iff cr(R_q⁻¹) = R. Setwise equality of the two closures is
    recorded as data only.
    """
    Q = qinv_mask(R)
    left, right = cl(R, Q), cr(R, Q)
    op_full = bool(cl(_mirror(R), qinv_mask(_mirror(R))).all())
    return SymmetryReport(
        cl_full=bool(left.all()),
        cr_full=bool(right.all()),
        setwise_equal=bool((left == right).all()),
        op_agrees=op_full == bool(left.all()),
    )


# ---------------------------------------------------------------------------
# Closure laws
# ---------------------------------------------------------------------------

def _product_set(R: FiniteRing, B: Mask, A: Mask) -> Mask:
    out = np.zeros(R.order, dtype=bool)
    bi, ai = np.flatnonzero(B), np.flatnonzero(A)
    if bi.size and ai.size:
        out[R.mul[np.ix_(bi, ai)].ravel()] = True
    return out


def _sum_set(R: FiniteRing, A: Mask, B: Mask) -> Mask:
    out = np.zeros(R.order, dtype=bool)
    ai, bi = np.flatnonzero(A), np.flatnonzero(B)
    if ai.size and bi.size:
        out[R.add[np.ix_(ai, bi)].ravel()] = True
    return out


def _first_outside(inner: Mask, outer: Mask) -> Optional[int]:
    bad = np.flatnonzero(inner & ~outer)
    return int(bad[0]) if bad.size else None


def sample_subsets(R: FiniteRing, seed: Optional[int] = None) -> Dict[str, Mask]:
    """Canonical subsets plus seeded random ones, in a fixed order."""
    seed = CONFIG["seed"] if seed is None else seed
    rng = np.random.default_rng(seed)
    subsets = {
        "empty": np.zeros(R.order, dtype=bool),
        "zero": mask_of(R, [0]),
        "units": units(R).copy(),
        "qinv": qinv_mask(R).copy(),
        "all": np.ones(R.order, dtype=bool),
    }
    for k in range(CONFIG["random_subsets"]):
        subsets[f"random{k}"] = rng.random(R.order) < rng.uniform(0.1, 0.6)
    return subsets


@dataclass
class ClauseResult:
    holds: bool
    counterexample: Optional[dict] = None

    def to_payload(self) -> dict:
        return {"holds": self.holds, "counterexample": self.counterexample}


def closure_law_suite(R: FiniteRing, seed: Optional[int] = None) -> Dict[str, ClauseResult]:
    """
    Checks the laws of cl on sampled subsets: emptiness and fullness,
    monotonicity, extensivity and idempotence, the radical, left-unit
    cancellation, the product and translation rules, absorption by
    left ideals, passage to quotients and unit invariance of cl(R_q⁻¹).
    """
    R.require_unital("closure_law_suite")
    subsets = sample_subsets(R, seed)
    names = list(subsets)
    closed = {name: cl(R, A) for name, A in subsets.items()}
    J = jacobson_radical(R).members
    lunits = left_units(R)
    unit = units(R)
    results: Dict[str, ClauseResult] = {}

    def record(clause: str, counterexample: Optional[dict]) -> None:
        if clause in results and not results[clause].holds:
            return
        results[clause] = ClauseResult(counterexample is None, counterexample)

    record("empty and full", None if not closed["empty"].any() and closed["all"].all()
           else {"empty": members_of(closed["empty"])[:8]})

    for name in names:
        A, clA = subsets[name], closed[name]
        bad = _first_outside(A, clA)
        if bad is None:
            bad = _first_outside(cl(R, clA), clA)
        record("extensive and idempotent", None if bad is None else {"subset": name, "element": bad})
        if A.any():
            bad = _first_outside(J, clA)
            record("radical inside nonempty closures", None if bad is None else {"subset": name, "element": bad})
        diff = np.flatnonzero((clA & lunits) != (A & lunits))
        record("left-unit cancellation", None if diff.size == 0 else {"subset": name, "element": int(diff[0])})

    bad = np.flatnonzero(closed["zero"] != J)
    record("closure of zero is the radical", None if bad.size == 0 else {"element": int(bad[0])})

    for i, n1 in enumerate(names):
        for n2 in names[i:]:
            union = subsets[n1] | subsets[n2]
            bad = _first_outside(closed[n1], cl(R, union))
            record("monotone", None if bad is None else {"subset": n1, "superset": f"{n1}|{n2}", "element": bad})

    unit_parts = {"units": unit, **{f"units{k}": unit & subsets[f"random{k}"] for k in range(2)}}
    for an in names:
        A, clA = subsets[an], closed[an]
        for bn in names[:7]:
            B = subsets[bn]
            bad = _first_outside(_product_set(R, B, clA), cl(R, _product_set(R, B, A)))
            record("left multiplication", None if bad is None else {"A": an, "B": bn, "element": bad})
            RB = _product_set(R, np.ones(R.order, dtype=bool), B)
            bad = _first_outside(_sum_set(R, clA, B), cl(R, _sum_set(R, A, RB)))
            record("translation", None if bad is None else {"A": an, "B": bn, "element": bad})
        for un, U in unit_parts.items():
            bad = _first_outside(_product_set(R, clA, U), cl(R, _product_set(R, A, U)))
            record("right multiplication by units", None if bad is None else {"A": an, "B": un, "element": bad})

    for I in enumerate_ideals(R):
        for an in names:
            A, clA = subsets[an], closed[an]
            if _first_outside(_sum_set(R, A, I.members), clA) is None:
                bad = _first_outside(_sum_set(R, clA, I.members), clA)
                record("absorption", None if bad is None else {"A": an, "ideal": I.elements, "element": bad})

    for I, Q, pi in proper_quotients(R):
        for an in names:
            image_cl = np.zeros(Q.order, dtype=bool)
            image_cl[pi[closed[an]]] = True
            image = np.zeros(Q.order, dtype=bool)
            image[pi[subsets[an]]] = True
            bad = _first_outside(image_cl, cl(Q, image))
            record("quotient image", None if bad is None else {"A": an, "ideal": I.elements, "element": bad})

    clQ = closed["qinv"]
    units_idx = np.flatnonzero(unit)
    left_orbit = np.zeros(R.order, dtype=bool)
    right_orbit = np.zeros(R.order, dtype=bool)
    members = np.flatnonzero(clQ)
    left_orbit[R.mul[np.ix_(units_idx, members)].ravel()] = True
    right_orbit[R.mul[np.ix_(members, units_idx)].ravel()] = True
    equal = (left_orbit == clQ).all() and (right_orbit == clQ).all()
    record("unit invariance of cl(R_q⁻¹)", None if equal else {
        "left": members_of(left_orbit ^ clQ)[:8], "right": members_of(right_orbit ^ clQ)[:8]})

    failed = [k for k, v in results.items() if not v.holds]
    if failed:
        console.trace(f"closure laws failing on {R.label}: {failed}")
    return results


# ---------------------------------------------------------------------------
# Ideals and quotients
# ---------------------------------------------------------------------------

@dataclass
class UnimodularIdealConditions:
    left_unimodular: bool
    ideal_spanned: bool
    translates_covered: bool
    zero_reached: bool
    witness: Optional[Tuple[int, int]] = None

    @property
    def equivalent(self) -> bool:
        return len({self.left_unimodular, self.ideal_spanned, self.translates_covered, self.zero_reached}) == 1

    def to_payload(self) -> dict:
        return {"conditions": [self.left_unimodular, self.ideal_spanned, self.translates_covered, self.zero_reached],
                "equivalent": self.equivalent, "witness": list(self.witness) if self.witness else None}


def unimodular_ideal_conditions(R: FiniteRing, I: Ideal, a: int, b: int) -> UnimodularIdealConditions:
    """
    For a in I and b in R the following agree:
      1 ∈ R(1 - a) + Rb;  I = I(1 - a) + Ib;
      every -t with t in I has the form xa - x - a + yb with x, y in I;
      xa - x - a + yb = 0 for some x, y in I.
    """
    one = R.require_unital("unimodular_ideal_conditions")
    R.check(a, b)
    if a not in I:
        raise NotInIdeal(f"{a} is not in the ideal", element=a, ideal=I.elements)
    co_a = R.co(a)
    span = _sum_set(R, mask_of(R, R.mul[:, co_a]), mask_of(R, R.mul[:, b]))
    xs = np.array(I.elements)
    inner = np.zeros(R.order, dtype=bool)
    inner[R.add[np.ix_(R.mul[xs, co_a], R.mul[xs, b])].ravel()] = True
    # xa - x - a + yb over x, y in I
    shifted = R.sub[R.sub[R.mul[xs, a], xs], a]
    grid = R.add[np.ix_(shifted, R.mul[xs, b])]
    reached = np.zeros(R.order, dtype=bool)
    reached[grid.ravel()] = True
    zero_hits = np.argwhere(grid == 0)
    witness = (int(xs[zero_hits[0][0]]), int(xs[zero_hits[0][1]])) if zero_hits.size else None
    return UnimodularIdealConditions(
        left_unimodular=bool(span[one]),
        ideal_spanned=bool((inner >= I.members).all()),
        translates_covered=bool(reached[R.neg[xs]].all()),
        zero_reached=witness is not None,
        witness=witness,
    )


@dataclass
class TransferReport:
    in_ideal_qadv: bool
    complement_qinv: bool
    in_ideal_closure: bool
    complement_in_closure: bool

    @property
    def consistent(self) -> bool:
        return self.in_ideal_qadv == self.complement_qinv and self.in_ideal_closure == self.complement_in_closure

    def to_payload(self) -> dict:
        return {"t_in_Iq": self.in_ideal_qadv, "one_minus_t_in_Rq": self.complement_qinv,
                "t_in_cl0": self.in_ideal_closure, "one_minus_t_in_cl": self.complement_in_closure,
                "consistent": self.consistent}


def ideal_unit_transfer(R: FiniteRing, I: Ideal, t: int) -> TransferReport:
    """
    t ∈ I_q° iff 1 - t ∈ R_q⁻¹, and t ∈ cl°(I_q°) iff 1 - t ∈ cl(R_q⁻¹).
    The ideal side is computed intrinsically on I as a ring without identity.
    """
    R.require_unital("ideal_unit_transfer")
    R.check(t)
    if t not in I:
        raise NotInIdeal(f"{t} is not in the ideal", element=t, ideal=I.elements)
    S, embed = ideal_as_ring(I)
    local = int(np.flatnonzero(embed == t)[0])
    Q = qinv_mask(R)
    return TransferReport(
        in_ideal_qadv=bool(qadversible_mask(S)[local]),
        complement_qinv=bool(Q[R.co(t)]),
        in_ideal_closure=bool(cl_nonunital(S)[local]),
        complement_in_closure=bool(cl(R, Q)[R.co(t)]),
    )


def ideal_is_qb(R: FiniteRing, I: Ideal) -> Tuple[bool, bool]:
    """(intrinsic cl°(I_q°) = I, 1 - I ⊆ cl(R_q⁻¹)). The two always agree."""
    S, _ = ideal_as_ring(I)
    intrinsic = bool(cl_nonunital(S).all())
    clQ = cl(R, qinv_mask(R))
    ambient = bool(clQ[R.sub[R.require_unital("ideal_is_qb"), I.elements]].all())
    return intrinsic, ambient


def quotient_transfer(R: FiniteRing) -> List[dict]:
    """
    Over every proper quotient: π(R_q⁻¹) ⊆ (R/I)_q⁻¹, π(cl(R_q⁻¹)) ⊆ cl((R/I)_q⁻¹),
    and I + cl(R_q⁻¹) = R forces R/I to be QB. Returns the violations.
    """
    Q = qinv_mask(R)
    clQ = cl(R, Q)
    violations = []
    for I, S, pi in proper_quotients(R):
        QS = qinv_mask(S)
        clQS = cl(S, QS)
        bad = np.flatnonzero(~QS[pi[Q]])
        if bad.size:
            violations.append({"ideal": I.elements, "law": "image of R_q⁻¹",
                               "element": int(np.flatnonzero(Q)[bad[0]])})
        bad = np.flatnonzero(~clQS[pi[clQ]])
        if bad.size:
            violations.append({"ideal": I.elements, "law": "image of cl(R_q⁻¹)",
                               "element": int(np.flatnonzero(clQ)[bad[0]])})
        if _sum_set(R, I.members, clQ).all() and not clQS.all():
            violations.append({"ideal": I.elements, "law": "I + cl(R_q⁻¹) = R gives a QB quotient"})
    return violations


def finite_consistency(R: FiniteRing) -> Optional[int]:
    """First element where R_q⁻¹ and R⁻¹ disagree. A finite ring has none."""
    diff = np.flatnonzero(qinv_mask(R) != units(R))
    return int(diff[0]) if diff.size else None
