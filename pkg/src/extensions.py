"""
Extensions of QB-rings: lifting quasi-invertibles through a quotient, the
three-condition criterion for R to be QB given an ideal, B- and QB-ideals and
the largest ideal I_qb with I_qb + R_q⁻¹ ⊆ cl(R_q⁻¹).
"""

from dataclasses import dataclass, field, replace
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from src import console
from src.closure import cl, is_b_nonunital, is_b_ring, is_qb_nonunital, is_qb_ring
from src.errors import HypothesisFailed, IdealCapExceeded, NotABIdeal, PreconditionViolated, StageInvariantFailed
from src.ideals import (Ideal, enumerate_ideals, ideal_as_ring, ideal_sum, is_primely_embedded, quotient,
                        zero_ideal)
from src.quasi import qinv_mask, quasi_invertible
from src.rings import FiniteRing, Mask, left_units, members_of, right_units, subring_generated_by, units

SCENARIOS = ("b_ideal", "qb_ideal_b_quotient", "primely_embedded_subring", "b_subring")


def _require_proper(R: FiniteRing, I: Ideal) -> None:
    R.require_unital("extension criteria")
    if I.ring is not R:
        raise PreconditionViolated("ideal belongs to a different ring")
    if I.is_whole():
        raise PreconditionViolated("the ideal must be proper", ideal=I.elements)


def _image(pi: NDArray[np.intp], mask: Mask, size: int) -> Mask:
    out = np.zeros(size, dtype=bool)
    out[pi[np.flatnonzero(mask)]] = True
    return out


def lift_quasi_invertible(R: FiniteRing, I: Ideal, a: int) -> int:
    """
    Lift a quasi-invertible coset a + I to an element of R_q⁻¹ in the same coset.

    With b a representative of the quasi-inverse coset, pick y so that
    v = b + y(1-ab) is quasi-invertible, take its quasi-inverse u and return
    w = u + a(1-vu) + (1-uv)a.
    """
    _require_proper(R, I)
    R.check(a)
    if not is_qb_ring(R).holds:
        raise HypothesisFailed(f"{R.label} is not a QB-ring")
    S, pi = quotient(R, I)
    below = quasi_invertible(S, int(pi[a]))
    if below is None:
        raise HypothesisFailed(f"the coset of {a} is not quasi-invertible in {S.label}", a=a)
    b = int(np.flatnonzero(pi == below.v)[0])
    Q = qinv_mask(R)
    candidates = R.add[b, R.mul[:, R.co(R.times(a, b))]]
    hits = np.flatnonzero(Q[candidates])
    if hits.size == 0:
        raise HypothesisFailed("no y makes b + y(1-ab) quasi-invertible", a=a, b=b)
    v = int(candidates[hits[0]])
    u = quasi_invertible(R, v).v
    w = R.total(u, R.times(a, R.co(R.times(v, u))), R.times(R.co(R.times(u, v)), a))
    if not Q[w] or pi[w] != pi[a]:
        raise StageInvariantFailed("lifted element is not a quasi-invertible in the coset of a",
                                   a=a, b=b, v=v, u=u, w=w)
    return w


def quasi_invertibles_lift(R: FiniteRing, I: Ideal) -> Tuple[bool, Optional[int]]:
    """(R_q⁻¹ + I)/I = (R/I)_q⁻¹, with the first quotient element that breaks it."""
    S, pi = quotient(R, I)
    lifted = _image(pi, qinv_mask(R), S.order)
    below = qinv_mask(S)
    diff = np.flatnonzero(lifted != below)
    return diff.size == 0, (int(diff[0]) if diff.size else None)


def units_lift(R: FiniteRing, I: Ideal) -> bool:
    S, pi = quotient(R, I)
    return bool((_image(pi, units(R), S.order) == units(S)).all())


def absorbs_into_closure(R: FiniteRing, I: Ideal, base: Optional[Mask] = None,
                         closure: Optional[Mask] = None) -> bool:
    """I + base ⊆ closure, defaulting to I + R_q⁻¹ ⊆ cl(R_q⁻¹)."""
    base = qinv_mask(R) if base is None else base
    closure = cl(R, base) if closure is None else closure
    sums = R.add[np.ix_(I.elements, members_of(base))]
    return bool(closure[sums].all())


# ---------------------------------------------------------------------------
# B-ideals and QB-ideals
# ---------------------------------------------------------------------------

def is_b_ideal(R: FiniteRing, I: Ideal) -> bool:
    """The ideal, as a ring without unit, has stable rank one."""
    S, _ = ideal_as_ring(I)
    return is_b_nonunital(S).holds


def is_qb_ideal(R: FiniteRing, I: Ideal) -> bool:
    S, _ = ideal_as_ring(I)
    return is_qb_nonunital(S).holds


def b_ideal_perturbation(R: FiniteRing, I: Ideal, u: int, kind: str = "b") -> bool:
    """
    u - t ∈ cl(R_q⁻¹) for every t ∈ I. kind "b" takes a B-ideal and u ∈ R_q⁻¹;
    kind "qb" takes a QB-ideal and a unit u.
    """
    R.check(u)
    if kind == "b":
        if not is_b_ideal(R, I):
            raise NotABIdeal("the ideal is not a B-ideal", ideal=I.elements)
        if not qinv_mask(R)[u]:
            raise PreconditionViolated(f"{u} is not quasi-invertible", u=u)
    elif kind == "qb":
        if not is_qb_ideal(R, I):
            raise NotABIdeal("the ideal is not a QB-ideal", ideal=I.elements)
        if not units(R)[u]:
            raise PreconditionViolated(f"{u} is not a unit", u=u)
    else:
        raise ValueError(f"Unknown ideal kind: {kind}")
    closure = cl(R, qinv_mask(R))
    return bool(closure[R.sub[u, I.elements]].all())


def unit_perturbations(R: FiniteRing, I: Ideal) -> Dict[str, bool]:
    """Stable-rank-one absorption of a B-ideal into units, right units and left units."""
    if not is_b_ideal(R, I):
        raise NotABIdeal("the ideal is not a B-ideal", ideal=I.elements)
    return {name: absorbs_into_closure(R, I, base=mask)
            for name, mask in (("units", units(R)), ("right_units", right_units(R)), ("left_units", left_units(R)))}


# ---------------------------------------------------------------------------
# The three-condition criterion
# ---------------------------------------------------------------------------

@dataclass
class ScenarioCheck:
    name: str
    hypotheses: Dict[str, bool]
    conclusion: bool

    @property
    def applies(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def holds(self) -> bool:
        return not self.applies or self.conclusion

    def to_payload(self) -> dict:
        return {"name": self.name, "hypotheses": self.hypotheses, "applies": self.applies,
                "conclusion": self.conclusion, "holds": self.holds}


@dataclass
class ExtensionReport:
    quotient_qb: bool
    lifting: bool
    absorbs: bool
    qb: bool
    b_ideal: bool
    scenarios: List[ScenarioCheck] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        conditions = self.quotient_qb and self.lifting and self.absorbs
        # over a B-ideal the first two conditions already force QB
        b_route = not (self.b_ideal and self.quotient_qb and self.lifting) or self.qb
        return conditions == self.qb and b_route and all(s.holds for s in self.scenarios)

    def to_payload(self) -> dict:
        return {"quotient_qb": self.quotient_qb, "lifting": self.lifting, "absorbs": self.absorbs,
                "qb": self.qb, "b_ideal": self.b_ideal, "consistent": self.consistent,
                "scenarios": [s.to_payload() for s in self.scenarios]}


def _complementary_subrings(R: FiniteRing, I: Ideal) -> Iterator[Tuple[FiniteRing, NDArray[np.intp]]]:
    """Unital subrings generated by one element whose sum with I is R."""
    seen = set()
    for g in range(R.order):
        S, embed = subring_generated_by(R, [g])
        key = tuple(embed.tolist())
        if key in seen:
            continue
        seen.add(key)
        if np.unique(R.add[np.ix_(I.elements, embed)]).size == R.order:
            yield S, embed


def _scenario(R: FiniteRing, I: Ideal, name: str, report: ExtensionReport) -> ScenarioCheck:
    S_quot, _ = quotient(R, I)
    if name == "b_ideal":
        hyp = {"b_ideal": report.b_ideal, "quotient_qb": report.quotient_qb, "lifting": report.lifting}
    elif name == "qb_ideal_b_quotient":
        hyp = {"qb_ideal": is_qb_ideal(R, I), "quotient_b": is_b_ring(S_quot).holds, "units_lift": units_lift(R, I)}
    elif name == "primely_embedded_subring":
        hyp = {"b_ideal": report.b_ideal, "complementary_subring": False}
        for S, embed in _complementary_subrings(R, I):
            if is_qb_ring(S).holds and is_primely_embedded(S, R, embed):
                hyp["complementary_subring"] = True
                break
    elif name == "b_subring":
        hyp = {"qb_ideal": is_qb_ideal(R, I), "complementary_subring": False}
        for S, _ in _complementary_subrings(R, I):
            if is_b_ring(S).holds:
                hyp["complementary_subring"] = True
                break
    else:
        raise ValueError(f"Unknown scenario: {name}")
    return ScenarioCheck(name=name, hypotheses=hyp, conclusion=report.qb)


def extension_conditions(R: FiniteRing, I: Ideal, scenarios: Tuple[str, ...] = ()) -> ExtensionReport:
    """
    R is QB iff R/I is QB, quasi-invertibles lift modulo I and
    I + R_q⁻¹ ⊆ cl(R_q⁻¹). Scenario names select additional hypothesis sets
    whose conclusion is that R is QB.
    """
    _require_proper(R, I)
    S, _ = quotient(R, I)
    report = ExtensionReport(
        quotient_qb=is_qb_ring(S).holds,
        lifting=quasi_invertibles_lift(R, I)[0],
        absorbs=absorbs_into_closure(R, I),
        qb=is_qb_ring(R).holds,
        b_ideal=is_b_ideal(R, I),
    )
    report.scenarios = [_scenario(R, I, name, report) for name in scenarios]
    if not report.consistent:
        console.warn(f"extension criterion disagrees on {R.label} modulo {I.elements}")
    return report


# ---------------------------------------------------------------------------
# The largest absorbing ideal
# ---------------------------------------------------------------------------

def compute_iqb(R: FiniteRing, cl_mask: Optional[Mask] = None) -> Ideal:
    """
    Sum of every ideal I with I + R_q⁻¹ ⊆ cl(R_q⁻¹). cl_mask replaces the
    closure, which lets a restricted closure be tested directly.

    Over the ideal cap the sum runs over the ideals enumerated so far and
    the result is flagged partial.
    """
    R.require_unital("compute_iqb")
    Q = qinv_mask(R)
    closure = cl(R, Q) if cl_mask is None else cl_mask
    try:
        ideals, partial = enumerate_ideals(R), False
    except IdealCapExceeded as exc:
        ideals, partial = exc.partial, True
        console.warn(f"I_qb of {R.label} from the first {len(ideals)} ideals only: {exc.message}")
    total = zero_ideal(R)
    for I in ideals:
        if absorbs_into_closure(R, I, base=Q, closure=closure):
            total = ideal_sum(total, I)
    if not absorbs_into_closure(R, total, base=Q, closure=closure):
        raise StageInvariantFailed("sum of absorbing ideals does not absorb", ideal=total.elements)
    return replace(total, partial=True) if partial else total


def iqb_by_translation(R: FiniteRing, cl_mask: Optional[Mask] = None) -> Mask:
    """{x : x + cl(R_q⁻¹) ⊆ cl(R_q⁻¹)}."""
    closure = cl(R, qinv_mask(R)) if cl_mask is None else cl_mask
    inside = members_of(closure)
    return closure[R.add[:, inside]].all(axis=1)


def additively_generated_by_units(R: FiniteRing) -> bool:
    reached = units(R).copy()
    reached[0] = True
    while True:
        idx = np.flatnonzero(reached)
        grown = reached.copy()
        grown[R.add[np.ix_(idx, idx)].ravel()] = True
        if (grown == reached).all():
            return bool(reached.all())
        reached = grown
