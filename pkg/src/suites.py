"""
Verification Suites

Each suite takes a ring and a seed and returns CheckRecords. Suites are
independent, so --jobs runs them in a process pool; every worker rebuilds
the ring from its spec and results are reassembled in suite order.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from src import console
from src.closure import (cl, closure_law_suite, find_mirror_reducer, finite_consistency, ideal_is_qb,
                         ideal_unit_transfer, is_b_ring, is_qb_nonunital, is_qb_ring, mirror_reducer,
                         quotient_transfer, symmetry_check, unimodular_ideal_conditions)
from src.config import CONFIG
from src.corners import (corner_transfer, extend_to_quasi_invertible, full_corner_criterion,
                         qb_corner_dichotomy, unit_coset_corner_criterion)
from src.errors import QBRError
from src.exchange import (exchange_qb_equivalence, is_exchange_ring, maximal_regular_equals_qinv,
                          monoid_orthogonal_cancellation, monoid_refinement_check, vr_monoid)
from src.extensions import (SCENARIOS, additively_generated_by_units, b_ideal_perturbation, compute_iqb,
                            extension_conditions, iqb_by_translation, is_b_ideal, lift_quasi_invertible,
                            unit_perturbations)
from src.ideals import enumerate_ideals, jacobson_radical, quotient
from src.matrix_qb import (Mat2Algebra, brute_force_row_reduction, defect_corner_report, random_unimodular_row,
                           reduce_row_m2)
from src.quasi import (adversibility_sets, converse_partial_inverse, extend_regular_via_qinv, qadversible_mask,
                       qinv_mask, quasi_adversible_exhaustive, quasi_inverse_canonical, quasi_inverse_family,
                       quasi_invertible, quasi_invertible_exhaustive)
from src.regular import (corner, decompose_extension, extend_by_complement, extends, extends_via_idempotents,
                         extension_order_sweep, idempotents, left_ideal_of, maximal_regular_elements,
                         mvn_equivalent, partial_inverse, realign_partial_inverse, regular_mask)
from src.reports import CheckRecord, status_of, timed
from src.ring_specs import RingSpec, build_ring, matrix_ring, unitization
from src.rings import FiniteRing, left_units, members_of, opposite, right_units, units

Runner = Callable[[FiniteRing, int], List[CheckRecord]]


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    runner: Runner
    # numbered name accepted by --suite
    alias: str = ""


def _progress(items, label: str):
    return tqdm(items, desc=label, disable=not CONFIG["verbose"], leave=False)


def _pairs(R: FiniteRing, seed: int, limit: int = 4096) -> List[Tuple[int, int]]:
    """Every (a, b) for small rings, a seeded sample otherwise."""
    n = R.order
    if n * n <= limit:
        return [(a, b) for a in range(n) for b in range(n)]
    rng = np.random.default_rng(seed)
    return [tuple(int(v) for v in rng.integers(n, size=2)) for _ in range(limit)]


def _first(failures: list, keep: int = 8) -> dict:
    return {"failures": failures[:keep], "count": len(failures)}


# ---------------------------------------------------------------------------
# quasi-inverse-family
# ---------------------------------------------------------------------------

def run_quasi_inverse_family(R: FiniteRing, seed: int) -> List[CheckRecord]:
    R.require_unital("quasi-inverse family")
    records: List[CheckRecord] = []
    Q = np.zeros(0, dtype=bool)

    with timed(records, "quasi-inverse witnesses", "normalized quasi-inverse from a partial inverse") as rec:
        Q = qinv_mask(R)
        bad = []
        for u in _progress(range(R.order), "witnesses"):
            w = quasi_invertible(R, u)
            if (w is not None) != bool(Q[u]) or (w is not None and not w.valid_in(R)):
                bad.append(u)
            elif R.order <= CONFIG["sweep_cap"] and (quasi_invertible_exhaustive(R, u) is not None) != bool(Q[u]):
                bad.append(u)
        rec.status = status_of(not bad)
        rec.payload = {"qinv": members_of(Q), **_first(bad)}

    with timed(records, "derived quasi-inverses", "v + a(1-uv) + (1-vu)b is a quasi-inverse") as rec:
        bad = []
        pairs = _pairs(R, seed)
        for u in _progress(members_of(Q), "families"):
            w = quasi_invertible(R, u)
            for a, b in pairs:
                check = quasi_inverse_family(R, w, a, b)
                if not check.ok:
                    bad.append({"u": u, "a": a, "b": b, "relations": check.failures()})
        rec.status = status_of(not bad)
        rec.payload = {"pairs": len(pairs), **_first(bad)}

    with timed(records, "partial inverse decomposition", "every partial inverse of u decomposes around v") as rec:
        bad = []
        for u in members_of(Q):
            w = quasi_invertible(R, u)
            for v2 in np.flatnonzero(R.mul[R.mul[u, :], u] == u):
                check = converse_partial_inverse(R, w, int(v2))
                if not check.ok:
                    bad.append({"u": u, "v'": int(v2), "relations": check.failures()})
        rec.status = status_of(not bad)
        rec.payload = _first(bad)

    with timed(records, "canonical quasi-inverse", "a + b - aub from an orthogonal pair") as rec:
        built = {}
        for u in members_of(Q):
            pair = quasi_invertible_exhaustive(R, u)
            if pair is not None:
                built[u] = quasi_inverse_canonical(R, u, *pair)
        rec.payload = {"built": built}

    with timed(records, "regular elements extend through quasi-invertibles",
               "a = ava with v quasi-invertible gives u ∈ R_q⁻¹ with a ≤ u") as rec:
        extended = 0
        for a in members_of(regular_mask(R)):
            vs = np.flatnonzero(Q & (R.mul[R.mul[a, :], a] == a))
            if vs.size:
                extend_regular_via_qinv(R, a, int(vs[0]))
                extended += 1
        rec.payload = {"extended": extended}

    with timed(records, "finite consistency", "R_q⁻¹ = R⁻¹ in a finite ring") as rec:
        bad = finite_consistency(R)
        rec.status = status_of(bad is None)
        rec.payload = {"element": bad}
    return records


# ---------------------------------------------------------------------------
# extension-order
# ---------------------------------------------------------------------------

def run_extension_order(R: FiniteRing, seed: int) -> List[CheckRecord]:
    records: List[CheckRecord] = []

    with timed(records, "extension order is a partial order", "≤ on regular elements") as rec:
        violations = extension_order_sweep(R)
        rec.status = status_of(not any(violations.values()))
        rec.payload = {k: v[:8] for k, v in violations.items()}

    reg = members_of(regular_mask(R))
    pairs = [(a, b) for a in reg for b in reg]
    if len(pairs) > 4096:
        rng = np.random.default_rng(seed)
        pairs = [pairs[i] for i in rng.choice(len(pairs), size=4096, replace=False)]

    with timed(records, "idempotent description of ≤", "a ≤ b iff pb = a = bq with pR = aR, Rq = Ra") as rec:
        bad = [[a, b] for a, b in _progress(pairs, "pairs")
               if (extends(R, a, b) is not None) != extends_via_idempotents(R, a, b)]
        rec.status = status_of(not bad)
        rec.payload = _first(bad)

    with timed(records, "extension decomposition", "b - a lies in (1-p)R(1-q) and complements extend") as rec:
        decomposed = complemented = realigned = 0
        idem = members_of(idempotents(R))
        for a, b in pairs:
            if a == b or extends(R, a, b) is None:
                continue
            p, q, _ = decompose_extension(R, a, b)
            decomposed += 1
            Ra = left_ideal_of(R, q)
            for q2 in idem:
                if (left_ideal_of(R, q2) == Ra).all():
                    realign_partial_inverse(R, a, b, p, q, q2)
                    realigned += 1
        R_reg = regular_mask(R)
        for a in reg[:64]:
            x = partial_inverse(R, a)
            p, q = R.times(a, x), R.times(x, a)
            for c in corner(R, R.co(p), R.co(q)):
                if R_reg[c]:
                    extend_by_complement(R, a, int(c))
                    complemented += 1
        rec.payload = {"decomposed": decomposed, "complemented": complemented, "realigned": realigned}

    with timed(records, "maximal regular elements", "regular elements with no proper extension") as rec:
        rec.payload = {"maximal": members_of(maximal_regular_elements(R))}
    return records


# ---------------------------------------------------------------------------
# closure-laws
# ---------------------------------------------------------------------------

def run_closure_laws(R: FiniteRing, seed: int) -> List[CheckRecord]:
    records: List[CheckRecord] = []
    results = {}
    with timed(records, "closure laws", "laws of cl on sampled subsets") as rec:
        results = closure_law_suite(R, seed)
        rec.status = status_of(all(r.holds for r in results.values()))
        rec.payload = {"clauses": len(results)}
    for clause, result in results.items():
        records.append(CheckRecord(name=f"closure law: {clause}", status=status_of(result.holds),
                                   reference="cl", payload=result.to_payload()))

    with timed(records, "quotient transfer", "images of R_q⁻¹ and cl(R_q⁻¹) in R/I") as rec:
        violations = quotient_transfer(R)
        rec.status = status_of(not violations)
        rec.payload = _first(violations)

    with timed(records, "B-rings are QB-rings", "cl(R⁻¹) ⊆ cl(R_q⁻¹)") as rec:
        b, qb = is_b_ring(R), is_qb_ring(R)
        rec.status = status_of(not b.holds or qb.holds)
        rec.payload = {"b": b.to_payload(), "qb": qb.to_payload()}
    return records


# ---------------------------------------------------------------------------
# mirror-reducer and left-right-symmetry
# ---------------------------------------------------------------------------

def run_mirror_reducer(R: FiniteRing, seed: int) -> List[CheckRecord]:
    """Every (a, x, b, c, z) with ax + b = 1 and z a quasi-inverse of x + cb."""
    one = R.require_unital("mirror reducer")
    records: List[CheckRecord] = []
    with timed(records, "mirror reducer factorizations", "1-(a+by)d and 1-d(a+by) factor and are orthogonal") as rec:
        Q = qinv_mask(R)
        tuples = 0
        failures = []
        per_pair = None if R.order <= 16 else 4
        for a, x in _progress(_pairs(R, seed, limit=1024), "(a, x)"):
            b = R.minus(one, R.times(a, x))
            for c in np.flatnonzero(Q[R.add[x, R.mul[:, b]]])[:per_pair]:
                w = R.plus(x, R.times(int(c), b))
                z = quasi_invertible(R, w).v
                out = mirror_reducer(R, a, x, b, int(c), z)
                tuples += 1
                if not out.ok:
                    failures.append({"a": a, "x": x, "b": b, "c": int(c), "z": z,
                                     "identities": [k for k, v in out.identities.items() if not v]})
        rec.status = status_of(not failures)
        rec.payload = {"tuples": tuples, **_first(failures)}

    with timed(records, "right pairs reduce on the left", "ax + b = 1 gives a + by ∈ R_q⁻¹ when x ∈ cl") as rec:
        found = missing = broken = 0
        for a, x in _pairs(R, seed, limit=1024):
            out = find_mirror_reducer(R, a, x, R.minus(one, R.times(a, x)))
            if out is None:
                missing += 1
            elif out.ok:
                found += 1
            else:
                broken += 1
        rec.status = status_of(not broken and (missing == 0 or not is_qb_ring(R).holds))
        rec.payload = {"found": found, "missing": missing, "broken": broken}
    return records


def run_left_right_symmetry(R: FiniteRing, seed: int) -> List[CheckRecord]:
    R.require_unital("left-right symmetry")
    records: List[CheckRecord] = []
    with timed(records, "cl and cr fill the ring together", "cl(R_q⁻¹) = R iff cr(R_q⁻¹) = R") as rec:
        report = symmetry_check(R)
        rec.status = status_of(report.biconditional and report.op_agrees)
        rec.payload = report.to_payload()
    with timed(records, "opposite ring", "R is QB iff its opposite is") as rec:
        qb, op = is_qb_ring(R).holds, is_qb_ring(opposite(R)).holds
        rec.status = status_of(qb == op)
        rec.payload = {"qb": qb, "opposite_qb": op}
    return records


# ---------------------------------------------------------------------------
# nonunital
# ---------------------------------------------------------------------------

def run_nonunital(R: FiniteRing, seed: int) -> List[CheckRecord]:
    records: List[CheckRecord] = []

    with timed(records, "quasi-adversibles match the unitization", "x ∈ R_q° iff 1 - x ∈ (R̃)_q⁻¹") as rec:
        U = unitization(R)
        qa = qadversible_mask(R)
        sets = adversibility_sets(R)
        complement = U.sub[U.one, R.elements]
        oracle = {
            "quasi": qinv_mask(U)[complement],
            "left": left_units(U)[complement],
            "right": right_units(U)[complement],
            "two_sided": units(U)[complement],
        }
        bad = [{"set": k, "element": int(np.flatnonzero(sets[k] != v)[0])}
               for k, v in oracle.items() if (sets[k] != v).any()]
        if R.order <= CONFIG["sweep_cap"]:
            exhaustive = np.array([quasi_adversible_exhaustive(R, x) is not None for x in range(R.order)])
            if (exhaustive != qa).any():
                bad.append({"set": "exhaustive", "element": int(np.flatnonzero(exhaustive != qa)[0])})
        rec.status = status_of(not bad)
        rec.payload = {"quasi_adversible": members_of(qa), **_first(bad)}

    with timed(records, "non-unital QB property", "cl°(R_q°) = R, on both sides") as rec:
        verdict = is_qb_nonunital(R)
        mirrored = is_qb_nonunital(opposite(R))
        rec.status = status_of(verdict.holds == mirrored.holds)
        rec.payload = {"qb": verdict.to_payload(), "opposite_qb": mirrored.holds}

    if not R.unital:
        return records

    ideals = enumerate_ideals(R)
    with timed(records, "unimodular ideal conditions", "four descriptions of xa - x - a + yb = 0 agree") as rec:
        if R.order > CONFIG["sweep_cap"]:
            rec.status = "skipped"
            rec.payload = {"reason": f"order above sweep cap {CONFIG['sweep_cap']}"}
        else:
            bad = []
            for I in _progress(ideals, "ideals"):
                for a, b in product(I.elements, range(R.order)):
                    report = unimodular_ideal_conditions(R, I, a, b)
                    if not report.equivalent:
                        bad.append({"ideal": I.elements, "a": a, "b": b, **report.to_payload()})
            rec.status = status_of(not bad)
            rec.payload = _first(bad)

    with timed(records, "ideal and ring transfer", "t ∈ I_q° iff 1 - t ∈ R_q⁻¹, likewise for closures") as rec:
        bad = []
        for I in ideals:
            for t in I.elements:
                report = ideal_unit_transfer(R, I, t)
                if not report.consistent:
                    bad.append({"ideal": I.elements, "t": t, **report.to_payload()})
        rec.status = status_of(not bad)
        rec.payload = _first(bad)

    with timed(records, "ideals of QB-rings are QB", "cl°(I_q°) = I and 1 - I ⊆ cl(R_q⁻¹)") as rec:
        qb = is_qb_ring(R).holds
        bad = []
        for I in ideals:
            intrinsic, ambient = ideal_is_qb(R, I)
            if intrinsic != ambient or (qb and not intrinsic):
                bad.append({"ideal": I.elements, "intrinsic": intrinsic, "ambient": ambient})
        rec.status = status_of(not bad)
        rec.payload = {"ring_qb": qb, **_first(bad)}
    return records


# ---------------------------------------------------------------------------
# skew-corners
# ---------------------------------------------------------------------------

def run_skew_corners(R: FiniteRing, seed: int) -> List[CheckRecord]:
    R.require_unital("skew corners")
    records: List[CheckRecord] = []
    idem = members_of(idempotents(R))

    with timed(records, "corner transfer", "x ∈ (pRq)_q⁻¹ iff u + x ∈ R_q⁻¹, and for the closures") as rec:
        bad, checked = [], 0
        for p, q in _progress(list(product(idem, repeat=2)), "(p, q)"):
            if corner(R, p, q).size == 1:
                continue
            data = mvn_equivalent(R, R.co(p), R.co(q))
            if data is None:
                continue
            u, v = data
            for x in corner(R, p, q):
                report = corner_transfer(R, u, v, p, q, int(x))
                checked += 1
                if not report.agree:
                    bad.append({"p": p, "q": q, "u": u, "v": v, "x": int(x), **report.to_payload()})
        rec.status = status_of(not bad)
        rec.payload = {"checked": checked, **_first(bad)}

    with timed(records, "unit coset criterion", "pRq is a QB-corner iff u + pRq ⊆ cl ∩ cr") as rec:
        bad = []
        for p, q in product(idem, repeat=2):
            if corner(R, p, q).size == 1:
                continue
            data = mvn_equivalent(R, R.co(p), R.co(q))
            if data is not None and not unit_coset_corner_criterion(R, data[0], data[1], p, q).agree:
                bad.append({"p": p, "q": q})
        rec.status = status_of(not bad)
        rec.payload = _first(bad)

    with timed(records, "full corner criterion", "pRp is a QB-corner iff 1 - p + pRp ⊆ cl(R_q⁻¹)") as rec:
        reports = {p: full_corner_criterion(R, p) for p in idem if p != 0}
        bad = [{"p": p, **r.to_payload()} for p, r in reports.items() if not r.agree]
        rec.status = status_of(not bad)
        rec.payload = _first(bad)

    with timed(records, "corner dichotomy", "1-p ~ 1-q gives p ⊥ q or a QB-corner") as rec:
        violations = qb_corner_dichotomy(R)
        rec.status = status_of(not violations)
        rec.payload = _first(violations)

    with timed(records, "regular elements extend into R_q⁻¹", "a ∈ cl(R_q⁻¹) regular gives a ≤ a + pyq") as rec:
        if R.order > CONFIG["qi_sweep_cap"]:
            rec.status = "skipped"
            rec.payload = {"reason": f"order above {CONFIG['qi_sweep_cap']}"}
        else:
            inside = regular_mask(R) & cl(R, qinv_mask(R))
            extended = {a: extend_to_quasi_invertible(R, a) for a in members_of(inside)}
            rec.payload = {"extended": len(extended), "regular": int(regular_mask(R).sum())}
    return records


# ---------------------------------------------------------------------------
# matrix-reduction
# ---------------------------------------------------------------------------

def run_matrix_reduction(R: FiniteRing, seed: int) -> List[CheckRecord]:
    R.require_unital("matrix reduction")
    records: List[CheckRecord] = []

    with timed(records, "unimodular rows reduce in M2(R)", "staged reduction with verified quasi-inverse") as rec:
        rng = np.random.default_rng(seed)
        rows = CONFIG["reduce_rows"]
        skipped_stages: Dict[str, int] = {}
        for _ in _progress(range(rows), "rows"):
            row = random_unimodular_row(R, rng)
            result = reduce_row_m2(R, row)
            for entry in result.trace:
                if entry.get("skipped"):
                    skipped_stages[entry["stage"]] = skipped_stages.get(entry["stage"], 0) + 1
        rec.payload = {"rows": rows, "skipped_stages": skipped_stages}

    with timed(records, "M2(R) is QB by exhaustion", "closure of M2(R)_q⁻¹ over the tabulated ring") as rec:
        if R.order > 4:
            rec.status = "skipped"
            rec.payload = {"reason": "base order above 4"}
        else:
            verdict = is_qb_ring(matrix_ring(R, 2))
            rec.status = status_of(verdict.holds)
            rec.payload = verdict.to_payload()

    with timed(records, "reduction agrees with exhaustive search", "some Y makes A + BY quasi-invertible") as rec:
        if R.order > 4:
            rec.status = "skipped"
            rec.payload = {"reason": "base order above 4"}
        else:
            rng = np.random.default_rng(seed + 1)
            bad = []
            M = Mat2Algebra(R)
            for _ in range(20):
                row = random_unimodular_row(R, rng)
                exhaustive = brute_force_row_reduction(R, row)
                staged = reduce_row_m2(R, row).reducer
                if exhaustive is None or not M.is_qinv(M.add(row.A, M.mul(row.B, staged))):
                    bad.append({**row.to_payload(), "exhaustive": None if exhaustive is None else list(exhaustive),
                                "staged": list(staged)})
            rec.status = status_of(not bad)
            rec.payload = _first(bad)

    with timed(records, "defect corners", "(1-ux)R(1-yv) is zero or a QB-corner") as rec:
        bad, checked = [], 0
        qs = members_of(qinv_mask(R))[:16]
        for u, v in product(qs, repeat=2):
            x, y = quasi_invertible(R, u).v, quasi_invertible(R, v).v
            report = defect_corner_report(R, u, x, v, y)
            checked += 1
            if not report.conclusion_holds:
                bad.append({"u": u, "x": x, "v": v, "y": y, **report.to_payload()})
        rec.status = status_of(not bad)
        rec.payload = {"checked": checked, **_first(bad)}
    return records


# ---------------------------------------------------------------------------
# extensions
# ---------------------------------------------------------------------------

def run_extensions(R: FiniteRing, seed: int) -> List[CheckRecord]:
    R.require_unital("extensions")
    records: List[CheckRecord] = []
    proper = [I for I in enumerate_ideals(R) if not I.is_whole()]

    with timed(records, "extension criterion", "R is QB iff R/I is QB, lifting holds and I + R_q⁻¹ ⊆ cl") as rec:
        reports = {tuple(I.elements): extension_conditions(R, I, SCENARIOS) for I in proper}
        bad = [{"ideal": list(k), **r.to_payload()} for k, r in reports.items() if not r.consistent]
        rec.status = status_of(not bad)
        rec.payload = {"ideals": len(reports), **_first(bad)}

    with timed(records, "quasi-invertibles lift", "every quasi-invertible coset has a quasi-invertible lift") as rec:
        lifted = 0
        if is_qb_ring(R).holds:
            for I in proper:
                S, pi = quotient(R, I)
                below = qinv_mask(S)
                for a in range(R.order):
                    if below[pi[a]]:
                        lift_quasi_invertible(R, I, a)
                        lifted += 1
        rec.payload = {"lifted": lifted}

    with timed(records, "B-ideal perturbations", "u - I ⊆ cl(R_q⁻¹) for a B-ideal and u quasi-invertible") as rec:
        Q = members_of(qinv_mask(R))
        bad = []
        for I in proper:
            if not is_b_ideal(R, I):
                continue
            bad.extend({"ideal": I.elements, "u": u} for u in Q if not b_ideal_perturbation(R, I, u))
            absorbed = unit_perturbations(R, I)
            if not all(absorbed.values()):
                bad.append({"ideal": I.elements, **absorbed})
        rec.status = status_of(not bad)
        rec.payload = _first(bad)

    with timed(records, "the radical is a B-ideal", "J(R) has stable rank one") as rec:
        rec.status = status_of(is_b_ideal(R, jacobson_radical(R)))

    with timed(records, "largest absorbing ideal", "I_qb, and its translation description") as rec:
        iqb = compute_iqb(R)
        translation = iqb_by_translation(R)
        generated = additively_generated_by_units(R)
        agree = not generated or bool((translation == iqb.members).all())
        whole = not is_qb_ring(R).holds or iqb.is_whole()
        rec.status = status_of(None if iqb.partial else agree and whole)
        rec.payload = {"iqb": iqb.elements, "translation": members_of(translation),
                       "generated_by_units": generated, "partial": iqb.partial}
    return records


# ---------------------------------------------------------------------------
# exchange
# ---------------------------------------------------------------------------

def run_exchange(R: FiniteRing, seed: int) -> List[CheckRecord]:
    records: List[CheckRecord] = []

    with timed(records, "exchange ring", "every a has an idempotent p ∈ aR with 1 - p ∈ (1-a)R") as rec:
        failure = is_exchange_ring(R)
        rec.status = status_of(failure is None)
        rec.payload = {"element": failure}

    with timed(records, "maximal regular elements are quasi-invertible",
               "semiprimitive exchange rings") as rec:
        rec.status = status_of(maximal_regular_equals_qinv(R))

    with timed(records, "exchange characterization of QB", "three descriptions of QB agree") as rec:
        report = exchange_qb_equivalence(R)
        rec.status = status_of(report.agree)
        rec.payload = report.to_payload()

    monoid = None
    with timed(records, "V(R) fragment", "idempotent classes up to M2(R)") as rec:
        kmax = 2 if R.order <= CONFIG["level2_cap"] else 1
        monoid = vr_monoid(R, kmax)
        bad = [t["ideal"] for t in monoid.traces if not t["order_ideal"]]
        rec.status = status_of(not bad)
        rec.payload = monoid.to_payload()

    if monoid is not None:
        with timed(records, "orthogonal cancellation", "a + b1 = a + b2 is resolved by orthogonal ideals") as rec:
            sweep = monoid_orthogonal_cancellation(R, monoid)
            rec.status = sweep.status
            rec.payload = sweep.to_payload()
        with timed(records, "refinement", "x1 + x2 = y1 + y2 refines inside the fragment") as rec:
            sweep = monoid_refinement_check(R, monoid)
            rec.status = sweep.status
            rec.payload = sweep.to_payload()
    return records


# ---------------------------------------------------------------------------
# Registry and orchestration
# ---------------------------------------------------------------------------

SUITES: Dict[str, Suite] = {s.name: s for s in (
    Suite("quasi-inverse-family", "quasi-inverse witnesses, derived quasi-inverses, extensions through R_q⁻¹",
          run_quasi_inverse_family, "thm2.3"),
    Suite("extension-order", "the order ≤ on regular elements and its decompositions",
          run_extension_order, "prop2.5"),
    Suite("closure-laws", "laws of cl, quotients, B implies QB", run_closure_laws, "lemma3.2"),
    Suite("mirror-reducer", "reducers for ax + b = 1 built from the mirror pair", run_mirror_reducer, "lemma3.5"),
    Suite("left-right-symmetry", "cl(R_q⁻¹) = R iff cr(R_q⁻¹) = R; opposite rings",
          run_left_right_symmetry, "thm3.6"),
    Suite("nonunital", "quasi-adversibles, unitization, ideals as rings without unit", run_nonunital, "sec4"),
    Suite("skew-corners", "corner quasi-invertibility, corner criteria, extension into R_q⁻¹",
          run_skew_corners, "sec5"),
    Suite("matrix-reduction", "unimodular rows of M2(R) and defect corners", run_matrix_reduction, "thm6.4"),
    Suite("extensions", "extension criterion, lifting, B-ideals and I_qb", run_extensions, "sec7"),
    Suite("exchange", "exchange rings, maximal regular elements and V(R)", run_exchange, "sec8"),
)}

SUITE_ALIASES: Dict[str, str] = {s.alias: s.name for s in SUITES.values()}


def suite_names(selection: str) -> List[str]:
    if selection == "all":
        return list(SUITES)
    selection = SUITE_ALIASES.get(selection, selection)
    if selection not in SUITES:
        raise KeyError(f"Unknown suite: {selection}")
    return [selection]


def _run_one(args: Tuple[RingSpec, str, int, dict]) -> List[CheckRecord]:
    spec, name, seed, overrides = args
    CONFIG.update(overrides)
    R = build_ring(spec)
    return _guarded(SUITES[name], R, seed)


def _guarded(suite: Suite, R: FiniteRing, seed: int) -> List[CheckRecord]:
    try:
        records = suite.runner(R, seed)
    except QBRError as exc:
        records = [CheckRecord(name=suite.name, status="skipped", payload=exc.to_payload())]
    for r in records:
        r.reference = f"{suite.name}: {r.reference}" if r.reference else suite.name
    return records


def run_suites(spec: RingSpec, selection: str, seed: int, jobs: Optional[int] = None,
               ring: Optional[FiniteRing] = None) -> List[CheckRecord]:
    names = suite_names(selection)
    jobs = CONFIG["jobs"] if jobs is None else jobs
    if jobs <= 1 or len(names) == 1:
        R = build_ring(spec) if ring is None else ring
        out: List[CheckRecord] = []
        for i, name in enumerate(names, 1):
            console.stage(i, name)
            records = _guarded(SUITES[name], R, seed)
            _summarize(records)
            out.extend(records)
        return out
    overrides = {k: CONFIG[k] for k in ("reduce_rows", "sweep_cap", "qi_sweep_cap", "level2_cap",
                                        "closure_cap", "order_cap", "ideal_cap", "random_subsets", "verbose")}
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        batches = list(pool.map(_run_one, [(spec, name, seed, overrides) for name in names]))
    out = []
    for i, (name, records) in enumerate(zip(names, batches), 1):
        console.stage(i, name)
        _summarize(records)
        out.extend(records)
    return out


def _summarize(records: List[CheckRecord]) -> None:
    for r in records:
        line = f"{r.name} ({r.wall_time:.2f}s)"
        if r.status == "pass":
            console.success(line)
        elif r.status == "fail":
            console.error(line)
        else:
            console.warn(f"{line}: {r.status}")
