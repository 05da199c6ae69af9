"""
Quasi-invertibility

u is quasi-invertible when (1 - ua) ⊥ (1 - bu) for some a, b, where s ⊥ t means
sRt = tRs = 0. Any partial inverse of a quasi-invertible element is a
quasi-inverse for it, so a single normalized partial inverse decides
membership. The exhaustive (a, b) search is kept as an oracle.

Rings without identity use adverses instead: x is quasi-adversible when
(x + b - xb) ⊥ (x + c - cx), with orthogonality read intrinsically.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from src import console
from src.errors import ConstructionFailed, InvalidWitness, NotAPartialInverse, PreconditionViolated, StageInvariantFailed
from src.regular import extends, partial_inverse
from src.rings import FiniteRing, Mask


# ---------------------------------------------------------------------------
# Central orthogonality
# ---------------------------------------------------------------------------

def centrally_orthogonal(R: FiniteRing, x: int, y: int, intrinsic: Optional[bool] = None) -> bool:
    """
    xRy = 0 and yRx = 0. The intrinsic form also demands xy = yx = 0, which is
    what orthogonality inside any unitization amounts to. It defaults to on for
    rings without identity.
    """
    R.check(x, y)
    intrinsic = not R.unital if intrinsic is None else intrinsic
    if intrinsic and (R.mul[x, y] != 0 or R.mul[y, x] != 0):
        return False
    if (R.mul[R.mul[x, :], y] != 0).any():
        return False
    return not (R.mul[R.mul[y, :], x] != 0).any()


def orthogonal_to(R: FiniteRing, s: int, T: NDArray[np.intp], intrinsic: bool = False) -> Mask:
    """Mask over T of the t with s ⊥ t."""
    sR = R.mul[s, :]
    ok = ~(R.mul[sR[:, None], T[None, :]] != 0).any(axis=0)
    ok &= ~(R.mul[R.mul[T[:, None], R.elements[None, :]], s] != 0).any(axis=1)
    if intrinsic:
        ok &= (R.mul[s, T] == 0) & (R.mul[T, s] == 0)
    return ok


def find_orthogonal_pair(R: FiniteRing, S: NDArray[np.intp], T: NDArray[np.intp],
                         intrinsic: bool = False) -> Optional[Tuple[int, int]]:
    """First (i, j) with S[i] ⊥ T[j], scanning distinct values of S in index order."""
    T_values, T_first = np.unique(T, return_index=True)
    S_values, S_first = np.unique(S, return_index=True)
    for s, i in zip(S_values, S_first):
        hits = np.flatnonzero(orthogonal_to(R, int(s), T_values, intrinsic))
        if hits.size:
            return int(i), int(T_first[hits[0]])
    return None


# ---------------------------------------------------------------------------
# Quasi-invertibility in unital rings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QIWitness:
    """v is a quasi-inverse for u: uvu = u, vuv = v and (1 - uv) ⊥ (1 - vu)."""
    u: int
    v: int

    def to_payload(self) -> dict:
        return {"u": self.u, "v": self.v}

    def valid_in(self, R: FiniteRing) -> bool:
        u, v = self.u, self.v
        return (R.times(u, v, u) == u and R.times(v, u, v) == v
                and centrally_orthogonal(R, R.co(R.times(u, v)), R.co(R.times(v, u))))


def quasi_invertible(R: FiniteRing, u: int) -> Optional[QIWitness]:
    R.require_unital("quasi_invertible")
    R.check(u)
    v = partial_inverse(R, u)
    if v is None:
        return None
    if centrally_orthogonal(R, R.co(R.times(u, v)), R.co(R.times(v, u))):
        return QIWitness(u, v)
    return None


def quasi_invertible_exhaustive(R: FiniteRing, u: int) -> Optional[Tuple[int, int]]:
    """Search every (a, b) for (1 - ua) ⊥ (1 - bu). Returns the first pair found."""
    one = R.require_unital("quasi_invertible_exhaustive")
    E = R.sub[one, R.mul[u, :]]
    F = R.sub[one, R.mul[:, u]]
    return find_orthogonal_pair(R, E, F)


def qinv_mask(R: FiniteRing) -> Mask:
    """R_q⁻¹ as a mask, decided for all u at once from the first normalized partial inverse."""
    one = R.require_unital("qinv_mask")

    def build() -> Mask:
        e = R.elements
        uvu = R.mul[R.mul, e[:, None]]
        hit = uvu == e[:, None]
        regular = hit.any(axis=1)
        v = hit.argmax(axis=1)
        v = R.mul[R.mul[v, e], v]
        left = R.sub[one, R.mul[e, v]]
        right = R.sub[one, R.mul[v, e]]
        lr = R.mul[R.mul[left[:, None], e[None, :]], right[:, None]]
        rl = R.mul[R.mul[right[:, None], e[None, :]], left[:, None]]
        return regular & ~(lr != 0).any(axis=1) & ~(rl != 0).any(axis=1)

    return R.memo("qinv", build)


def quasi_inverse_canonical(R: FiniteRing, u: int, a: int, b: int) -> int:
    """v = a + b - aub for a pair with (1 - ua) ⊥ (1 - bu)."""
    R.require_unital("quasi_inverse_canonical")
    left, right = R.co(R.times(u, a)), R.co(R.times(b, u))
    if not centrally_orthogonal(R, left, right):
        raise PreconditionViolated("(1-ua) and (1-bu) are not centrally orthogonal",
                                   equation="(1-ua) ⊥ (1-bu)", u=u, a=a, b=b)
    v = R.minus(R.plus(a, b), R.times(a, u, b))
    uv, vu = R.times(u, v), R.times(v, u)
    posts = [
        ("uvu = u", R.times(uv, u) == u),
        ("1-uv = (1-ua)(1-ub)", R.co(uv) == R.times(left, R.co(R.times(u, b)))),
        ("1-vu = (1-au)(1-bu)", R.co(vu) == R.times(R.co(R.times(a, u)), right)),
        ("(1-uv) ⊥ (1-vu)", centrally_orthogonal(R, R.co(uv), R.co(vu))),
    ]
    for equation, holds in posts:
        if not holds:
            raise StageInvariantFailed(f"canonical quasi-inverse violates {equation}",
                                       equation=equation, u=u, a=a, b=b, v=v)
    return v


@dataclass
class FamilyCheck:
    """A derived quasi-inverse together with the relations checked for it."""
    v_prime: int
    relations: Dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.relations.values())

    def failures(self) -> list:
        return [name for name, holds in self.relations.items() if not holds]


def _require_witness(R: FiniteRing, w: QIWitness) -> None:
    R.require_unital("quasi-inverse witness")
    R.check(w.u, w.v)
    if not w.valid_in(R):
        raise InvalidWitness(f"{w.v} is not a normalized quasi-inverse for {w.u}", u=w.u, v=w.v)


def quasi_inverse_family(R: FiniteRing, w: QIWitness, a: int, b: int) -> FamilyCheck:
    """
    v' = v + a(1 - uv) + (1 - vu)b is again a quasi-inverse for u. Records the
    orthogonality, factorization and absorption relations, and the equivalence
    1 - uv ~ 1 - uv' (likewise for the vu side).
    """
    _require_witness(R, w)
    u, v = w.u, w.v
    e, f = R.co(R.times(u, v)), R.co(R.times(v, u))
    v2 = R.total(v, R.times(a, e), R.times(f, b))
    e2, f2 = R.co(R.times(u, v2)), R.co(R.times(v2, u))
    check = FamilyCheck(v2)
    rel = check.relations
    rel["uv'u = u"] = R.times(u, v2, u) == u
    rel["(1-uv') ⊥ (1-v'u)"] = centrally_orthogonal(R, e2, f2)
    rel["(1-uv') ⊥ (1-vu)"] = centrally_orthogonal(R, e2, f)
    rel["(1-uv) ⊥ (1-v'u)"] = centrally_orthogonal(R, e, f2)
    rel["1-uv' = (1-ua)(1-uv)"] = e2 == R.times(R.co(R.times(u, a)), e)
    rel["1-v'u = (1-vu)(1-bu)"] = f2 == R.times(f, R.co(R.times(b, u)))
    rel["1-uv = (1-uv)(1-uv')"] = e == R.times(e, e2)
    rel["1-uv' = (1-uv')(1-uv)"] = e2 == R.times(e2, e)
    rel["1-vu = (1-v'u)(1-vu)"] = f == R.times(f2, f)
    rel["1-v'u = (1-vu)(1-v'u)"] = f2 == R.times(f, f2)
    # e ~ e2 through the pair (e, e2): e·e2 = e and e2·e = e2
    rel["1-uv ~ 1-uv'"] = R.times(e, e2) == e and R.times(e2, e) == e2
    rel["1-vu ~ 1-v'u"] = R.times(f2, f) == f and R.times(f, f2) == f2
    if not check.ok:
        console.trace(f"family relation failures for u={u}, a={a}, b={b}: {check.failures()}")
    return check


def converse_partial_inverse(R: FiniteRing, w: QIWitness, v2: int) -> FamilyCheck:
    """Any partial inverse v' of u has the form v + (1 - vu)v' + v'(1 - uv)."""
    _require_witness(R, w)
    u, v = w.u, w.v
    R.check(v2)
    if R.times(u, v2, u) != u:
        raise NotAPartialInverse(f"{v2} is not a partial inverse for {u}", u=u, v_prime=v2)
    e, f = R.co(R.times(u, v)), R.co(R.times(v, u))
    check = FamilyCheck(v2)
    check.relations["(1-vu)v'(1-uv) = 0"] = R.times(f, v2, e) == 0
    check.relations["v' = v + (1-vu)v' + v'(1-uv)"] = v2 == R.total(v, R.times(f, v2), R.times(v2, e))
    check.relations["(1-uv') ⊥ (1-v'u)"] = centrally_orthogonal(R, R.co(R.times(u, v2)), R.co(R.times(v2, u)))
    return check


def extend_regular_via_qinv(R: FiniteRing, a: int, v: int) -> int:
    """
    Given a = ava with v quasi-invertible, build u in R_q⁻¹ with a ≤ u.

    With p = va, q = av, a partial inverse w of v, e = vw and f = wv, the
    idempotents p + (1-p)e and q + f(1-q) generate vR and Rv. Solving
    vs = p + (1-p)e and tv = q + f(1-q) gives u = tvs.
    """
    R.require_unital("extend_regular_via_qinv")
    R.check(a, v)
    if not qinv_mask(R)[v]:
        raise PreconditionViolated(f"{v} is not quasi-invertible", v=v)
    if R.times(a, v, a) != a:
        raise PreconditionViolated("ava != a", equation="ava = a", a=a, v=v)
    p, q = R.times(v, a), R.times(a, v)
    w = partial_inverse(R, v)
    e, f = R.times(v, w), R.times(w, v)
    right_target = R.plus(p, R.times(R.co(p), e))
    left_target = R.plus(q, R.times(f, R.co(q)))
    s_hits = np.flatnonzero(R.mul[v, :] == right_target)
    t_hits = np.flatnonzero(R.mul[:, v] == left_target)
    if s_hits.size == 0 or t_hits.size == 0:
        raise ConstructionFailed("no factorization vs = p + e' or tv = q + f'",
                                 a=a, v=v, p=p, q=q, e_prime=R.minus(right_target, p),
                                 f_prime=R.minus(left_target, q))
    s, t = int(s_hits[0]), int(t_hits[0])
    u = R.times(t, v, s)
    if not qinv_mask(R)[u]:
        raise StageInvariantFailed("constructed u is not quasi-invertible", a=a, v=v, u=u)
    if extends(R, a, u) is None:
        raise StageInvariantFailed("constructed u does not extend a", a=a, v=v, u=u)
    console.trace(f"extended {a} to {u} through v={v} (s={s}, t={t})")
    return u


# ---------------------------------------------------------------------------
# Adversibility, for rings with or without identity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QAWitness:
    """y is a quasi-adverse for x: x + y - xy and x + y - yx are orthogonal idempotents."""
    x: int
    y: int

    def to_payload(self) -> dict:
        return {"x": self.x, "y": self.y}


def _circle(R: FiniteRing) -> NDArray[np.integer]:
    """circle[a, b] = a + b - ab."""
    return R.memo("circle", lambda: R.sub[R.add, R.mul])


def adversibility_sets(R: FiniteRing) -> Dict[str, Mask]:
    """
    Left adversible: a + x - ax = 0 for some a. Right adversible: x + b - xb = 0
    for some b. Two-sided is both. Quasi-adversible as in quasi_adversible.
    """
    C = _circle(R)
    left = (C == 0).any(axis=0)
    right = (C == 0).any(axis=1)
    return {"left": left, "right": right, "two_sided": left & right, "quasi": qadversible_mask(R)}


def quasi_adversible(R: FiniteRing, x: int) -> Optional[QAWitness]:
    """
    1 - x viewed in a unitization has a partial inverse 1 - s exactly when
    x + s - xs - sx - x² + xsx = 0. The first such s is normalized to
    2s + x - sx - xs - s² + sxs, and the two defect idempotents are tested
    for intrinsic orthogonality.
    """
    R.check(x)
    e = R.elements
    xs, sx = R.mul[x, :], R.mul[:, x]
    value = R.sub[R.sub[R.add[x, e], xs], sx]
    value = R.add[R.sub[value, R.mul[x, x]], R.mul[xs, x]]
    hits = np.flatnonzero(value == 0)
    if hits.size == 0:
        return None
    s = int(hits[0])
    y = R.total(s, s, x, R.negate(R.times(s, x)), R.negate(R.times(x, s)),
                R.negate(R.times(s, s)), R.times(s, x, s))
    C = _circle(R)
    left, right = int(C[x, y]), int(C[y, x])
    if centrally_orthogonal(R, left, right, intrinsic=True):
        return QAWitness(x, y)
    return None


def quasi_adversible_exhaustive(R: FiniteRing, x: int) -> Optional[Tuple[int, int]]:
    """First (b, c) with (x + b - xb) ⊥ (x + c - cx), intrinsically."""
    C = _circle(R)
    return find_orthogonal_pair(R, C[x, :], C[:, x], intrinsic=True)


def qadversible_mask(R: FiniteRing) -> Mask:
    return R.memo("qadversible", lambda: np.array([quasi_adversible(R, int(x)) is not None
                                                   for x in range(R.order)], dtype=bool))
