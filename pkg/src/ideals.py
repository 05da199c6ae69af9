"""
Two-sided ideals: generation, quotients, the Jacobson radical, primeness,
orthogonality and prime embeddings.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from src.config import CONFIG
from src.errors import DifferentRings, IdealCapExceeded, NotInIdeal
from src.rings import (FiniteRing, Mask, index_dtype, mask_of, require_embedding,
                       restrict, units)


@dataclass(frozen=True, eq=False)
class Ideal:
    ring: FiniteRing
    members: Mask
    # set when the ideal was assembled from a capped enumeration
    partial: bool = False

    @property
    def size(self) -> int:
        return int(self.members.sum())

    @property
    def elements(self) -> List[int]:
        return np.flatnonzero(self.members).tolist()

    @property
    def key(self) -> bytes:
        return np.packbits(self.members).tobytes()

    def __contains__(self, x: int) -> bool:
        return bool(self.members[int(x)])

    def require(self, *xs: int) -> None:
        for x in xs:
            if x not in self:
                raise NotInIdeal(f"{x} is not in the ideal", element=int(x), ideal=self.elements)

    def same_as(self, other: "Ideal") -> bool:
        return other.ring is self.ring and bool((other.members == self.members).all())

    def is_zero(self) -> bool:
        return self.size == 1

    def is_whole(self) -> bool:
        return self.size == self.ring.order


def ideal_closure(R: FiniteRing, mask: Mask) -> Mask:
    """Close a subset under +, -, and multiplication by R on either side."""
    mask = mask.copy()
    mask[0] = True
    while True:
        idx = np.flatnonzero(mask)
        grown = mask.copy()
        grown[R.add[np.ix_(idx, idx)].ravel()] = True
        grown[R.mul[:, idx].ravel()] = True
        grown[R.mul[idx, :].ravel()] = True
        grown[R.neg[idx]] = True
        if (grown == mask).all():
            return grown
        mask = grown


def is_ideal(R: FiniteRing, mask: Mask) -> bool:
    if not mask[0]:
        return False
    idx = np.flatnonzero(mask)
    return bool(mask[R.add[np.ix_(idx, idx)]].all()
                and mask[R.neg[idx]].all()
                and mask[R.mul[:, idx]].all()
                and mask[R.mul[idx, :]].all())


def ideal_generated_by(R: FiniteRing, gens: Iterable[int]) -> Ideal:
    return Ideal(R, ideal_closure(R, mask_of(R, gens)))


def zero_ideal(R: FiniteRing) -> Ideal:
    return ideal_generated_by(R, [])


def whole_ring(R: FiniteRing) -> Ideal:
    return Ideal(R, np.ones(R.order, dtype=bool))


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    if I.ring is not J.ring:
        raise DifferentRings("ideal sum across different rings")
    R = I.ring
    mask = np.zeros(R.order, dtype=bool)
    mask[R.add[np.ix_(I.elements, J.elements)].ravel()] = True
    return Ideal(R, mask)


def enumerate_ideals(R: FiniteRing, cap: Optional[int] = None) -> List[Ideal]:
    """
    All ideals reachable from principal ideals by repeated sums.

    Every ideal of a finite ring is a finite sum of principal ideals, so the
    fixpoint is the full lattice. Sorted by size, then by membership.
    """
    cap = CONFIG["ideal_cap"] if cap is None else cap

    def build() -> List[Ideal]:
        found: Dict[bytes, Ideal] = {}

        def admit(ideal: Ideal) -> bool:
            if ideal.key in found:
                return False
            found[ideal.key] = ideal
            if len(found) > cap:
                raise IdealCapExceeded(f"{R.label} has more than {cap} ideals",
                                       partial=list(found.values()), cap=cap)
            return True

        for a in range(R.order):
            admit(ideal_generated_by(R, [a]))

        frontier = list(found.values())
        while frontier:
            fresh = []
            current = list(found.values())
            for I in frontier:
                for J in current:
                    S = ideal_sum(I, J)
                    if admit(S):
                        fresh.append(S)
            frontier = fresh
        return sorted(found.values(), key=lambda I: (I.size, I.elements))

    return R.memo(f"ideals:{cap}", build)


def quotient(R: FiniteRing, I: Ideal) -> Tuple[FiniteRing, NDArray[np.intp]]:
    """
    R/I with cosets represented by their least element index.

    Returns the quotient ring and the projection as an index array.
    """
    if I.ring is not R:
        raise DifferentRings("ideal belongs to a different ring")
    cosets = R.add[:, I.elements]
    reps = cosets.min(axis=1)
    rep_set = np.unique(reps)
    pos = np.full(R.order, -1, dtype=np.intp)
    pos[rep_set] = np.arange(rep_set.size)
    projection = pos[reps]
    grid = np.ix_(rep_set, rep_set)
    dtype = index_dtype(rep_set.size)
    Q = FiniteRing(
        label=f"{R.label}/<{','.join(str(g) for g in I.elements[:4])}{'...' if I.size > 4 else ''}>",
        add=projection[R.add[grid]].astype(dtype),
        mul=projection[R.mul[grid]].astype(dtype),
        neg=projection[R.neg[rep_set]].astype(dtype),
        one=None if R.one is None else int(projection[R.one]),
        layout={"kind": "quotient", "base": R, "members": rep_set},
    )
    return Q, projection


def proper_quotients(R: FiniteRing) -> List[Tuple[Ideal, FiniteRing, NDArray[np.intp]]]:
    out = []
    for I in enumerate_ideals(R):
        if I.is_zero() or I.is_whole():
            continue
        Q, pi = quotient(R, I)
        out.append((I, Q, pi))
    return out


def jacobson_radical(R: FiniteRing) -> Ideal:
    """{x : 1 - rx is a unit for every r}."""
    one = R.require_unital("jacobson_radical")

    def build() -> Ideal:
        unit = units(R)
        members = unit[R.sub[one, R.mul]].all(axis=0)
        return Ideal(R, members)

    return R.memo("jacobson", build)


@dataclass(frozen=True)
class Primeness:
    semiprime: bool
    prime: bool
    semiprime_witness: Optional[int] = None
    prime_witness: Optional[Tuple[int, int]] = None

    def to_payload(self) -> dict:
        return {
            "semiprime": self.semiprime,
            "prime": self.prime,
            "semiprime_witness": self.semiprime_witness,
            "prime_witness": list(self.prime_witness) if self.prime_witness else None,
        }


def annihilated_pairs(R: FiniteRing) -> NDArray[np.bool_]:
    """Z[x, y] is True when xRy = 0. Symmetric in a semiprime ring."""
    def build() -> NDArray[np.bool_]:
        Z = np.empty((R.order, R.order), dtype=bool)
        for x in range(R.order):
            Z[x] = (R.mul[R.mul[x, :], :] == 0).all(axis=0)
        return Z
    return R.memo("annihilated_pairs", build)


def primeness(R: FiniteRing) -> Primeness:
    Z = annihilated_pairs(R)
    diag = np.flatnonzero(np.diag(Z)[1:]) + 1
    off = np.argwhere(Z[1:, 1:]) + 1
    semi_w = int(diag[0]) if diag.size else None
    prime_w = (int(off[0][0]), int(off[0][1])) if off.size else None
    return Primeness(semiprime=semi_w is None, prime=prime_w is None,
                     semiprime_witness=semi_w, prime_witness=prime_w)


def subsets_orthogonal(R: FiniteRing, S: Iterable[int], T: Iterable[int]) -> bool:
    """SRT = 0 and TRS = 0."""
    S, T = list(S), list(T)
    if not S or not T:
        return True
    Z = annihilated_pairs(R) if R.order <= CONFIG["closure_cap"] else None
    if Z is not None:
        return bool(Z[np.ix_(S, T)].all() and Z[np.ix_(T, S)].all())
    SR = R.mul[S, :]
    TR = R.mul[T, :]
    return bool((R.mul[SR][:, :, T] == 0).all() and (R.mul[TR][:, :, S] == 0).all())


def orthogonal_ideals(I: Ideal, J: Ideal) -> bool:
    """IJ = 0 = JI."""
    if I.ring is not J.ring:
        raise DifferentRings("orthogonality of ideals from different rings")
    R = I.ring
    grid_ij = R.mul[np.ix_(I.elements, J.elements)]
    grid_ji = R.mul[np.ix_(J.elements, I.elements)]
    return bool((grid_ij == 0).all() and (grid_ji == 0).all())


def ideal_as_ring(I: Ideal) -> Tuple[FiniteRing, NDArray[np.intp]]:
    """The ideal as a ring without unit, with its embedding."""
    R = I.ring
    return restrict(R, I.elements, label=f"I⊆{R.label}", kind="subring")


def is_primely_embedded(S: FiniteRing, R: FiniteRing, embedding: NDArray[np.intp]) -> bool:
    """
    Idempotents of S that are orthogonal in S stay orthogonal in R.
    """
    require_embedding(S, R, embedding)
    idem = np.flatnonzero(S.mul[S.elements, S.elements] == S.elements)
    ZS = annihilated_pairs(S)
    for i, p in enumerate(idem):
        for q in idem[i:]:
            if ZS[p, q] and ZS[q, p]:
                if not subsets_orthogonal(R, [int(embedding[p])], [int(embedding[q])]):
                    return False
    return True
