"""
Finite Rings as Operation Tables

A finite ring is stored as dense numpy tables over element indices 0..n-1,
with index 0 the additive zero. Arithmetic is a table lookup, which turns the
quantifier sweeps in the other modules into fancy indexing over whole rows.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from src.errors import ForeignElement, MalformedSpec, NonUnitalRing, NotAHomomorphism

Element = int
Mask = NDArray[np.bool_]
Table = NDArray[np.integer]


def index_dtype(n: int) -> type:
    """Smallest signed integer type that can index a ring of order n."""
    return np.int16 if n <= np.iinfo(np.int16).max else np.int32


@dataclass(frozen=True, eq=False)
class FiniteRing:
    """
    A unital or non-unital finite ring.

    `layout` describes how indices decode into structured coordinates
    (matrix entries, product components, polynomial coefficients). It is
    informational only; all algebra goes through the tables.
    """
    label: str
    add: Table
    mul: Table
    neg: Table
    one: Optional[int] = None
    layout: Dict[str, Any] = field(default_factory=dict)
    _memo: Dict[str, Any] = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return int(self.add.shape[0])

    @property
    def unital(self) -> bool:
        return self.one is not None

    @property
    def elements(self) -> NDArray[np.intp]:
        return np.arange(self.order)

    @property
    def sub(self) -> Table:
        """sub[a, b] = a - b."""
        return self.memo("sub", lambda: np.ascontiguousarray(self.add[:, self.neg]))

    def memo(self, key: str, build: Callable[[], Any]) -> Any:
        """Cache a derived structure on the ring. Rings are immutable, so entries never go stale."""
        if key not in self._memo:
            self._memo[key] = build()
        return self._memo[key]

    def check(self, *elements: int) -> None:
        for e in elements:
            if not isinstance(e, (int, np.integer)) or not 0 <= int(e) < self.order:
                raise ForeignElement(f"{e!r} is not an element of {self.label}", element=e, order=self.order)

    def require_unital(self, what: str) -> int:
        if self.one is None:
            raise NonUnitalRing(f"{what} needs a unital ring; {self.label} has no identity")
        return self.one

    # scalar arithmetic
    def plus(self, a: int, b: int) -> int:
        return int(self.add[a, b])

    def minus(self, a: int, b: int) -> int:
        return int(self.add[a, self.neg[b]])

    def times(self, *factors: int) -> int:
        acc = int(factors[0])
        for f in factors[1:]:
            acc = int(self.mul[acc, f])
        return acc

    def negate(self, a: int) -> int:
        return int(self.neg[a])

    def co(self, a: int) -> int:
        """1 - a."""
        return self.minus(self.require_unital("1 - a"), a)

    def total(self, *terms: int) -> int:
        acc = 0
        for t in terms:
            acc = int(self.add[acc, t])
        return acc

    # coordinates
    def encode(self, digits: Sequence[int]) -> int:
        radix = self.layout.get("radix")
        if radix is None or len(digits) != len(radix):
            raise MalformedSpec(f"{self.label} has no coordinate layout of length {len(digits)}")
        index, scale = 0, 1
        for d, r in zip(digits, radix):
            if not 0 <= int(d) < r:
                raise ForeignElement(f"coordinate {d} out of range {r} in {self.label}")
            index += int(d) * scale
            scale *= r
        return index

    def decode(self, index: int) -> Tuple[int, ...]:
        self.check(index)
        radix = self.layout.get("radix")
        if radix is None:
            return (int(index),)
        digits = []
        rest = int(index)
        for r in radix:
            rest, d = divmod(rest, r)
            digits.append(d)
        return tuple(digits)

    def describe(self, index: int) -> str:
        """Human label for an element, used in reports."""
        kind = self.layout.get("kind")
        digits = self.decode(index)
        if kind == "gf":
            terms = [f"{c}" if k == 0 else f"{c}a^{k}" for k, c in enumerate(digits) if c]
            return "+".join(terms) or "0"
        if kind in ("matrix", "triangular"):
            base: FiniteRing = self.layout["base"]
            size = self.layout["size"]
            positions = self.layout["positions"]
            rows = [["0"] * size for _ in range(size)]
            for (i, j), d in zip(positions, digits):
                rows[i][j] = base.describe(d)
            return "[" + ",".join("[" + ",".join(r) + "]" for r in rows) + "]"
        if kind == "product":
            parts = [f.describe(d) for f, d in zip(self.layout["factors"], digits)]
            return "(" + ",".join(parts) + ")"
        if kind == "unitization":
            base = self.layout["base"]
            r, k = digits
            return f"{base.describe(r)}+{k}"
        if kind in ("quotient", "corner", "subring"):
            inner: FiniteRing = self.layout["base"]
            return inner.describe(int(self.layout["members"][index]))
        return str(int(index))


# ---------------------------------------------------------------------------
# Basic operations
# ---------------------------------------------------------------------------

def arithmetic(R: FiniteRing, op: str, a: int, b: int = 0) -> int:
    """Single table lookup for op in {add, mul, neg, sub}."""
    R.check(a, b)
    if op == "add":
        return R.plus(a, b)
    if op == "mul":
        return R.times(a, b)
    if op == "neg":
        return R.negate(a)
    if op == "sub":
        return R.minus(a, b)
    raise ValueError(f"Unknown ring operation: {op}")


def right_units(R: FiniteRing) -> Mask:
    """u with some v such that uv = 1."""
    one = R.require_unital("right_units")
    return R.memo("right_units", lambda: (R.mul == one).any(axis=1))


def left_units(R: FiniteRing) -> Mask:
    """u with some v such that vu = 1."""
    one = R.require_unital("left_units")
    return R.memo("left_units", lambda: (R.mul == one).any(axis=0))


def units(R: FiniteRing) -> Mask:
    return R.memo("units", lambda: left_units(R) & right_units(R))


def one_sided_units(R: FiniteRing) -> Mask:
    return left_units(R) | right_units(R)


def inverse(R: FiniteRing, u: int) -> Optional[int]:
    one = R.require_unital("inverse")
    hits = np.flatnonzero((R.mul[u, :] == one) & (R.mul[:, u] == one))
    return int(hits[0]) if hits.size else None


def opposite(R: FiniteRing) -> FiniteRing:
    return FiniteRing(
        label=f"{R.label}^op",
        add=R.add,
        mul=np.ascontiguousarray(R.mul.T),
        neg=R.neg,
        one=R.one,
        layout=R.layout,
    )


def additive_exponent(R: FiniteRing) -> int:
    """Smallest m >= 1 with m·a = 0 for every a."""
    def build() -> int:
        acc = R.elements.copy()
        m = 1
        while acc.any():
            acc = R.add[acc, R.elements]
            m += 1
        return m
    return R.memo("additive_exponent", build)


def mask_of(R: FiniteRing, members: Iterable[int]) -> Mask:
    mask = np.zeros(R.order, dtype=bool)
    idx = np.fromiter((int(m) for m in members), dtype=np.intp)
    if idx.size:
        R.check(*idx.tolist())
        mask[idx] = True
    return mask


def members_of(mask: Mask) -> List[int]:
    return np.flatnonzero(mask).tolist()


# ---------------------------------------------------------------------------
# Table validation
# ---------------------------------------------------------------------------

def verify_tables(R: FiniteRing) -> Optional[Tuple[str, Tuple[int, ...]]]:
    """
    Full scan of the ring axioms.

    Returns None when every axiom holds, otherwise the name of the first
    failing law and a witnessing tuple of element indices.
    """
    n = R.order
    e = R.elements
    add, mul = R.add, R.mul

    bad = np.flatnonzero((add[0] != e) | (add[:, 0] != e))
    if bad.size:
        return "additive identity", (int(bad[0]),)
    bad = np.argwhere(add != add.T)
    if bad.size:
        return "additive commutativity", tuple(int(v) for v in bad[0])
    bad = np.flatnonzero(add[e, R.neg] != 0)
    if bad.size:
        return "additive inverse", (int(bad[0]),)

    for a in range(n):
        # (a+b)+c == a+(b+c)
        lhs = add[add[a, :], :]
        rhs = add[a, add]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return "additive associativity", (a, int(bad[0][0]), int(bad[0][1]))
        # (ab)c == a(bc)
        lhs = mul[mul[a, :], :]
        rhs = mul[a, mul]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return "multiplicative associativity", (a, int(bad[0][0]), int(bad[0][1]))
        # a(b+c) == ab+ac
        row = mul[a, :]
        bad = np.argwhere(mul[a, add] != add[row[:, None], row[None, :]])
        if bad.size:
            return "left distributivity", (a, int(bad[0][0]), int(bad[0][1]))
        col = mul[:, a]
        bad = np.argwhere(mul[add, a] != add[col[:, None], col[None, :]])
        if bad.size:
            return "right distributivity", (a, int(bad[0][0]), int(bad[0][1]))

    if R.one is not None:
        bad = np.flatnonzero((mul[R.one, :] != e) | (mul[:, R.one] != e))
        if bad.size:
            return "multiplicative identity", (int(bad[0]),)
    return None


# ---------------------------------------------------------------------------
# Subrings and homomorphisms
# ---------------------------------------------------------------------------

def restrict(R: FiniteRing, members: Sequence[int], label: str, one: Optional[int] = None,
             kind: str = "subring") -> Tuple[FiniteRing, NDArray[np.intp]]:
    """
    Relabel a subset closed under the ring operations as a ring of its own.

    Returns the new ring and the embedding (new index -> old index). The
    subset is sorted, so the zero keeps index 0.
    """
    members = np.unique(np.asarray(members, dtype=np.intp))
    if members.size == 0 or members[0] != 0:
        raise MalformedSpec(f"{label}: subset does not contain zero")
    pos = np.full(R.order, -1, dtype=np.intp)
    pos[members] = np.arange(members.size)
    grid = np.ix_(members, members)
    add = pos[R.add[grid]]
    mul = pos[R.mul[grid]]
    neg = pos[R.neg[members]]
    if (add < 0).any() or (mul < 0).any() or (neg < 0).any():
        raise MalformedSpec(f"{label}: subset is not closed under the ring operations")
    dtype = index_dtype(members.size)
    ring = FiniteRing(
        label=label,
        add=add.astype(dtype),
        mul=mul.astype(dtype),
        neg=neg.astype(dtype),
        one=None if one is None else int(pos[one]),
        layout={"kind": kind, "base": R, "members": members},
    )
    return ring, members


def subring_closure(R: FiniteRing, mask: Mask) -> Mask:
    mask = mask.copy()
    mask[0] = True
    while True:
        idx = np.flatnonzero(mask)
        grown = mask.copy()
        grid = np.ix_(idx, idx)
        grown[R.add[grid].ravel()] = True
        grown[R.mul[grid].ravel()] = True
        grown[R.neg[idx]] = True
        if (grown == mask).all():
            return grown
        mask = grown


def subring_generated_by(R: FiniteRing, gens: Iterable[int], unital: bool = True) -> Tuple[FiniteRing, NDArray[np.intp]]:
    """Smallest subring containing gens (and 1 when unital), with its embedding."""
    gens = list(gens)
    start = mask_of(R, gens)
    one = None
    if unital:
        one = R.require_unital("unital subring")
        start[one] = True
    mask = subring_closure(R, start)
    label = f"<{','.join(str(g) for g in gens)}>⊆{R.label}"
    return restrict(R, np.flatnonzero(mask), label, one=one)


def is_homomorphism(S: FiniteRing, R: FiniteRing, f: NDArray[np.intp]) -> bool:
    """f maps S into R, respecting addition and multiplication."""
    f = np.asarray(f)
    if f.shape != (S.order,) or f.min() < 0 or f.max() >= R.order:
        return False
    additive = (R.add[f[:, None], f[None, :]] == f[S.add]).all()
    multiplicative = (R.mul[f[:, None], f[None, :]] == f[S.mul]).all()
    return bool(additive and multiplicative)


def require_embedding(S: FiniteRing, R: FiniteRing, f: NDArray[np.intp]) -> None:
    if not is_homomorphism(S, R, f):
        raise NotAHomomorphism(f"map {S.label} -> {R.label} does not respect the ring operations")
    if np.unique(f).size != S.order:
        raise NotAHomomorphism(f"map {S.label} -> {R.label} is not injective")
