"""
Ring Construction from Declarative Specs

A RingSpec is a JSON-compatible dict with a `kind` discriminator:

    {"kind": "zn", "n": 6}
    {"kind": "gf", "q": 9}
    {"kind": "matrix", "size": 2, "base": {...}}
    {"kind": "upper_triangular", "size": 2, "base": {...}}
    {"kind": "product", "factors": [{...}, {...}]}
    {"kind": "quotient", "base": {...}, "ideal_generators": [3]}
    {"kind": "corner", "base": {...}, "idempotent": 1}
    {"kind": "unitization", "base": {...}}
    {"kind": "ideal", "base": {...}, "generators": [2]}
    {"kind": "table", "add": [...], "mul": [...], "one": 1}

The module also ships the ring zoo used by the sweeps.
"""

import json
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from src.config import CONFIG
from src.errors import MalformedSpec, OrderCapExceeded
from src.ideals import ideal_as_ring, ideal_generated_by, quotient
from src.rings import FiniteRing, additive_exponent, index_dtype, restrict, verify_tables

RingSpec = Dict[str, Any]

_X = sympy.Symbol("x")

# Conway polynomials, lowest degree coefficient first.
CONWAY = {
    (2, 2): [1, 1, 1],
    (2, 3): [1, 1, 0, 1],
    (2, 4): [1, 1, 0, 0, 1],
    (3, 2): [2, 2, 1],
    (3, 3): [1, 2, 0, 1],
    (3, 4): [2, 0, 0, 2, 1],
    (5, 2): [2, 4, 1],
    (5, 3): [3, 3, 0, 1],
    (5, 4): [2, 4, 4, 0, 1],
    (7, 2): [3, 6, 1],
    (7, 3): [4, 0, 6, 1],
    (7, 4): [3, 4, 5, 0, 1],
}


def _prime_power(q: int) -> Tuple[int, int]:
    factors = sympy.factorint(q)
    if len(factors) != 1:
        raise MalformedSpec(f"GF({q}): order is not a prime power", q=q)
    (p, k), = factors.items()
    return int(p), int(k)


def is_irreducible_mod(coeffs: Sequence[int], p: int) -> bool:
    """Irreducibility of sum(coeffs[i] * X^i) over F_p, certified by sympy."""
    poly = sympy.Poly(list(reversed(coeffs)), _X, modulus=p)
    return bool(poly.is_irreducible)


def field_modulus(p: int, k: int) -> List[int]:
    """Shipped Conway polynomial, or the first monic irreducible in lexicographic order."""
    if (p, k) in CONWAY:
        coeffs = CONWAY[(p, k)]
        if not is_irreducible_mod(coeffs, p):
            raise MalformedSpec(f"shipped modulus for GF({p}^{k}) is reducible", coeffs=coeffs)
        return coeffs
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        coeffs = low + [1]
        if coeffs[0] and is_irreducible_mod(coeffs, p):
            return coeffs
    raise MalformedSpec(f"no irreducible polynomial of degree {k} over F_{p}")


def _poly_label(coeffs: Sequence[int]) -> str:
    terms = []
    for i in reversed(range(len(coeffs))):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        coef = "" if (c == 1 and i > 0) else str(c)
        terms.append(coef + mono)
    return "+".join(terms)


# ---------------------------------------------------------------------------
# Elementary families
# ---------------------------------------------------------------------------

def _from_digits(digits: np.ndarray, radix: Sequence[int]) -> np.ndarray:
    """Index of each row of digits under the mixed radix."""
    scales = np.cumprod([1] + list(radix[:-1]), dtype=np.int64)
    return (digits.astype(np.int64) * scales).sum(axis=-1)


def _all_digits(radix: Sequence[int]) -> np.ndarray:
    n = int(np.prod(radix, dtype=np.int64))
    idx = np.arange(n, dtype=np.int64)
    cols = []
    for r in radix:
        idx, d = np.divmod(idx, r)
        cols.append(d)
    return np.stack(cols, axis=1)


def _check_cap(order: int, label: str) -> None:
    cap = CONFIG["order_cap"]
    if order > cap:
        raise OrderCapExceeded(f"{label} would have {order} elements (cap {cap})", order=order, cap=cap)


def zn(n: int) -> FiniteRing:
    if n < 1:
        raise MalformedSpec(f"Z_{n}: modulus must be positive")
    _check_cap(n, f"Z{n}")
    e = np.arange(n, dtype=np.int64)
    dtype = index_dtype(n)
    return FiniteRing(
        label=f"Z{n}",
        add=((e[:, None] + e[None, :]) % n).astype(dtype),
        mul=((e[:, None] * e[None, :]) % n).astype(dtype),
        neg=((-e) % n).astype(dtype),
        one=1 % n if n > 1 else 0,
        layout={"kind": "zn", "radix": (n,)},
    )


def galois_field(q: int) -> FiniteRing:
    p, k = _prime_power(q)
    if k == 1:
        F = zn(p)
        return FiniteRing(label=f"F{p}", add=F.add, mul=F.mul, neg=F.neg, one=F.one, layout=F.layout)
    if k > 4:
        raise MalformedSpec(f"GF({q}): extension degree {k} above 4 is not supported")
    _check_cap(q, f"GF({q})")
    modulus = field_modulus(p, k)

    # companion matrix of the modulus acts as multiplication by the generator
    C = np.zeros((k, k), dtype=np.int64)
    C[1:, :-1] = np.eye(k - 1, dtype=np.int64)
    C[:, -1] = [(-c) % p for c in modulus[:k]]
    powers = [np.eye(k, dtype=np.int64)]
    for _ in range(1, k):
        powers.append((C @ powers[-1]) % p)
    digits = _all_digits([p] * k)
    mats = np.einsum("ai,ijk->ajk", digits, np.stack(powers)) % p
    prod_digits = np.einsum("ajk,bk->abj", mats, digits) % p
    radix = [p] * k
    dtype = index_dtype(q)
    add = _from_digits((digits[:, None, :] + digits[None, :, :]) % p, radix)
    mul = _from_digits(prod_digits, radix)
    neg = _from_digits((-digits) % p, radix)
    return FiniteRing(
        label=f"GF({q})[{_poly_label(modulus)}]",
        add=add.astype(dtype),
        mul=mul.astype(dtype),
        neg=neg.astype(dtype),
        one=1,
        layout={"kind": "gf", "radix": tuple(radix), "modulus": modulus},
    )


def _matrix_like(base: FiniteRing, size: int, positions: List[Tuple[int, int]], kind: str, label: str) -> FiniteRing:
    b = base.order
    m = len(positions)
    order = b ** m
    _check_cap(order, label)
    radix = [b] * m
    D = _all_digits(radix)
    slot = {pos: t for t, pos in enumerate(positions)}
    scales = np.cumprod([1] + radix[:-1], dtype=np.int64)
    dtype = index_dtype(order)

    add = np.zeros((order, order), dtype=np.int32)
    mul = np.zeros((order, order), dtype=np.int32)
    for t, (i, j) in enumerate(positions):
        add += base.add[D[:, None, t], D[None, :, t]].astype(np.int32) * int(scales[t])
        acc = None
        for l in range(size):
            if (i, l) not in slot or (l, j) not in slot:
                continue
            term = base.mul[D[:, None, slot[(i, l)]], D[None, :, slot[(l, j)]]]
            acc = term if acc is None else base.add[acc, term]
        if acc is not None:
            mul += acc.astype(np.int32) * int(scales[t])
    neg = _from_digits(base.neg[D], radix)

    one = None
    if base.one is not None:
        digits = [base.one if i == j else 0 for (i, j) in positions]
        one = int(sum(d * s for d, s in zip(digits, scales)))
    return FiniteRing(
        label=label,
        add=add.astype(dtype),
        mul=mul.astype(dtype),
        neg=neg.astype(dtype),
        one=one,
        layout={"kind": kind, "radix": tuple(radix), "base": base, "size": size, "positions": positions},
    )


def matrix_ring(base: FiniteRing, size: int) -> FiniteRing:
    positions = [(i, j) for i in range(size) for j in range(size)]
    return _matrix_like(base, size, positions, "matrix", f"M{size}({base.label})")


def upper_triangular(base: FiniteRing, size: int) -> FiniteRing:
    positions = [(i, j) for i in range(size) for j in range(size) if i <= j]
    return _matrix_like(base, size, positions, "triangular", f"T{size}({base.label})")


def product_ring(factors: Sequence[FiniteRing]) -> FiniteRing:
    if not factors:
        raise MalformedSpec("product of no factors")
    radix = [f.order for f in factors]
    label = "x".join(f.label for f in factors)
    order = int(np.prod(radix, dtype=np.int64))
    _check_cap(order, label)
    D = _all_digits(radix)
    comps_add = np.stack([f.add[D[:, None, t], D[None, :, t]] for t, f in enumerate(factors)], axis=-1)
    comps_mul = np.stack([f.mul[D[:, None, t], D[None, :, t]] for t, f in enumerate(factors)], axis=-1)
    comps_neg = np.stack([f.neg[D[:, t]] for t, f in enumerate(factors)], axis=-1)
    one = None
    if all(f.one is not None for f in factors):
        one = int(_from_digits(np.array([f.one for f in factors]), radix))
    dtype = index_dtype(order)
    return FiniteRing(
        label=label,
        add=_from_digits(comps_add, radix).astype(dtype),
        mul=_from_digits(comps_mul, radix).astype(dtype),
        neg=_from_digits(comps_neg, radix).astype(dtype),
        one=one,
        layout={"kind": "product", "radix": tuple(radix), "factors": list(factors)},
    )


def unitization(R: FiniteRing) -> FiniteRing:
    """
    R ⊕ Z_m with (r, k)(s, l) = (rs + l·r + k·s, kl), m the additive exponent.

    Element (r, k) has index k·|R| + r, so the zero keeps index 0.
    """
    n = R.order
    m = max(additive_exponent(R), 2)
    order = n * m
    label = f"{R.label}+Z{m}"
    _check_cap(order, label)
    multiples = np.zeros((m, n), dtype=np.int64)
    for k in range(1, m):
        multiples[k] = R.add[multiples[k - 1], R.elements]
    idx = np.arange(order, dtype=np.int64)
    k, r = np.divmod(idx, n)
    K1, K2 = k[:, None], k[None, :]
    R1, R2 = r[:, None], r[None, :]
    add = ((K1 + K2) % m) * n + R.add[R1, R2]
    core = R.add[R.add[R.mul[R1, R2], multiples[K2, R1]], multiples[K1, R2]]
    mul = ((K1 * K2) % m) * n + core
    neg = ((-k) % m) * n + R.neg[r]
    dtype = index_dtype(order)
    return FiniteRing(
        label=label,
        add=add.astype(dtype),
        mul=mul.astype(dtype),
        neg=neg.astype(dtype),
        one=n,
        layout={"kind": "unitization", "radix": (n, m), "base": R},
    )


def unitization_embedding(R: FiniteRing) -> np.ndarray:
    """r ↦ (r, 0), which is just the identity on indices."""
    return np.arange(R.order)


def corner_ring(R: FiniteRing, e: int) -> FiniteRing:
    R.check(e)
    if R.times(e, e) != e:
        raise MalformedSpec(f"corner element {e} of {R.label} is not idempotent", element=e)
    members = np.unique(R.mul[R.mul[e, :], e])
    ring, _ = restrict(R, members, label=f"{R.describe(e)}·{R.label}·{R.describe(e)}", one=e, kind="corner")
    return ring


def table_ring(add: Sequence, mul: Sequence, one: Optional[int] = None, label: str = "table") -> FiniteRing:
    add_t = np.asarray(add, dtype=np.int64)
    mul_t = np.asarray(mul, dtype=np.int64)
    if add_t.ndim == 1:
        n = int(round(np.sqrt(add_t.size)))
        if n * n != add_t.size:
            raise MalformedSpec("table rings need square tables")
        add_t = add_t.reshape(n, n)
        mul_t = mul_t.reshape(n, n)
    n = add_t.shape[0]
    if add_t.shape != (n, n) or mul_t.shape != (n, n):
        raise MalformedSpec("add and mul tables must both be n×n", add=list(add_t.shape), mul=list(mul_t.shape))
    _check_cap(n, label)
    if add_t.min() < 0 or add_t.max() >= n or mul_t.min() < 0 or mul_t.max() >= n:
        raise MalformedSpec("table entries out of range")
    if one is not None and not 0 <= one < n:
        raise MalformedSpec(f"identity index {one} out of range")
    zero_hits = add_t == 0
    if not zero_hits.any(axis=1).all():
        raise MalformedSpec("some element has no additive inverse", law="additive inverse")
    neg = zero_hits.argmax(axis=1)
    dtype = index_dtype(n)
    ring = FiniteRing(label=label, add=add_t.astype(dtype), mul=mul_t.astype(dtype),
                      neg=neg.astype(dtype), one=one, layout={"kind": "table"})
    failure = verify_tables(ring)
    if failure is not None:
        law, witness = failure
        raise MalformedSpec(f"{label}: {law} fails at {witness}", law=law, witness=list(witness))
    return ring


# ---------------------------------------------------------------------------
# Spec dispatch
# ---------------------------------------------------------------------------

def _need(spec: RingSpec, key: str) -> Any:
    if key not in spec:
        raise MalformedSpec(f"ring spec of kind {spec.get('kind')!r} needs {key!r}", spec=spec)
    return spec[key]


def build_ring(spec: RingSpec) -> FiniteRing:
    """Construct the ring a spec describes. Deterministic in the spec."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise MalformedSpec("ring spec must be an object with a 'kind'", spec=spec)
    kind = spec["kind"]
    try:
        if kind == "zn":
            return zn(int(_need(spec, "n")))
        if kind == "gf":
            return galois_field(int(_need(spec, "q")))
        if kind == "matrix":
            return matrix_ring(build_ring(_need(spec, "base")), int(_need(spec, "size")))
        if kind == "upper_triangular":
            return upper_triangular(build_ring(_need(spec, "base")), int(_need(spec, "size")))
        if kind == "product":
            return product_ring([build_ring(f) for f in _need(spec, "factors")])
        if kind == "quotient":
            base = build_ring(_need(spec, "base"))
            gens = [int(g) for g in spec.get("ideal_generators", [])]
            base.check(*gens)
            Q, _ = quotient(base, ideal_generated_by(base, gens))
            return Q
        if kind == "corner":
            base = build_ring(_need(spec, "base"))
            return corner_ring(base, int(_need(spec, "idempotent")))
        if kind == "unitization":
            return unitization(build_ring(_need(spec, "base")))
        if kind == "ideal":
            base = build_ring(_need(spec, "base"))
            gens = [int(g) for g in _need(spec, "generators")]
            base.check(*gens)
            ring, _ = ideal_as_ring(ideal_generated_by(base, gens))
            return ring
        if kind == "table":
            one = spec.get("one")
            return table_ring(_need(spec, "add"), _need(spec, "mul"),
                              None if one is None else int(one), spec.get("label", "table"))
    except (TypeError, ValueError) as exc:
        raise MalformedSpec(f"bad field in {kind!r} spec: {exc}", spec=spec) from exc
    raise MalformedSpec(f"unknown ring kind {kind!r}", spec=spec)


def load_spec(path: str) -> RingSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedSpec(f"{path}: not valid JSON ({exc})") from exc
    except OSError as exc:
        raise MalformedSpec(f"{path}: cannot read spec ({exc})") from exc


def matrix_index(R: FiniteRing, rows: Sequence[Sequence[int]]) -> int:
    """Index of a matrix given as rows of base-ring indices."""
    if R.layout.get("kind") not in ("matrix", "triangular"):
        raise MalformedSpec(f"{R.label} is not a matrix ring")
    return R.encode([rows[i][j] for (i, j) in R.layout["positions"]])


def matrix_unit(R: FiniteRing, i: int, j: int) -> int:
    base: FiniteRing = R.layout["base"]
    size = R.layout["size"]
    rows = [[0] * size for _ in range(size)]
    rows[i][j] = base.require_unital("matrix units")
    return matrix_index(R, rows)


# ---------------------------------------------------------------------------
# The ring zoo
# ---------------------------------------------------------------------------

def _z(n: int) -> RingSpec:
    return {"kind": "zn", "n": n}


def _m(size: int, base: RingSpec) -> RingSpec:
    return {"kind": "matrix", "size": size, "base": base}


def _t(size: int, base: RingSpec) -> RingSpec:
    return {"kind": "upper_triangular", "size": size, "base": base}


ZOO: Dict[str, RingSpec] = {
    **{f"Z{n}": _z(n) for n in range(2, 13)},
    "F4": {"kind": "gf", "q": 4},
    "F8": {"kind": "gf", "q": 8},
    "F9": {"kind": "gf", "q": 9},
    "M2F2": _m(2, _z(2)),
    "M2F3": _m(2, _z(3)),
    "M2Z4": _m(2, _z(4)),
    "T2F2": _t(2, _z(2)),
    "T2F3": _t(2, _z(3)),
    "T3F2": _t(3, _z(2)),
    "F2xF3": {"kind": "product", "factors": [_z(2), _z(3)]},
    "F2xF2": {"kind": "product", "factors": [_z(2), _z(2)]},
    "Z2xZ4": {"kind": "product", "factors": [_z(2), _z(4)]},
    # T2(F2) / J: entries (0,0), (0,1), (1,1) with e12 = index 2
    "T2F2/J": {"kind": "quotient", "base": _t(2, _z(2)), "ideal_generators": [2]},
    "Z12/4": {"kind": "quotient", "base": _z(12), "ideal_generators": [4]},
    # M2(Z4) modulo 2·M2(Z4); 2·e11 has index 2
    "M2Z4/2": {"kind": "quotient", "base": _m(2, _z(4)), "ideal_generators": [2]},
    "e11M2F2e11": {"kind": "corner", "base": _m(2, _z(2)), "idempotent": 1},
}

# Rings without unit, presented as ideals of unital rings.
NONUNITAL_ZOO: Dict[str, RingSpec] = {
    "2Z4": {"kind": "ideal", "base": _z(4), "generators": [2]},
    "2Z8": {"kind": "ideal", "base": _z(8), "generators": [2]},
    "4Z8": {"kind": "ideal", "base": _z(8), "generators": [4]},
    "2Z6": {"kind": "ideal", "base": _z(6), "generators": [2]},
    "2Z12": {"kind": "ideal", "base": _z(12), "generators": [2]},
    "J(T2F2)": {"kind": "ideal", "base": _t(2, _z(2)), "generators": [2]},
    # strictly upper triangular 3x3 over F2: e12 and e23 have indices 2 and 16
    "N3F2": {"kind": "ideal", "base": _t(3, _z(2)), "generators": [2, 16]},
}

ZOO_ORDERS: Dict[str, int] = {
    **{f"Z{n}": n for n in range(2, 13)},
    "F4": 4, "F8": 8, "F9": 9, "M2F2": 16, "M2F3": 81, "M2Z4": 256,
    "T2F2": 8, "T2F3": 27, "T3F2": 64, "F2xF3": 6, "F2xF2": 4, "Z2xZ4": 8,
    "T2F2/J": 4, "Z12/4": 4, "M2Z4/2": 16, "e11M2F2e11": 2,
}


def zoo_names(max_order: Optional[int] = None) -> List[str]:
    names = list(ZOO)
    if max_order is not None:
        names = [n for n in names if ZOO_ORDERS[n] <= max_order]
    return names


def zoo_ring(name: str) -> FiniteRing:
    if name in ZOO:
        return build_ring(ZOO[name])
    if name in NONUNITAL_ZOO:
        return build_ring(NONUNITAL_ZOO[name])
    raise MalformedSpec(f"unknown zoo ring {name!r}")
