"""
The Jacobson algebra J = F_p<x, y | xy = 1>.

Every element is a finite sum of monomials yⁱxʲ. The products
e_ij = yⁱ(1 - yx)xʲ behave as matrix units, and sending yⁱxʲ to t^(i-j)
identifies J modulo their span with the Laurent polynomials F_p[t, t⁻¹].
Since J is infinite, orthogonality is certified against monomials and matrix
units up to a degree bound.
"""

import re
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
import sympy

from src.config import CONFIG
from src.errors import MalformedSpec

T = sympy.Symbol("t")

Monomial = Tuple[int, int]


def monomial_product(m: Monomial, n: Monomial) -> Monomial:
    """(yⁱxʲ)(yᵏxˡ) using xy = 1."""
    i, j = m
    k, l = n
    if j >= k:
        return i, j - k + l
    return i + k - j, l


@dataclass(frozen=True)
class JElement:
    p: int
    terms: Tuple[Tuple[Monomial, int], ...] = ()

    @classmethod
    def from_dict(cls, p: int, coeffs: Dict[Monomial, int]) -> "JElement":
        kept = tuple(sorted((m, c % p) for m, c in coeffs.items() if c % p))
        return cls(p, kept)

    @classmethod
    def scalar(cls, p: int, c: int) -> "JElement":
        return cls.from_dict(p, {(0, 0): c})

    @classmethod
    def monomial(cls, p: int, i: int, j: int, c: int = 1) -> "JElement":
        if i < 0 or j < 0:
            raise ValueError(f"exponents must be non-negative, got ({i}, {j})")
        return cls.from_dict(p, {(i, j): c})

    @property
    def coeffs(self) -> Dict[Monomial, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _same_field(self, other: "JElement") -> None:
        if other.p != self.p:
            raise ValueError(f"elements over F_{self.p} and F_{other.p} do not mix")

    def __add__(self, other: "JElement") -> "JElement":
        self._same_field(other)
        acc = self.coeffs
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return JElement.from_dict(self.p, acc)

    def __neg__(self) -> "JElement":
        return JElement.from_dict(self.p, {m: -c for m, c in self.terms})

    def __sub__(self, other: "JElement") -> "JElement":
        return self + (-other)

    def __mul__(self, other: "JElement") -> "JElement":
        self._same_field(other)
        acc: Dict[Monomial, int] = {}
        for (m, c), (n, d) in product(self.terms, other.terms):
            k = monomial_product(m, n)
            acc[k] = acc.get(k, 0) + c * d
        return JElement.from_dict(self.p, acc)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in self.terms:
            word = " ".join(f for f in (_power("y", i), _power("x", j)) if f)
            if not word:
                parts.append(str(c))
            else:
                parts.append(word if c == 1 else f"{c} {word}")
        return " + ".join(parts)


def _power(symbol: str, k: int) -> str:
    if k == 0:
        return ""
    return symbol if k == 1 else f"{symbol}^{k}"


def j_arithmetic(u: JElement, v: JElement, op: str) -> JElement:
    if op == "add":
        return u + v
    if op == "sub":
        return u - v
    if op == "mul":
        return u * v
    raise ValueError(f"Unknown operation: {op}")


# ---------------------------------------------------------------------------
# Literal syntax
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([xy])(?:\s*\^\s*(\d+))?|([+\-*]))")


def parse_jelement(text: str, p: int) -> JElement:
    """
    expression := ['-'] term (('+' | '-') term)*
    term       := [integer] factor* | factor+
    factor     := ('x' | 'y') ['^' integer], optionally joined by '*'

    Factors multiply left to right under xy = 1, so "x y" is 1 and "y x" is yx.
    """
    pos, sign = 0, 1
    total = JElement(p)
    term: Optional[JElement] = None
    text = text.strip()
    if not text:
        raise MalformedSpec("empty element literal")

    def close(current: Optional[JElement], s: int) -> JElement:
        if current is None:
            raise MalformedSpec(f"dangling operator in {text!r}")
        return total + (current if s > 0 else -current)

    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            raise MalformedSpec(f"cannot parse {text[pos:]!r} in {text!r}")
        pos = match.end()
        number, letter, exponent, operator = match.groups()
        if operator in ("+", "-"):
            if term is None and total.is_zero() and operator == "-":
                sign = -sign
                continue
            total = close(term, sign)
            term, sign = None, (1 if operator == "+" else -1)
        elif operator == "*":
            continue
        elif number is not None:
            factor = JElement.scalar(p, int(number))
            term = factor if term is None else term * factor
        else:
            k = int(exponent) if exponent is not None else 1
            factor = JElement.monomial(p, k, 0) if letter == "y" else JElement.monomial(p, 0, k)
            term = factor if term is None else term * factor
    return close(term, sign)


# ---------------------------------------------------------------------------
# Matrix units and the Laurent quotient
# ---------------------------------------------------------------------------

def one(p: int) -> JElement:
    return JElement.scalar(p, 1)


def generators(p: int) -> Tuple[JElement, JElement]:
    return JElement.monomial(p, 0, 1), JElement.monomial(p, 1, 0)


def matrix_unit(p: int, i: int, j: int) -> JElement:
    """e_ij = yⁱ(1 - yx)xʲ."""
    return JElement.from_dict(p, {(i, j): 1, (i + 1, j + 1): -1})


def laurent_image(u: JElement) -> sympy.Expr:
    """yⁱxʲ -> t^(i-j), coefficients reduced mod p."""
    acc: Dict[int, int] = {}
    for (i, j), c in u.terms:
        acc[i - j] = (acc.get(i - j, 0) + c) % u.p
    return sympy.Add(*[sympy.Integer(c) * T ** k for k, c in sorted(acc.items()) if c])


def laurent_coefficients(expr: sympy.Expr, p: int) -> Dict[int, int]:
    """Exponent -> coefficient mod p of a Laurent polynomial in t."""
    out: Dict[int, int] = {}
    for term in sympy.Add.make_args(sympy.expand(expr)):
        c, rest = term.as_coeff_Mul()
        k = 0 if rest == 1 else int(rest.as_base_exp()[1])
        out[k] = (out.get(k, 0) + int(c)) % p
    return {k: c for k, c in out.items() if c}


def in_matrix_ideal(u: JElement) -> bool:
    return not laurent_coefficients(laurent_image(u), u.p)


def monomials(p: int, bound: int) -> List[JElement]:
    return [JElement.monomial(p, i, j) for i in range(bound + 1) for j in range(bound + 1)]


def matrix_units(p: int, bound: int) -> List[JElement]:
    return [matrix_unit(p, i, j) for i in range(bound + 1) for j in range(bound + 1)]


@dataclass
class BoundedCertificate:
    holds: bool
    bound: int
    middles: int
    counterexample: Optional[str] = None

    def to_payload(self) -> dict:
        return {"holds": self.holds, "bound": self.bound, "middles": self.middles,
                "counterexample": self.counterexample, "kind": "bounded-certificate"}


def j_orthogonal_bounded(s: JElement, t: JElement, bound: Optional[int] = None) -> BoundedCertificate:
    """s·m·t = 0 and t·m·s = 0 for monomials and matrix units with indices up to the bound."""
    bound = CONFIG["degree_bound"] if bound is None else bound
    middles = monomials(s.p, bound) + matrix_units(s.p, bound)
    for m in middles:
        for left, right in ((s, t), (t, s)):
            if not (left * m * right).is_zero():
                return BoundedCertificate(False, bound, len(middles), counterexample=f"({left})·({m})·({right})")
    return BoundedCertificate(True, bound, len(middles))


# ---------------------------------------------------------------------------
# Demonstration
# ---------------------------------------------------------------------------

def _matrix_unit_law(p: int, bound: int) -> Optional[str]:
    for i, j, k, l in product(range(bound + 1), repeat=4):
        lhs = matrix_unit(p, i, j) * matrix_unit(p, k, l)
        rhs = matrix_unit(p, i, l) if j == k else JElement(p)
        if lhs != rhs:
            return f"e{i}{j}·e{k}{l}"
    return None


def _associativity(bound: int) -> Optional[str]:
    mons = list(product(range(bound + 1), repeat=2))
    for a, b, c in product(mons, repeat=3):
        if monomial_product(monomial_product(a, b), c) != monomial_product(a, monomial_product(b, c)):
            return f"{a}·{b}·{c}"
    return None


def random_element(p: int, rng: np.random.Generator, bound: int, terms: int = 3) -> JElement:
    coeffs: Dict[Monomial, int] = {}
    for _ in range(terms):
        i, j = (int(v) for v in rng.integers(bound + 1, size=2))
        coeffs[(i, j)] = coeffs.get((i, j), 0) + int(rng.integers(1, p))
    return JElement.from_dict(p, coeffs)


def _laurent_homomorphism(p: int, bound: int, samples: int, seed: int) -> Optional[str]:
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        u, v = random_element(p, rng, bound), random_element(p, rng, bound)
        lhs = laurent_coefficients(laurent_image(u * v), p)
        rhs = laurent_coefficients(laurent_image(u) * laurent_image(v), p)
        if lhs != rhs:
            return f"({u})·({v})"
    return None


def _quasi_inverse_pair(u: JElement, v: JElement, bound: int) -> Dict[str, bool]:
    p = u.p
    cu = one(p) - u * v
    cv = one(p) - v * u
    return {
        "uvu = u": u * v * u == u,
        "vuv = v": v * u * v == v,
        "(1-uv) ⊥ (1-vu)": j_orthogonal_bounded(cu, cv, bound).holds,
    }


def demo_claims(p: int = 2, bound: Optional[int] = None, samples: int = 1000,
                seed: Optional[int] = None) -> Dict[str, dict]:
    """
    Exact checks that J has a one-sided invertible which is quasi-invertible
    but not invertible. Orthogonality results are bounded certificates.
    """
    if not sympy.isprime(p):
        raise MalformedSpec(f"{p} is not prime")
    bound = CONFIG["degree_bound"] if bound is None else bound
    seed = CONFIG["seed"] if seed is None else seed
    x, y = generators(p)
    e00 = matrix_unit(p, 0, 0)
    claims: Dict[str, dict] = {}

    def claim(name: str, holds: bool, **detail) -> None:
        claims[name] = {"holds": bool(holds), **detail}

    claim("xy = 1", x * y == one(p))
    claim("yx != 1", y * x != one(p), yx=str(y * x))
    claim("1 - yx is idempotent", e00 * e00 == e00)
    failure = _matrix_unit_law(p, bound)
    claim("matrix unit law", failure is None, bound=bound, counterexample=failure)
    failure = _associativity(bound)
    claim("associativity on monomials", failure is None, bound=bound, counterexample=failure)
    failure = _laurent_homomorphism(p, bound, samples, seed)
    claim("laurent image is multiplicative", failure is None, samples=samples, counterexample=failure)
    claim("1 - yx lies in the matrix-unit ideal", in_matrix_ideal(e00))
    # wx = 1 forces w = w(xy) = (wx)y = y, and yx != 1
    claim("x is right invertible but not invertible", x * y == one(p) and y * x != one(p))
    pair = _quasi_inverse_pair(x, y, bound)
    claim("x is quasi-invertible with quasi-inverse y", all(pair.values()), relations=pair,
          kind="bounded-certificate")
    pair = _quasi_inverse_pair(y, x, bound)
    claim("y is quasi-invertible with quasi-inverse x", all(pair.values()), relations=pair,
          kind="bounded-certificate")
    return claims


def all_hold(claims: Iterable[dict]) -> bool:
    return all(c["holds"] for c in claims)
