"""
TC010: The Jacobson Algebra F_p<x, y | xy = 1>

x is right invertible but not invertible, and yet quasi-invertible with
quasi-inverse y. Orthogonality there is a bounded certificate.
"""

import pytest
import sympy

from src.errors import MalformedSpec
from src.jacobson_algebra import (T, JElement, all_hold, demo_claims, generators, in_matrix_ideal,
                                  j_arithmetic, j_orthogonal_bounded, laurent_image, matrix_unit,
                                  monomial_product, one, parse_jelement)


def test_one_sided_inverse():
    x, y = generators(2)
    assert x * y == one(2)
    assert y * x != one(2)
    assert monomial_product((0, 2), (1, 0)) == (0, 1)


def test_literal_parsing():
    assert parse_jelement("x y", 2) == one(2)
    assert parse_jelement("y x", 2) == JElement.monomial(2, 1, 1)
    assert parse_jelement("x - x", 3).is_zero()
    assert parse_jelement("x^2 y", 2) == JElement.monomial(2, 0, 1)
    assert parse_jelement("3*y", 5) == JElement.monomial(5, 1, 0, 3)
    assert parse_jelement("-x + 2", 3) == JElement.from_dict(3, {(0, 1): -1, (0, 0): 2})
    assert str(parse_jelement("y x", 2)) == "y x"
    assert str(JElement(2)) == "0"


@pytest.mark.parametrize("text", ["", "z", "x +", "x ^"])
def test_malformed_literals(text):
    with pytest.raises(MalformedSpec):
        parse_jelement(text, 2)


def test_fields_do_not_mix():
    with pytest.raises(ValueError):
        one(2) + one(3)
    with pytest.raises(ValueError):
        j_arithmetic(one(2), one(2), "div")


def test_matrix_units_and_laurent_image():
    x, y = generators(2)
    e00 = matrix_unit(2, 0, 0)
    assert e00 == one(2) - y * x
    assert e00 * e00 == e00
    assert laurent_image(y) == T
    assert laurent_image(x) == T ** -1
    assert in_matrix_ideal(e00)
    assert not in_matrix_ideal(x)
    assert sympy.expand(laurent_image(x * y)) == 1


def test_bounded_orthogonality_certificate():
    e00 = matrix_unit(2, 0, 0)
    cert = j_orthogonal_bounded(e00, e00, bound=2)
    assert not cert.holds and cert.counterexample
    zero = JElement(2)
    assert j_orthogonal_bounded(e00, zero, bound=2).holds
    assert cert.to_payload()["kind"] == "bounded-certificate"


@pytest.mark.parametrize("p", [2, 3])
def test_demo_claims(p):
    claims = demo_claims(p, bound=3, samples=50, seed=1)
    failing = [name for name, c in claims.items() if not c["holds"]]
    assert not failing, f"F_{p}: {failing}"
    assert all_hold(claims.values())


def test_demo_needs_a_prime():
    with pytest.raises(MalformedSpec):
        demo_claims(4, bound=2, samples=5)
