from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import exponents, polynomials
from weilad.errors import DimensionError
from weilad.groebner import groebner_basis, normal_form
from weilad.polyring import (
    Ideal,
    MonomialOrder,
    Polynomial,
    compare_monomials,
    divide_with_remainder,
)

ORDERS = list(MonomialOrder)
x = Polynomial.variable(0, 2)
y = Polynomial.variable(1, 2)


# -- monomial orders ------------------------------------------------------

def test_compare_examples():
    assert compare_monomials((1, 1), (1, 1), "lex") == 0
    assert compare_monomials((2, 0), (0, 3), "lex") == 1
    # degree dominates in graded orders
    assert compare_monomials((2, 0), (0, 3), "degrevlex") == -1
    assert compare_monomials((2, 0), (0, 3), "deglex") == -1
    # degrevlex vs deglex tie-break: x0*x2 vs x1^2
    assert compare_monomials((1, 0, 1), (0, 2, 0), "deglex") == 1
    assert compare_monomials((1, 0, 1), (0, 2, 0), "degrevlex") == -1


def test_compare_length_mismatch():
    with pytest.raises(DimensionError):
        compare_monomials((1,), (1, 0))


@given(st.sampled_from(ORDERS), exponents(3), exponents(3), exponents(3))
def test_order_axioms(order, a, b, c):
    ab = compare_monomials(a, b, order)
    assert ab == -compare_monomials(b, a, order)
    assert (ab == 0) == (a == b)
    shifted = compare_monomials(
        tuple(i + k for i, k in zip(a, c)), tuple(j + k for j, k in zip(b, c)), order
    )
    assert shifted == ab
    assert compare_monomials((0, 0, 0), a, order) <= 0


@given(st.sampled_from(ORDERS), exponents(3), exponents(3), exponents(3))
def test_order_transitive(order, a, b, c):
    if compare_monomials(a, b, order) <= 0 and compare_monomials(b, c, order) <= 0:
        assert compare_monomials(a, c, order) <= 0


# -- arithmetic -----------------------------------------------------------

def test_arith_examples():
    assert (x + y) + (x - y) == 2 * x
    assert (x + 1) * (x - 1) == x ** 2 - 1
    assert (0 * (x + y)).is_zero()
    assert (x - x).is_zero() and len(x - x) == 0


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        x + Polynomial.variable(0, 3)
    with pytest.raises(DimensionError):
        Polynomial({(1,): 1}, 2)


def test_leading_terms_and_text():
    p = x ** 2 - y ** 3 + Fraction(1, 2) * x * y
    assert p.leading_monomial("degrevlex") == (0, 3)
    assert p.leading_monomial("lex") == (2, 0)
    assert p.to_text(["x", "y"]) == "-y^3 + x^2 + 1/2*x*y"
    assert p.monic("lex").leading_coefficient("lex") == 1
    assert Polynomial.zero(2).to_text() == "0"


@settings(max_examples=60)
@given(polynomials(2), polynomials(2), polynomials(2))
def test_ring_laws(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f + g == g + f
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert f * 1 == f and (f - f).is_zero()


# -- division -------------------------------------------------------------

def test_division_examples():
    X, Y = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    _, r = divide_with_remainder(X ** 2, [X ** 2 - Y], "lex")
    assert r == Y
    gb = [Y ** 3 - X ** 2, X ** 2 * Y, X ** 4]
    _, r = divide_with_remainder(Y ** 3, gb, "degrevlex")
    assert r == X ** 2
    one = Polynomial.constant(1, 2)
    _, r = divide_with_remainder(X * Y + 3, [one])
    assert r.is_zero()


@settings(max_examples=60)
@given(polynomials(2, 3, 5), st.lists(polynomials(2, 2, 3), min_size=1, max_size=3), st.sampled_from(ORDERS))
def test_division_identity(f, gs, order):
    gs = [g for g in gs if not g.is_zero()] or [x + 1]
    qs, r = divide_with_remainder(f, gs, order)
    assert sum((q * g for q, g in zip(qs, gs)), Polynomial.zero(2)) + r == f
    lms = [g.leading_monomial(order) for g in gs]
    for m, _ in r.items():
        assert not any(all(a <= b for a, b in zip(lm, m)) for lm in lms)
    # f - r lies in the ideal
    gb = groebner_basis(Ideal(gs), order)
    assert normal_form(f - r, gb).is_zero()


def test_ideal_validation():
    with pytest.raises(ValueError):
        Ideal([])
    with pytest.raises(ValueError):
        Ideal([Polynomial.zero(2)])
    with pytest.raises(DimensionError):
        Ideal([x, Polynomial.variable(0, 1)])
