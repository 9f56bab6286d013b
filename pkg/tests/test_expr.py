import math
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from helpers import expr_trees, fractions
from weilad import expr as E
from weilad.errors import DimensionError, DomainError, ParseError
from weilad.expr import (
    Add,
    Apply,
    Const,
    Mul,
    NamedConst,
    Pow,
    Sub,
    Sym,
    Var,
    eval_expr,
    normalise,
    parse_expr,
    symbolic_derivative,
    symbolic_partial,
    to_text,
)
from weilad.smooth import TowerJet

x, y = Var(0), Var(1)


# -- parsing --------------------------------------------------------------

def test_parse_examples():
    assert parse_expr("sin(x + y)", ["x", "y"]) == Apply("sin", (Add(x, y),))
    e = parse_expr("exp(2*x) * sin(y)", ["x", "y"])
    assert e == Mul(Apply("exp", (Mul(Const(2), x),)), Apply("sin", (y,)))
    assert parse_expr("x ^ 2 - y ^ 3", ["x", "y"]) == Sub(Pow(x, 2), Pow(y, 3))


def test_parse_details():
    assert parse_expr("3/4") == Const(Fraction(3, 4))
    assert parse_expr("x**2", ["x"]) == Pow(x, 2)
    assert parse_expr("-2^2") != Const(4)
    assert eval_expr(parse_expr("-2^2"), []) == -4
    # right associative; the constant exponent 3^2 folds to 9
    assert parse_expr("2^3^2") == Pow(Const(2), 9)
    assert parse_expr("x^-1", ["x"]) == Pow(x, -1)
    assert parse_expr("pi") == NamedConst("pi")
    assert parse_expr("0.25") == Const(Fraction(1, 4))
    assert parse_expr("a + 1", allow_symbols=True) == Add(Sym("a"), Const(1))


@pytest.mark.parametrize("text", ["sin(x", "x +", "x y", "foo(x)", "x $ y", "sin(x, y)", "x^y", ")"])
def test_parse_errors(text):
    with pytest.raises(ParseError) as info:
        parse_expr(text, ["x", "y"])
    assert info.value.position is not None or "unknown" in str(info.value)


def test_unknown_identifier():
    with pytest.raises(ParseError, match="position"):
        parse_expr("x + z", ["x"])


@settings(max_examples=200, deadline=None)
@given(expr_trees(2))
def test_print_parse_roundtrip(e):
    assert parse_expr(to_text(e, ["x", "y"]), ["x", "y"]) == e


# -- evaluation -----------------------------------------------------------

def test_eval_examples():
    assert eval_expr(parse_expr("x*y", ["x", "y"]), [3.0, 4.0]) == 12
    assert eval_expr(parse_expr("x + 1", ["x"]), [Fraction(1, 2)]) == Fraction(3, 2)
    assert eval_expr(parse_expr("sin(pi/6)"), [], kind="float") == math.sin(math.pi / 6)


def test_eval_domain_errors():
    with pytest.raises(DomainError):
        eval_expr(parse_expr("log(x)", ["x"]), [-1.0])
    with pytest.raises(DomainError):
        eval_expr(parse_expr("1/x", ["x"]), [Fraction(0)])
    with pytest.raises(DomainError):
        eval_expr(parse_expr("sin(x)", ["x"]), [Fraction(1)])
    with pytest.raises(DomainError):
        eval_expr(parse_expr("pi"), [], kind="rational")
    with pytest.raises(DimensionError):
        eval_expr(parse_expr("x + y", ["x", "y"]), [1.0])


def test_eval_symbolic_carrier():
    a = Sym("a")
    out = eval_expr(parse_expr("sin(x)*2", ["x"]), [a], kind="symbolic")
    assert to_text(out) == "2*sin(a)"
    assert eval_expr(parse_expr("pi"), [], kind="symbolic") == NamedConst("pi")


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(expr_trees(2), st.floats(-2, 2), st.floats(-2, 2))
def test_float_eval_matches_value_only_jet(e, a, b):
    try:
        expected = eval_expr(e, [a, b])
    except (DomainError, OverflowError, ZeroDivisionError):
        assume(False)
    jet = eval_expr(e, [TowerJet.constant(a, (0, 0)), TowerJet.constant(b, (0, 0))])
    value = jet.value if isinstance(jet, TowerJet) else jet
    if math.isnan(expected):
        assert math.isnan(value)
    else:
        assert value == expected


# -- symbolic differentiation -------------------------------------------------

def test_partial_examples():
    assert symbolic_partial(Mul(x, y), 0) == y
    assert symbolic_partial(Apply("sin", (x,)), 0) == Apply("cos", (x,))
    e = parse_expr("exp(2*x)", ["x"])
    assert symbolic_derivative(e, (2,)) == parse_expr("4*exp(2*x)", ["x"])


@settings(max_examples=100, deadline=None)
@given(expr_trees(2), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_partial_matches_central_difference(e, a, b):
    # tiny nonzero points push intermediate powers into subnormal floats, where
    # the derivative expression itself loses precision
    assume(all(v == 0 or abs(v) >= 1e-12 for v in (a, b)))
    h = 1e-6
    try:
        d = eval_expr(symbolic_partial(e, 0), [a, b])
        fp = eval_expr(e, [a + h, b])
        fm = eval_expr(e, [a - h, b])
        f0 = eval_expr(e, [a, b])
    except (DomainError, OverflowError, ZeroDivisionError):
        assume(False)
    assume(all(math.isfinite(v) for v in (d, fp, fm, f0)))
    assume(abs(d) < 1e4 and abs(f0) < 1e4)
    fd = (fp - fm) / (2 * h)
    # the finite difference is only trustworthy where the third derivative is modest
    assert math.isclose(d, fd, rel_tol=1e-3, abs_tol=1e-3) or abs(fd - d) < 1e-2 * (1 + abs(f0))


@given(fractions, fractions)
def test_polynomial_partial_exact(a, b):
    e = parse_expr("x^3*y - 2*x*y^2 + 5", ["x", "y"])
    dx = symbolic_partial(e, 0)
    assert eval_expr(dx, [a, b]) == 3 * a ** 2 * b - 2 * b ** 2


# -- normalise ------------------------------------------------------------

def test_normalise_examples():
    assert normalise(Add(Mul(Const(1), Apply("cos", (x,))), Const(0))) == Apply("cos", (x,))
    assert normalise(Mul(Mul(Const(2), Const(3)), x)) == Mul(Const(6), x)
    assert normalise(E.Neg(E.Neg(x))) == x


@given(expr_trees(2))
def test_normalise_idempotent_and_sound(e):
    n = normalise(e)
    assert normalise(n) == n
    point = [Fraction(1, 3), Fraction(-2, 7)]
    try:
        before = eval_expr(e, point, kind="float")
    except DomainError:
        return
    after = eval_expr(n, point, kind="float")
    assert math.isclose(before, after, rel_tol=1e-9, abs_tol=1e-9) or (math.isnan(before) and math.isnan(after))


# -- polynomial bridge -------------------------------------------------------

def test_polynomial_conversion():
    p = E.to_polynomial(parse_expr("(x + y)^2 - 2*x*y", ["x", "y"]), 2)
    assert p.to_text(["x", "y"]) == "x^2 + y^2"
    assert E.to_polynomial(E.from_polynomial(p), 2) == p
    with pytest.raises(ValueError):
        E.to_polynomial(parse_expr("sin(x)", ["x"]), 1)


def test_polynomial_text_parse():
    ps = E.parse_polynomials("x^2 - y^3, y^4", ["x", "y"])
    assert [p.to_text(["x", "y"]) for p in ps] == ["-y^3 + x^2", "y^4"]
    with pytest.raises(ParseError) as info:
        E.parse_polynomials("x^2, y^", ["x", "y"])
    assert info.value.position >= 5
