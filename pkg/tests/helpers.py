"""Strategies, random generators and independent oracles shared by the tests."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from hypothesis import strategies as st

from weilad import expr as E
from weilad.groebner import coordinates, groebner_basis, quotient_monomial_basis
from weilad.polyring import Ideal, Polynomial

# ---------------------------------------------------------------------------
# hypothesis strategies

fractions = st.builds(
    Fraction, st.integers(min_value=-12, max_value=12), st.integers(min_value=1, max_value=6)
)


def exponents(nvars: int, max_exp: int = 3):
    return st.tuples(*[st.integers(min_value=0, max_value=max_exp)] * nvars)


def polynomials(nvars: int, max_exp: int = 2, max_terms: int = 4):
    return st.dictionaries(exponents(nvars, max_exp), fractions, max_size=max_terms).map(
        lambda d: Polynomial(d, nvars)
    )


def elements(settings):
    return st.lists(fractions, min_size=settings.dim, max_size=settings.dim).map(settings.element)


_LEAF_NAMES = ("x", "y", "z")


def expr_trees(arity: int, funcs=("sin", "exp", "cos", "atan")):
    """Random expression trees over ``Var(0..arity-1)``."""
    leaves = st.one_of(
        st.integers(min_value=0, max_value=arity - 1).map(E.Var),
        fractions.map(E.Const),
        st.sampled_from([E.NamedConst("pi")]),
    )

    def extend(children):
        return st.one_of(
            st.builds(E.Neg, children),
            st.builds(E.Add, children, children),
            st.builds(E.Sub, children, children),
            st.builds(E.Mul, children, children),
            st.builds(E.Div, children, children),
            st.builds(E.Pow, children, st.integers(min_value=-3, max_value=4).map(Fraction)),
            st.builds(lambda f, a: E.Apply(f, (a,)), st.sampled_from(funcs), children),
        )

    return st.recursive(leaves, extend, max_leaves=10)


# ---------------------------------------------------------------------------
# seeded random generators (used where a fixed case count matters)

def rand_fraction(rng: random.Random, num: int = 9, den: int = 5) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_poly_expr(rng: random.Random, arity: int, max_degree: int = 4) -> E.Expr:
    """A random polynomial expression tree of total degree at most ``max_degree``."""
    while True:
        e = _poly_tree(rng, arity, depth=3)
        p = E.to_polynomial(e, arity)
        if not p.is_zero() and p.total_degree() <= max_degree:
            return e


def _poly_tree(rng, arity, depth):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.7:
            return E.Var(rng.randrange(arity))
        return E.Const(rand_fraction(rng))
    op = rng.choice(["add", "sub", "mul", "mul", "pow", "neg"])
    if op == "pow":
        return E.Pow(_poly_tree(rng, arity, depth - 1), Fraction(rng.randint(0, 2)))
    if op == "neg":
        return E.Neg(_poly_tree(rng, arity, depth - 1))
    a, b = _poly_tree(rng, arity, depth - 1), _poly_tree(rng, arity, depth - 1)
    return {"add": E.Add, "sub": E.Sub, "mul": E.Mul}[op](a, b)


# building blocks that are smooth on the whole real line
_SAFE_UNARY = [
    lambda a: E.Apply("sin", (a,)),
    lambda a: E.Apply("cos", (a,)),
    lambda a: E.Apply("atan", (a,)),
    lambda a: E.Apply("tanh", (a,)),
    lambda a: E.Apply("exp", (E.Div(a, E.Const(Fraction(2))),)),
    lambda a: E.Apply("log", (E.Add(E.Const(Fraction(1)), E.Pow(a, Fraction(2))),)),
    lambda a: E.Apply("sqrt", (E.Add(E.Const(Fraction(2)), E.Pow(a, Fraction(2))),)),
    lambda a: E.Apply("recip", (E.Add(E.Const(Fraction(3, 2)), E.Pow(a, Fraction(2))),)),
    lambda a: E.Apply("sinh", (E.Div(a, E.Const(Fraction(3))),)),
]


def random_elementary_expr(rng: random.Random, arity: int, depth: int = 3) -> E.Expr:
    """Random composition of elementary functions, defined at every real point."""
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.8:
            return E.Var(rng.randrange(arity))
        return E.Const(rand_fraction(rng, 4, 3))
    kind = rng.random()
    if kind < 0.45:
        return rng.choice(_SAFE_UNARY)(random_elementary_expr(rng, arity, depth - 1))
    a = random_elementary_expr(rng, arity, depth - 1)
    b = random_elementary_expr(rng, arity, depth - 1)
    return rng.choice([E.Add, E.Sub, E.Mul])(a, b)


# ---------------------------------------------------------------------------
# independent oracles

def ideal_of(polys: str, names) -> Ideal:
    return Ideal(E.parse_polynomials(polys, names), nvars=len(names))


def taylor_oracle(f: E.Expr, u_polys, ideal: Ideal, caps, kind="rational"):
    """Evaluate ``f`` at the classes of ``u_polys`` by Taylor expansion at 0.

    Returns ``{standard monomial: coefficient}``.  The composite
    ``h(X) = f(u_1(X), ..., u_m(X))`` is differentiated with the rewrite-based
    symbolic derivative, every ``D^a h(0) / a!`` is multiplied by the normal
    form of ``X^a``, and the results are summed.  No jet code is involved.
    """
    n = ideal.nvars
    gb = groebner_basis(ideal)
    basis = quotient_monomial_basis(gb)
    h = E.substitute(f, [E.from_polynomial(p) for p in u_polys])
    zeros = [E.coerce_scalar(0, kind)] * n
    total = [E.coerce_scalar(0, kind)] * len(basis)
    for alpha in itertools.product(*(range(k + 1) for k in caps)):
        d = E.eval_expr(E.symbolic_derivative(h, alpha), zeros, kind=kind)
        fact = math.prod(math.factorial(a) for a in alpha)
        nf = coordinates(Polynomial.monomial(alpha), gb, basis)
        for j, c in enumerate(nf):
            if c:
                total[j] = total[j] + d * E.coerce_scalar(c, kind) / fact
    return dict(zip(basis, total))


def weil_as_dict(u) -> dict:
    return dict(zip(u.settings.basis, u.coeffs))


def element_polynomial(u) -> Polynomial:
    """``sum_j u[j] X^{b_j}`` with rational coefficients."""
    n = u.settings.var_count
    return Polynomial({b: Fraction(c) for b, c in zip(u.settings.basis, u.coeffs)}, n)


def close(a, b, rel=1e-10, abs_=0.0) -> bool:
    return math.isclose(a, b, rel_tol=rel, abs_tol=abs_)
