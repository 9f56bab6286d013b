"""Truncated tower jets and the smooth structure of Weil algebras.

A :class:`TowerJet` stores, for every multi-index ``a <= caps``, the
derivative ``D^a f`` at the expansion point.  A :class:`TaylorPoly` has the
same shape but stores ``D^a f / a!``.  The two are related by :func:`rf` and
:func:`rf_inv`.

Elementary functions are lifted to jets by the recursion of lazy
multivariate tower AD: the value is ``f(a)``, the branch differentiated once
more in variable 0 is ``da * f'(x)``, and the branch where variable 0 is never
touched again is the lift of the jet with variable 0 retired.  Truncating at
``caps`` loses nothing for :func:`lift_weil`, which reads only coefficients
up to the maximal non-vanishing powers of the algebra.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence

from . import expr as _expr
from .errors import AlgebraMismatch, DimensionError, DomainError
from .expr import DerivativeRule, Expr, RULES
from .weil import WeilElement, WeilSettings


def _indices(caps) -> list:
    return list(itertools.product(*(range(k + 1) for k in caps)))


def _factorial(alpha) -> int:
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return out


def _binom(alpha, beta) -> int:
    out = 1
    for a, b in zip(alpha, beta):
        out *= math.comb(a, b)
    return out


class _Truncated:
    __slots__ = ("caps", "coeffs")

    def __init__(self, caps, coeffs):
        self.caps = tuple(int(k) for k in caps)
        coeffs = dict(coeffs)
        for alpha in coeffs:
            if len(alpha) != len(self.caps) or any(a > k or a < 0 for a, k in zip(alpha, self.caps)):
                raise DimensionError(f"multi-index {alpha} outside caps {self.caps}")
        zero = _zero_for(coeffs.values())
        self.coeffs = {alpha: coeffs.get(alpha, zero) for alpha in _indices(self.caps)}

    @property
    def nvars(self) -> int:
        return len(self.caps)

    @property
    def value(self):
        return self.coeffs[(0,) * len(self.caps)]

    def __getitem__(self, alpha):
        return self.coeffs[tuple(alpha)]

    def scalar_kind(self) -> str:
        return _expr.infer_kind(self.coeffs.values())

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.caps == other.caps and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        body = ", ".join(f"{a}: {c}" for a, c in self.coeffs.items())
        return f"{type(self).__name__}(caps={self.caps}, {{{body}}})"


def _zero_for(values):
    values = list(values)
    return _expr.coerce_scalar(0, _expr.infer_kind(values)) if values else Fraction(0)


class TaylorPoly(_Truncated):
    """Truncated power series; the coefficient of ``X^a`` is ``D^a f / a!``."""

    __slots__ = ()

    @classmethod
    def from_terms(cls, caps, terms) -> "TaylorPoly":
        """Sum of ``c * X^a`` over ``(a, c)`` pairs; terms beyond ``caps`` are dropped."""
        caps = tuple(caps)
        out: dict = {}
        for alpha, c in terms:
            alpha = tuple(alpha)
            if all(a <= k for a, k in zip(alpha, caps)):
                out[alpha] = out[alpha] + c if alpha in out else c
        return cls(caps, out)


class TowerJet(_Truncated):
    """Truncated derivative tower: ``self[a] == D^a f`` at the expansion point."""

    __slots__ = ()

    @classmethod
    def constant(cls, value, caps) -> "TowerJet":
        return cls(caps, {(0,) * len(caps): value})

    @classmethod
    def variable(cls, i: int, value, caps) -> "TowerJet":
        """Jet of ``t -> value + t_i``."""
        caps = tuple(caps)
        coeffs = {(0,) * len(caps): value}
        if caps[i] >= 1:
            one = _expr.coerce_scalar(1, _expr.infer_kind([value]))
            coeffs[tuple(int(j == i) for j in range(len(caps)))] = one
        return cls(caps, coeffs)

    # structure of the lazy tree

    def top_diff(self) -> "TowerJet | None":
        """The branch differentiated once more in variable 0 (``da``)."""
        if not self.caps or self.caps[0] == 0:
            return None
        caps = (self.caps[0] - 1,) + self.caps[1:]
        return TowerJet(caps, {a: self.coeffs[(a[0] + 1,) + a[1:]] for a in _indices(caps)})

    def truncate(self, caps) -> "TowerJet":
        caps = tuple(caps)
        return TowerJet(caps, {a: self.coeffs[a] for a in _indices(caps)})

    @staticmethod
    def assemble(value, da: "TowerJet | None", dus: "TowerJet", cap0: int) -> "TowerJet":
        """Inverse of ``(value, top_diff, diff_other)``."""
        caps = (cap0,) + dus.caps
        coeffs = {}
        for a in _indices(caps):
            if a[0] == 0:
                coeffs[a] = value if not any(a) else dus.coeffs[a[1:]]
            else:
                coeffs[a] = da.coeffs[(a[0] - 1,) + a[1:]]
        return TowerJet(caps, coeffs)

    # arithmetic

    def _other(self, other):
        if isinstance(other, TowerJet):
            if other.caps != self.caps:
                raise AlgebraMismatch(f"jets with caps {self.caps} and {other.caps}")
            return other
        if isinstance(other, (int, float, Fraction, Expr)):
            return TowerJet.constant(other, self.caps)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return TowerJet(self.caps, {a: c + other.coeffs[a] for a, c in self.coeffs.items()})

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return TowerJet(self.caps, {a: c - other.coeffs[a] for a, c in self.coeffs.items()})

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return TowerJet(self.caps, {a: -c for a, c in self.coeffs.items()})

    def __pos__(self):
        return self

    def scale(self, c) -> "TowerJet":
        return TowerJet(self.caps, {a: c * v for a, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, float, Fraction, Expr)):
            return self.scale(other)
        other = self._other(other)
        if other is NotImplemented:
            return other
        return _leibniz(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, Fraction, Expr)):
            return TowerJet(self.caps, {a: other * v for a, v in self.coeffs.items()})
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, Fraction, Expr)):
            if not isinstance(other, Expr) and other == 0:
                raise DomainError("division by zero")
            return TowerJet(self.caps, {a: v / other for a, v in self.coeffs.items()})
        other = self._other(other)
        if other is NotImplemented:
            return other
        return _quotient(self, other)

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return _quotient(other, self)

    def __pow__(self, exponent):
        c = Fraction(exponent)
        if c.denominator == 1:
            return _expr.int_power(self, int(c))
        return jet_lift_unary(_expr.pow_rule(c), self, scalar=lambda a: _expr.power(a, c))

    def apply(self, name: str) -> "TowerJet":
        return jet_lift_unary(RULES[name], self)

    @classmethod
    def apply_nary(cls, name: str, args) -> "TowerJet":
        caps = next(a.caps for a in args if isinstance(a, TowerJet))
        args = [a if isinstance(a, TowerJet) else TowerJet.constant(a, caps) for a in args]
        return jet_lift_nary(RULES[name], args)


def _leibniz(f: TowerJet, g: TowerJet) -> TowerJet:
    """D^a(fg) = sum_{b <= a} C(a, b) D^b f D^{a-b} g."""
    caps = f.caps
    out: dict = {}
    fz = [(b, c) for b, c in f.coeffs.items() if not _expr.is_zero(c)]
    gz = [(b, c) for b, c in g.coeffs.items() if not _expr.is_zero(c)]
    for b, fb in fz:
        for d, gd in gz:
            a = tuple(x + y for x, y in zip(b, d))
            if any(x > k for x, k in zip(a, caps)):
                continue
            w = _binom(a, b)
            term = fb * gd if w == 1 else w * (fb * gd)
            out[a] = out[a] + term if a in out else term
    zero = _zero_for(list(f.coeffs.values()) + list(g.coeffs.values()))
    return TowerJet(caps, {a: out.get(a, zero) for a in f.coeffs})


def _quotient(f: TowerJet, g: TowerJet) -> TowerJet:
    """``f / g`` from ``f = q g`` solved in increasing multi-index order."""
    g0 = g.value
    if not isinstance(g0, Expr) and g0 == 0:
        raise DomainError("division by a jet with zero value")
    q: dict = {}
    for a in sorted(f.coeffs, key=sum):
        acc = f.coeffs[a]
        for b in q:
            if all(x <= y for x, y in zip(b, a)):
                rest = tuple(y - x for x, y in zip(b, a))
                gr = g.coeffs[rest]
                if _expr.is_zero(gr):
                    continue
                acc = acc - _binom(a, b) * (q[b] * gr)
        q[a] = acc / g0
    return TowerJet(f.caps, q)


def diff_other(x: TowerJet) -> TowerJet:
    """Retire variable 0: the coefficients with ``a_0 == 0``."""
    if not x.caps:
        raise DimensionError("a jet in zero variables has nothing to retire")
    caps = x.caps[1:]
    return TowerJet(caps, {a: x.coeffs[(0,) + a] for a in _indices(caps)})


def jet_lift_unary(rule: DerivativeRule, x: TowerJet, scalar=None) -> TowerJet:
    """Lift a unary function, given its first derivative rule, to jets.

    ``scalar`` evaluates the function on the coefficient carrier; it defaults
    to :func:`weilad.expr.apply_function` for the rule's name.
    """
    if scalar is None:
        name = rule.name
        scalar = lambda a: _expr.apply_function(name, a)  # noqa: E731
    partial = rule.partials[0]

    def lift(x: TowerJet) -> TowerJet:
        fa = scalar(x.value)
        if not x.caps:
            return TowerJet((), {(): fa})
        dus = lift(diff_other(x))
        da = x.top_diff()
        if da is not None:
            dfx = _expr.eval_expr(partial, [x.truncate(da.caps)], kind=x.scalar_kind())
            da = da * dfx
        return TowerJet.assemble(fa, da, dus, x.caps[0])

    return lift(x)


def jet_lift_nary(rule: DerivativeRule, xs: Sequence[TowerJet]) -> TowerJet:
    """Lift an m-ary function given its m first partials.

    ``da = sum_i top_diff(x_i) * partial_i(x)``, other branch by recursion on
    ``diff_other`` of every argument.
    """
    xs = list(xs)
    if len(xs) != rule.arity:
        raise DimensionError(f"{rule.name} takes {rule.arity} arguments")
    caps = xs[0].caps
    for x in xs:
        if x.caps != caps:
            raise AlgebraMismatch("jets with different caps")
    kind = _expr.infer_kind(xs)

    def lift(xs):
        values = [x.value for x in xs]
        if rule.arity == 1:
            fa = _expr.apply_function(rule.name, values[0])
        else:
            fa = _expr.apply_nary(rule.name, values)
        if not xs[0].caps:
            return TowerJet((), {(): fa})
        dus = lift([diff_other(x) for x in xs])
        if xs[0].caps[0] == 0:
            return TowerJet.assemble(fa, None, dus, 0)
        da = None
        for x, partial in zip(xs, rule.partials):
            dx = x.top_diff()
            trunc = [y.truncate(dx.caps) for y in xs]
            term = dx * _expr.eval_expr(partial, trunc, kind=kind)
            da = term if da is None else da + term
        return TowerJet.assemble(fa, da, dus, xs[0].caps[0])

    return lift(xs)


def jet_arith(op: str, a: TowerJet, b=None) -> TowerJet:
    """Functional form of the jet ring operations: add, sub, mul, scale, div, recip."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    if op == "div":
        return a / b
    if op == "recip":
        return a.apply("recip")
    raise ValueError(f"unknown jet operation {op!r}")


# ---------------------------------------------------------------------------
# reciprocal factorial transforms

def rf(t: TowerJet) -> TaylorPoly:
    """Divide the coefficient of every multi-index ``a`` by ``a!``."""
    out = {}
    for a, c in t.coeffs.items():
        n = _factorial(a)
        out[a] = c if n == 1 else c / _as_divisor(n, c)
    return TaylorPoly(t.caps, out)


def rf_inv(p: TaylorPoly) -> TowerJet:
    """Multiply the coefficient of every multi-index ``a`` by ``a!``."""
    return TowerJet(p.caps, {a: (c if _factorial(a) == 1 else _factorial(a) * c) for a, c in p.coeffs.items()})


def _as_divisor(n: int, c):
    if isinstance(c, float):
        return float(n)
    return Fraction(n) if not isinstance(c, Expr) else _expr.Const(n)


# ---------------------------------------------------------------------------
# power-series and Weil lifting

def lift_series(f: Expr, gs: Sequence[TaylorPoly], kind: str | None = None) -> TaylorPoly:
    """``RF(Tower(f)(RF^-1(g_1), ..., RF^-1(g_m)))``."""
    gs = list(gs)
    if not gs:
        raise DimensionError("lift_series needs at least one argument to fix the caps")
    caps = gs[0].caps
    if any(g.caps != caps for g in gs):
        raise AlgebraMismatch("series arguments with different caps")
    towers = [rf_inv(g) for g in gs]
    if kind is None:
        kind = _expr.infer_kind(towers)
    out = _expr.eval_expr(f, towers, kind=kind)
    if not isinstance(out, TowerJet):
        out = TowerJet.constant(out, caps)
    return rf(out)


def lift_weil(w: WeilSettings, f: Expr, us: Sequence[WeilElement], kind: str | None = None) -> WeilElement:
    """The C-infinity lifting ``W(f)(u_1, ..., u_m)``.

    Each argument becomes the polynomial ``sum_j u_i[j] X^{b_j}``, ``f`` is
    lifted to truncated power series, and every ``X^a`` of the result is
    mapped back through the non-vanishing monomial table.
    """
    us = list(us)
    for u in us:
        if not isinstance(u, WeilElement):
            raise TypeError(f"expected WeilElement, got {type(u).__name__}")
        if u.settings is not w and u.settings != w:
            raise AlgebraMismatch("argument lives in a different Weil algebra")
    if kind is None:
        kind = _expr.infer_kind(us)
    caps = w.max_powers
    gs = [
        TaylorPoly.from_terms(caps, ((b, _expr.coerce_scalar(c, kind)) for b, c in zip(w.basis, u.coeffs)))
        for u in us
    ]
    if not gs:
        gs = [TaylorPoly(caps, {(0,) * len(caps): _expr.coerce_scalar(0, kind)})]
    h = lift_series(f, gs, kind=kind)
    zero = _expr.coerce_scalar(0, kind)
    v = [None] * w.dim
    for alpha, c in h.coeffs.items():
        if _expr.is_zero(c):
            continue
        rep = w.non_van[alpha]
        for j, r in enumerate(rep):
            if r == 0:
                continue
            term = c if r == 1 else c * _expr.coerce_scalar(r, kind)
            v[j] = term if v[j] is None else v[j] + term
    return WeilElement(w, [zero if c is None else c for c in v])
