"""Sparse multivariate polynomials with exact coefficients.

A polynomial is a finite map from exponent vectors (tuples of non-negative
ints) to nonzero coefficients.  Coefficients are usually ``Fraction`` but any
field-like scalar works for the arithmetic; ideal-theoretic code in
:mod:`weilad.groebner` always uses ``Fraction``.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DimensionError

Monomial = tuple  # tuple[int, ...]


class MonomialOrder(enum.Enum):
    DEGREVLEX = "degrevlex"
    LEX = "lex"
    DEGLEX = "deglex"

    def key(self, a: Monomial):
        """Sort key; larger key means larger monomial."""
        if self is MonomialOrder.LEX:
            return tuple(a)
        if self is MonomialOrder.DEGLEX:
            return (sum(a), tuple(a))
        return (sum(a), tuple(-e for e in reversed(a)))

    @classmethod
    def coerce(cls, order) -> "MonomialOrder":
        if isinstance(order, cls):
            return order
        return cls(str(order).lower())


DEFAULT_ORDER = MonomialOrder.DEGREVLEX


def compare_monomials(a: Sequence[int], b: Sequence[int], order=DEFAULT_ORDER) -> int:
    """Return -1, 0 or 1 as ``a`` is smaller than, equal to or greater than ``b``."""
    if len(a) != len(b):
        raise DimensionError(f"exponent vectors of length {len(a)} and {len(b)}")
    order = MonomialOrder.coerce(order)
    ka, kb = order.key(tuple(a)), order.key(tuple(b))
    return (ka > kb) - (ka < kb)


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("_terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, nvars: int = 0):
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars:
                raise DimensionError(f"monomial {mono} in a {nvars}-variable ring")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            if c != 0:
                clean[mono] = c
        self._terms = clean
        self.nvars = nvars
        self._hash = None

    # constructors

    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise DimensionError(f"variable index {i} out of range for {nvars} variables")
        mono = tuple(1 if j == i else 0 for j in range(nvars))
        return cls({mono: Fraction(1)}, nvars)

    @classmethod
    def monomial(cls, mono: Sequence[int], c=Fraction(1)) -> "Polynomial":
        return cls({tuple(mono): c}, len(mono))

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls({}, nvars)

    # access

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, mono: Sequence[int]):
        return self._terms.get(tuple(mono), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def monomials(self, order=DEFAULT_ORDER) -> list:
        """Monomials in descending order."""
        order = MonomialOrder.coerce(order)
        return sorted(self._terms, key=order.key, reverse=True)

    def leading_monomial(self, order=DEFAULT_ORDER) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        order = MonomialOrder.coerce(order)
        return max(self._terms, key=order.key)

    def leading_coefficient(self, order=DEFAULT_ORDER):
        return self._terms[self.leading_monomial(order)]

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def monic(self, order=DEFAULT_ORDER) -> "Polynomial":
        return self * (Fraction(1) / Fraction(self.leading_coefficient(order)))

    # arithmetic

    def _check(self, other: "Polynomial"):
        if other.nvars != self.nvars:
            raise DimensionError(f"{self.nvars}-variable and {other.nvars}-variable polynomials")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(other, self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if other == 0:
                return Polynomial.zero(self.nvars)
            return Polynomial({m: c * other for m, c in self._terms.items()}, self.nvars)
        self._check(other)
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(out, self.nvars)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if other.total_degree() != 0:
                return NotImplemented
            other = other.coeff((0,) * self.nvars)
        if other == 0:
            raise ZeroDivisionError("polynomial division by zero")
        inv = Fraction(1) / other if isinstance(other, (int, Fraction)) else 1 / other
        return self * inv

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomials only support non-negative integer powers")
        result = Polynomial.constant(Fraction(1), self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_monomial(self, mono: Monomial, c=1) -> "Polynomial":
        return Polynomial({mono_mul(m, mono): v * c for m, v in self._terms.items()}, self.nvars)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def to_text(self, names: Sequence[str] | None = None, order=DEFAULT_ORDER) -> str:
        names = list(names) if names else [f"x{i}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        parts = []
        for mono in self.monomials(order):
            c = self._terms[mono]
            factors = []
            for name, e in zip(names, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if isinstance(mag, Fraction) and mag.denominator != 1:
                cs = f"{mag.numerator}/{mag.denominator}"
            else:
                cs = str(mag)
            if not factors:
                body = cs
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([cs] + factors)
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Polynomial({self.to_text()!r}, nvars={self.nvars})"

    __str__ = to_text


def divide_with_remainder(f: Polynomial, divisors: Sequence[Polynomial], order=DEFAULT_ORDER):
    """Multivariate division of ``f`` by ``divisors``.

    Returns ``(quotients, remainder)`` with ``f == sum(q*g) + remainder`` and
    no monomial of the remainder divisible by a leading monomial of a divisor.
    """
    order = MonomialOrder.coerce(order)
    if not divisors:
        raise ValueError("need at least one divisor")
    for g in divisors:
        f._check(g)
    gs = [(g, g.leading_monomial(order), g.leading_coefficient(order)) for g in divisors if g]
    quotients = [dict() for _ in divisors]
    index = [i for i, g in enumerate(divisors) if g]
    p = dict(f.items())
    remainder: dict = {}
    while p:
        lm = max(p, key=order.key)
        lc = p[lm]
        for slot, (g, glm, glc) in zip(index, gs):
            if divides(glm, lm):
                shift = mono_div(lm, glm)
                factor = lc / glc
                quotients[slot][shift] = quotients[slot].get(shift, 0) + factor
                for m, c in g.items():
                    mm = mono_mul(m, shift)
                    v = p.get(mm, 0) - factor * c
                    if v == 0:
                        p.pop(mm, None)
                    else:
                        p[mm] = v
                break
        else:
            remainder[lm] = lc
            del p[lm]
    qs = [Polynomial(q, f.nvars) for q in quotients]
    return qs, Polynomial(remainder, f.nvars)


class Ideal:
    """A finitely generated ideal of Q[x_0, ..., x_{n-1}]."""

    def __init__(self, generators: Iterable[Polynomial], nvars: int | None = None):
        gens = list(generators)
        if not gens:
            raise ValueError("an ideal needs at least one generator")
        n = gens[0].nvars if nvars is None else nvars
        for g in gens:
            if g.nvars != n:
                raise DimensionError("generators disagree on the number of variables")
            if g.is_zero():
                raise ValueError("zero polynomial is not allowed as a generator")
        self.generators = tuple(
            Polynomial({m: Fraction(c) for m, c in g.items()}, n) for g in gens
        )
        self.nvars = n

    def __repr__(self):
        return f"Ideal([{', '.join(g.to_text() for g in self.generators)}])"
