"""Weil settings, Weil elements and tensor products.

A Weil algebra W = Q[X]/I is described by its *settings*: a monomial basis
``b_0 = 1, b_1, ..., b_{l-1}``, the multiplication table of that basis, the
per-variable maximal non-vanishing powers ``k`` and the table ``non_van``
that expresses every monomial ``X^a`` with ``a <= k`` in the basis.  The
smooth structure in :mod:`weilad.smooth` needs nothing else, so settings can
be computed once by :func:`weil_test`, hard-coded (:func:`d_order`), composed
(:func:`weil_tensor`) or loaded from JSON.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import expr as _expr
from .errors import AlgebraMismatch, DimensionError, DomainError, WeilSizeError
from .groebner import (
    coordinates,
    groebner_basis,
    is_zero_dimensional,
    quotient_monomial_basis,
    univariate_minimal_generator,
)
from .polyring import DEFAULT_ORDER, Ideal, MonomialOrder, Polynomial

DEFAULT_MAX_TABLE = 10**6


def kronecker(c: Sequence, d: Sequence) -> tuple:
    """Kronecker product: ``out[j*len(d) + k] == c[j] * d[k]``."""
    return tuple(cj * dk for cj in c for dk in d)


class WeilSettings:
    """Computable presentation of a Weil algebra.  Immutable."""

    def __init__(self, basis, mult_table: Mapping, max_powers, non_van: Mapping, name: str | None = None):
        self.basis = tuple(tuple(int(e) for e in b) for b in basis)
        self.max_powers = tuple(int(k) for k in max_powers)
        self.var_count = len(self.max_powers)
        self.dim = len(self.basis)
        table = {}
        for (i, j), vec in mult_table.items():
            key = (i, j) if i <= j else (j, i)
            table[key] = tuple(vec)
        self.mult_table = table
        self.non_van = {tuple(a): tuple(v) for a, v in non_van.items()}
        self.name = name
        self._hash = hash((self.basis, self.var_count, tuple(sorted(table.items()))))
        self._sparse = None
        self._check_shape()

    def _check_shape(self):
        if not self.basis or any(self.basis[0]):
            raise ValueError("basis must start with the unit monomial")
        for b in self.basis:
            if len(b) != self.var_count:
                raise DimensionError(f"basis monomial {b} for {self.var_count} variables")
        for key, vec in itertools.chain(self.mult_table.items(), self.non_van.items()):
            if len(vec) != self.dim:
                raise DimensionError(f"coefficient vector of length {len(vec)} for {key}, expected {self.dim}")
        missing = [(i, j) for i in range(self.dim) for j in range(i, self.dim) if (i, j) not in self.mult_table]
        if missing:
            raise ValueError(f"multiplication table lacks entries {missing[:3]}")

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, WeilSettings):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.basis == other.basis
            and self.var_count == other.var_count
            and self.mult_table == other.mult_table
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"<WeilSettings {label}dim={self.dim} max_powers={list(self.max_powers)}>"

    def product(self, i: int, j: int) -> tuple:
        return self.mult_table[(i, j) if i <= j else (j, i)]

    def sparse_table(self) -> list:
        """``[(i, j, [(k, c), ...])]`` over all ordered pairs, zeros dropped."""
        if self._sparse is None:
            out = []
            for i in range(self.dim):
                for j in range(self.dim):
                    vec = self.product(i, j)
                    nz = [(k, c) for k, c in enumerate(vec) if c != 0]
                    if nz:
                        out.append((i, j, nz))
            self._sparse = out
        return self._sparse

    # elements

    def element(self, coeffs) -> "WeilElement":
        return WeilElement(self, coeffs)

    def zero(self) -> "WeilElement":
        return WeilElement(self, [Fraction(0)] * self.dim)

    def one(self) -> "WeilElement":
        return inject_coeff(Fraction(1), self)

    def generators(self) -> list:
        return [generator(self, i) for i in range(self.var_count)]

    def validate(self) -> None:
        """Check the algebraic invariants; raises ``AssertionError`` on failure."""
        for j in range(self.dim):
            unit = tuple(Fraction(int(k == j)) for k in range(self.dim))
            assert tuple(self.product(0, j)) == unit, f"1*b_{j} != b_{j}"
        for b in self.basis:
            assert all(e <= k for e, k in zip(b, self.max_powers)), f"basis monomial {b} exceeds max powers"
        for j, b in enumerate(self.basis):
            assert self.non_van[b] == tuple(Fraction(int(k == j)) for k in range(self.dim)), b
        for alpha in itertools.product(*(range(k + 1) for k in self.max_powers)):
            assert alpha in self.non_van, f"non_van lacks {alpha}"
        for i in range(self.var_count):
            g = generator(self, i)
            assert (g ** (self.max_powers[i] + 1)).is_zero(), f"x_{i} is not nilpotent"
            assert not (g ** self.max_powers[i]).is_zero(), f"x_{i}^{self.max_powers[i]} vanishes"


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class WeilElement:
    """Coefficient vector over the basis of a :class:`WeilSettings`."""

    __slots__ = ("settings", "coeffs")
    __array_priority__ = 1000

    def __init__(self, settings: WeilSettings, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != settings.dim:
            raise DimensionError(f"{len(coeffs)} coefficients for a {settings.dim}-dimensional algebra")
        self.settings = settings
        self.coeffs = coeffs

    # helpers

    def scalar_kind(self) -> str:
        return _expr.infer_kind(self.coeffs)

    def _same(self, other: "WeilElement"):
        if other.settings is not self.settings and other.settings != self.settings:
            raise AlgebraMismatch("elements belong to different Weil algebras")

    def _coerce(self, other):
        if isinstance(other, WeilElement):
            self._same(other)
            return other
        if isinstance(other, (int, float, Fraction, _expr.Expr)):
            return inject_coeff(other, self.settings)
        return NotImplemented

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def is_zero(self) -> bool:
        return all(_expr.is_zero(c) for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, WeilElement):
            return self.settings == other.settings and self.coeffs == other.coeffs
        if isinstance(other, (int, float, Fraction)):
            return self == inject_coeff(other, self.settings)
        return NotImplemented

    __hash__ = None

    def astype(self, kind: str) -> "WeilElement":
        return WeilElement(self.settings, [_expr.coerce_scalar(c, kind) for c in self.coeffs])

    def map(self, fn) -> "WeilElement":
        return WeilElement(self.settings, [fn(c) for c in self.coeffs])

    # vector space

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return WeilElement(self.settings, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return WeilElement(self.settings, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return WeilElement(self.settings, [-a for a in self.coeffs])

    def __pos__(self):
        return self

    def scale(self, c) -> "WeilElement":
        return WeilElement(self.settings, [c * a for a in self.coeffs])

    # algebra

    def __mul__(self, other):
        if isinstance(other, (int, float, Fraction, _expr.Expr)):
            return self.scale(other)
        if not isinstance(other, WeilElement):
            return NotImplemented
        return weil_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, Fraction, _expr.Expr)):
            return WeilElement(self.settings, [other * a for a in self.coeffs])
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, WeilElement):
            self._same(other)
            return self * other.apply("recip")
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DomainError("division by zero")
            return self.scale(Fraction(1) / other)
        if isinstance(other, (float, _expr.Expr)):
            return WeilElement(self.settings, [a / other for a in self.coeffs])
        return NotImplemented

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.apply("recip")

    def __pow__(self, exponent):
        c = Fraction(exponent)
        if c.denominator == 1:
            return _expr.int_power(self, int(c))
        from .smooth import lift_weil
        return lift_weil(self.settings, _expr.Pow(_expr.Var(0), c), [self])

    def apply(self, name: str) -> "WeilElement":
        """C-infinity lifting of the unary vocabulary function ``name``."""
        from .smooth import lift_weil
        return lift_weil(self.settings, _expr.Apply(name, (_expr.Var(0),)), [self])

    @classmethod
    def apply_nary(cls, name: str, args: Sequence) -> "WeilElement":
        from .smooth import lift_weil
        settings = next(a.settings for a in args if isinstance(a, WeilElement))
        args = [a if isinstance(a, WeilElement) else inject_coeff(a, settings) for a in args]
        rule = _expr.RULES[name]
        f = _expr.Apply(name, tuple(_expr.Var(i) for i in range(rule.arity)))
        return lift_weil(settings, f, args)

    # display

    def terms(self) -> list:
        """``(monomial, coeff)`` pairs, descending total degree then degrevlex."""
        order = DEFAULT_ORDER
        pairs = list(zip(self.settings.basis, self.coeffs))
        pairs.sort(key=lambda p: order.key(p[0]), reverse=True)
        return pairs

    def to_text(self, zero_tol=None) -> str:
        parts = []
        for mono, c in self.terms():
            if zero_tol is not None and _negligible(c, zero_tol):
                continue
            parts.append(f"{format_scalar(c)} {monomial_text(mono)}".rstrip() if any(mono) else format_scalar(c))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return self.to_text(zero_tol=0)


def _negligible(c, tol) -> bool:
    if isinstance(c, _expr.Expr):
        return _expr.is_zero(_expr.normalise(c))
    if tol == 0:
        return c == 0
    return abs(c) < tol


def monomial_text(mono: Sequence[int]) -> str:
    if not any(mono):
        return "1"
    out = []
    for i, e in enumerate(mono):
        if e == 1:
            out.append(f"d({i})")
        elif e > 1:
            out.append(f"d({i})^{e}")
    return " ".join(out)


def format_scalar(c) -> str:
    if isinstance(c, float):
        return repr(c)
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    if isinstance(c, _expr.Expr):
        return _expr.to_text(_expr.normalise(c))
    return str(c)


def weil_mul(u: WeilElement, v: WeilElement) -> WeilElement:
    """Bilinear product through the multiplication table."""
    u._same(v)
    w = u.settings
    out = [None] * w.dim
    uc, vc = u.coeffs, v.coeffs
    nz_u = {i for i, c in enumerate(uc) if not _expr.is_zero(c)}
    nz_v = {j for j, c in enumerate(vc) if not _expr.is_zero(c)}
    for i, j, entries in w.sparse_table():
        if i not in nz_u or j not in nz_v:
            continue
        p = uc[i] * vc[j]
        for k, c in entries:
            term = p if c == 1 else c * p
            out[k] = term if out[k] is None else out[k] + term
    zero = _zero_like(uc + vc)
    return WeilElement(w, [zero if c is None else c for c in out])


def _zero_like(values):
    kind = _expr.infer_kind(values)
    return _expr.coerce_scalar(0, kind)


def inject_coeff(c, settings: WeilSettings) -> WeilElement:
    """The constant ``c`` as an element: ``c * b_0``."""
    zero = _zero_like([c])
    return WeilElement(settings, [c] + [zero] * (settings.dim - 1))


def generator(settings: WeilSettings, i: int) -> WeilElement:
    """The infinitesimal ``[X_i]``."""
    if not 0 <= i < settings.var_count:
        raise DimensionError(f"generator {i} of a {settings.var_count}-variable algebra")
    alpha = tuple(int(j == i) for j in range(settings.var_count))
    vec = settings.non_van.get(alpha)
    if vec is None:
        return settings.zero()
    return WeilElement(settings, vec)


# ---------------------------------------------------------------------------
# WeilTest

@dataclass(frozen=True)
class WeilTestResult:
    settings: WeilSettings | None
    reason: str | None = None

    def __bool__(self):
        return self.settings is not None


def _table_size(max_powers) -> int:
    return math.prod(k + 1 for k in max_powers)


def check_weil(ideal: Ideal, order=DEFAULT_ORDER, max_table: int = DEFAULT_MAX_TABLE,
               names: Sequence[str] | None = None) -> WeilTestResult:
    """Decide whether Q[X]/ideal is a Weil algebra and compute its settings.

    Returns a result whose ``settings`` is ``None`` (with a ``reason``) for
    non-Weil input.
    """
    order = MonomialOrder.coerce(order)
    names = list(names) if names else [f"x{i}" for i in range(ideal.nvars)]
    gb = groebner_basis(ideal, order)
    if gb.is_unit():
        return WeilTestResult(None, "unit ideal: the quotient is the zero ring")
    if not is_zero_dimensional(gb):
        return WeilTestResult(None, "not zero-dimensional")
    basis = quotient_monomial_basis(gb)

    max_powers = []
    for i in range(ideal.nvars):
        p = univariate_minimal_generator(gb, i)
        if not p.is_monomial():
            return WeilTestResult(
                None, f"variable {names[i]} is not nilpotent: minimal polynomial {p.to_text(names)}"
            )
        max_powers.append(p.total_degree() - 1)
    size = _table_size(max_powers)
    if size > max_table:
        raise WeilSizeError(f"non-vanishing table would hold {size} entries (cap {max_table})")

    n = ideal.nvars
    table = {}
    for i in range(len(basis)):
        for j in range(i, len(basis)):
            prod = Polynomial.monomial(tuple(a + b for a, b in zip(basis[i], basis[j])))
            table[(i, j)] = coordinates(prod, gb, basis)
    non_van = {}
    for alpha in itertools.product(*(range(k + 1) for k in max_powers)):
        non_van[alpha] = coordinates(Polynomial.monomial(alpha) if n else Polynomial.constant(1, 0), gb, basis)
    return WeilTestResult(WeilSettings(basis, table, max_powers, non_van))


def weil_test(ideal: Ideal, order=DEFAULT_ORDER, max_table: int = DEFAULT_MAX_TABLE) -> WeilSettings | None:
    """Weil settings of Q[X]/ideal, or ``None`` if it is not a Weil algebra."""
    return check_weil(ideal, order, max_table).settings


# ---------------------------------------------------------------------------
# hard-coded settings

def d_order(m: int) -> WeilSettings:
    """Settings of Q[X]/(X^m), bypassing the Gröbner computation."""
    if m < 1:
        raise ValueError("DOrder needs m >= 1")
    one, zero = Fraction(1), Fraction(0)

    def e(k):
        return tuple(one if t == k else zero for t in range(m))

    null = tuple([zero] * m)
    basis = [(k,) for k in range(m)]
    table = {(i, j): (e(i + j) if i + j < m else null) for i in range(m) for j in range(i, m)}
    non_van = {(k,): e(k) for k in range(m)}
    return WeilSettings(basis, table, [m - 1], non_van, name=f"DOrder {m}")


def dual_numbers() -> WeilSettings:
    """Settings of Q[X]/(X^2)."""
    w = d_order(2)
    w.name = "D1"
    return w


D1 = dual_numbers


def tensor_power(w: WeilSettings, n: int) -> WeilSettings:
    out = w
    for _ in range(n - 1):
        out = weil_tensor(out, w)
    return out


# ---------------------------------------------------------------------------
# tensor products

def weil_tensor(w1: WeilSettings, w2: WeilSettings, max_table: int = DEFAULT_MAX_TABLE) -> WeilSettings:
    """Settings of ``w1 ⊗ w2`` on ``n1 + n2`` variables.

    Basis element ``j*l2 + k`` is ``b1_j * b2_k``; table entries and
    non-vanishing representations are Kronecker products of the factors'.
    """
    max_powers = w1.max_powers + w2.max_powers
    size = _table_size(max_powers)
    if size > max_table:
        raise WeilSizeError(f"non-vanishing table would hold {size} entries (cap {max_table})")
    l1, l2 = w1.dim, w2.dim
    basis = [b1 + b2 for b1 in w1.basis for b2 in w2.basis]
    table = {}
    for i in range(l1 * l2):
        j1, k1 = divmod(i, l2)
        for j in range(i, l1 * l2):
            j2, k2 = divmod(j, l2)
            table[(i, j)] = kronecker(w1.product(j1, j2), w2.product(k1, k2))
    non_van = {
        a + b: kronecker(c, d) for a, c in w1.non_van.items() for b, d in w2.non_van.items()
    }
    name = f"{w1.name} * {w2.name}" if w1.name and w2.name else None
    return WeilSettings(basis, table, max_powers, non_van, name=name)


# ---------------------------------------------------------------------------
# JSON

def _encode(c):
    c = _frac(c)
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _decode(v):
    if isinstance(v, bool):
        raise ValueError("boolean is not a coefficient")
    if isinstance(v, (int, str)):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    raise ValueError(f"bad coefficient {v!r}")


def settings_to_dict(w: WeilSettings) -> dict:
    return {
        "basis": [list(b) for b in w.basis],
        "max_powers": list(w.max_powers),
        "mult_table": [
            {"i": i, "j": j, "coeffs": [_encode(c) for c in w.mult_table[(i, j)]]}
            for (i, j) in sorted(w.mult_table)
        ],
        "non_van": [
            {"monomial": list(a), "coeffs": [_encode(c) for c in w.non_van[a]]}
            for a in sorted(w.non_van)
        ],
    }


def settings_from_dict(data: Mapping) -> WeilSettings:
    try:
        basis = [tuple(b) for b in data["basis"]]
        max_powers = list(data["max_powers"])
        table = {(int(e["i"]), int(e["j"])): tuple(_decode(c) for c in e["coeffs"]) for e in data["mult_table"]}
        non_van = {tuple(e["monomial"]): tuple(_decode(c) for c in e["coeffs"]) for e in data["non_van"]}
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed Weil settings: {exc}") from None
    return WeilSettings(basis, table, max_powers, non_van)


def settings_to_json(w: WeilSettings, indent: int | None = 2) -> str:
    return json.dumps(settings_to_dict(w), indent=indent)


def settings_from_json(text: str) -> WeilSettings:
    return settings_from_dict(json.loads(text))
