"""Smooth-function expressions.

An expression is an immutable tree over ``Var`` (positional arguments),
``Sym`` (free symbols, used when expressions act as symbolic coefficients),
rational ``Const`` and the named constants ``pi`` and ``e``.  The same tree is

* a smooth map R^m -> R that :func:`eval_expr` folds over any carrier
  (floats, ``Fraction``, jets, Weil elements, or expressions themselves),
* a symbolic scalar, via the operator overloads below, and
* the input of :func:`symbolic_partial`, a rewrite-based differentiator
  used as an oracle against the jet engine in :mod:`weilad.smooth`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import DimensionError, DomainError, ParseError
from .polyring import Polynomial

FLOAT, RATIONAL, SYMBOLIC = "float", "rational", "symbolic"
KINDS = (FLOAT, RATIONAL, SYMBOLIC)


class Expr:
    """Base class of expression nodes.  Arithmetic builds lightly folded trees."""

    __slots__ = ()

    def _binary(self, other, cls, reflected=False):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return _fold(cls(other, self) if reflected else cls(self, other))

    def __add__(self, other):
        return self._binary(other, Add)

    def __radd__(self, other):
        return self._binary(other, Add, True)

    def __sub__(self, other):
        return self._binary(other, Sub)

    def __rsub__(self, other):
        return self._binary(other, Sub, True)

    def __mul__(self, other):
        return self._binary(other, Mul)

    def __rmul__(self, other):
        return self._binary(other, Mul, True)

    def __truediv__(self, other):
        return self._binary(other, Div)

    def __rtruediv__(self, other):
        return self._binary(other, Div, True)

    def __neg__(self):
        return _fold(Neg(self))

    def __pos__(self):
        return self

    def __pow__(self, exponent):
        return _fold(Pow(self, Fraction(exponent)))

    def apply(self, name: str):
        return _fold(Apply(name, (self,)))

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True, repr=True)
class Var(Expr):
    index: int


@dataclass(frozen=True)
class Sym(Expr):
    name: str


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class NamedConst(Expr):
    name: str  # "pi" or "e"


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", Fraction(self.exponent))


@dataclass(frozen=True)
class Apply(Expr):
    func: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


ZERO, ONE = Const(0), Const(1)


def _lift(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Const(value)
    if isinstance(value, float):
        raise TypeError("floats are not allowed inside symbolic expressions; use Fraction")
    return NotImplemented


def var(i: int) -> Var:
    return Var(i)


def sym(name: str) -> Sym:
    return Sym(name)


def const(c) -> Const:
    return Const(Fraction(c))


# ---------------------------------------------------------------------------
# derivative rules

@dataclass(frozen=True)
class DerivativeRule:
    """An m-ary function with its first partial derivatives.

    ``partials[i]`` is an expression in ``Var(0) .. Var(m-1)`` for the
    derivative with respect to argument ``i``.  Higher derivatives are never
    tabulated; both the jet engine and the symbolic oracle obtain them by
    applying the rules again to the partials.
    """

    name: str
    arity: int
    partials: tuple
    impl: Callable  # float implementation

    def __post_init__(self):
        if len(self.partials) != self.arity:
            raise ValueError(f"{self.name}: {len(self.partials)} partials for arity {self.arity}")


_X = Var(0)


def _ap(name, arg=_X):
    return Apply(name, (arg,))


def _float_recip(x):
    return 1.0 / x


RULES: dict = {}


def register_function(name: str, arity: int, partials: Sequence[Expr], impl: Callable) -> DerivativeRule:
    """Add a function to the vocabulary understood by parsing, evaluation and both differentiators."""
    rule = DerivativeRule(name, arity, tuple(partials), impl)
    RULES[name] = rule
    return rule


_one_minus_sq = Sub(ONE, Pow(_X, 2))
register_function("neg", 1, [Const(-1)], lambda x: -x)
register_function("recip", 1, [Neg(Mul(_ap("recip"), _ap("recip")))], _float_recip)
register_function("sqrt", 1, [Mul(Const(Fraction(1, 2)), _ap("recip", _ap("sqrt")))], math.sqrt)
register_function("exp", 1, [_ap("exp")], math.exp)
register_function("log", 1, [_ap("recip")], math.log)
register_function("sin", 1, [_ap("cos")], math.sin)
register_function("cos", 1, [Neg(_ap("sin"))], math.cos)
register_function("tan", 1, [Add(ONE, Pow(_ap("tan"), 2))], math.tan)
register_function("sinh", 1, [_ap("cosh")], math.sinh)
register_function("cosh", 1, [_ap("sinh")], math.cosh)
register_function("tanh", 1, [Sub(ONE, Pow(_ap("tanh"), 2))], math.tanh)
register_function("asin", 1, [_ap("recip", _ap("sqrt", _one_minus_sq))], math.asin)
register_function("acos", 1, [Neg(_ap("recip", _ap("sqrt", _one_minus_sq)))], math.acos)
register_function("atan", 1, [_ap("recip", Add(ONE, Pow(_X, 2)))], math.atan)


def pow_rule(exponent: Fraction) -> DerivativeRule:
    """Rule for x -> x**c with a constant exponent."""
    c = Fraction(exponent)
    return DerivativeRule(f"pow[{c}]", 1, (Mul(Const(c), Pow(_X, c - 1)),), lambda x: x ** float(c))


# ---------------------------------------------------------------------------
# scalar carriers

def scalar_kind(value) -> str | None:
    if isinstance(value, Expr):
        return SYMBOLIC
    if isinstance(value, float):
        return FLOAT
    if isinstance(value, (int, Fraction)):
        return RATIONAL
    probe = getattr(value, "scalar_kind", None)
    return probe() if probe is not None else None


def infer_kind(values) -> str:
    kinds = {scalar_kind(v) for v in values}
    for k in (SYMBOLIC, FLOAT):
        if k in kinds:
            return k
    return RATIONAL


def coerce_scalar(value, kind: str):
    """Convert a plain scalar into the representation used by ``kind``."""
    if kind == FLOAT:
        if isinstance(value, Expr):
            raise TypeError("symbolic value in a float computation")
        return float(value)
    if kind == RATIONAL:
        if isinstance(value, float):
            raise DomainError("floating-point value in an exact rational computation")
        if isinstance(value, Expr):
            raise TypeError("symbolic value in a rational computation")
        return Fraction(value)
    if kind == SYMBOLIC:
        if isinstance(value, Expr):
            return value
        return _lift(value)
    raise ValueError(f"unknown scalar kind {kind!r}")


def is_zero(value) -> bool:
    if isinstance(value, Expr):
        return isinstance(value, Const) and value.value == 0
    try:
        return value == 0
    except TypeError:
        return False


def _float_call(fn, *args):
    try:
        result = fn(*args)
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise DomainError(f"{getattr(fn, '__name__', fn)}{args}: {exc}") from None
    if isinstance(result, complex):
        raise DomainError(f"complex result for {args}")
    return result


def apply_function(name: str, x):
    """Apply the unary vocabulary function ``name`` to a scalar or carrier."""
    rule = RULES.get(name)
    if rule is None:
        raise KeyError(f"unknown function {name!r}")
    if rule.arity != 1:
        raise TypeError(f"{name} takes {rule.arity} arguments")
    if isinstance(x, Expr):
        return x.apply(name)
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, float):
        return _float_call(rule.impl, x)
    if isinstance(x, (int, Fraction)):
        if name == "neg":
            return -x
        if name == "recip":
            if x == 0:
                raise DomainError("reciprocal of zero")
            return 1 / Fraction(x)
        raise DomainError(f"{name} of an exact rational is not rational")
    if hasattr(x, "apply"):
        return x.apply(name)
    raise TypeError(f"cannot apply {name} to {type(x).__name__}")


def apply_nary(name: str, args: Sequence):
    rule = RULES[name]
    if len(args) != rule.arity:
        raise DimensionError(f"{name} takes {rule.arity} arguments, got {len(args)}")
    if rule.arity == 1:
        return apply_function(name, args[0])
    for a in args:
        hook = getattr(type(a), "apply_nary", None)
        if hook is not None:
            return hook(name, list(args))
    if any(isinstance(a, Expr) for a in args):
        return Apply(name, tuple(_lift(a) for a in args))
    if all(isinstance(a, float) for a in args):
        return _float_call(rule.impl, *args)
    raise DomainError(f"{name} of exact rationals is not rational")


def int_power(x, n: int):
    """``x**n`` for integer ``n`` by repeated squaring, for any carrier."""
    if n < 0:
        return int_power(apply_function("recip", x), -n)
    result = None
    base = x
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    if result is None:
        return x * 0 + 1
    return result


def power(x, exponent):
    c = Fraction(exponent)
    if isinstance(x, Expr):
        return x ** c
    if c.denominator == 1:
        return int_power(x, int(c))
    if isinstance(x, float):
        if x < 0:
            raise DomainError(f"non-integer power of negative number {x}")
        return _float_call(math.pow, x, float(c))
    if isinstance(x, (int, Fraction)):
        raise DomainError("non-integer power of an exact rational")
    return x ** c


# ---------------------------------------------------------------------------
# evaluation

def eval_expr(e: Expr, args: Sequence = (), kind: str | None = None,
              symbols: Mapping[str, object] | None = None):
    """Fold ``e`` over a carrier.

    ``args[i]`` is the value of ``Var(i)``.  ``kind`` decides how constants
    are represented; by default it is inferred from the arguments.  Free
    symbols are looked up in ``symbols`` and otherwise kept symbolic.
    """
    args = list(args)
    if kind is None:
        kind = infer_kind(args + list((symbols or {}).values()))
    symbols = dict(symbols or {})
    cache: dict = {}

    def go(node):
        key = id(node)
        if key in cache:
            return cache[key][1]
        value = _eval_node(node, go, args, kind, symbols)
        cache[key] = (node, value)
        return value

    return go(e)


def _eval_node(node, go, args, kind, symbols):
    if isinstance(node, Var):
        if not 0 <= node.index < len(args):
            raise DimensionError(f"variable {node.index} with only {len(args)} arguments")
        return args[node.index]
    if isinstance(node, Const):
        return coerce_scalar(node.value, kind)
    if isinstance(node, NamedConst):
        if kind == SYMBOLIC:
            return node
        if kind == RATIONAL:
            raise DomainError(f"{node.name} is not rational")
        return {"pi": math.pi, "e": math.e}[node.name]
    if isinstance(node, Sym):
        if node.name in symbols:
            return symbols[node.name]
        if kind == SYMBOLIC:
            return node
        raise DomainError(f"unbound symbol {node.name!r}")
    if isinstance(node, Neg):
        return -go(node.arg)
    if isinstance(node, Add):
        return go(node.left) + go(node.right)
    if isinstance(node, Sub):
        return go(node.left) - go(node.right)
    if isinstance(node, Mul):
        return go(node.left) * go(node.right)
    if isinstance(node, Div):
        num, den = go(node.left), go(node.right)
        try:
            return num / den
        except ZeroDivisionError:
            raise DomainError("division by zero") from None
    if isinstance(node, Pow):
        return power(go(node.base), node.exponent)
    if isinstance(node, Apply):
        return apply_nary(node.func, [go(a) for a in node.args])
    raise TypeError(f"not an expression node: {node!r}")


def substitute(e: Expr, args: Sequence[Expr]) -> Expr:
    """Replace ``Var(i)`` by ``args[i]``.  No folding."""
    args = [_lift(a) for a in args]

    def go(node):
        if isinstance(node, Var):
            return args[node.index]
        if isinstance(node, (Const, NamedConst, Sym)):
            return node
        if isinstance(node, Neg):
            return Neg(go(node.arg))
        if isinstance(node, (Add, Sub, Mul, Div)):
            return type(node)(go(node.left), go(node.right))
        if isinstance(node, Pow):
            return Pow(go(node.base), node.exponent)
        if isinstance(node, Apply):
            return Apply(node.func, tuple(go(a) for a in node.args))
        raise TypeError(node)

    return go(e)


def arity(e: Expr) -> int:
    """One more than the largest variable index, 0 for closed expressions."""
    top = -1
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            top = max(top, node.index)
        elif isinstance(node, Neg):
            stack.append(node.arg)
        elif isinstance(node, (Add, Sub, Mul, Div)):
            stack.extend((node.left, node.right))
        elif isinstance(node, Pow):
            stack.append(node.base)
        elif isinstance(node, Apply):
            stack.extend(node.args)
    return top + 1


def free_symbols(e: Expr) -> set:
    out = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Sym):
            out.add(node.name)
        elif isinstance(node, Neg):
            stack.append(node.arg)
        elif isinstance(node, (Add, Sub, Mul, Div)):
            stack.extend((node.left, node.right))
        elif isinstance(node, Pow):
            stack.append(node.base)
        elif isinstance(node, Apply):
            stack.extend(node.args)
    return out


# ---------------------------------------------------------------------------
# light simplification

def _fold(node: Expr) -> Expr:
    """One step of constant folding at the root, children assumed folded."""
    if isinstance(node, Neg):
        a = node.arg
        if isinstance(a, Const):
            return Const(-a.value)
        if isinstance(a, Neg):
            return a.arg
        return node
    if isinstance(node, Add):
        a, b = node.left, node.right
        if isinstance(a, Const) and isinstance(b, Const):
            return Const(a.value + b.value)
        if a == ZERO:
            return b
        if b == ZERO:
            return a
        return node
    if isinstance(node, Sub):
        a, b = node.left, node.right
        if isinstance(a, Const) and isinstance(b, Const):
            return Const(a.value - b.value)
        if b == ZERO:
            return a
        if a == ZERO:
            return _fold(Neg(b))
        return node
    if isinstance(node, Mul):
        a, b = node.left, node.right
        if isinstance(a, Const) and isinstance(b, Const):
            return Const(a.value * b.value)
        if a == ZERO or b == ZERO:
            return ZERO
        if a == ONE:
            return b
        if b == ONE:
            return a
        if isinstance(b, Const):
            return _fold(Mul(b, a))
        if isinstance(a, Const):
            if a.value == -1:
                return _fold(Neg(b))
            if isinstance(b, Mul) and isinstance(b.left, Const):
                return _fold(Mul(Const(a.value * b.left.value), b.right))
        return node
    if isinstance(node, Div):
        a, b = node.left, node.right
        if isinstance(a, Const) and isinstance(b, Const) and b.value != 0:
            return Const(a.value / b.value)
        if b == ONE:
            return a
        if a == ZERO:
            return ZERO
        return node
    if isinstance(node, Pow):
        base, c = node.base, node.exponent
        if c == 1:
            return base
        if c == 0:
            return ONE
        if isinstance(base, Const) and c.denominator == 1 and (base.value != 0 or c > 0):
            return Const(base.value ** int(c))
        return node
    return node


def normalise(e: Expr) -> Expr:
    """Constant folding, 0/1 identity elimination and double-negation removal.

    Applied bottom-up until nothing changes, so ``normalise`` is idempotent.
    """
    while True:
        out = _normalise_once(e)
        if out == e:
            return out
        e = out


def _normalise_once(e: Expr) -> Expr:
    memo: dict = {}

    def go(node):
        key = id(node)
        if key in memo:
            return memo[key][1]
        if isinstance(node, Neg):
            out = _fold(Neg(go(node.arg)))
        elif isinstance(node, (Add, Sub, Mul, Div)):
            out = _fold(type(node)(go(node.left), go(node.right)))
        elif isinstance(node, Pow):
            out = _fold(Pow(go(node.base), node.exponent))
        elif isinstance(node, Apply):
            out = Apply(node.func, tuple(go(a) for a in node.args))
        else:
            out = node
        memo[key] = (node, out)
        return out

    return go(e)


# ---------------------------------------------------------------------------
# symbolic differentiation (independent of the jet engine)

def _d(node: Expr, i: int, memo: dict) -> Expr:
    key = id(node)
    if key in memo:
        return memo[key][1]
    if isinstance(node, Var):
        out = ONE if node.index == i else ZERO
    elif isinstance(node, (Const, NamedConst, Sym)):
        out = ZERO
    elif isinstance(node, Neg):
        out = -_d(node.arg, i, memo)
    elif isinstance(node, Add):
        out = _d(node.left, i, memo) + _d(node.right, i, memo)
    elif isinstance(node, Sub):
        out = _d(node.left, i, memo) - _d(node.right, i, memo)
    elif isinstance(node, Mul):
        u, v = node.left, node.right
        out = _d(u, i, memo) * v + u * _d(v, i, memo)
    elif isinstance(node, Div):
        u, v = node.left, node.right
        out = (_d(u, i, memo) * v - u * _d(v, i, memo)) / (v ** 2)
    elif isinstance(node, Pow):
        du = _d(node.base, i, memo)
        c = node.exponent
        out = ZERO if is_zero(du) else Const(c) * node.base ** (c - 1) * du
    elif isinstance(node, Apply):
        rule = RULES[node.func]
        out = ZERO
        for k, arg in enumerate(node.args):
            darg = _d(arg, i, memo)
            if is_zero(darg):
                continue
            out = out + normalise(substitute(rule.partials[k], node.args)) * darg
    else:
        raise TypeError(node)
    memo[key] = (node, out)
    return out


def symbolic_partial(e: Expr, i: int) -> Expr:
    """Exact partial derivative of ``e`` with respect to ``Var(i)``."""
    if i < 0:
        raise DimensionError(f"negative variable index {i}")
    return normalise(_d(e, i, {}))


def symbolic_derivative(e: Expr, alpha: Sequence[int]) -> Expr:
    """Iterated partial derivative D^alpha e."""
    for i, k in enumerate(alpha):
        for _ in range(k):
            e = symbolic_partial(e, i)
    return e


# ---------------------------------------------------------------------------
# polynomial conversion

def to_polynomial(e: Expr, nvars: int) -> Polynomial:
    """Interpret an expression as a polynomial with rational coefficients."""
    def go(node):
        if isinstance(node, Var):
            return Polynomial.variable(node.index, nvars)
        if isinstance(node, Const):
            return Polynomial.constant(node.value, nvars)
        if isinstance(node, Neg):
            return -go(node.arg)
        if isinstance(node, Add):
            return go(node.left) + go(node.right)
        if isinstance(node, Sub):
            return go(node.left) - go(node.right)
        if isinstance(node, Mul):
            return go(node.left) * go(node.right)
        if isinstance(node, Div):
            den = go(node.right)
            if den.total_degree() > 0:
                raise ValueError("division by a non-constant is not polynomial")
            if den.is_zero():
                raise DomainError("division by zero")
            return go(node.left) / den
        if isinstance(node, Pow):
            c = node.exponent
            if c.denominator != 1 or c < 0:
                raise ValueError(f"exponent {c} is not a non-negative integer")
            return go(node.base) ** int(c)
        raise ValueError(f"{to_text(node)} is not a polynomial")

    return go(e)


def from_polynomial(p: Polynomial) -> Expr:
    """Expression tree for ``p`` (terms in descending order)."""
    out: Expr = ZERO
    for mono in p.monomials():
        term: Expr = Const(p.coeff(mono))
        for i, k in enumerate(mono):
            if k:
                term = term * Pow(Var(i), k) if k > 1 else term * Var(i)
        out = out + term
    return out


# ---------------------------------------------------------------------------
# text syntax

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^(),])|(\S))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, ident, op, bad = m.groups()
        start = m.start(m.lastindex) if m.lastindex else m.start()
        if bad is not None:
            raise ParseError(f"unexpected character {bad!r}", text, start)
        if num is not None:
            tokens.append(("num", num, start))
        elif ident is not None:
            tokens.append(("ident", ident, start))
        elif op is not None:
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent; the unary/power/primary levels return ``(node, literal)``
    where ``literal`` marks a bare number token, so ``3/4`` folds into one
    rational constant while ``(3)/4`` stays a division."""

    def __init__(self, text, names, allow_symbols):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.names = {n: i for i, n in enumerate(names)}
        self.allow_symbols = allow_symbols

    def peek(self, offset=0):
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def is_op(self, chars, offset=0):
        tok = self.peek(offset)
        return tok[0] == "op" and tok[1] in chars

    def expect(self, value):
        tok = self.take()
        if tok[0] != "op" or tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", self.text, tok[2])
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.text, tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        node = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.is_op("+-"):
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node, literal = self.unary()
        while self.is_op("*/"):
            op_tok = self.take()
            rhs, rhs_literal = self.unary()
            if op_tok[1] == "*":
                node, literal = Mul(node, rhs), False
            elif literal and rhs_literal:
                if rhs.value == 0:
                    raise self.error("division by zero in literal", op_tok)
                node = Const(node.value / rhs.value)
            else:
                node, literal = Div(node, rhs), False
        return node

    def unary(self):
        if self.is_op("-"):
            self.take()
            if self.peek()[0] == "num" and not self.is_op("^", 1):
                return Const(-_number(self.take()[1])), True
            node, _ = self.unary()
            return Neg(node), False
        if self.is_op("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base, literal = self.primary()
        if self.is_op("^"):
            op_tok = self.take()
            exponent, _ = self.unary()
            try:
                c = eval_expr(exponent, (), kind=RATIONAL)
            except Exception:
                raise self.error("exponent must be a rational constant", op_tok) from None
            return Pow(base, c), False
        return base, literal

    def primary(self):
        kind, value, pos = self.take()
        if kind == "num":
            return Const(_number(value)), True
        if kind == "ident":
            if self.is_op("("):
                if value not in RULES:
                    raise ParseError(f"unknown function {value!r}", self.text, pos)
                self.take()
                args = [self.expr()]
                while self.is_op(","):
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                rule = RULES[value]
                if len(args) != rule.arity:
                    raise ParseError(f"{value} takes {rule.arity} argument(s), got {len(args)}", self.text, pos)
                return Apply(value, tuple(args)), False
            if value in self.names:
                return Var(self.names[value]), False
            if value in ("pi", "e"):
                return NamedConst(value), False
            if self.allow_symbols:
                return Sym(value), False
            raise ParseError(f"unknown identifier {value!r}", self.text, pos)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node, False
        raise ParseError(f"unexpected {value or 'end of input'!r}", self.text, pos)


def _number(text: str) -> Fraction:
    return Fraction(text)


def parse_expr(text: str, names: Sequence[str] = (), allow_symbols: bool = False) -> Expr:
    """Parse infix text.  ``names[i]`` becomes ``Var(i)``.

    Unknown identifiers are an error unless ``allow_symbols`` is set, in which
    case they become free symbols.
    """
    return _Parser(text, list(names), allow_symbols).parse()


def split_top_level(text: str, sep: str = ",") -> list:
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append((start, text[start:k]))
            start = k + 1
    parts.append((start, text[start:]))
    return parts


def parse_polynomials(text: str, names: Sequence[str]) -> list:
    """Parse a comma-separated list of polynomials such as ``x^2 - y^3, y^4``."""
    polys = []
    for offset, chunk in split_top_level(text):
        try:
            e = parse_expr(chunk, names)
            polys.append(to_polynomial(e, len(names)))
        except ParseError as exc:
            pos = None if exc.position is None else exc.position + offset
            raise ParseError(str(exc).split(" at position")[0], text, pos) from None
        except ValueError as exc:
            raise ParseError(str(exc), text, offset + len(chunk) - len(chunk.lstrip())) from None
    return polys


# precedence levels used by the printer
_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _const_text(c: Fraction) -> str:
    if c.denominator == 1 and c >= 0:
        return str(c.numerator)
    if c.denominator == 1:
        return f"({c.numerator})"
    return f"({c.numerator}/{c.denominator})"


def to_text(e: Expr, names: Sequence[str] | None = None) -> str:
    """Render ``e`` in the grammar accepted by :func:`parse_expr`.

    Parentheses are added wherever the parser would otherwise build a
    different tree, so ``parse_expr(to_text(e, names), names) == e``.
    """
    names = list(names or [])

    def prec(node):
        return _PREC.get(type(node), 5)

    def go(node) -> str:
        if isinstance(node, Var):
            return names[node.index] if node.index < len(names) else f"x{node.index}"
        if isinstance(node, (Sym, NamedConst)):
            return node.name
        if isinstance(node, Const):
            return _const_text(node.value)
        if isinstance(node, Neg):
            inner = go(node.arg)
            # "-3" would read back as the constant -3
            if prec(node.arg) < 3 or (isinstance(node.arg, Const) and not inner.startswith("(")):
                inner = f"({inner})"
            return "-" + inner
        if isinstance(node, (Add, Sub, Mul, Div)):
            p = prec(node)
            left, right = go(node.left), go(node.right)
            if prec(node.left) < p:
                left = f"({left})"
            elif isinstance(node, Div) and isinstance(node.left, Const) and isinstance(node.right, Const):
                if not left.startswith("("):
                    left = f"({left})"
            if prec(node.right) <= p:
                right = f"({right})"
            sym = {Add: " + ", Sub: " - ", Mul: "*", Div: "/"}[type(node)]
            return f"{left}{sym}{right}"
        if isinstance(node, Pow):
            base = go(node.base)
            if prec(node.base) <= 4:
                base = f"({base})"
            return f"{base}^{_const_text(node.exponent)}"
        if isinstance(node, Apply):
            return f"{node.func}({', '.join(go(a) for a in node.args)})"
        raise TypeError(node)

    return go(e)
