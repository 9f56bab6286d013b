"""Command-line front end: ``weilad check | eval | tensor``.

Exit codes: 0 ok, 1 not a Weil algebra, 2 parse error, 3 domain error or
algebra mismatch.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from . import expr as _expr
from .errors import AlgebraMismatch, DimensionError, DomainError, ParseError, WeilSizeError
from .polyring import Ideal, MonomialOrder
from .smooth import lift_weil
from .weil import (
    WeilSettings,
    check_weil,
    d_order,
    dual_numbers,
    format_scalar,
    generator,
    inject_coeff,
    monomial_text,
    settings_from_json,
    settings_to_json,
    weil_tensor,
)

EXIT_OK, EXIT_NOT_WEIL, EXIT_PARSE, EXIT_DOMAIN = 0, 1, 2, 3


class NotWeil(Exception):
    """An algebra spec named an ideal whose quotient is not a Weil algebra."""


# ---------------------------------------------------------------------------
# algebra specs

_DORDER = re.compile(r"^\s*DOrder\s+(\d+)\s*$")
_IDEAL = re.compile(r"^\s*ideal\s*\((.*)\)\s*$", re.DOTALL)


def parse_names(text: str) -> list:
    names = [n.strip() for n in text.split(",") if n.strip()]
    for n in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
            raise ParseError(f"bad variable name {n!r}", text, text.find(n))
    if len(set(names)) != len(names):
        raise ParseError("repeated variable name", text, 0)
    return names


def ideal_settings(polys: str, names: Sequence[str], order="degrevlex") -> WeilSettings:
    ideal = Ideal(_expr.parse_polynomials(polys, names), nvars=len(names))
    result = check_weil(ideal, order, names=names)
    if result.settings is None:
        raise NotWeil(result.reason)
    return result.settings


def parse_algebra(text: str, order="degrevlex") -> WeilSettings:
    """Build settings from ``D1``, ``DOrder m``, ``ideal(polys; vars=...)`` or ``A * B``."""
    parts = _expr.split_top_level(text, "*")
    if len(parts) > 1:
        out = None
        for offset, chunk in parts:
            try:
                w = parse_algebra(chunk, order)
            except ParseError as exc:
                pos = None if exc.position is None else exc.position + offset
                raise ParseError(str(exc).split(" at position")[0], text, pos) from None
            out = w if out is None else weil_tensor(out, w)
        return out
    stripped = text.strip()
    lead = len(text) - len(text.lstrip())
    if stripped == "D1":
        return dual_numbers()
    m = _DORDER.match(text)
    if m:
        k = int(m.group(1))
        if k < 1:
            raise ParseError("DOrder needs m >= 1", text, m.start(1))
        return d_order(k)
    m = _IDEAL.match(text)
    if m:
        body = m.group(1)
        chunks = body.rsplit(";", 1)
        if len(chunks) != 2 or not chunks[1].strip().startswith("vars"):
            raise ParseError("expected ideal(<polys>; vars=<names>)", text, m.start(1))
        polys, tail = chunks
        key, _, value = tail.partition("=")
        if key.strip() != "vars" or not value.strip():
            raise ParseError("expected vars=<names>", text, m.start(1) + len(polys) + 1)
        try:
            return ideal_settings(polys, parse_names(value), order)
        except ParseError as exc:
            pos = None if exc.position is None else exc.position + m.start(1)
            raise ParseError(str(exc).split(" at position")[0], text, pos) from None
    raise ParseError(f"unknown algebra {stripped!r}", text, lead)


# ---------------------------------------------------------------------------
# output

def settings_text(w: WeilSettings) -> str:
    lines = []
    if w.name:
        lines.append(f"algebra:     {w.name}")
    lines.append(f"dimension:   {w.dim}")
    lines.append(f"variables:   {w.var_count}")
    lines.append(f"max powers:  {', '.join(str(k) for k in w.max_powers)}")
    lines.append("basis:")
    for k, b in enumerate(w.basis):
        lines.append(f"  [{k}] {monomial_text(b)}")
    lines.append("products:")
    for (i, j) in sorted(w.mult_table):
        vec = w.mult_table[(i, j)]
        if any(vec):
            lines.append(f"  [{i}]*[{j}] = {_vector_text(w, vec)}")
    lines.append("non-vanishing monomials:")
    for a in sorted(w.non_van):
        lines.append(f"  {monomial_text(a)} = {_vector_text(w, w.non_van[a])}")
    return "\n".join(lines)


def _vector_text(w: WeilSettings, vec) -> str:
    parts = [
        f"{format_scalar(Fraction(c))}*[{k}]" for k, c in enumerate(vec) if c != 0
    ]
    return " + ".join(parts) if parts else "0"


def element_json(u) -> dict:
    def enc(c):
        if isinstance(c, float):
            return c
        if isinstance(c, Fraction):
            return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        return format_scalar(c)

    return {"terms": [{"monomial": list(m), "coeff": enc(c)} for m, c in u.terms()]}


def emit_settings(w: WeilSettings, fmt: str, out) -> None:
    if fmt == "json":
        print(settings_to_json(w), file=out)
    else:
        print(settings_text(w), file=out)


# ---------------------------------------------------------------------------
# commands

def cmd_check(args, out) -> int:
    names = parse_names(args.vars)
    try:
        w = ideal_settings(args.ideal, names, args.order)
    except NotWeil as exc:
        print(f"No: {exc}", file=out)
        return EXIT_NOT_WEIL
    emit_settings(w, args.format, out)
    return EXIT_OK


def _parse_bindings(items, kind: str) -> dict:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise ParseError("expected --bind name=value", item, 0)
        e = _expr.parse_expr(value)
        out[name] = _expr.eval_expr(e, [], kind=kind)
    return out


def cmd_eval(args, out) -> int:
    if args.seed_settings:
        with open(args.seed_settings) as fh:
            w = settings_from_json(fh.read())
    elif args.algebra:
        w = parse_algebra(args.algebra, args.order)
    else:
        raise ParseError("eval needs --algebra or --seed-settings")
    kind = args.mode
    bindings = _parse_bindings(args.bind, kind)
    infinitesimals = [f"d{i}" for i in range(w.var_count)]
    clash = set(bindings) & set(infinitesimals)
    if clash:
        raise ParseError(f"cannot bind infinitesimal {sorted(clash)[0]}")
    names = infinitesimals + list(bindings)
    f = _expr.parse_expr(args.expression, names, allow_symbols=(kind == _expr.SYMBOLIC))
    symbols = sorted(_expr.free_symbols(f))
    if symbols and kind != _expr.SYMBOLIC:
        raise DomainError(f"unbound symbol {symbols[0]!r}")
    us = [generator(w, i).astype(kind) for i in range(w.var_count)]
    us += [inject_coeff(_expr.coerce_scalar(v, kind), w) for v in bindings.values()]
    if not us:
        us = [inject_coeff(_expr.coerce_scalar(0, kind), w)]
    result = lift_weil(w, f, us, kind=kind)
    if args.format == "json":
        print(json.dumps(element_json(result), indent=2), file=out)
    else:
        tol = args.zero_tol
        for mono, c in result.terms():
            if tol and not isinstance(c, _expr.Expr) and abs(c) < tol:
                continue
            if isinstance(c, _expr.Expr) and tol and _expr.is_zero(_expr.normalise(c)):
                continue
            print(f"{monomial_text(mono):<16} {format_scalar(c)}", file=out)
    return EXIT_OK


def cmd_tensor(args, out) -> int:
    w = weil_tensor(parse_algebra(args.left, args.order), parse_algebra(args.right, args.order))
    emit_settings(w, args.format, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weilad", description="Smooth structure of Weil algebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--order", choices=[o.value for o in MonomialOrder], default="degrevlex",
                        help="monomial order for Groebner computations")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="decide whether Q[vars]/<polys> is a Weil algebra")
    c.add_argument("ideal", help='comma-separated generators, e.g. "x^2 - y^3, y^4"')
    c.add_argument("--vars", required=True, help="comma-separated variable names")
    c.set_defaults(run=cmd_check)

    e = sub.add_parser("eval", parents=[common], help="evaluate an expression in a Weil algebra")
    e.add_argument("expression", help="infinitesimals are d0, d1, ...")
    e.add_argument("--algebra", help='"D1", "DOrder m", "ideal(polys; vars=x,y)" or "A * B"')
    e.add_argument("--seed-settings", help="JSON file with precomputed settings (overrides --algebra)")
    e.add_argument("--mode", choices=_expr.KINDS, default=_expr.FLOAT)
    e.add_argument("--zero-tol", type=float, default=0.0,
                   help="hide coefficients with magnitude below this (0 prints all)")
    e.add_argument("--bind", action="append", metavar="NAME=VALUE", help="bind a named argument")
    e.set_defaults(run=cmd_eval)

    t = sub.add_parser("tensor", parents=[common], help="settings of the tensor product of two algebras")
    t.add_argument("left")
    t.add_argument("right")
    t.set_defaults(run=cmd_tensor)
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, out)
    except NotWeil as exc:
        print(f"No: {exc}", file=out)
        return EXIT_NOT_WEIL
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
        return EXIT_PARSE
    except (DomainError, AlgebraMismatch, DimensionError, WeilSizeError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
