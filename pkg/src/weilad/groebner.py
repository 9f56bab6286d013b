"""Buchberger's algorithm and the zero-dimensional toolkit.

Everything here works over exact rationals.  Floating-point coefficients
would make the zero tests in the reduction loop meaningless.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, NotZeroDimensional
from .polyring import (
    DEFAULT_ORDER,
    Ideal,
    MonomialOrder,
    Polynomial,
    divides,
    mono_div,
    mono_lcm,
    mono_mul,
)


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Gröbner basis, sorted ascending by leading monomial."""

    polys: tuple
    order: MonomialOrder
    nvars: int

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def leading_monomials(self) -> list:
        return [g.leading_monomial(self.order) for g in self.polys]

    def is_unit(self) -> bool:
        return any(g.total_degree() == 0 for g in self.polys)


def _reduce(p: dict, basis: list, order: MonomialOrder) -> dict:
    """Full reduction of the term dict ``p`` modulo ``basis``.

    ``basis`` holds ``(terms, leading monomial, leading coefficient)`` triples.
    """
    p = dict(p)
    rem: dict = {}
    while p:
        lm = max(p, key=order.key)
        lc = p[lm]
        for terms, glm, glc in basis:
            if divides(glm, lm):
                shift = mono_div(lm, glm)
                factor = lc / glc
                for m, c in terms.items():
                    mm = mono_mul(m, shift)
                    v = p.get(mm, 0) - factor * c
                    if v == 0:
                        p.pop(mm, None)
                    else:
                        p[mm] = v
                break
        else:
            rem[lm] = lc
            del p[lm]
    return rem


def _s_poly(f: tuple, g: tuple) -> dict:
    fterms, flm, flc = f
    gterms, glm, glc = g
    lcm = mono_lcm(flm, glm)
    sf, sg = mono_div(lcm, flm), mono_div(lcm, glm)
    out: dict = {}
    for m, c in fterms.items():
        mm = mono_mul(m, sf)
        out[mm] = out.get(mm, 0) + c / flc
    for m, c in gterms.items():
        mm = mono_mul(m, sg)
        out[mm] = out.get(mm, 0) - c / glc
    return {m: c for m, c in out.items() if c != 0}


def _entry(terms: dict, order: MonomialOrder) -> tuple:
    lm = max(terms, key=order.key)
    lc = terms[lm]
    monic = {m: c / lc for m, c in terms.items()}
    return monic, lm, Fraction(1)


def groebner_basis(ideal: Ideal, order=DEFAULT_ORDER) -> GroebnerBasis:
    """Reduced Gröbner basis of ``ideal``.

    Buchberger with the coprime and chain criteria; S-pairs are processed by
    the normal strategy (smallest lcm first, ties broken by generator index).
    """
    order = MonomialOrder.coerce(order)
    n = ideal.nvars
    basis: list = []
    for g in ideal.generators:
        terms = {m: Fraction(c) for m, c in g.items()}
        if terms:
            basis.append(_entry(terms, order))

    pairs = set(itertools.combinations(range(len(basis)), 2))
    while pairs:
        i, j = min(
            pairs,
            key=lambda p: (order.key(mono_lcm(basis[p[0]][1], basis[p[1]][1])), p),
        )
        pairs.discard((i, j))
        lm_i, lm_j = basis[i][1], basis[j][1]
        lcm = mono_lcm(lm_i, lm_j)
        if mono_mul(lm_i, lm_j) == lcm:
            continue
        chain = False
        for k in range(len(basis)):
            if k in (i, j) or not divides(basis[k][1], lcm):
                continue
            if tuple(sorted((i, k))) not in pairs and tuple(sorted((j, k))) not in pairs:
                chain = True
                break
        if chain:
            continue
        rem = _reduce(_s_poly(basis[i], basis[j]), basis, order)
        if rem:
            basis.append(_entry(rem, order))
            new = len(basis) - 1
            pairs.update((k, new) for k in range(new))

    # minimise, then interreduce
    lms = [b[1] for b in basis]
    keep = []
    for idx, (terms, lm, _) in enumerate(basis):
        redundant = False
        for jdx, other in enumerate(lms):
            if jdx == idx or not divides(other, lm):
                continue
            # identical leading monomials: keep the first occurrence only
            if other != lm or jdx < idx:
                redundant = True
                break
        if not redundant:
            keep.append((terms, lm))
    reduced = []
    for idx, (terms, lm) in enumerate(keep):
        others = [_entry(t, order) for jdx, (t, _) in enumerate(keep) if jdx != idx]
        tail = {m: c for m, c in terms.items() if m != lm}
        tail = _reduce(tail, others, order)
        tail[lm] = Fraction(1)
        reduced.append(Polynomial(tail, n))
    reduced.sort(key=lambda g: order.key(g.leading_monomial(order)))
    return GroebnerBasis(tuple(reduced), order, n)


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Canonical representative of ``f`` modulo the ideal of ``gb``."""
    if f.nvars != gb.nvars:
        raise DimensionError(f"{f.nvars}-variable polynomial against a {gb.nvars}-variable basis")
    entries = [(dict(g.items()), g.leading_monomial(gb.order), Fraction(1)) for g in gb.polys]
    return Polynomial(_reduce({m: Fraction(c) for m, c in f.items()}, entries, gb.order), f.nvars)


def is_zero_dimensional(gb: GroebnerBasis) -> bool:
    """True iff every variable has a pure power among the leading monomials."""
    lms = gb.leading_monomials()
    for i in range(gb.nvars):
        if not any(all(e == 0 for j, e in enumerate(m) if j != i) for m in lms):
            return False
    return True


def _pure_power_bounds(gb: GroebnerBasis) -> list:
    lms = gb.leading_monomials()
    bounds = []
    for i in range(gb.nvars):
        powers = [m[i] for m in lms if all(e == 0 for j, e in enumerate(m) if j != i)]
        bounds.append(min(powers))
    return bounds


def quotient_monomial_basis(gb: GroebnerBasis) -> list:
    """Standard monomials of a zero-dimensional ideal, ascending in ``gb.order``."""
    if not is_zero_dimensional(gb):
        raise NotZeroDimensional("quotient ring is infinite-dimensional")
    lms = gb.leading_monomials()
    bounds = _pure_power_bounds(gb)
    standard = [
        m
        for m in itertools.product(*(range(b) for b in bounds))
        if not any(divides(lm, m) for lm in lms)
    ]
    standard.sort(key=gb.order.key)
    return standard


def coordinates(f: Polynomial, gb: GroebnerBasis, basis: Sequence) -> tuple:
    """Coefficient vector of ``normal_form(f)`` over the standard monomials ``basis``."""
    nf = normal_form(f, gb)
    position = {m: k for k, m in enumerate(basis)}
    vec = [Fraction(0)] * len(basis)
    for m, c in nf.items():
        vec[position[m]] = c
    return tuple(vec)


def univariate_minimal_generator(gb: GroebnerBasis, i: int) -> Polynomial:
    """Monic generator of the elimination ideal I ∩ Q[x_i].

    Finds the first power of ``x_i`` whose normal form is a linear combination
    of the normal forms of the lower powers.
    """
    if not 0 <= i < gb.nvars:
        raise DimensionError(f"variable index {i} out of range for {gb.nvars} variables")
    if not is_zero_dimensional(gb):
        raise NotZeroDimensional("elimination ideal may be zero for a positive-dimensional ideal")
    n = gb.nvars
    xi = Polynomial.variable(i, n)
    # rows: (pivot monomial, reduced vector, combination of powers producing it)
    rows: list = []
    power = Polynomial.constant(Fraction(1), n)
    k = 0
    while True:
        vec = dict(normal_form(power, gb).items())
        combo = {k: Fraction(1)}
        for pivot, rvec, rcombo in rows:
            c = vec.get(pivot, 0)
            if c:
                for m, v in rvec.items():
                    nv = vec.get(m, 0) - c * v
                    if nv == 0:
                        vec.pop(m, None)
                    else:
                        vec[m] = nv
                for d, v in rcombo.items():
                    nv = combo.get(d, 0) - c * v
                    if nv == 0:
                        combo.pop(d, None)
                    else:
                        combo[d] = nv
        if not vec:
            # combo now expresses sum_d combo[d] x_i^d == 0 in the quotient
            terms = {}
            for d, v in combo.items():
                mono = tuple(d if j == i else 0 for j in range(n))
                terms[mono] = v
            return Polynomial(terms, n).monic(gb.order)
        pivot = max(vec, key=gb.order.key)
        pc = vec[pivot]
        vec = {m: v / pc for m, v in vec.items()}
        combo = {d: v / pc for d, v in combo.items()}
        for idx, (p, rvec, rcombo) in enumerate(rows):
            c = rvec.get(pivot, 0)
            if c:
                for m, v in vec.items():
                    nv = rvec.get(m, 0) - c * v
                    if nv == 0:
                        rvec.pop(m, None)
                    else:
                        rvec[m] = nv
                for d, v in combo.items():
                    nv = rcombo.get(d, 0) - c * v
                    if nv == 0:
                        rcombo.pop(d, None)
                    else:
                        rcombo[d] = nv
        rows.append((pivot, vec, combo))
        power = power * xi
        k += 1
