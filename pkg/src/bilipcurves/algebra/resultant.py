"""Sylvester resultants by fraction-free elimination.

The determinant of the Sylvester matrix is computed with Bareiss elimination
over the integers at specialisation points of the remaining variables, and the
polynomial result is recovered by Newton interpolation from enough points to
cover the a-priori degree bound.  The sign convention is that of the Sylvester
determinant with rows ``f`` first, coefficients highest degree first.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd as igcd
from typing import Sequence

from . import upoly
from .multipoly import MultiPoly


def bareiss_det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant of a rational square matrix."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    rows = []
    for row in matrix:
        den = reduce(lambda a, b: a * b // igcd(a, b), (Fraction(c).denominator for c in row), 1)
        rows.append([int(Fraction(c) * den) for c in row])
        scale *= den
    a = rows
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (akk * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return Fraction(sign * a[n - 1][n - 1]) / scale


def _sylvester_numeric(cf: Sequence[Fraction], cg: Sequence[Fraction]) -> list[list[Fraction]]:
    # cf, cg are coefficient lists lowest degree first, formal length deg+1
    m, n = len(cf) - 1, len(cg) - 1
    size = m + n
    rows = []
    hf = list(reversed(cf))
    hg = list(reversed(cg))
    for i in range(n):
        rows.append([Fraction(0)] * i + hf + [Fraction(0)] * (size - i - m - 1))
    for i in range(m):
        rows.append([Fraction(0)] * i + hg + [Fraction(0)] * (size - i - n - 1))
    return rows


def sylvester_matrix(f: MultiPoly, g: MultiPoly, var: str) -> list[list[MultiPoly]]:
    """Symbolic Sylvester matrix; entries live in the remaining variables."""
    rest = tuple(v for v in f.variables if v != var)
    m, n = f.degree(var), g.degree(var)
    cf = f.coefficients_in(var)
    cg = g.coefficients_in(var)
    zero = MultiPoly(rest)
    hf = [cf.get(i, zero).with_variables(rest) if i in cf else zero for i in range(m, -1, -1)]
    hg = [cg.get(i, zero).with_variables(rest) if i in cg else zero for i in range(n, -1, -1)]
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + hf + [zero] * (size - i - m - 1))
    for i in range(m):
        rows.append([zero] * i + hg + [zero] * (size - i - n - 1))
    return rows


def _eval_first(p: MultiPoly, a: int) -> MultiPoly:
    rest = p.variables[1:]
    terms: dict = {}
    for e, c in p.terms.items():
        key = e[1:]
        terms[key] = terms.get(key, 0) + c * a ** e[0]
    return MultiPoly(rest, terms)


def _res_rec(cf: list[MultiPoly], cg: list[MultiPoly]) -> MultiPoly:
    variables = cf[0].variables
    if not variables:
        return MultiPoly((), {(): bareiss_det(
            _sylvester_numeric([c.constant_term() for c in cf], [c.constant_term() for c in cg])
        )})
    m, n = len(cf) - 1, len(cg) - 1
    df = max((c.degree(variables[0]) for c in cf), default=0)
    dg = max((c.degree(variables[0]) for c in cg), default=0)
    bound = max(n * max(df, 0) + m * max(dg, 0), 0)
    points = list(range(bound + 1))
    values = [
        _res_rec([_eval_first(c, a) for c in cf], [_eval_first(c, a) for c in cg])
        for a in points
    ]
    keys = set()
    for v in values:
        keys.update(v.terms)
    terms = {}
    for key in keys:
        coeffs = upoly.interpolate(points, [v.terms.get(key, 0) for v in values])
        for i, c in enumerate(coeffs):
            if c:
                terms[(i,) + key] = c
    return MultiPoly(variables, terms)


def resultant(f: MultiPoly, g: MultiPoly, var: str) -> MultiPoly:
    """Sylvester resultant of ``f`` and ``g`` with respect to ``var``.

    The result is a polynomial in the variables of ``f`` other than ``var``.
    """
    if f.variables != g.variables:
        raise ValueError("variable lists differ")
    rest = tuple(v for v in f.variables if v != var)
    if f.is_zero() and g.is_zero():
        raise ValueError("undefined resultant")
    if f.is_zero() or g.is_zero():
        return MultiPoly(rest)
    m, n = f.degree(var), g.degree(var)
    zero = MultiPoly(rest)
    cfd = f.coefficients_in(var)
    cgd = g.coefficients_in(var)
    cf = [cfd[i].with_variables(rest) if i in cfd else zero for i in range(m + 1)]
    cg = [cgd[i].with_variables(rest) if i in cgd else zero for i in range(n + 1)]
    return _res_rec(cf, cg)


def uresultant(p: upoly.UPoly, q: upoly.UPoly) -> Fraction:
    """Resultant of two univariate polynomials (Sylvester convention)."""
    if not p and not q:
        raise ValueError("undefined resultant")
    if not p or not q:
        return Fraction(0)
    return bareiss_det(_sylvester_numeric(list(p), list(q)))
