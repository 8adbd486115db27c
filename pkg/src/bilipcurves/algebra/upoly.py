"""Dense univariate polynomials over Q.

A polynomial is a tuple of :class:`fractions.Fraction` coefficients, lowest
degree first, with no trailing zeros.  The zero polynomial is ``()``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd as igcd
from typing import Iterable, Sequence

UPoly = tuple  # tuple[Fraction, ...]

ZERO: UPoly = ()
ONE: UPoly = (Fraction(1),)
X: UPoly = (Fraction(0), Fraction(1))


def make(coeffs: Iterable) -> UPoly:
    c = [Fraction(a) for a in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def const(a) -> UPoly:
    return make([a])


def deg(p: UPoly) -> int:
    return len(p) - 1


def lc(p: UPoly) -> Fraction:
    return p[-1] if p else Fraction(0)


def add(p: UPoly, q: UPoly) -> UPoly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, b in enumerate(q):
        out[i] += b
    return make(out)


def neg(p: UPoly) -> UPoly:
    return tuple(-a for a in p)


def sub(p: UPoly, q: UPoly) -> UPoly:
    return add(p, neg(q))


def scale(p: UPoly, c) -> UPoly:
    c = Fraction(c)
    if c == 0:
        return ZERO
    return tuple(a * c for a in p)


def shift(p: UPoly, k: int) -> UPoly:
    """Multiply by X^k."""
    if not p:
        return ZERO
    return (Fraction(0),) * k + tuple(p)


def mul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return ZERO
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return make(out)


def power(p: UPoly, n: int) -> UPoly:
    out = ONE
    base = p
    while n:
        if n & 1:
            out = mul(out, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return out


def divmod_(p: UPoly, q: UPoly) -> tuple[UPoly, UPoly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    inv = 1 / q[-1]
    if len(r) <= dq:
        return ZERO, make(r)
    quo = [Fraction(0)] * (len(r) - dq)
    for k in range(len(r) - 1, dq - 1, -1):
        c = r[k] * inv
        if c:
            quo[k - dq] = c
            for i, b in enumerate(q):
                r[k - dq + i] -= c * b
    return make(quo), make(r[:dq])


def rem(p: UPoly, q: UPoly) -> UPoly:
    return divmod_(p, q)[1]


def exact_div(p: UPoly, q: UPoly) -> UPoly:
    quo, r = divmod_(p, q)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return quo


def monic(p: UPoly) -> UPoly:
    if not p:
        return ZERO
    return scale(p, 1 / p[-1])


def deriv(p: UPoly) -> UPoly:
    return make(i * a for i, a in enumerate(p))[1:] if len(p) > 1 else ZERO


def evaluate(p: UPoly, x):
    acc = 0
    for a in reversed(p):
        acc = acc * x + a
    return acc


def compose(p: UPoly, q: UPoly) -> UPoly:
    """p(q(X))."""
    acc = ZERO
    for a in reversed(p):
        acc = add(mul(acc, q), const(a))
    return acc


def _int_primitive(p: UPoly) -> list[int]:
    den = reduce(lambda a, b: a * b // igcd(a, b), (a.denominator for a in p), 1)
    ints = [int(a * den) for a in p]
    g = reduce(igcd, ints, 0)
    if ints[-1] < 0:
        g = -g
    return [a // g for a in ints]


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        la = a[-1]
        a = [x * lb for x in a]
        for i, y in enumerate(b):
            a[k + i] -= la * y
        while a and a[-1] == 0:
            a.pop()
    return a


def gcd(p: UPoly, q: UPoly) -> UPoly:
    """Monic gcd, computed by a primitive remainder sequence over Z."""
    if not p:
        return monic(q)
    if not q:
        return monic(p)
    a, b = _int_primitive(p), _int_primitive(q)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _int_prem(a, b)
        if not r:
            break
        g = reduce(igcd, r, 0)
        r = [x // g for x in r]
        a, b = b, r
    return monic(make(b))


def xgcd(p: UPoly, q: UPoly) -> tuple[UPoly, UPoly, UPoly]:
    """Return (g, s, t) with s*p + t*q = g monic."""
    r0, r1 = p, q
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while r1:
        quo, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    if not r0:
        return ZERO, ZERO, ZERO
    c = 1 / r0[-1]
    return scale(r0, c), scale(s0, c), scale(t0, c)


def squarefree_part(p: UPoly) -> UPoly:
    if not p:
        raise ValueError("squarefree part of the zero polynomial")
    if len(p) == 1:
        return ONE
    return monic(exact_div(p, gcd(p, deriv(p))))


def squarefree_decomposition(p: UPoly) -> list[tuple[UPoly, int]]:
    """Yun's algorithm: monic squarefree, pairwise coprime a_i with p ~ prod a_i^i."""
    if not p:
        raise ValueError("squarefree decomposition of the zero polynomial")
    out = []
    dp = deriv(p)
    a = gcd(p, dp)
    b = exact_div(p, a)
    c = exact_div(dp, a)
    d = sub(c, deriv(b))
    i = 1
    while deg(b) > 0:
        g = gcd(b, d)
        if deg(g) > 0:
            out.append((g, i))
        b = exact_div(b, g)
        c = exact_div(d, g)
        d = sub(c, deriv(b))
        i += 1
    return out


def to_str(p: UPoly, var: str = "x") -> str:
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        a = p[i]
        if a == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and abs(a) == 1:
            s = mono
        elif mono:
            s = f"{abs(a)}*{mono}"
        else:
            s = str(abs(a))
        sign = "-" if a < 0 else "+"
        parts.append((sign, s))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, s in parts[1:]:
        out += f" {sign} {s}"
    return out


def interpolate(xs: Sequence, ys: Sequence) -> UPoly:
    """Newton interpolation through (xs[i], ys[i])."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    xs = [Fraction(x) for x in xs]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = const(coef[-1])
    for i in range(n - 2, -1, -1):
        out = add(mul(out, make([-xs[i], 1])), const(coef[i]))
    return out
