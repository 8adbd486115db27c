"""Dynamic evaluation over Q[a]/(m) with squarefree, not necessarily irreducible, m.

Elements are :mod:`upoly` tuples reduced modulo ``m``.  Whenever a zero test
or an inversion meets a zero divisor, :class:`SplitEvent` is raised with the
two coprime factors of ``m``; callers restart on each factor (D5 principle).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence, TypeVar

from . import upoly
from .multipoly import MultiPoly
from .resultant import resultant

T = TypeVar("T")


class SplitEvent(Exception):
    """The modulus of ``field`` factors as ``left * right`` (both monic, positive degree)."""

    def __init__(self, left: upoly.UPoly, right: upoly.UPoly, field: "ExtensionField | None" = None):
        super().__init__(f"split {upoly.to_str(left, 'a')} | {upoly.to_str(right, 'a')}")
        self.left = left
        self.right = right
        self.field = field


class ExtensionField:
    """The product of fields Q[a]/(m) for squarefree monic m."""

    def __init__(self, modulus: upoly.UPoly, check: bool = True):
        modulus = upoly.make(modulus)
        if upoly.deg(modulus) < 1:
            raise ValueError("modulus must have positive degree")
        if modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        if check and upoly.deg(upoly.gcd(modulus, upoly.deriv(modulus))) > 0:
            raise ValueError("modulus must be squarefree")
        self.modulus = modulus

    @property
    def degree(self) -> int:
        return upoly.deg(self.modulus)

    def __repr__(self):
        return f"ExtensionField({upoly.to_str(self.modulus, 'a')})"

    # elements ----------------------------------------------------------
    def reduce(self, p) -> upoly.UPoly:
        p = upoly.make(p)
        if len(p) <= self.degree:
            return p
        return upoly.rem(p, self.modulus)

    def const(self, c) -> upoly.UPoly:
        return upoly.const(c)

    def gen(self) -> upoly.UPoly:
        return self.reduce(upoly.X)

    def add(self, a, b):
        return upoly.add(a, b)

    def sub(self, a, b):
        return upoly.sub(a, b)

    def neg(self, a):
        return upoly.neg(a)

    def mul(self, a, b):
        if not a or not b:
            return upoly.ZERO
        if len(a) == 1:
            return upoly.scale(b, a[0])
        if len(b) == 1:
            return upoly.scale(a, b[0])
        return self.reduce(upoly.mul(a, b))

    def power(self, a, n: int):
        out = upoly.ONE
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return out

    def is_zero(self, a) -> bool:
        """Exact zero test; raises SplitEvent if a vanishes on part of the spectrum."""
        if not a:
            return True
        if len(a) == 1:
            return False
        g = upoly.gcd(a, self.modulus)
        if upoly.deg(g) == 0:
            return False
        raise SplitEvent(g, upoly.exact_div(self.modulus, g), self)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("division by zero")
        if len(a) == 1:
            return upoly.const(1 / a[0])
        g, s, _ = upoly.xgcd(a, self.modulus)
        if upoly.deg(g) > 0:
            raise SplitEvent(g, upoly.exact_div(self.modulus, g), self)
        return self.reduce(s)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def restrict(self, factor: upoly.UPoly) -> "ExtensionField":
        return ExtensionField(upoly.monic(factor), check=False)

    def to_complex(self, a, root: complex) -> complex:
        return complex(upoly.evaluate(tuple(complex(c) for c in a), root))


def ext_invert(a: upoly.UPoly, field: ExtensionField) -> upoly.UPoly:
    """Inverse of ``a`` in ``field``; raises SplitEvent on a zero divisor."""
    a = field.reduce(a)
    if not a:
        raise ZeroDivisionError("division by zero")
    return field.inv(a)


def split_run(field: ExtensionField, fn: Callable[[ExtensionField], T]) -> list[tuple[ExtensionField, T]]:
    """Run ``fn`` over ``field``, restarting on both factors at every split of it."""
    work = [field]
    out = []
    while work:
        k = work.pop()
        try:
            out.append((k, fn(k)))
        except SplitEvent as ev:
            if ev.field is not k:
                raise
            work.append(k.restrict(ev.right))
            work.append(k.restrict(ev.left))
    return out


# univariate polynomials over an ExtensionField: lists of elements, low first


def kp_trim(K: ExtensionField, p: Sequence) -> list:
    p = list(p)
    while p and K.is_zero(p[-1]):
        p.pop()
    return p


def kp_divmod(K: ExtensionField, p: Sequence, q: Sequence) -> tuple[list, list]:
    q = kp_trim(K, q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    inv = K.inv(q[-1])
    dq = len(q) - 1
    quo = [upoly.ZERO] * max(len(r) - dq, 0)
    for k in range(len(r) - 1, dq - 1, -1):
        c = K.mul(r[k], inv)
        if c:
            quo[k - dq] = c
            for i, b in enumerate(q):
                r[k - dq + i] = K.sub(r[k - dq + i], K.mul(c, b))
    return kp_trim(K, quo), kp_trim(K, r[:dq])


def kp_monic(K: ExtensionField, p: Sequence) -> list:
    p = kp_trim(K, p)
    if not p:
        return []
    inv = K.inv(p[-1])
    return [K.mul(c, inv) for c in p]


def kp_gcd(K: ExtensionField, p: Sequence, q: Sequence) -> list:
    a, b = kp_trim(K, p), kp_trim(K, q)
    while b:
        a, b = b, kp_divmod(K, a, b)[1]
    return kp_monic(K, a)


def kp_mul(K: ExtensionField, p: Sequence, q: Sequence) -> list:
    if not p or not q:
        return []
    out = [upoly.ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            out[i + j] = K.add(out[i + j], K.mul(a, b))
    return out


def kp_deriv(K: ExtensionField, p: Sequence) -> list:
    return [upoly.scale(c, i) for i, c in enumerate(p)][1:]


def kp_exact_div(K: ExtensionField, p: Sequence, q: Sequence) -> list:
    quo, r = kp_divmod(K, p, q)
    if r:
        raise ArithmeticError("inexact division over extension")
    return quo


def kp_eval(K: ExtensionField, p: Sequence, x) -> upoly.UPoly:
    acc = upoly.ZERO
    for c in reversed(p):
        acc = K.add(K.mul(acc, x), c)
    return acc


def kp_squarefree_decomposition(K: ExtensionField, p: Sequence) -> list[tuple[list, int]]:
    """Yun's algorithm over K; may raise SplitEvent."""
    p = kp_monic(K, p)
    if len(p) <= 1:
        return []
    out = []
    dp = kp_deriv(K, p)
    a = kp_gcd(K, p, dp)
    b = kp_exact_div(K, p, a)
    c = kp_exact_div(K, dp, a)
    d = [K.sub(x, y) for x, y in _pad(c, kp_deriv(K, b))]
    i = 1
    while len(kp_trim(K, b)) > 1:
        g = kp_gcd(K, b, d)
        if len(g) > 1:
            out.append((g, i))
        b = kp_exact_div(K, b, g)
        c = kp_exact_div(K, d, g)
        d = [K.sub(x, y) for x, y in _pad(c, kp_deriv(K, b))]
        i += 1
    return out


def _pad(p: Sequence, q: Sequence):
    n = max(len(p), len(q))
    p = list(p) + [upoly.ZERO] * (n - len(p))
    q = list(q) + [upoly.ZERO] * (n - len(q))
    return zip(p, q)


# primitive elements ---------------------------------------------------------


def norm_poly(K: ExtensionField, psi: Sequence, c: int) -> upoly.UPoly:
    """Res_a(m(a), psi(w - c a; a)) as a polynomial in w."""
    names = ("w", "a")
    bivar: dict = {}
    for k, coef in enumerate(psi):
        for i, q in enumerate(coef):
            if q:
                bivar[(k, i)] = bivar.get((k, i), 0) + q
    P = MultiPoly(names, bivar)
    P = P.subs({"w": MultiPoly(names, {(1, 0): 1, (0, 1): -c})})
    M = MultiPoly.from_upoly(names, "a", K.modulus)
    return resultant(M, P, "a").to_upoly("w")


def adjoin_root(K: ExtensionField, psi: Sequence) -> list[tuple[ExtensionField, upoly.UPoly, upoly.UPoly]]:
    """Adjoin a root of the monic squarefree ``psi`` over ``K``.

    Returns pieces ``(L, xi, embed)`` where ``L = Q[w]/(N)``, ``xi`` is the
    adjoined root as an element of L and ``embed`` is the image of K's
    generator in L.  Several pieces appear when the construction itself
    splits L.
    """
    psi = kp_monic(K, psi)
    r = len(psi) - 1
    if r < 1:
        raise ValueError("need a polynomial of positive degree")
    if r == 1:
        return [(K, K.neg(psi[0]), K.reduce(upoly.X))]
    for c in _shift_candidates():
        N = norm_poly(K, psi, c)
        if upoly.deg(N) != K.degree * r:
            continue
        N = upoly.monic(N)
        if upoly.deg(upoly.gcd(N, upoly.deriv(N))) > 0:
            continue
        L = ExtensionField(N, check=False)
        w = L.reduce(upoly.X)

        def solve(Lk: ExtensionField):
            # gcd over L of m(a) and psi(w - c a; a), as polynomials in a
            wk = Lk.reduce(upoly.X)
            m_over = [Lk.const(q) for q in K.modulus]
            psi_sub = _psi_shifted(Lk, psi, wk, c)
            g = kp_gcd(Lk, m_over, psi_sub)
            if len(g) != 2:
                raise _NotLinear()
            return Lk.neg(g[0])

        try:
            pieces = split_run(L, solve)
        except _NotLinear:
            continue
        out = []
        for Lk, emb in pieces:
            wk = Lk.reduce(upoly.X)
            xi = Lk.sub(wk, upoly.scale(emb, c))
            out.append((Lk, xi, emb))
        return out
    raise RuntimeError("no primitive element found")


class _NotLinear(Exception):
    pass


def _shift_candidates():
    k = 1
    while k < 200:
        yield k
        yield -k
        k += 1


def _psi_shifted(L: ExtensionField, psi: Sequence, w, c: int) -> list:
    # psi(w - c a; a) as a polynomial in a with coefficients in L
    # psi coefficients are polys in a over Q
    out: list = []
    base = [w, upoly.const(-c)]  # w - c a
    pw: list = [upoly.ONE]
    for k, coef in enumerate(psi):
        if k > 0:
            pw = kp_mul(L, pw, base)
        coef_poly = [L.const(q) for q in coef]
        term = kp_mul(L, pw, coef_poly)
        out = [L.add(x, y) for x, y in _pad(out, term)]
    return out


def embed_element(L: ExtensionField, a: upoly.UPoly, emb: upoly.UPoly) -> upoly.UPoly:
    """Map an element of the parent field (poly in its generator) into L."""
    acc = upoly.ZERO
    for c in reversed(a):
        acc = L.add(L.mul(acc, emb), upoly.const(c))
    return acc


def charpoly(L: ExtensionField, a: upoly.UPoly) -> upoly.UPoly:
    """Characteristic polynomial of multiplication by ``a`` on L, in t (monic)."""
    names = ("w", "t")
    A = MultiPoly.from_upoly(names, "w", a)
    T = MultiPoly.var(names, "t")
    N = MultiPoly.from_upoly(names, "w", L.modulus)
    return upoly.monic(resultant(N, T - A, "w").to_upoly("t"))
