"""Newton polygons and rational Newton-Puiseux expansion over dynamic extensions.

Local equations are dictionaries ``{(i, j): coefficient}`` for the monomial
``x^i y^j``, with coefficients in an :class:`ExtensionField`.  Expansion
follows the rational (Duval) substitution

    x = xi^v X^q,   y = X^p (xi^u + Y),   u q - v p = 1,

for an edge of slope p/q (meaning y ~ x^(p/q)) and a root xi of its edge
polynomial.  Every branch records the list of steps ``(slope, q, node_id)``
it took through the expansion tree; characteristic exponents, intersection
multiplicities and delta invariants are read off those paths.

In lazy mode only roots shared by several branches are adjoined, which is
enough for all topological data.  Full mode adjoins every root and continues
each branch by a chord iteration, giving explicit truncated series.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Iterable, Sequence

from .algebra import upoly
from .algebra.extension import (
    ExtensionField,
    SplitEvent,
    adjoin_root,
    charpoly,
    embed_element,
    kp_eval,
    kp_gcd,
    kp_mul,
    kp_squarefree_decomposition,
)
from .algebra.multipoly import MultiPoly

INF = math.inf
MAX_TERMS = 512

Elem = tuple
LocalPoly = dict


class PuiseuxError(ValueError):
    pass


# data ------------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    start: tuple[int, int]
    end: tuple[int, int]
    slope: Fraction

    @property
    def lattice_length(self) -> int:
        return gcd(self.end[0] - self.start[0], self.start[1] - self.end[1])


@dataclass(frozen=True)
class NewtonPolygon:
    support: tuple[tuple[int, int], ...]
    edges: tuple[Edge, ...]


@dataclass(frozen=True)
class CharSequence:
    m: int
    betas: tuple[int, ...] = ()

    def __post_init__(self):
        g = self.m
        for b in self.betas:
            ng = gcd(g, b)
            if ng >= g:
                raise PuiseuxError("characteristic exponents must strictly decrease the gcd")
            g = ng
        if g != 1:
            raise PuiseuxError("gcd chain does not reach 1")

    def __str__(self):
        return f"({self.m};{','.join(map(str, self.betas))})"

    def as_list(self) -> list[int]:
        return [self.m, *self.betas]


@dataclass(frozen=True)
class PuiseuxBranch:
    """One branch: x = lam * t^e, y = sum c_k t^k, in coordinates sheared by x -> x + shear*y.

    ``series`` holds (k / e, c_k) with coefficients in ``field``; it is empty
    for branches produced in lazy mode.  ``truncation`` is None for exact
    (terminating) expansions.
    """

    steps: tuple[tuple, ...]
    label: object = None
    series: tuple[tuple[Fraction, Elem], ...] = ()
    lam: Elem = upoly.ONE
    truncation: Fraction | None = None
    field: ExtensionField | None = None
    shear: Fraction = Fraction(0)

    @property
    def e(self) -> int:
        out = 1
        for _, q, _ in self.steps:
            out *= q
        return out

    @property
    def is_axis(self) -> bool:
        return bool(self.steps) and self.steps[-1][0] == INF


# local polynomial helpers ----------------------------------------------------


def local_from_multipoly(F: MultiPoly, K: ExtensionField | None = None) -> LocalPoly:
    names = F.variables
    if len(names) != 2:
        raise ValueError("local equations are bivariate")
    return {e: upoly.const(c) for e, c in F.terms.items()}


def lp_clean(K: ExtensionField, f: LocalPoly) -> LocalPoly:
    return {e: c for e, c in f.items() if not K.is_zero(c)}


def lp_shear(K: ExtensionField, f: LocalPoly, c) -> LocalPoly:
    """f(x + c y, y)."""
    if not c:
        return dict(f)
    c = upoly.const(c) if not isinstance(c, tuple) else c
    out: dict = {}
    pw = [upoly.ONE]
    for (i, j), a in f.items():
        while len(pw) <= i:
            pw.append(K.mul(pw[-1], c))
        for k in range(i + 1):
            key = (k, j + i - k)
            term = K.mul(a, upoly.scale(pw[i - k], comb(i, k)))
            out[key] = K.add(out.get(key, upoly.ZERO), term)
    return lp_clean(K, out)


def multiplicity(f: LocalPoly) -> int:
    return min(i + j for i, j in f)


def _transform(K: ExtensionField, f: LocalPoly, p: int, q: int, u: int, v: int, xi: Elem, N: int) -> LocalPoly:
    cache: dict[int, Elem] = {}

    def xpow(n):
        if n not in cache:
            cache[n] = K.power(xi, n)
        return cache[n]

    out: dict = {}
    for (i, j), a in f.items():
        base = K.mul(a, xpow(v * i))
        xe = q * i + p * j - N
        for b in range(j + 1):
            coef = K.mul(base, upoly.scale(xpow(u * (j - b)), comb(j, b)))
            out[(xe, b)] = K.add(out.get((xe, b), upoly.ZERO), coef)
    return lp_clean(K, out)


def _hull_edges(points: Iterable[tuple[int, int]]) -> list[Edge]:
    pts = set(points)
    if not pts:
        return []
    imin = min(i for i, _ in pts)
    cur = min((p for p in pts if p[0] == imin), key=lambda p: p[1])
    jmin = min(j for _, j in pts)
    edges = []
    while cur[1] > jmin:
        best = None
        for pt in pts:
            if pt[1] >= cur[1]:
                continue
            s = Fraction(pt[0] - cur[0], cur[1] - pt[1])
            if best is None or s < best[0] or (s == best[0] and pt[1] < best[1][1]):
                best = (s, pt)
        edges.append(Edge(cur, best[1], best[0]))
        cur = best[1]
    return edges


def newton_polygon(F: MultiPoly | LocalPoly) -> NewtonPolygon:
    """Lower-left convex hull of the support, edges by increasing slope."""
    if isinstance(F, MultiPoly):
        if F.is_zero():
            raise PuiseuxError("zero polynomial")
        if F.constant_term() != 0:
            raise PuiseuxError("not a germ at origin")
        support = list(F.terms)
    else:
        if not F:
            raise PuiseuxError("zero polynomial")
        if (0, 0) in F:
            raise PuiseuxError("not a germ at origin")
        support = list(F)
    return NewtonPolygon(tuple(sorted(support)), tuple(_hull_edges(support)))


def _principal_edges(f: LocalPoly) -> list[tuple[Fraction, list, int]]:
    """(slope, edge polynomial psi(T), weighted degree N) for edges below the Y-order."""
    r = min(j for i, j in f if i == 0)
    pts = [(i, j) for i, j in f if j <= r]
    out = []
    for e in _hull_edges(pts):
        p, q = e.slope.numerator, e.slope.denominator
        i0, j0 = e.end
        n = (e.start[1] - j0) // q
        psi = [f.get((i0 - p * l, j0 + q * l), upoly.ZERO) for l in range(n + 1)]
        out.append((e.slope, psi, q * i0 + p * j0))
    return out


# expansion engine -------------------------------------------------------------


def _bezout(p: int, q: int) -> tuple[int, int]:
    v = next(v for v in range(q) if (v * p + 1) % q == 0)
    return (1 + v * p) // q, v


def _with_step(b: PuiseuxBranch, step) -> PuiseuxBranch:
    return PuiseuxBranch((step,) + b.steps, b.label, b.series, b.lam, b.truncation, b.field, b.shear)


def _rename(b: PuiseuxBranch, c: int) -> PuiseuxBranch:
    steps = tuple((s, q, (c,) + sid) for s, q, sid in b.steps)
    return PuiseuxBranch(steps, b.label, b.series, b.lam, b.truncation, b.field, b.shear)


def _uniform_copies(K: ExtensionField, L: ExtensionField, emb: Elem) -> int:
    """Number of L-points over each K-point; splits K when this is not constant."""
    M = K.modulus
    cp = charpoly(L, emb)
    k, rem = divmod(L.degree, K.degree)
    if not rem and cp == upoly.power(M, k):
        return k
    parts = upoly.squarefree_decomposition(cp)
    h = upoly.monic(upoly.gcd(M, parts[0][0]))
    if 0 < upoly.deg(h) < upoly.deg(M):
        raise SplitEvent(h, upoly.exact_div(M, h), K)
    raise AssertionError("inconsistent primitive element")


@dataclass
class _Params:
    lam: Elem
    E: int
    P: dict
    C: Elem
    S: int

    def embed(self, L: ExtensionField, emb: Elem) -> "_Params":
        f = lambda a: embed_element(L, a, emb)  # noqa: E731
        return _Params(f(self.lam), self.E, {k: f(c) for k, c in self.P.items()}, f(self.C), self.S)

    def step(self, L: ExtensionField, p: int, q: int, u: int, v: int, xi: Elem) -> "_Params":
        P = {k * q: L.mul(c, L.power(xi, v * k)) for k, c in self.P.items()}
        key = self.S * q + p
        P[key] = L.add(P.get(key, upoly.ZERO), L.mul(self.C, L.power(xi, v * self.S + u)))
        return _Params(
            L.mul(self.lam, L.power(xi, v * self.E)),
            self.E * q,
            P,
            L.mul(self.C, L.power(xi, v * self.S)),
            self.S * q + p,
        )


class _Engine:
    def __init__(self, lazy: bool, target: Fraction | None = None, shear: Fraction = Fraction(0)):
        self.lazy = lazy
        self.target = target
        self.shear = shear
        self._ids = itertools.count()

    def new_id(self) -> tuple:
        return (next(self._ids),)

    def node(self, K: ExtensionField, factors, params: _Params | None) -> list[PuiseuxBranch]:
        out: list[PuiseuxBranch] = []
        live = []
        for label, f in factors:
            f = lp_clean(K, f)
            if not any(j == 0 for _, j in f):
                out.append(self._axis(K, label, params))
                f = {(i, j - 1): c for (i, j), c in f.items()}
                if (0, 0) in f:
                    continue
            live.append((label, f))
        if not self.lazy and len(live) == 1 and (0, 1) in live[0][1]:
            out.append(self._tail(K, live[0], params))
            return out
        edges: dict[Fraction, list] = {}
        for idx, (_, f) in enumerate(live):
            for s, psi, N in _principal_edges(f):
                edges.setdefault(s, []).append((idx, psi, N))
        for s in sorted(edges):
            entries = edges[s]
            Phi: list = [upoly.ONE]
            for _, psi, _ in entries:
                Phi = kp_mul(K, Phi, psi)
            for g, mult in kp_squarefree_decomposition(K, Phi):
                if self.lazy and mult == 1:
                    for idx, psi, _ in entries:
                        h = kp_gcd(K, g, psi)
                        for _ in range(len(h) - 1):
                            out.append(PuiseuxBranch(((s, s.denominator, self.new_id()),), live[idx][0]))
                    continue
                out.extend(self._adjoin(K, g, s, entries, live, params))
        return out

    def _adjoin(self, K, g, s, entries, live, params) -> list[PuiseuxBranch]:
        out = []
        work = list(adjoin_root(K, g))
        while work:
            L, xi, emb = work.pop()
            copies = 1 if L is K else _uniform_copies(K, L, emb)
            try:
                recs = self._child(K, L, xi, emb, s, entries, live, params)
            except SplitEvent as ev:
                if ev.field is not L or L is K:
                    raise
                for part in (ev.left, ev.right):
                    Lp = L.restrict(part)
                    work.append((Lp, Lp.reduce(xi), Lp.reduce(emb)))
                continue
            if copies == 1:
                out.extend(recs)
            else:
                for c in range(copies):
                    out.extend(_rename(r, c) for r in recs)
        return out

    def _child(self, K, L, xi, emb, s, entries, live, params) -> list[PuiseuxBranch]:
        p, q = s.numerator, s.denominator
        u, v = _bezout(p, q)
        new = []
        for idx, psi, N in entries:
            psi_l = [embed_element(L, c, emb) for c in psi]
            if not L.is_zero(kp_eval(L, psi_l, xi)):
                continue
            f_l = {e: embed_element(L, c, emb) for e, c in live[idx][1].items()}
            new.append((live[idx][0], _transform(L, f_l, p, q, u, v, xi, N)))
        params2 = None if params is None else params.embed(L, emb).step(L, p, q, u, v, xi)
        sid = self.new_id()
        return [_with_step(r, (s, q, sid)) for r in self.node(L, new, params2)]

    def _axis(self, K, label, params) -> PuiseuxBranch:
        step = ((INF, 1, self.new_id()),)
        if params is None:
            return PuiseuxBranch(step, label)
        series = tuple((Fraction(k, params.E), c) for k, c in sorted(params.P.items()) if not K.is_zero(c))
        return PuiseuxBranch(step, label, series, params.lam, None, K, self.shear)

    def _tail(self, K, factor, params: _Params) -> PuiseuxBranch:
        label, f = factor
        i0 = min(i for i, j in f if j == 0)
        step = ((Fraction(i0), 1, self.new_id()),)
        top = math.floor(self.target * params.E)
        B = max(top - params.S + 1, 0)
        if B > MAX_TERMS:
            raise PuiseuxError(f"truncation order needs more than {MAX_TERMS} terms")
        Y = _chord_series(K, f, B)
        series = dict(params.P)
        for k, c in Y.items():
            key = params.S + k
            series[key] = K.add(series.get(key, upoly.ZERO), K.mul(params.C, c))
        terms = tuple(
            (Fraction(k, params.E), c) for k, c in sorted(series.items()) if k <= top and not K.is_zero(c)
        )
        return PuiseuxBranch(step, label, terms, params.lam, Fraction(self.target), K, self.shear)


def _series_mul(K, a: dict, b: dict, B: int) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            if i + j < B:
                out[i + j] = K.add(out.get(i + j, upoly.ZERO), K.mul(x, y))
    return out


def _chord_series(K: ExtensionField, f: LocalPoly, B: int) -> dict:
    """Root Y(X) of f with Y(0) = 0, modulo X^B, for f_Y(0, 0) invertible."""
    inv = K.inv(f[(0, 1)])
    Y: dict = {}
    jmax = max(j for _, j in f)
    for _ in range(B + 1):
        pw = [{0: upoly.ONE}]
        for _ in range(jmax):
            pw.append(_series_mul(K, pw[-1], Y, B))
        R: dict = {}
        for (i, j), a in f.items():
            for k, c in pw[j].items():
                if i + k < B:
                    R[i + k] = K.add(R.get(i + k, upoly.ZERO), K.mul(a, c))
        R = {k: c for k, c in R.items() if c}
        if not R:
            break
        for k, c in R.items():
            Y[k] = K.sub(Y.get(k, upoly.ZERO), K.mul(c, inv))
    return {k: c for k, c in Y.items() if c}


# public operations --------------------------------------------------------------

Q_FIELD = ExtensionField(upoly.X)


def _transversal_shear(K: ExtensionField, factors) -> int:
    """Smallest c in 0, 1, -1, 2, ... making y^m appear in every tangent cone after x -> x + c y."""
    for c in itertools.chain([0], itertools.chain.from_iterable((k, -k) for k in itertools.count(1))):
        ok = True
        for _, f in factors:
            m = multiplicity(f)
            lead = upoly.ZERO
            for (i, j), a in f.items():
                if i + j == m:
                    lead = K.add(lead, upoly.scale(a, Fraction(c) ** i))
            if K.is_zero(lead):
                ok = False
                break
        if ok:
            return c
    raise AssertionError("unreachable")


def germ_branches(K: ExtensionField, factors: Sequence[tuple[object, LocalPoly]], lazy: bool = True,
                  target: Fraction | None = None) -> list[PuiseuxBranch]:
    """Branches at the origin of the labelled local equations over K (one point of K's orbit).

    May raise SplitEvent for K; callers restart on each factor.
    """
    live = []
    for label, f in factors:
        f = lp_clean(K, f)
        if not f:
            raise PuiseuxError("zero local equation")
        if (0, 0) in f:
            continue
        live.append((label, f))
    if not live:
        return []
    c = _transversal_shear(K, live)
    live = [(label, lp_shear(K, f, c)) for label, f in live]
    params = None if lazy else _Params(upoly.ONE, 1, {}, upoly.ONE, 0)
    return _Engine(lazy, target, Fraction(c)).node(K, live, params)


def expand_branches(F: MultiPoly, target_order) -> list[PuiseuxBranch]:
    """Full Newton-Puiseux expansion of a rational germ at the origin up to ``target_order`` in x."""
    if F.is_zero():
        raise PuiseuxError("zero polynomial")
    if F.constant_term() != 0:
        raise PuiseuxError("not a germ at origin")
    return germ_branches(Q_FIELD, [(0, local_from_multipoly(F))], lazy=False, target=Fraction(target_order))


def characteristic_exponents(b: PuiseuxBranch) -> CharSequence:
    e = b.e
    betas = []
    E = Fraction(0)
    denom = 1
    for s, q, _ in b.steps:
        if s == INF:
            break
        E += Fraction(s) / denom
        if q > 1:
            betas.append(int(E * e))
        denom *= q
    return CharSequence(e, tuple(betas))


def semigroup_generators(cs: CharSequence) -> list[int]:
    gens = [cs.m]
    if not cs.betas:
        return gens
    gens.append(cs.betas[0])
    g_prev = cs.m
    for k in range(1, len(cs.betas)):
        g_k = gcd(g_prev, cs.betas[k - 1])
        n_k = g_prev // g_k
        gens.append(n_k * gens[-1] - cs.betas[k - 1] + cs.betas[k])
        g_prev = g_k
    return gens


def semigroup_gaps(gens: Sequence[int]) -> int:
    """Number of positive integers outside the numerical semigroup generated by gens."""
    if math.gcd(*gens) != 1:
        raise PuiseuxError("generators do not span a numerical semigroup")
    small = min(gens)
    reach = [True]
    run = 0
    n = 0
    while run < small:
        n += 1
        ok = any(n >= g and reach[n - g] for g in gens)
        reach.append(ok)
        run = run + 1 if ok else 0
    return reach.count(False)


def branch_delta(b: PuiseuxBranch) -> int:
    return semigroup_gaps(semigroup_generators(characteristic_exponents(b)))


def branch_intersection_multiplicity(a: PuiseuxBranch, b: PuiseuxBranch) -> int:
    """Intersection number of two distinct branches from the same expansion tree."""
    wa, wb = Fraction(a.e), Fraction(b.e)
    total = Fraction(0)
    for (sa, qa, ida), (sb, qb, idb) in itertools.zip_longest(a.steps, b.steps, fillvalue=(None, 1, None)):
        if ida is None or idb is None:
            raise PuiseuxError("branches do not separate")
        if ida != idb:
            total += wa * wb * min(sa, sb)
            break
        total += wa * wb * sa
        wa /= qa
        wb /= qb
    else:
        raise PuiseuxError("identical branches")
    if total.denominator != 1:
        raise AssertionError("non-integral intersection number")
    return int(total)


def delta_invariant(branches: Sequence[PuiseuxBranch]) -> int:
    total = sum(branch_delta(b) for b in branches)
    for a, b in itertools.combinations(branches, 2):
        total += branch_intersection_multiplicity(a, b)
    return total
