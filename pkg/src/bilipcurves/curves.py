"""Curve models, projective closure, singular loci and genus bookkeeping."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .algebra import upoly
from .algebra.extension import (
    ExtensionField,
    SplitEvent,
    adjoin_root,
    embed_element,
    kp_deriv,
    kp_divmod,
    kp_eval,
    kp_exact_div,
    kp_gcd,
    split_run,
)
from .algebra.multipoly import MultiPoly, product
from .algebra.parse import ParseError, parse_poly
from .algebra.resultant import resultant

XY = ("x", "y")
XYZ = ("x", "y", "z")


class CurveError(ValueError):
    """Invalid curve model or a failed consistency check."""


# models -----------------------------------------------------------------


@dataclass(frozen=True)
class PlaneCurve:
    """Affine plane curve given by squarefree, pairwise coprime components in (x, y).

    Components are assumed absolutely irreducible; this is not verified.
    """

    components: tuple[MultiPoly, ...]

    def __post_init__(self):
        comps = tuple(c.with_variables(XY) for c in self.components)
        object.__setattr__(self, "components", comps)
        validate_plane_components(comps)

    @property
    def equation(self) -> MultiPoly:
        return product(self.components, XY)

    @property
    def degrees(self) -> list[int]:
        return [c.total_degree() for c in self.components]

    def __str__(self):
        return " ; ".join(str(c) for c in self.components)


@dataclass(frozen=True)
class ProjectiveCurve:
    homogeneous: MultiPoly
    degree: int


@dataclass(frozen=True)
class Parametrized:
    """Polynomial parametrisation t -> (p_1(t), ..., p_n(t))."""

    components: tuple[upoly.UPoly, ...]

    def __post_init__(self):
        comps = tuple(upoly.make(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) < 2:
            raise CurveError("a parametrisation needs at least two coordinates")
        if all(upoly.deg(c) < 1 for c in comps):
            raise CurveError("all coordinates are constant")

    @property
    def dimension(self) -> int:
        return len(self.components)

    def __str__(self):
        return "(" + ", ".join(upoly.to_str(c, "t") for c in self.components) + ")"


@dataclass(frozen=True)
class CompleteIntersection3:
    """Curve {f = g = 0} in C^3."""

    f: MultiPoly
    g: MultiPoly

    def __post_init__(self):
        object.__setattr__(self, "f", self.f.with_variables(XYZ))
        object.__setattr__(self, "g", self.g.with_variables(XYZ))
        _check_ci3(self.f, self.g)

    @property
    def dimension(self) -> int:
        return 3

    def __str__(self):
        return f"{{{self.f} = 0, {self.g} = 0}}"


SpaceCurve = Union[Parametrized, CompleteIntersection3]


@dataclass(frozen=True)
class PointOrbit:
    """The zeros of a squarefree ``modulus`` m(a), each giving one point.

    ``coords`` are polynomials in ``a`` (affine coordinates for finite sites,
    homogeneous (x : y : 0) for sites at infinity).
    """

    site: str
    modulus: upoly.UPoly
    coords: tuple[upoly.UPoly, ...]

    @property
    def size(self) -> int:
        return upoly.deg(self.modulus)

    @property
    def field(self) -> ExtensionField:
        return ExtensionField(self.modulus, check=False)

    def restrict(self, factor: upoly.UPoly) -> "PointOrbit":
        factor = upoly.monic(factor)
        return PointOrbit(self.site, factor, tuple(upoly.rem(c, factor) for c in self.coords))

    def numeric_points(self) -> list[tuple[complex, ...]]:
        import numpy as np

        if self.size == 1:
            roots = [-complex(self.modulus[0])]
        else:
            roots = np.roots([float(c) for c in reversed(self.modulus)])
        return [tuple(complex(upoly.evaluate(tuple(complex(a) for a in c), r)) for c in self.coords) for r in roots]

    def describe(self) -> dict:
        return {
            "site": self.site,
            "size": self.size,
            "modulus": upoly.to_str(self.modulus, "a"),
            "coords": [upoly.to_str(c, "a") for c in self.coords],
        }


@dataclass
class CurveInvariants:
    degree: int
    genus: int
    delta_total: int
    orbits: list[tuple[PointOrbit, int]] = field(default_factory=list)


# parsing ------------------------------------------------------------------


def parse_curve(text: str) -> PlaneCurve | Parametrized | CompleteIntersection3:
    """Parse the line-oriented curve file format."""
    kind = None
    polys: list[MultiPoly] = []
    param: list[MultiPoly] | None = None
    eqs: list[MultiPoly] | None = None
    kind_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", lineno, 1)
        key, _, value = line.partition(":")
        key_s = key.strip()
        offset = len(key) + 1
        if key_s == "type":
            if kind is not None:
                raise ParseError("duplicate type header", lineno, 1)
            kind = value.strip()
            kind_line = lineno
            if kind not in ("plane", "param", "ci3"):
                raise ParseError(f"unknown curve type {kind!r}", lineno, offset + 2)
        elif key_s == "poly":
            polys.append(parse_poly(value, XY, lineno, offset))
        elif key_s == "param":
            if param is not None:
                raise ParseError("duplicate param line", lineno, 1)
            param = []
            col = offset
            for piece in value.split(","):
                param.append(parse_poly(piece, ("t",), lineno, col))
                col += len(piece) + 1
        elif key_s == "eqs":
            if eqs is not None:
                raise ParseError("duplicate eqs line", lineno, 1)
            eqs = []
            col = offset
            for piece in value.split(";"):
                eqs.append(parse_poly(piece, XYZ, lineno, col))
                col += len(piece) + 1
        else:
            raise ParseError(f"unknown key {key_s!r}", lineno, 1)
    if kind is None:
        raise ParseError("missing 'type:' header", 1, 1)
    if kind == "plane":
        if not polys or param is not None or eqs is not None:
            raise ParseError("plane curves need one or more 'poly:' lines only", kind_line, 1)
        return PlaneCurve(tuple(polys))
    if kind == "param":
        if param is None or polys or eqs is not None:
            raise ParseError("param curves need exactly one 'param:' line", kind_line, 1)
        return Parametrized(tuple(p.to_upoly("t") for p in param))
    if eqs is None or polys or param is not None or len(eqs) != 2:
        raise ParseError("ci3 curves need one 'eqs:' line with two equations", kind_line, 1)
    return CompleteIntersection3(eqs[0], eqs[1])


# validation -------------------------------------------------------------


def _shear_x(F: MultiPoly, a) -> MultiPoly:
    """F(x + a*y, y)."""
    if a == 0:
        return F
    return F.subs({"x": MultiPoly(XY, {(1, 0): 1, (0, 1): a})})


def _shears():
    yield 0
    for k in itertools.count(1):
        yield k
        yield -k


def _monic_in_y(F: MultiPoly) -> bool:
    d = F.total_degree()
    return F.terms.get((0, d), 0) != 0


def _monic_shear(F: MultiPoly, start: int = 0) -> tuple[int, MultiPoly, int]:
    for i, a in enumerate(_shears()):
        if i < start:
            continue
        G = _shear_x(F, a)
        if _monic_in_y(G):
            return a, G, i
    raise AssertionError("unreachable")


def validate_plane_components(comps: Sequence[MultiPoly]) -> None:
    if not comps:
        raise CurveError("a plane curve needs at least one component")
    for c in comps:
        if c.total_degree() < 1:
            raise CurveError(f"component {c} is constant")
    a, _, _ = _monic_shear(product(comps, XY))
    sheared = [_shear_x(c, a) for c in comps]
    for c, s in zip(comps, sheared):
        if s.total_degree() >= 2 and resultant(s, s.diff("y"), "y").is_zero():
            raise CurveError(f"component {c} is not squarefree")
    for (i, si), (j, sj) in itertools.combinations(enumerate(sheared), 2):
        if comps[i].content_normalized() == comps[j].content_normalized():
            raise CurveError(f"repeated component {comps[i]}")
        if resultant(si, sj, "y").is_zero():
            raise CurveError(f"components {comps[i]} and {comps[j]} share a factor")


def _check_ci3(f: MultiPoly, g: MultiPoly) -> None:
    if f.total_degree() < 1 or g.total_degree() < 1:
        raise CurveError("ci3 equations must be nonconstant")
    A = _generic_linear_change(f * g, 0)
    fa, ga = _apply3(f, A), _apply3(g, A)
    if resultant(fa, ga, "z").is_zero():
        raise CurveError("ci3 equations share a common factor (not a curve)")


# projective closure and infinity -------------------------------------------


def projective_closure(component: MultiPoly) -> ProjectiveCurve:
    component = component.with_variables(XY)
    if component.total_degree() < 1:
        raise CurveError("constant polynomial has no closure")
    H = component.homogenize("z")
    return ProjectiveCurve(H, component.total_degree())


def _top_form_dehomogenized(F: MultiPoly) -> tuple[upoly.UPoly, int]:
    d = F.total_degree()
    top = F.homogeneous_part(d)
    coeffs = [top.terms.get((d - j, j), Fraction(0)) for j in range(d + 1)]
    return upoly.make(coeffs), d


def points_at_infinity(c: ProjectiveCurve) -> list[tuple[PointOrbit, int]]:
    """Orbits of X-bar meet the line z = 0, with intersection multiplicities."""
    H = c.homogeneous
    d = c.degree
    coeffs = [H.terms.get((d - j, j, 0), Fraction(0)) for j in range(d + 1)]
    P = upoly.make(coeffs)  # F_d(1, u)
    if not P:
        raise CurveError("the line at infinity is a component")
    out = []
    if upoly.deg(P) > 0:
        for factor, mult in upoly.squarefree_decomposition(P):
            out.append((PointOrbit("infinity", factor, (upoly.ONE, upoly.X, upoly.ZERO)), mult))
    if upoly.deg(P) < d:
        out.append((_point_010(), d - upoly.deg(P)))
    return out


def _point_010() -> PointOrbit:
    return PointOrbit("infinity", upoly.X, (upoly.ZERO, upoly.ONE, upoly.ZERO))


def infinity_orbits(F: MultiPoly) -> list[PointOrbit]:
    P, d = _top_form_dehomogenized(F)
    out = []
    if upoly.deg(P) > 0:
        out.append(PointOrbit("infinity", upoly.squarefree_part(P), (upoly.ONE, upoly.X, upoly.ZERO)))
    if upoly.deg(P) < d:
        out.append(_point_010())
    return out


# singular loci ------------------------------------------------------------


class _Reshear(Exception):
    pass


def specialize(F: MultiPoly, K: ExtensionField, var_values: dict[str, upoly.UPoly], keep: str) -> list:
    """Coefficients of F in ``keep`` after substituting K-elements for the other variables."""
    k_keep = F.variables.index(keep)
    out: dict[int, upoly.UPoly] = {}
    powers: dict[tuple[str, int], upoly.UPoly] = {}
    for e, c in F.terms.items():
        val = upoly.const(c)
        for v, n in zip(F.variables, e):
            if v == keep or not n:
                continue
            key = (v, n)
            if key not in powers:
                powers[key] = K.power(var_values[v], n)
            val = K.mul(val, powers[key])
        j = e[k_keep]
        out[j] = K.add(out.get(j, upoly.ZERO), val)
    if not out:
        return []
    return [out.get(j, upoly.ZERO) for j in range(max(out) + 1)]


def _kp_sqfree(K: ExtensionField, g: list) -> list:
    if len(g) <= 2:
        return g
    return kp_exact_div(K, g, kp_gcd(K, g, kp_deriv(K, g)))


def affine_singular_orbits(F: MultiPoly) -> list[PointOrbit]:
    """Affine common zeros of F, F_x, F_y for squarefree F(x, y)."""
    F = F.with_variables(XY)
    if F.total_degree() <= 1:
        return []
    start = 0
    while True:
        a, G, idx = _monic_shear(F, start)
        try:
            return _affine_sing_sheared(G, a)
        except _Reshear:
            start = idx + 1


def _affine_sing_sheared(G: MultiPoly, a: int) -> list[PointOrbit]:
    Gx, Gy = G.diff("x"), G.diff("y")
    if Gx.is_zero():
        return []
    disc = resultant(G, Gy, "y").to_upoly("x")
    rx = resultant(G, Gx, "y").to_upoly("x")
    R = upoly.gcd(disc, rx) if rx else upoly.monic(disc)
    if upoly.deg(R) < 1:
        return []
    m = upoly.squarefree_part(R)

    def solve(K: ExtensionField):
        alpha = K.reduce(upoly.X)
        polys = [specialize(P, K, {"x": alpha}, "y") for P in (G, Gx, Gy)]
        g = _kp_sqfree(K, kp_gcd(K, kp_gcd(K, polys[0], polys[1]), polys[2]))
        if len(g) <= 1:
            return None
        if len(g) > 2:
            raise _Reshear()
        return K.neg(g[0])

    out = []
    for K, yv in split_run(ExtensionField(m, check=False), solve):
        if yv is None:
            continue
        x = K.add(K.reduce(upoly.X), upoly.scale(yv, a))
        out.append(PointOrbit("finite", K.modulus, (x, yv)))
    return out


def singular_locus_union(c: PlaneCurve) -> list[PointOrbit]:
    """Singular orbits of the closure of c together with the line at infinity."""
    F = c.equation
    return affine_singular_orbits(F) + infinity_orbits(F)


# space curves ------------------------------------------------------------


@dataclass
class SpaceSingularities:
    count: int
    orbits: list[PointOrbit]
    cusp_parameters: upoly.UPoly = upoly.ONE
    parameters: upoly.UPoly = upoly.ONE


def divided_difference(p: upoly.UPoly) -> MultiPoly:
    """(p(s) - p(t)) / (s - t) in variables (s, t)."""
    terms: dict = {}
    for k, c in enumerate(p):
        for j in range(k):
            key = (j, k - 1 - j)
            terms[key] = terms.get(key, 0) + c
    return MultiPoly(("s", "t"), terms)


def _combos(n: int):
    base = [
        ([1] * n, [i + 1 for i in range(n)]),
        ([i + 1 for i in range(n)], [(i + 1) ** 2 for i in range(n)]),
        ([(-1) ** i * (i + 2) for i in range(n)], [3 + i * i for i in range(n)]),
    ]
    return base


def multiple_point_parameters(comps: Sequence[upoly.UPoly]) -> upoly.UPoly:
    """Squarefree poly whose roots are parameters t with some s != t, P(s) = P(t)."""
    D = [divided_difference(p) for p in comps]
    D_nonzero = [d for d in D if not d.is_zero()]
    if not D_nonzero:
        raise CurveError("all coordinates are constant")
    R = None
    for a, b in _combos(len(D)):
        L1 = sum((d * ai for d, ai in zip(D, a)), MultiPoly(("s", "t")))
        L2 = sum((d * bi for d, bi in zip(D, b)), MultiPoly(("s", "t")))
        if L1.is_zero() or L2.is_zero():
            continue
        r = resultant(L1, L2, "s")
        if not r.is_zero():
            R = r.to_upoly("t")
            break
    if R is None:
        raise CurveError("non-birational parametrization")
    if upoly.deg(R) < 1:
        return upoly.ONE
    m = upoly.squarefree_part(R)

    def partners(K: ExtensionField):
        alpha = K.reduce(upoly.X)
        g: list = []
        for d in D_nonzero:
            g = kp_gcd(K, g, specialize(d, K, {"t": alpha}, "s"))
        lin = [K.neg(alpha), upoly.ONE]
        while len(g) > 1 and K.is_zero(kp_eval(K, g, alpha)):
            g = kp_exact_div(K, g, lin)
        return len(g) > 1

    keep = upoly.ONE
    for K, has in split_run(ExtensionField(m, check=False), partners):
        if has:
            keep = upoly.mul(keep, K.modulus)
    return keep


def cusp_parameters(comps: Sequence[upoly.UPoly]) -> upoly.UPoly:
    g = upoly.ZERO
    for p in comps:
        g = upoly.gcd(g, upoly.deriv(p))
    if upoly.deg(g) < 1:
        return upoly.ONE
    return upoly.squarefree_part(g)


def image_orbits(comps: Sequence[upoly.UPoly], params: upoly.UPoly) -> list[PointOrbit]:
    """Distinct points P(t) over the roots of ``params``, as orbits."""
    if upoly.deg(params) < 1:
        return []
    n = len(comps)
    for trial in range(1, 40):
        ell = [((i + 1) * trial) % 7 + (i == 0) for i in range(n)]
        lp = upoly.ZERO
        for c, p in zip(ell, comps):
            lp = upoly.add(lp, upoly.scale(p, c))
        names = ("w", "t")
        S = MultiPoly.from_upoly(names, "t", params)
        W = MultiPoly.var(names, "w") - MultiPoly.from_upoly(names, "t", lp)
        N = resultant(S, W, "t").to_upoly("w")
        Nsf = upoly.squarefree_part(N)

        def coords(K: ExtensionField):
            w = K.reduce(upoly.X)
            sp = [K.const(c) for c in params]
            lw = [K.const(c) for c in lp]
            lw[0] = K.sub(lw[0], w) if lw else K.neg(w)
            g = kp_gcd(K, sp, lw)
            pts = []
            for p in comps:
                r = kp_divmod(K, [K.const(c) for c in p], g)[1]
                if len(r) > 1:
                    raise _Reshear()
                pts.append(r[0] if r else upoly.ZERO)
            return tuple(pts)

        try:
            pieces = split_run(ExtensionField(Nsf, check=False), coords)
        except _Reshear:
            continue
        return [PointOrbit("finite", K.modulus, pts) for K, pts in pieces]
    raise CurveError("could not separate singular points")


def space_singular_points(s: SpaceCurve) -> SpaceSingularities:
    if isinstance(s, Parametrized):
        cusp = cusp_parameters(s.components)
        mult = multiple_point_parameters(s.components)
        params = upoly.monic(upoly.mul(cusp, upoly.exact_div(mult, upoly.gcd(mult, cusp)))) if upoly.deg(mult) > 0 else cusp
        orbits = image_orbits(s.components, params)
        return SpaceSingularities(sum(o.size for o in orbits), orbits, cusp, params)
    orbits = _ci3_singular_orbits(s.f, s.g)
    return SpaceSingularities(sum(o.size for o in orbits), orbits)


def _generic_linear_change(F: MultiPoly, start: int) -> list[list[int]]:
    """Integer unimodular 3x3 matrix A making F monic in z after x -> A x."""
    d = F.total_degree()
    mats = []
    for a, b in itertools.product(range(0, 4), repeat=2):
        mats.append([[1, 0, a], [0, 1, b], [0, 0, 1]])
    mats.sort(key=lambda m: (abs(m[0][2]) + abs(m[1][2])))
    for A in mats[start:]:
        G = _apply3(F, A)
        if G.terms.get((0, 0, d), 0) != 0:
            return A
    raise CurveError("no generic coordinate change found")


def _apply3(F: MultiPoly, A: list[list[int]]) -> MultiPoly:
    names = XYZ
    imgs = {}
    for i, v in enumerate(names):
        imgs[v] = MultiPoly(names, {tuple(1 if k == j else 0 for k in range(3)): A[i][j] for j in range(3)})
    return F.subs(imgs)


def _ci3_singular_orbits(f: MultiPoly, g: MultiPoly) -> list[PointOrbit]:
    start = 0
    while start < 16:
        A = _generic_linear_change(f * g, start)
        try:
            return _ci3_sing_with(f, g, A)
        except _Reshear:
            start += 1
    raise CurveError("could not put the singular locus in generic position")


def _ci3_sing_with(f: MultiPoly, g: MultiPoly, A) -> list[PointOrbit]:
    fa, ga = _apply3(f, A), _apply3(g, A)
    grads = [[p.diff(v) for v in XYZ] for p in (fa, ga)]
    minors = [
        grads[0][i] * grads[1][j] - grads[0][j] * grads[1][i] for i, j in ((0, 1), (0, 2), (1, 2))
    ]
    if all(m.is_zero() for m in minors):
        raise CurveError("Jacobian rank drops everywhere (non-reduced curve)")
    eqs = [fa, ga] + [m for m in minors if not m.is_zero()]
    combos = [ga + sum((m * (k + 2) for k, m in enumerate(minors)), MultiPoly(XYZ)),
              ga * 3 + sum((m * (1 - k) ** 2 for k, m in enumerate(minors)), MultiPoly(XYZ))]
    Q = [resultant(fa, ga, "z")] + [resultant(fa, c, "z") for c in combos]
    Q = [q for q in Q if not q.is_zero()]
    Rx = upoly.ZERO
    for q in Q[1:]:
        r = resultant(Q[0], q, "y").to_upoly("x")
        Rx = upoly.gcd(Rx, r) if r else Rx
    if not Rx:
        raise _Reshear()
    if upoly.deg(Rx) < 1:
        return []
    m = upoly.squarefree_part(Rx)
    eq2 = [q.with_variables(XY) if False else q for q in Q]
    out = []

    def y_roots(K: ExtensionField):
        alpha = K.reduce(upoly.X)
        gy: list = []
        for q in eq2:
            gy = kp_gcd(K, gy, specialize(q.with_variables(XY), K, {"x": alpha}, "y"))
        if len(gy) <= 1:
            return []
        sq = kp_exact_div(K, gy, kp_gcd(K, gy, kp_deriv(K, gy)))
        return sq

    for K, gy in split_run(ExtensionField(m, check=False), y_roots):
        if not gy:
            continue
        for L, beta, emb in adjoin_root(K, gy):
            alpha_l = embed_element(L, K.reduce(upoly.X), emb)

            def z_root(Lk: ExtensionField, alpha_l=alpha_l, beta=beta):
                a, b = Lk.reduce(alpha_l), Lk.reduce(beta)
                gz: list = []
                for e in eqs:
                    gz = kp_gcd(Lk, gz, specialize(e, Lk, {"x": a, "y": b}, "z"))
                gz = _kp_sqfree(Lk, gz)
                if len(gz) <= 1:
                    return None
                if len(gz) > 2:
                    raise _Reshear()
                return (a, b, Lk.neg(gz[0]))

            for Lk, pt in split_run(L, z_root):
                if pt is None:
                    continue
                coords = tuple(
                    Lk.reduce(upoly.add(upoly.add(upoly.scale(pt[0], A[i][0]), upoly.scale(pt[1], A[i][1])),
                                        upoly.scale(pt[2], A[i][2])))
                    for i in range(3)
                )
                out.append(PointOrbit("finite", Lk.modulus, coords))
    return out


# Serre bookkeeping -----------------------------------------------------------


def invariants_serre(component: MultiPoly, deltas: Sequence[tuple[PointOrbit, int]]) -> CurveInvariants:
    """Genus from degree and per-orbit delta invariants (delta counted per point)."""
    d = component.total_degree()
    total = sum(o.size * dl for o, dl in deltas)
    g2 = (d - 1) * (d - 2) - 2 * total
    if g2 < 0 or g2 % 2:
        raise CurveError(f"Serre inconsistency: (d-1)(d-2)/2 = {(d - 1) * (d - 2) // 2} < sum of deltas {total}")
    return CurveInvariants(d, g2 // 2, total, [(o, dl) for o, dl in deltas])
