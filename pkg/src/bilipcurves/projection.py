"""Generic plane projections of space curves and the sampling verifier at infinity."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import upoly
from .algebra.extension import ExtensionField, charpoly
from .algebra.multipoly import MultiPoly
from .algebra.resultant import resultant
from .curves import (
    XY,
    XYZ,
    CompleteIntersection3,
    CurveError,
    Parametrized,
    PlaneCurve,
    PointOrbit,
    SpaceCurve,
    affine_singular_orbits,
    infinity_orbits,
    space_singular_points,
)
from .puiseux import PuiseuxError
from .topotype import LocalType, make_local_type, orbit_types
from .puiseux import CharSequence

MAX_ATTEMPTS = 8
REFERENCES = 2
RATIO_THRESHOLD = 1e-3
DISTANCE_THRESHOLD = 1e-3
MAX_PARAMETER = 1e6

NODE = make_local_type([(False, CharSequence(1), 0), (False, CharSequence(1), 0)], [[0, 1], [1, 0]])


class GenericityError(RuntimeError):
    def __init__(self, message: str, certificate: "GenericityCertificate | None" = None):
        super().__init__(message)
        self.certificate = certificate


# linear algebra over Q -------------------------------------------------------------


def nullspace(rows: Sequence[Sequence[Fraction]], n: int) -> list[list[Fraction]]:
    """Basis of {v in Q^n : r . v = 0 for every row r}."""
    A = [[Fraction(c) for c in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][fc]
        basis.append(v)
    return basis


def _inverse(M: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


# data ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectionSpec:
    """Linear projection C^n -> C^2 given by two rational forms; the center is their common kernel."""

    forms: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]
    directions: tuple[tuple[Fraction, ...], ...]
    seed: int | None = None

    @classmethod
    def from_directions(cls, directions: Sequence[Sequence], n: int, seed: int | None = None) -> "ProjectionSpec":
        dirs = tuple(tuple(Fraction(c) for c in d) for d in directions)
        if any(len(d) != n for d in dirs):
            raise ValueError(f"center directions need {n} coordinates")
        forms = nullspace(dirs, n)
        if len(forms) != 2:
            raise ValueError("center directions must span a codimension-2 subspace")
        return cls((tuple(forms[0]), tuple(forms[1])), dirs, seed)

    @classmethod
    def from_forms(cls, l1: Sequence, l2: Sequence, seed: int | None = None) -> "ProjectionSpec":
        forms = (tuple(Fraction(c) for c in l1), tuple(Fraction(c) for c in l2))
        dirs = nullspace(forms, len(l1))
        if len(dirs) != len(l1) - 2:
            raise ValueError("projection forms must be independent")
        return cls(forms, tuple(tuple(d) for d in dirs), seed)

    @property
    def dimension(self) -> int:
        return len(self.forms[0])

    def plane_basis(self) -> np.ndarray:
        """Orthonormal real basis (n x 2) of the orthogonal complement of the center."""
        n = self.dimension
        if not self.directions:
            return np.eye(n)[:, :2]
        D = np.array([[float(c) for c in d] for d in self.directions])
        _, _, vt = np.linalg.svd(D)
        return vt[len(self.directions):].T

    def apply(self, coords: Sequence[upoly.UPoly], K: ExtensionField | None = None) -> tuple:
        out = []
        for form in self.forms:
            acc = upoly.ZERO
            for c, x in zip(form, coords):
                acc = upoly.add(acc, upoly.scale(x, c))
            out.append(K.reduce(acc) if K else acc)
        return tuple(out)

    def describe(self) -> dict:
        return {
            "forms": [[str(c) for c in f] for f in self.forms],
            "center_directions": [[str(c) for c in d] for d in self.directions],
            "seed": self.seed,
        }


@dataclass
class GenericityCertificate:
    degree_preserved: bool
    new_singularities_are_nodes: bool
    serre_budget_exact: bool
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.degree_preserved and self.new_singularities_are_nodes and self.serre_budget_exact

    def describe(self) -> dict:
        return {
            "degree_preserved": self.degree_preserved,
            "new_singularities_are_nodes": self.new_singularities_are_nodes,
            "serre_budget_exact": self.serre_budget_exact,
            "passed": self.passed,
            **self.details,
        }


@dataclass
class SingularPartition:
    S1: list[tuple[PointOrbit, list[tuple[PointOrbit, LocalType]]]]
    S2: list[tuple[PointOrbit, LocalType]]
    new_node_count: int
    expected_new_nodes: int | None = None
    genus: int | None = None

    def describe(self) -> dict:
        return {
            "S1": [
                {
                    "space_orbit": so.describe(),
                    "plane_orbits": [{**po.describe(), "type": t.describe(), "delta": t.delta()} for po, t in pieces],
                }
                for so, pieces in self.S1
            ],
            "S2": [{**po.describe(), "type": t.describe()} for po, t in self.S2],
            "new_node_count": self.new_node_count,
            "expected_new_nodes": self.expected_new_nodes,
            "genus": self.genus,
        }


@dataclass
class InfinityReport:
    radius: float
    sample_radius: float
    pair_count: int
    min_ratio: float
    cloud_distance: float
    verdict: str
    ratio_threshold: float = RATIO_THRESHOLD
    distance_threshold: float = DISTANCE_THRESHOLD
    seed: int = 0

    def describe(self) -> dict:
        return {
            "radius": self.radius,
            "sample_radius": self.sample_radius,
            "pair_count": self.pair_count,
            "min_ratio": self.min_ratio,
            "cloud_distance_fubini_study": self.cloud_distance,
            "ratio_threshold": self.ratio_threshold,
            "distance_threshold": self.distance_threshold,
            "verdict": self.verdict,
            "seed": self.seed,
            "provenance": "sampled (double precision)",
        }


# degree and implicitisation ---------------------------------------------------------


def space_degree(s: SpaceCurve) -> int:
    """Number of points on a generic hyperplane section."""
    if isinstance(s, Parametrized):
        return max(upoly.deg(p) for p in s.components)
    for a, b, c in ((2, -3, 5), (3, 7, -2), (-5, 2, 11), (7, 5, 3)):
        plane = MultiPoly(XYZ, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 0): c})
        f2, g2 = s.f.subs({"z": plane}), s.g.subs({"z": plane})
        try:
            r = resultant(f2, g2, "y").to_upoly("x")
        except ValueError:
            continue
        if not r:
            continue
        lead_f = f2.coefficients_in("y").get(f2.degree("y"))
        lead_g = g2.coefficients_in("y").get(g2.degree("y"))
        if not (lead_f.is_constant() and lead_g.is_constant()):
            continue
        count = upoly.deg(upoly.squarefree_part(r)) if upoly.deg(r) > 0 else 0
        if count == upoly.deg(r):
            return count
    raise CurveError("could not determine the degree of the space curve")


def implicitize(s: SpaceCurve, spec: ProjectionSpec) -> MultiPoly:
    """Equation of the image curve (up to multiplicity; callers check squarefreeness)."""
    if isinstance(s, Parametrized):
        p1, p2 = spec.apply(s.components)
        names = ("x", "y", "t")
        X = MultiPoly.var(names, "x") - MultiPoly.from_upoly(names, "t", p1)
        Y = MultiPoly.var(names, "y") - MultiPoly.from_upoly(names, "t", p2)
        if upoly.deg(p1) < 1:
            return (MultiPoly.var(names, "x") - MultiPoly.const(names, p1[0] if p1 else 0)).with_variables(XY)
        G = resultant(X, Y, "t")
        return G.with_variables(XY).content_normalized()
    l1, l2 = spec.forms
    M = [list(l1), list(l2)]
    for k in range(3):
        row = [Fraction(int(i == k)) for i in range(3)]
        try:
            Minv = _inverse(M + [row])
        except ZeroDivisionError:
            continue
        break
    names = XYZ
    imgs = {
        v: MultiPoly(names, {tuple(int(j == i) for i in range(3)): Minv[r][j] for j in range(3)})
        for r, v in enumerate(names)
    }
    f2, g2 = s.f.subs(imgs), s.g.subs(imgs)
    G = resultant(f2, g2, "z")
    if G.is_zero():
        raise CurveError("projection is degenerate")
    return G.with_variables(XY).content_normalized()


# projected curve data ----------------------------------------------------------------


@dataclass
class _Projected:
    spec: ProjectionSpec
    plane: PlaneCurve | None
    reason: str | None = None
    finite: list = field(default_factory=list)  # (orbit, type)
    infinity: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.plane is not None

    def delta_infinity(self) -> int:
        return sum(o.size * t.delta() for o, t in self.infinity)

    def delta_finite(self) -> int:
        return sum(o.size * t.delta() for o, t in self.finite)


def _project(s: SpaceCurve, spec: ProjectionSpec, degree: int) -> _Projected:
    try:
        G = implicitize(s, spec)
    except CurveError as exc:
        return _Projected(spec, None, str(exc))
    if G.total_degree() != degree:
        return _Projected(spec, None, f"plane degree {G.total_degree()} differs from space degree {degree}")
    try:
        plane = PlaneCurve((G,))
    except CurveError as exc:
        return _Projected(spec, None, f"image is not reduced: {exc}")
    finite = [ot for o in affine_singular_orbits(G) for ot in orbit_types(plane, o)]
    inf = [ot for o in infinity_orbits(G) for ot in orbit_types(plane, o)]
    return _Projected(spec, plane, None, finite, inf)


def _lambda_charpoly(orbit: PointOrbit, coords, c: int) -> upoly.UPoly:
    K = orbit.field
    lam = K.reduce(upoly.add(coords[0], upoly.scale(coords[1], c)))
    return charpoly(K, lam)


def _restrict_by(orbit: PointOrbit, c: int, g: upoly.UPoly) -> tuple[upoly.UPoly, upoly.UPoly]:
    """Split the orbit's modulus into points whose lambda-value is a root of g and the rest."""
    K = orbit.field
    lam = K.reduce(upoly.add(orbit.coords[0], upoly.scale(orbit.coords[1], c)))
    h = upoly.ZERO
    for coef in reversed(g):
        h = K.add(K.mul(h, lam), upoly.const(coef))
    inside = upoly.gcd(orbit.modulus, h) if h else orbit.modulus
    outside = upoly.exact_div(orbit.modulus, inside)
    return upoly.monic(inside), upoly.monic(outside)


def _partition(space_orbits: list[PointOrbit], proj: _Projected) -> tuple[list, list, str | None]:
    images = []
    for o in space_orbits:
        K = o.field
        images.append(PointOrbit("finite", o.modulus, proj.spec.apply(o.coords, K)))
    plane_orbits = [o for o, _ in proj.finite]
    for c in range(1, 60):
        cps_plane = [_lambda_charpoly(o, o.coords, c) for o in plane_orbits]
        cps_img = [_lambda_charpoly(o, o.coords, c) for o in images]
        all_plane = upoly.ONE
        for cp in cps_plane:
            all_plane = upoly.mul(all_plane, cp)
        if upoly.deg(upoly.gcd(all_plane, upoly.deriv(all_plane))) > 0:
            continue
        break
    else:
        return [], [], "could not separate plane singular points"
    all_img = upoly.ONE
    for cp in cps_img:
        all_img = upoly.mul(all_img, cp)
    if upoly.deg(all_img) > 0 and upoly.deg(upoly.gcd(all_img, upoly.deriv(all_img))) > 0:
        return [], [], "distinct space singular points have the same image"
    if upoly.deg(upoly.gcd(all_img, all_plane)) != upoly.deg(all_img):
        return [], [], "image of a space singular point is not singular in the plane"
    S1 = []
    for so, cp in zip(space_orbits, cps_img):
        pieces = []
        for (po, t) in proj.finite:
            inside, _ = _restrict_by(po, c, cp)
            if upoly.deg(inside) > 0:
                sub = po.restrict(inside)
                pieces.append((sub, t))
        S1.append((so, pieces))
    S2 = []
    for (po, t) in proj.finite:
        _, outside = _restrict_by(po, c, all_img) if upoly.deg(all_img) > 0 else (None, po.modulus)
        if upoly.deg(outside) > 0:
            S2.append((po.restrict(outside), t))
    return S1, S2, None


def _s1_deltas(S1) -> list[int]:
    return [sum(po.size * t.delta() for po, t in pieces) for _, pieces in S1]


def partition_singularities(s: SpaceCurve, p: PlaneCurve | None, spec: ProjectionSpec,
                            references: Sequence[ProjectionSpec] = ()) -> tuple[SingularPartition, GenericityCertificate]:
    """S1/S2 partition of the projection's singular points and the genericity certificate."""
    degree = space_degree(s)
    space = space_singular_points(s)
    proj = _project(s, spec, degree)
    if not proj.ok:
        cert = GenericityCertificate(False, False, False, {"reason": proj.reason})
        return SingularPartition([], [], 0), cert
    S1, S2, why = _partition(space.orbits, proj)
    if why is not None:
        cert = GenericityCertificate(True, False, False, {"reason": why})
        return SingularPartition([], [], 0), cert
    nodes_only = all(t == NODE for _, t in S2)
    new_nodes = sum(o.size for o, _ in S2)
    s1_ref = _s1_deltas(S1)
    inf_ref = proj.delta_infinity()
    used_refs = 0
    for ref in references:
        rp = _project(s, ref, degree)
        if not rp.ok:
            continue
        rS1, _, rwhy = _partition(space.orbits, rp)
        if rwhy is not None:
            continue
        used_refs += 1
        s1_ref = [min(a, b) for a, b in zip(s1_ref, _s1_deltas(rS1))]
        inf_ref = min(inf_ref, rp.delta_infinity())
    d = degree
    arith = (d - 1) * (d - 2) // 2
    if isinstance(s, Parametrized):
        genus = 0
    else:
        genus = arith - proj.delta_finite() - proj.delta_infinity()
    expected = arith - genus - sum(s1_ref) - inf_ref
    part = SingularPartition(S1, S2, new_nodes, expected, genus)
    details = {
        "space_degree": degree,
        "plane_equation": str(proj.plane),
        "arithmetic_genus": arith,
        "delta_S1_reference": s1_ref,
        "delta_infinity_reference": inf_ref,
        "delta_infinity_candidate": proj.delta_infinity(),
        "reference_projections": used_refs,
    }
    if genus < 0:
        details["reason"] = "Serre inconsistency"
    cert = GenericityCertificate(True, nodes_only, expected == new_nodes and genus >= 0, details)
    return part, cert


# generic projection -------------------------------------------------------------------------


def _random_spec(n: int, rng: random.Random, height: int, seed) -> ProjectionSpec:
    while True:
        dirs = [[rng.randint(-height, height) for _ in range(n)] for _ in range(n - 2)]
        try:
            return ProjectionSpec.from_directions(dirs, n, seed)
        except ValueError:
            continue


def reference_specs(n: int, seed: int) -> list[ProjectionSpec]:
    return [_random_spec(n, random.Random(f"ref:{seed}:{k}"), 10, None) for k in range(REFERENCES)]


def certify(s: SpaceCurve, spec: ProjectionSpec, seed: int = 0) -> tuple[PlaneCurve | None, SingularPartition, GenericityCertificate]:
    part, cert = partition_singularities(s, None, spec, reference_specs(spec.dimension, seed))
    plane = None
    if cert.degree_preserved:
        plane = PlaneCurve((implicitize(s, spec),))
    return plane, part, cert


def generic_projection(s: SpaceCurve, seed: int = 0) -> tuple[PlaneCurve, ProjectionSpec, GenericityCertificate]:
    n = s.dimension
    last = None
    for attempt in range(MAX_ATTEMPTS):
        height = 10 + 2 * attempt
        rng = random.Random(f"proj:{seed}:{attempt}")
        spec = _random_spec(n, rng, height, seed)
        plane, part, cert = certify(s, spec, seed)
        cert.details["attempt"] = attempt
        last = cert
        if cert.passed:
            return plane, spec, cert
    raise GenericityError("genericity not achieved", last)


# verifier at infinity --------------------------------------------------------------------------


def _evaluate(comps: Sequence[upoly.UPoly], t: np.ndarray) -> np.ndarray:
    out = []
    for p in comps:
        coeffs = [float(c) for c in reversed(p)] or [0.0]
        out.append(np.polyval(coeffs, t))
    return np.stack(out, axis=-1)


def _log_uniform(rng: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def _draw_pairs(rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
    rho = _log_uniform(rng, 1e-2, MAX_PARAMETER, size)
    t1 = rho * np.exp(1j * rng.uniform(0, 2 * np.pi, size))
    kind = rng.integers(0, 3, size)
    rho2 = _log_uniform(rng, 1e-2, MAX_PARAMETER, size)
    other = rho2 * np.exp(1j * rng.uniform(0, 2 * np.pi, size))
    eps = _log_uniform(rng, 1e-7, 1e-1, size) * np.exp(1j * rng.uniform(0, 2 * np.pi, size))
    near = t1 * (1 + eps)
    ratio = t1 * np.exp(1j * rng.uniform(0, 2 * np.pi, size)) * _log_uniform(rng, 0.5, 2.0, size)
    t2 = np.where(kind == 0, other, np.where(kind == 1, near, ratio))
    return t1, t2


def verify_infinity_embedding(s: SpaceCurve, spec: ProjectionSpec, r: float, samples: int,
                              seed: int = 0) -> InfinityReport:
    """Sample secants outside the preimage of the radius-r ball and measure the distortion of pi."""
    if not isinstance(s, Parametrized):
        raise CurveError("the infinity verifier needs a parametrized curve")
    if r <= 0 or samples < 2:
        raise ValueError("need r > 0 and at least two samples")
    B = spec.plane_basis()
    rng = np.random.default_rng(seed)
    ratios = []
    got = 0
    batch = max(4 * samples, 1024)
    for _ in range(50):
        t1, t2 = _draw_pairs(rng, batch)
        x, y = _evaluate(s.components, t1), _evaluate(s.components, t2)
        px, py = x @ B, y @ B
        keep = (np.linalg.norm(px, axis=1) > r) & (np.linalg.norm(py, axis=1) > r) & (t1 != t2)
        diff = (x - y)[keep]
        if not len(diff):
            continue
        scale = np.max(np.abs(diff), axis=1, keepdims=True)
        good = scale[:, 0] > 0
        diff = diff[good] / scale[good]
        num = np.linalg.norm(diff @ B, axis=1)
        den = np.linalg.norm(diff, axis=1)
        take = min(samples - got, len(num))
        ratios.append(num[:take] / den[:take])
        got += take
        if got >= samples:
            break
    if got < samples:
        raise ValueError("insufficient samples")
    rr = np.concatenate(ratios)
    if float(rr.max()) > 1 + 1e-9:
        raise AssertionError("projection expanded a distance")
    min_ratio = float(min(rr.min(), 1.0))
    distance = float(math.asin(min(min_ratio, 1.0)))
    verdict = "pass" if min_ratio >= RATIO_THRESHOLD and distance >= DISTANCE_THRESHOLD else "fail"
    return InfinityReport(float(r), MAX_PARAMETER, got, min_ratio, distance, verdict, seed=seed)
