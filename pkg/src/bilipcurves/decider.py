"""Equivalence decisions for plane and space curves."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .curves import (
    CurveError,
    PlaneCurve,
    PointOrbit,
    SpaceCurve,
    invariants_serre,
    singular_locus_union,
    space_singular_points,
)
from .projection import GenericityError, certify, generic_projection
from .puiseux import PuiseuxError
from .topotype import LocalType, orbit_types

EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not-equivalent"
INCONCLUSIVE = "inconclusive"

ASSUMPTIONS = [
    "components are absolutely irreducible as declared (not verified; Serre consistency is checked)",
    "germ topology is encoded by characteristic exponents and pairwise intersection numbers, "
    "assumed complete for embedded topological equivalence (complex orientation convention)",
    "'equivalent' means the sufficient conditions hold for this invariant; 'not-equivalent' is issued "
    "only on a concrete invariant mismatch",
]
SPACE_ASSUMPTIONS = ASSUMPTIONS + [
    "singular points of space curves are counted in affine space only, one per point of each orbit",
    "space curve inputs are single irreducible models",
]


@dataclass
class ComponentMatch:
    pairs: list[tuple[int, int]]
    degree_agree: list[bool]
    germ_types_agree: list[bool]

    def describe(self) -> dict:
        return {
            "pairs": [list(p) for p in self.pairs],
            "degree_agree": self.degree_agree,
            "germ_types_agree": self.germ_types_agree,
        }


@dataclass
class EquivalenceReport:
    verdict: str
    sigma: ComponentMatch | None = None
    rho: list[dict] = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    reason: str | None = None
    assumptions: list[str] = field(default_factory=lambda: list(ASSUMPTIONS))

    def describe(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "sigma": self.sigma.describe() if self.sigma else None,
            "rho": self.rho,
            "tables": self.tables,
            "assumptions": self.assumptions,
        }


# plane --------------------------------------------------------------------------


@dataclass
class PlaneAnalysis:
    curve: PlaneCurve
    sites: list[tuple[PointOrbit, LocalType]]
    genera: list[int | None]
    warnings: list[str]

    def table(self) -> dict:
        return {
            "degrees": self.curve.degrees,
            "genus": self.genera,
            "orbits": [
                {**o.describe(), "type": t.describe(), "delta": t.delta()} for o, t in self.sites
            ],
            "warnings": self.warnings,
        }


def analyze_plane(c: PlaneCurve) -> PlaneAnalysis:
    sites = []
    for orbit in singular_locus_union(c):
        sites.extend(orbit_types(c, orbit))
    genera: list[int | None] = []
    warnings = []
    for k, comp in enumerate(c.components):
        deltas = []
        for o, t in sites:
            canon = [lab for lab, orig in t.label_map if orig == k]
            if canon:
                deltas.append((o, t.delta(canon)))
        try:
            genera.append(invariants_serre(comp, deltas).genus)
        except CurveError as exc:
            genera.append(None)
            warnings.append(f"component {k}: {exc}")
    return PlaneAnalysis(c, sites, genera, warnings)


def _site_counter(an: PlaneAnalysis, mapping) -> Counter:
    cnt: Counter = Counter()
    for o, t in an.sites:
        cnt[(o.site, t.relabeled(mapping))] += o.size
    return cnt


def _rho(an_a: PlaneAnalysis, an_b: PlaneAnalysis, mapping_b) -> list[dict]:
    groups: dict = {}
    for side, an, mp in (("a", an_a, None), ("b", an_b, mapping_b)):
        for o, t in an.sites:
            key = (o.site, t.relabeled(mp) if mp else t.relabeled({i: i for i in range(len(an.curve.components))}))
            groups.setdefault(key, {"a": [], "b": []})[side].append(o.describe())
    out = []
    for (site, t), g in groups.items():
        out.append({"site": site, "type": t.describe(), "a": g["a"], "b": g["b"]})
    out.sort(key=lambda r: (r["site"], repr(r["type"])))
    return out


def compare_analyses(an_a: PlaneAnalysis, an_b: PlaneAnalysis) -> EquivalenceReport:
    a, b = an_a.curve, an_b.curve
    tables = {"a": an_a.table(), "b": an_b.table()}
    if len(a.components) != len(b.components):
        return EquivalenceReport(
            NOT_EQUIVALENT, tables=tables,
            reason=f"component count differs: {len(a.components)} vs {len(b.components)}",
        )
    if sorted(a.degrees) != sorted(b.degrees):
        return EquivalenceReport(
            NOT_EQUIVALENT, tables=tables,
            reason=f"component degrees differ: {sorted(a.degrees)} vs {sorted(b.degrees)}",
        )
    n = len(a.components)
    ident = {i: i for i in range(n)}
    target = _site_counter(an_a, ident)
    for perm in itertools.permutations(range(n)):
        # perm[i] = index in b matched with component i of a
        if any(a.degrees[i] != b.degrees[perm[i]] for i in range(n)):
            continue
        inv = {perm[i]: i for i in range(n)}
        if _site_counter(an_b, inv) == target:
            match = ComponentMatch([(i, perm[i]) for i in range(n)], [True] * n, [True] * n)
            return EquivalenceReport(EQUIVALENT, match, _rho(an_a, an_b, inv), tables)
    ka = Counter((o.site, t) for o, t in an_a.sites for _ in range(o.size))
    kb = Counter((o.site, t) for o, t in an_b.sites for _ in range(o.size))
    if ka != kb:
        diff_a = ka - kb
        diff_b = kb - ka
        what = next(iter(diff_a or diff_b))
        side = "first" if diff_a else "second"
        reason = f"germ type {what[1].short()} at a {what[0]} site occurs more often in the {side} curve"
    else:
        reason = "no component bijection is compatible with the per-component germ types"
    return EquivalenceReport(NOT_EQUIVALENT, tables=tables, reason=reason)


def compare_plane(a: PlaneCurve, b: PlaneCurve) -> EquivalenceReport:
    try:
        an_a, an_b = analyze_plane(a), analyze_plane(b)
    except PuiseuxError as exc:
        return EquivalenceReport(INCONCLUSIVE, reason=str(exc))
    return compare_analyses(an_a, an_b)


# space ---------------------------------------------------------------------------


def compare_space(a: SpaceCurve, b: SpaceCurve, seed: int = 0) -> EquivalenceReport:
    sa, sb = space_singular_points(a), space_singular_points(b)
    tables: dict = {
        "a": {"singular_count": sa.count, "singular_orbits": [o.describe() for o in sa.orbits]},
        "b": {"singular_count": sb.count, "singular_orbits": [o.describe() for o in sb.orbits]},
        "seed": seed,
    }
    if sa.count != sb.count:
        return EquivalenceReport(
            NOT_EQUIVALENT, tables=tables, assumptions=list(SPACE_ASSUMPTIONS),
            reason=f"number of singular points differs: {sa.count} vs {sb.count}",
        )
    planes = []
    for key, s in (("a", a), ("b", b)):
        try:
            plane, spec, cert = generic_projection(s, seed)
        except GenericityError as exc:
            last = exc.certificate.describe() if exc.certificate else None
            tables[key]["certificate"] = last
            return EquivalenceReport(INCONCLUSIVE, tables=tables, assumptions=list(SPACE_ASSUMPTIONS),
                                     reason=f"curve {key}: genericity not achieved")
        _, part, _ = certify(s, spec, seed)
        tables[key].update(
            projection=spec.describe(), certificate=cert.describe(), partition=part.describe(),
            plane_curve=str(plane),
        )
        planes.append(plane)
    rep = compare_plane(planes[0], planes[1])
    tables["projections"] = rep.tables
    reason = None if rep.reason is None else f"generic projections differ: {rep.reason}"
    return EquivalenceReport(rep.verdict, rep.sigma, rep.rho, tables, reason, list(SPACE_ASSUMPTIONS))
