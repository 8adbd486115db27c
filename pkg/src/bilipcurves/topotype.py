"""Embedded topological types of plane germs, including germs on the line at infinity.

A type is the list of branches (line flag, characteristic sequence, component
label) together with the matrix of pairwise intersection numbers, brought to
a canonical order.  Component labels only matter through the partition they
induce, so they are renumbered by first occurrence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import upoly
from .algebra.extension import ExtensionField, split_run
from .curves import PlaneCurve, PointOrbit
from .puiseux import (
    CharSequence,
    LocalPoly,
    PuiseuxBranch,
    PuiseuxError,
    branch_intersection_multiplicity,
    characteristic_exponents,
    germ_branches,
    semigroup_gaps,
    semigroup_generators,
)

MAX_BRANCHES = 12
LINE = "line"


@dataclass(frozen=True)
class GermSite:
    orbit: PointOrbit
    include_line: bool

    def __post_init__(self):
        if self.include_line != (self.orbit.site == "infinity"):
            raise ValueError("include_line must be set exactly for sites at infinity")

    @classmethod
    def of(cls, orbit: PointOrbit) -> "GermSite":
        return cls(orbit, orbit.site == "infinity")


@dataclass(frozen=True)
class LocalType:
    branches: tuple[tuple, ...]  # (is_line, m, betas, label), label -1 for the line
    matrix: tuple[tuple[int, ...], ...]
    label_map: tuple = field(default=(), compare=False)

    def __len__(self):
        return len(self.branches)

    def delta(self, labels: Sequence[int] | None = None) -> int:
        """Delta invariant of the curve branches (optionally of some canonical labels only)."""
        idx = [
            i for i, (is_line, _, _, lab) in enumerate(self.branches)
            if not is_line and (labels is None or lab in labels)
        ]
        total = 0
        for i in idx:
            _, m, betas, _ = self.branches[i]
            total += semigroup_gaps(semigroup_generators(CharSequence(m, betas)))
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                total += self.matrix[idx[a]][idx[b]]
        return total

    def original_labels(self) -> dict:
        return dict(self.label_map)

    def relabeled(self, mapping) -> "LocalType":
        """Canonical form with literal labels mapping[original] (used to test a component bijection)."""
        orig = dict(self.label_map)
        raw = [
            (bool(l), CharSequence(m, betas), LINE if l else mapping[orig[lab]])
            for l, m, betas, lab in self.branches
        ]
        return make_local_type(raw, self.matrix, keep_labels=True)

    def restrict_to(self, original_label) -> "LocalType":
        """Type of the germ formed by one component's branches (plus the line)."""
        canon = [c for c, o in self.label_map if o == original_label]
        keep = [i for i, b in enumerate(self.branches) if b[0] or b[3] in canon]
        return make_local_type(
            [(bool(self.branches[i][0]), CharSequence(self.branches[i][1], self.branches[i][2]),
              LINE if self.branches[i][0] else original_label) for i in keep],
            [[self.matrix[i][j] for j in keep] for i in keep],
        )

    def describe(self) -> dict:
        return {
            "branches": [
                {"line": bool(l), "char": [m, *betas], "component": lab} for l, m, betas, lab in self.branches
            ],
            "intersections": [list(r) for r in self.matrix],
        }

    def short(self) -> str:
        parts = []
        for l, m, betas, lab in self.branches:
            tag = "L" if l else f"c{lab}"
            parts.append(f"{tag}({m};{','.join(map(str, betas))})")
        return " ".join(parts) + " I=" + str([list(r) for r in self.matrix])


def _twin_classes(entries, labels, M) -> list[int]:
    n = len(entries)
    cls = list(range(n))
    for i in range(n):
        for j in range(i):
            if cls[j] != j:
                continue
            if entries[i] != entries[j] or labels[i] != labels[j]:
                continue
            if all(M[i][k] == M[j][k] for k in range(n) if k not in (i, j)):
                cls[i] = j
                break
    return cls


def make_local_type(branches: Sequence[tuple[bool, CharSequence, object]], matrix,
                    keep_labels: bool = False) -> LocalType:
    """Canonical LocalType from raw (is_line, char sequence, label) data and intersection matrix.

    With ``keep_labels`` the integer labels are kept as given instead of being
    renumbered by first occurrence.
    """
    n = len(branches)
    if n > MAX_BRANCHES:
        raise PuiseuxError(f"germ has {n} branches; the cap is {MAX_BRANCHES}")
    entries = [(int(l), cs.m, tuple(cs.betas)) for l, cs, _ in branches]
    labels = [None if l else lab for l, _, lab in branches]
    M = [list(r) for r in matrix]
    cls = _twin_classes(entries, labels, M)
    best: list = [None, None, None]

    def rec(order: list[int], labmap: dict, prefix: tuple):
        k = len(order)
        if k == n:
            if best[0] is None or prefix < best[0]:
                best[0], best[1], best[2] = prefix, list(order), dict(labmap)
            return
        cands = []
        seen = set()
        for i in range(n):
            if i in order or cls[i] in seen:
                continue
            seen.add(cls[i])
            if labels[i] is None:
                lab = -1
            elif keep_labels:
                lab = labels[i]
            else:
                lab = labmap.get(labels[i], len(labmap))
            key = (entries[i] + (lab,), tuple(M[i][order[j]] for j in range(k)))
            cands.append((key, i, lab))
        cands.sort(key=lambda t: t[0])
        for key, i, lab in cands:
            new = prefix + (key,)
            if best[0] is not None and new > best[0][: k + 1]:
                break
            lm = labmap
            if labels[i] is not None and labels[i] not in labmap:
                lm = dict(labmap)
                lm[labels[i]] = lab
            order.append(i)
            rec(order, lm, new)
            order.pop()

    rec([], {}, ())
    order, labmap = best[1] or [], best[2] or {}
    out_branches = tuple(
        entries[i] + (-1 if labels[i] is None else labmap[labels[i]],) for i in order
    )
    out_matrix = tuple(tuple(M[i][j] for j in order) for i in order)
    inverse = tuple(sorted((v, k) for k, v in labmap.items()))
    return LocalType(out_branches, out_matrix, inverse)


def types_equal(a: LocalType, b: LocalType) -> bool:
    return a.branches == b.branches and a.matrix == b.matrix


def type_from_branches(branches: Sequence[PuiseuxBranch]) -> LocalType:
    n = len(branches)
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            M[i][j] = M[j][i] = branch_intersection_multiplicity(branches[i], branches[j])
    raw = [(b.label == LINE, characteristic_exponents(b), b.label) for b in branches]
    return make_local_type(raw, M)


# local equations ---------------------------------------------------------------


def _lp_mul(K: ExtensionField, a: LocalPoly, b: LocalPoly) -> LocalPoly:
    out: dict = {}
    for (i, j), x in a.items():
        for (k, l), y in b.items():
            key = (i + k, j + l)
            out[key] = K.add(out.get(key, upoly.ZERO), K.mul(x, y))
    return {k: v for k, v in out.items() if v}


def _substitute(K: ExtensionField, terms: dict, images: Sequence[LocalPoly]) -> LocalPoly:
    cache: dict = {}

    def pw(v: int, n: int) -> LocalPoly:
        if (v, n) not in cache:
            cache[(v, n)] = {(0, 0): upoly.ONE} if n == 0 else _lp_mul(K, pw(v, n - 1), images[v])
        return cache[(v, n)]

    out: dict = {}
    for e, c in terms.items():
        acc = {(0, 0): upoly.const(c)}
        for v, n in enumerate(e):
            if n:
                acc = _lp_mul(K, acc, pw(v, n))
        for k, val in acc.items():
            out[k] = K.add(out.get(k, upoly.ZERO), val)
    return out


def local_factors(c: PlaneCurve, orbit: PointOrbit, K: ExtensionField) -> list[tuple[object, LocalPoly]]:
    """Labelled local equations at one point of the orbit (over K), the point moved to the origin."""
    coords = [K.reduce(x) for x in orbit.coords]
    U = {(1, 0): upoly.ONE}
    V = {(0, 1): upoly.ONE}
    out = []
    if orbit.site == "finite":
        x0, y0 = coords
        images = [{**U, (0, 0): x0} if x0 else U, {**V, (0, 0): y0} if y0 else V]
        for k, F in enumerate(c.components):
            out.append((k, _substitute(K, F.terms, images)))
        return out
    one = {(0, 0): upoly.ONE}
    if coords[0] == upoly.ONE:
        a = coords[1]
        images = [one, {**U, (0, 0): a} if a else U, V]
    else:
        images = [U, one, V]
    for k, F in enumerate(c.components):
        H = F.homogenize("z")
        out.append((k, _substitute(K, H.terms, images)))
    out.append((LINE, {(0, 1): upoly.ONE}))
    return out


def orbit_types(c: PlaneCurve, orbit: PointOrbit) -> list[tuple[PointOrbit, LocalType]]:
    """Local types over the orbit, refining it where the type is not constant."""

    def run(K: ExtensionField) -> LocalType:
        branches = germ_branches(K, local_factors(c, orbit, K), lazy=True)
        return type_from_branches(branches)

    pieces = split_run(ExtensionField(orbit.modulus, check=False), run)
    merged: list[list] = []
    for K, t in pieces:
        for entry in merged:
            if types_equal(t, entry[1]):
                entry[0] = upoly.mul(entry[0], K.modulus)
                break
        else:
            merged.append([K.modulus, t])
    return [(orbit.restrict(m), t) for m, t in merged]


def local_type_at(c: PlaneCurve, site: GermSite) -> LocalType:
    types = orbit_types(c, site.orbit)
    if len(types) != 1:
        raise PuiseuxError("local type is not constant on the orbit; use orbit_types")
    return types[0][1]
