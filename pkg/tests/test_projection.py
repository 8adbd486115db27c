import time
from fractions import Fraction

import numpy as np
import pytest

from bilipcurves.algebra import parse_poly
from bilipcurves.curves import CompleteIntersection3, Parametrized
from bilipcurves.projection import (
    NODE,
    ProjectionSpec,
    certify,
    generic_projection,
    implicitize,
    nullspace,
    partition_singularities,
    reference_specs,
    space_degree,
    verify_infinity_embedding,
)
from bilipcurves.topotype import types_equal

XY = ("x", "y")
XYZ = ("x", "y", "z")


def param(*comps):
    return Parametrized(tuple(parse_poly(c, ("t",)).to_upoly("t") for c in comps))


TWISTED = param("t", "t^2", "t^3")
T234 = param("t^2", "t^3", "t^4")


# linear algebra ------------------------------------------------------------------


def test_nullspace():
    rows = [[Fraction(1), Fraction(2), Fraction(3)]]
    basis = nullspace(rows, 3)
    assert len(basis) == 2
    for v in basis:
        assert sum(a * b for a, b in zip(rows[0], v)) == 0


def test_projection_spec_from_directions():
    spec = ProjectionSpec.from_directions([[0, 0, 1]], 3)
    assert spec.dimension == 3
    assert spec.apply([(0, 1), (0, 0, 1), (0, 0, 0, 1)]) is not None
    with pytest.raises(ValueError, match="codimension-2"):
        ProjectionSpec.from_directions([[1, 0, 0, 0], [2, 0, 0, 0]], 4)
    with pytest.raises(ValueError, match="coordinates"):
        ProjectionSpec.from_directions([[1, 0]], 3)
    B = spec.plane_basis()
    assert B.shape == (3, 2) and np.allclose(B.T @ B, np.eye(2))
    assert np.allclose(B[2], 0)


def test_space_degree():
    assert space_degree(TWISTED) == 3
    assert space_degree(T234) == 4
    assert space_degree(CompleteIntersection3(parse_poly("y - x^2", XYZ), parse_poly("z - x^3", XYZ))) == 3


# examples ----------------------------------------------------------------------------


def test_twisted_cubic_projection():
    plane, spec, cert = generic_projection(TWISTED, 0)
    assert cert.passed and plane.degrees == [3]
    _, part, _ = certify(TWISTED, spec, 0)
    assert part.S1 == [] and len(part.S2) == 1 and part.new_node_count == 1
    assert types_equal(part.S2[0][1], NODE)


def test_plane_lift_projects_to_parabola():
    s = param("t", "t^2", "0")
    spec = ProjectionSpec.from_directions([[0, 0, 1]], 3)
    F = implicitize(s, spec)
    G = parse_poly("y - x^2", XY)
    assert F.content_normalized() in (G.content_normalized(), (-G).content_normalized())
    part, cert = partition_singularities(s, None, spec, reference_specs(3, 0))
    assert cert.passed and part.S1 == [] and part.S2 == []


def test_t234_generic():
    plane, spec, cert = generic_projection(T234, 0)
    assert cert.passed and plane.degrees == [4]
    _, part, _ = certify(T234, spec, 0)
    ((_, pieces),) = part.S1
    ((_, t),) = pieces
    assert t.branches == ((0, 2, (3,), 0),)
    assert part.new_node_count == 2 and part.expected_new_nodes == 2
    assert sum(o.size for o, _ in part.S2) == 2


def test_non_generic_projection_rejected():
    spec = ProjectionSpec.from_forms([1, 0, 0], [0, 1, 1])
    part, cert = partition_singularities(T234, None, spec, reference_specs(3, 0))
    assert cert.degree_preserved
    assert not cert.serre_budget_exact
    assert not cert.passed


# stability --------------------------------------------------------------------------------


def test_degree_stable_over_seeds():
    for seed in range(20):
        plane, spec, cert = generic_projection(TWISTED, seed)
        assert cert.passed and plane.degrees == [3]


def test_s1_types_and_node_counts_stable():
    seen_types, counts = [], set()
    for seed in range(5):
        plane, spec, cert = generic_projection(T234, seed)
        _, part, _ = certify(T234, spec, seed)
        seen_types.append(tuple(t for _, pieces in part.S1 for _, t in pieces))
        counts.add(part.new_node_count)
    assert len(set(seen_types)) == 1 and counts == {2}


def test_ci3_projection():
    s = CompleteIntersection3(parse_poly("y^2 - x^3", XYZ), parse_poly("z - x", XYZ))
    plane, spec, cert = generic_projection(s, 0)
    assert cert.passed and plane.degrees == [3]
    _, part, _ = certify(s, spec, 0)
    assert part.new_node_count == 0


# verifier at infinity ------------------------------------------------------------------------


def test_verifier_bad_center_fails():
    spec = ProjectionSpec.from_directions([[0, 0, 1]], 3)
    rep = verify_infinity_embedding(TWISTED, spec, 100.0, 10_000, 0)
    assert rep.verdict == "fail" and rep.min_ratio < 0.01


def test_verifier_isometric_plane():
    s = param("t", "t^2", "0")
    spec = ProjectionSpec.from_directions([[0, 0, 1]], 3)
    rep = verify_infinity_embedding(s, spec, 10.0, 2_000, 0)
    assert rep.min_ratio == pytest.approx(1.0, abs=1e-12)
    assert rep.verdict == "pass"


def test_verifier_generic_center_stable():
    _, spec, _ = generic_projection(TWISTED, 0)
    ratios = []
    for r in (10.0, 100.0, 1000.0):
        start = time.perf_counter()
        rep = verify_infinity_embedding(TWISTED, spec, r, 10_000, 0)
        assert time.perf_counter() - start < 5
        assert rep.verdict == "pass" and rep.pair_count >= 10_000
        assert 0 < rep.min_ratio <= 1
        ratios.append(rep.min_ratio)
    assert max(ratios) / min(ratios) <= 2


def test_verifier_seeded_determinism():
    _, spec, _ = generic_projection(TWISTED, 3)
    a = verify_infinity_embedding(TWISTED, spec, 100.0, 2_000, 7)
    b = verify_infinity_embedding(TWISTED, spec, 100.0, 2_000, 7)
    assert a.describe() == b.describe()
