import random
from fractions import Fraction

import pytest

from bilipcurves.algebra import parse_poly, upoly
from bilipcurves.curves import Parametrized, PlaneCurve
from bilipcurves.decider import (
    EQUIVALENT,
    INCONCLUSIVE,
    NOT_EQUIVALENT,
    analyze_plane,
    compare_plane,
    compare_space,
)
from bilipcurves.topotype import MAX_BRANCHES

from corpus import XY, affine_image, random_affine, rational_corpus


def P(text):
    return parse_poly(text, XY)


def plane(*texts):
    return PlaneCurve(tuple(P(t) for t in texts))


def param(*comps):
    return Parametrized(tuple(parse_poly(c, ("t",)).to_upoly("t") for c in comps))


def linear_image(s: Parametrized, A) -> Parametrized:
    comps = []
    for row in A:
        acc = upoly.ZERO
        for a, p in zip(row, s.components):
            acc = upoly.add(acc, upoly.scale(p, Fraction(a)))
        comps.append(acc)
    return Parametrized(tuple(comps))


CUSP = plane("y^2 - x^3")
NODE = plane("y^2 - x^2*(x+1)")
TWISTED = param("t", "t^2", "t^3")
T234 = param("t^2", "t^3", "t^4")


# plane ----------------------------------------------------------------------------


def test_cusp_vs_node():
    rep = compare_plane(CUSP, NODE)
    assert rep.verdict == NOT_EQUIVALENT
    assert "(2;3)" in rep.reason or "(1;)" in rep.reason


def test_cusp_vs_translated_scaled_cusp():
    moved = PlaneCurve((P("(2*y)^2 - (x+1)^3"),))
    rep = compare_plane(CUSP, moved)
    assert rep.verdict == EQUIVALENT
    assert rep.sigma.pairs == [(0, 0)]
    finite = [r for r in rep.rho if r["site"] == "finite"]
    assert finite and finite[0]["b"][0]["coords"] == ["-1", "0"]


def test_self_comparison_identity():
    rep = compare_plane(CUSP, CUSP)
    assert rep.verdict == EQUIVALENT and rep.sigma.pairs == [(0, 0)]
    assert all(r["a"] == r["b"] for r in rep.rho)


def test_rho_respects_sites():
    rep = compare_plane(NODE, plane("y^2 - x^2*(x+1)"))
    for r in rep.rho:
        assert all(o["site"] == r["site"] for o in r["a"] + r["b"])


def test_component_count_and_degree_checks():
    rep = compare_plane(plane("y", "x"), plane("x*y - 1"))
    assert rep.verdict == NOT_EQUIVALENT and "component count" in rep.reason
    rep = compare_plane(plane("y - x^2"), plane("y - x^3"))
    assert rep.verdict == NOT_EQUIVALENT and "degrees" in rep.reason


def test_parabola_vs_hyperbola_differ_at_infinity():
    # both smooth conics; the parabola is tangent to the line at infinity
    rep = compare_plane(plane("y - x^2"), plane("x*y - 1"))
    assert rep.verdict == NOT_EQUIVALENT and "infinity" in rep.reason


def test_sigma_uses_component_structure():
    a = plane("y", "y - x^2")
    b = plane("y - x^2 - 1", "y")
    rep = compare_plane(a, b)
    assert rep.verdict == NOT_EQUIVALENT  # tangent vs. disjoint in the affine part
    rep = compare_plane(a, plane("x", "x - y^2"))
    assert rep.verdict == EQUIVALENT and rep.sigma.pairs == [(0, 0), (1, 1)]
    rep = compare_plane(a, plane("x - y^2", "x"))
    assert rep.verdict == EQUIVALENT and rep.sigma.pairs == [(0, 1), (1, 0)]


def test_branch_cap_gives_inconclusive():
    lines = [f"y - {k}*x" for k in range(MAX_BRANCHES + 1)]
    rep = compare_plane(plane(*lines), plane(*lines))
    assert rep.verdict == INCONCLUSIVE and "cap" in rep.reason


def test_corpus_self_and_symmetry():
    corpus = list(rational_corpus().values())
    for F in corpus:
        assert compare_plane(PlaneCurve((F,)), PlaneCurve((F,))).verdict == EQUIVALENT
    rng = random.Random(2)
    for _ in range(6):
        F, G = rng.sample(corpus, 2)
        a, b = PlaneCurve((F,)), PlaneCurve((G,))
        assert compare_plane(a, b).verdict == compare_plane(b, a).verdict


def test_not_equivalent_reason_reverifies():
    corpus = rational_corpus()
    a, b = PlaneCurve((corpus["cusp"],)), PlaneCurve((corpus["nodal_cubic"],))
    rep = compare_plane(a, b)
    shorts_a = {t.short() for _, t in analyze_plane(a).sites}
    shorts_b = {t.short() for _, t in analyze_plane(b).sites}
    named = [s for s in shorts_a ^ shorts_b if s in rep.reason]
    assert named


def test_affine_images_equivalent():
    rng = random.Random(9)
    for name in ("cusp", "lemniscate", "p_t3_t5t"):
        F = rational_corpus()[name]
        A, b = random_affine(rng)
        rep = compare_plane(PlaneCurve((F,)), PlaneCurve((affine_image(F, A, b),)))
        assert rep.verdict == EQUIVALENT, name


# space ---------------------------------------------------------------------------------


def test_space_twisted_cubic_linear_image():
    image = linear_image(TWISTED, [[1, 1, 0], [0, 1, 0], [-2, 0, 1]])
    rep = compare_space(TWISTED, image, 0)
    assert rep.verdict == EQUIVALENT
    assert "certificate" in rep.tables["a"] and "partition" in rep.tables["b"]


def test_space_singular_count_mismatch():
    rep = compare_space(TWISTED, T234, 0)
    assert rep.verdict == NOT_EQUIVALENT and "singular points" in rep.reason
    assert any("affine space only" in a for a in rep.assumptions)


def test_space_self():
    assert compare_space(T234, T234, 0).verdict == EQUIVALENT


@pytest.mark.parametrize("seed", range(3))
def test_space_verdict_seed_independent(seed):
    image = linear_image(T234, [[2, 0, 1], [0, 1, 0], [1, 0, 1]])
    assert compare_space(T234, image, seed).verdict == EQUIVALENT
    assert compare_space(image, TWISTED, seed).verdict == NOT_EQUIVALENT
