"""Tests for the DoF-region polytope algebra.

The Minkowski edge-merge implementation is checked against two independent
oracles: the convex hull of all pairwise vertex sums (via scipy) and
support-function additivity over a fan of directions.
"""

import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from dofsim import regions as reg
from dofsim.channel import QualityPair


def _sorted_vertices(region):
    return sorted(region.vertices)


def _random_region(rng, max_points=6):
    pts = rng.uniform(0.0, 1.5, size=(rng.integers(1, max_points + 1), 2))
    return reg.DofRegion(tuple(map(tuple, pts)))


# ---------------------------------------------------------------------------
# canonical building blocks


def test_canonical_no_csit_vertices():
    r = reg.canonical("no_csit")
    assert r.vertices == ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))


def test_canonical_alternating_vertices():
    r = reg.canonical("alternating")
    assert r.vertices == ((0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (0.5, 1.0), (0.0, 1.0))


def test_canonical_perfect_vertices():
    r = reg.canonical("perfect")
    assert r.vertices == ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))


def test_canonical_unknown_kind():
    with pytest.raises(ValueError):
        reg.canonical("best_effort")


def test_alternating_sum_face_point():
    # (0.75, 0.75) sits on the d1 + d2 = 1.5 face.
    assert reg.contains(reg.canonical("alternating"), (0.75, 0.75))
    assert not reg.contains(reg.canonical("alternating"), (0.76, 0.76))


def test_perfect_contains_corner():
    assert reg.contains(reg.canonical("perfect"), (1.0, 1.0))


# ---------------------------------------------------------------------------
# scaling


def test_scale_half_perfect_is_half_square():
    r = reg.scale(reg.canonical("perfect"), 0.5)
    assert r.vertices == ((0.0, 0.0), (0.5, 0.0), (0.5, 0.5), (0.0, 0.5))


def test_scale_zero_collapses_to_origin():
    r = reg.scale(reg.canonical("alternating"), 0.0)
    assert r.vertices == ((0.0, 0.0),)


def test_scale_one_is_identity():
    r = reg.canonical("no_csit")
    assert reg.scale(r, 1.0).vertices == r.vertices


def test_scale_negative_weight_rejected():
    with pytest.raises(ValueError):
        reg.scale(reg.canonical("perfect"), -0.1)


# ---------------------------------------------------------------------------
# canonical form of arbitrary inputs


def test_constructor_enforces_down_closure():
    r = reg.DofRegion(((0.3, 0.7), (0.9, 0.2)))
    for p in [(0.0, 0.0), (0.3, 0.0), (0.0, 0.7), (0.9, 0.0), (0.3, 0.7), (0.9, 0.2)]:
        assert reg.contains(r, p)


def test_constructor_rejects_negative_coordinates():
    with pytest.raises(ValueError):
        reg.DofRegion(((0.5, -0.2),))
    with pytest.raises(ValueError):
        reg.DofRegion(())


def test_degenerate_point_region():
    r = reg.DofRegion(((0.0, 0.0),))
    assert r.vertices == ((0.0, 0.0),)
    assert reg.contains(r, (0.0, 0.0))
    assert not reg.contains(r, (0.1, 0.0))


def test_degenerate_segment_region():
    r = reg.DofRegion(((0.5, 0.0),))
    assert r.vertices == ((0.0, 0.0), (0.5, 0.0))
    assert reg.contains(r, (0.25, 0.0))
    assert not reg.contains(r, (0.25, 0.01))
    assert not reg.contains(r, (0.51, 0.0))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 2), st.floats(0, 2)), min_size=1, max_size=8))
def test_canonical_form_invariants(points):
    r = reg.DofRegion(tuple(points))
    v = r.vertices
    assert v[0] == (0.0, 0.0), "canonical ring starts at the origin"
    assert len(set(v)) == len(v), "no duplicate vertices"
    assert all(x >= 0 and y >= 0 for x, y in v)
    if len(v) >= 3:
        # Strictly convex counterclockwise ring: every turn is a left turn.
        n = len(v)
        for i in range(n):
            o, a, b = v[i], v[(i + 1) % n], v[(i + 2) % n]
            cross = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
            assert cross > 0, f"vertices {o}, {a}, {b} are not a left turn"


# ---------------------------------------------------------------------------
# Minkowski sums


def test_minkowski_origin_is_additive_identity():
    tri = reg.canonical("no_csit")
    origin = reg.DofRegion(((0.0, 0.0),))
    assert reg.minkowski_sum(tri, origin).vertices == tri.vertices
    assert reg.minkowski_sum(origin, tri).vertices == tri.vertices


def test_minkowski_support_example():
    s = reg.minkowski_sum(
        reg.scale(reg.canonical("perfect"), 0.5),
        reg.scale(reg.canonical("no_csit"), 0.2),
    )
    d = (1 / math.sqrt(2), 1 / math.sqrt(2))
    assert reg.support(s, d) == pytest.approx((0.5 + 0.5 + 0.2) / math.sqrt(2), abs=1e-12)


def test_weighted_sum_face_value():
    s = reg.minkowski_sum(
        reg.minkowski_sum(
            reg.scale(reg.canonical("perfect"), 0.5),
            reg.scale(reg.canonical("alternating"), 0.3),
        ),
        reg.scale(reg.canonical("no_csit"), 0.2),
    )
    assert reg.support(s, (1.0, 1.0)) == pytest.approx(0.5 * 2 + 0.3 * 1.5 + 0.2 * 1, abs=1e-12)


def test_minkowski_matches_pairwise_hull_oracle():
    """Edge merge == scipy convex hull of all pairwise vertex sums."""
    rng = np.random.default_rng(1905)
    for _ in range(60):
        r1, r2 = _random_region(rng), _random_region(rng)
        result = reg.minkowski_sum(r1, r2)
        sums = np.array([
            (x1 + x2, y1 + y2) for x1, y1 in r1.vertices for x2, y2 in r2.vertices
        ])
        if len(sums) >= 3 and ConvexHull(sums, qhull_options="QJ Pp").volume > 1e-9:
            hull = ConvexHull(sums)
            oracle = reg.DofRegion(tuple(map(tuple, sums[hull.vertices])))
        else:  # degenerate stack (points / segments): hull == input set
            oracle = reg.DofRegion(tuple(map(tuple, sums)))
        assert reg.region_equal(result, oracle, 1e-9), (
            f"edge merge disagrees with hull oracle for {r1.vertices} + {r2.vertices}"
        )


def test_minkowski_support_additivity_360():
    rng = np.random.default_rng(42)
    angles = np.linspace(0.0, 2.0 * math.pi, 360, endpoint=False)
    for _ in range(20):
        r1, r2 = _random_region(rng), _random_region(rng)
        s = reg.minkowski_sum(r1, r2)
        for t in angles:
            d = (math.cos(t), math.sin(t))
            assert reg.support(s, d) == pytest.approx(
                reg.support(r1, d) + reg.support(r2, d), abs=1e-9
            )


def test_scaling_linearity():
    rng = np.random.default_rng(7)
    for kind in ("no_csit", "alternating", "perfect"):
        r = reg.canonical(kind)
        for _ in range(10):
            w1, w2 = rng.uniform(0, 1, size=2)
            lhs = reg.scale(r, w1 + w2)
            rhs = reg.minkowski_sum(reg.scale(r, w1), reg.scale(r, w2))
            assert reg.region_equal(lhs, rhs, 1e-9)


# ---------------------------------------------------------------------------
# composition and the converse bound


def test_compose_unmatched_reference_point():
    got = _sorted_vertices(reg.compose_unmatched(QualityPair(0.8, 0.5)))
    want = sorted([(0.0, 0.0), (1.0, 0.0), (1.0, 0.65), (0.65, 1.0), (0.0, 1.0)])
    assert len(got) == len(want)
    for (gx, gy), (wx, wy) in zip(got, want):
        assert gx == pytest.approx(wx, abs=1e-9)
        assert gy == pytest.approx(wy, abs=1e-9)


def test_compose_unmatched_perfect_corner_is_square():
    assert reg.region_equal(
        reg.compose_unmatched(QualityPair(1.0, 1.0)), reg.canonical("perfect"), 1e-12
    )


def test_compose_matched_zero_corner_is_triangle():
    assert reg.region_equal(
        reg.compose_matched(QualityPair(0.0, 0.0)), reg.canonical("no_csit"), 1e-12
    )


def test_components_unmatched_weights_and_order():
    parts = reg.components_unmatched(QualityPair(0.8, 0.5))
    assert [(name, pytest.approx(w)) for name, w, _ in parts] == [
        ("perfect", pytest.approx(0.5)),
        ("alternating", pytest.approx(0.3)),
        ("no_csit", pytest.approx(0.2)),
    ]


def test_components_matched_weights():
    parts = reg.components_matched(QualityPair(0.8, 0.5))
    assert [(n, pytest.approx(w)) for n, w, _ in parts] == [
        ("perfect", pytest.approx(0.65)),
        ("no_csit", pytest.approx(0.35)),
    ]


def test_outer_bound_reference_point():
    r = reg.outer_bound(QualityPair(0.8, 0.5))
    assert len(r.vertices) == 5
    assert reg.support(r, (1.0, 1.0)) == pytest.approx(1.65, abs=1e-12)
    assert reg.contains(r, (1.0, 0.65))
    assert not reg.contains(r, (1.0, 0.66))


def test_outer_bound_corners():
    assert reg.region_equal(reg.outer_bound(QualityPair(1.0, 1.0)),
                            reg.canonical("perfect"), 1e-12)
    assert reg.region_equal(reg.outer_bound(QualityPair(0.0, 0.0)),
                            reg.canonical("no_csit"), 1e-12)


@settings(max_examples=150, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1))
def test_composition_equals_outer_bound(x, y):
    q = QualityPair(max(x, y), min(x, y))
    assert reg.region_equal(reg.compose_unmatched(q), reg.outer_bound(q), 1e-9)
    assert reg.region_equal(reg.compose_matched(q), reg.outer_bound(q), 1e-9)


def test_composition_monotone_in_quality():
    rng = np.random.default_rng(99)
    for _ in range(50):
        a, b, da, db = rng.uniform(0, 1, size=4)
        lo = QualityPair(max(a, b), min(a, b))
        hi = QualityPair(min(1.0, lo.beta + db), min(min(1.0, lo.beta + db), lo.alpha + da))
        small, big = reg.compose_unmatched(lo), reg.compose_unmatched(hi)
        assert all(reg.contains(big, p) for p in small.vertices)


def test_support_trivial():
    assert reg.support(reg.canonical("no_csit"), (1.0, 0.0)) == 1.0


def test_region_equal_respects_tolerance():
    r = reg.outer_bound(QualityPair(0.8, 0.5))
    nudged = reg.DofRegion(tuple((x + 1e-12, y) for x, y in r.vertices))
    off = reg.DofRegion(tuple((x * (1 + 1e-6), y) for x, y in r.vertices))
    assert reg.region_equal(r, nudged, 1e-9)
    assert not reg.region_equal(r, off, 1e-9)


def test_thousand_random_compositions_under_five_seconds():
    rng = np.random.default_rng(20250825)
    t0 = time.perf_counter()
    for _ in range(1000):
        x, y = rng.uniform(0, 1, size=2)
        q = QualityPair(max(x, y), min(x, y))
        assert reg.region_equal(reg.compose_unmatched(q), reg.outer_bound(q), 1e-9)
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0, f"1000 compositions took {elapsed:.2f}s"
