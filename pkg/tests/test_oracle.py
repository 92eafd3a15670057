from dataclasses import replace
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from colorvoronoi.builder import build_sequences, nearest_voronoi_clipped
from colorvoronoi.census import Side
from colorvoronoi.geometry import ColoredSiteSet, Metric, point
from colorvoronoi.oracle import face_samples, k_set, profile, validate_diagram
from colorvoronoi.sitefile import generate_sites
from conftest import MIXED
from oracles import random_instance


def test_triangle_profile_at_origin(t3):
    p = profile((0, 0), t3)
    assert p.nearest == (0, 16, 9)
    assert p.nearest_site == (0, 1, 2)
    assert sorted(range(3), key=lambda c: p.nearest[c]) == [0, 2, 1]


def test_single_color_profile():
    S = ColoredSiteSet.from_points([(0, 0), (1, 2)], [0, 0])
    p = profile((1, 0), S)
    assert p.m == 1 and p.nearest == (1,) and p.farthest == (4,)


def test_mixed_profile_at_a_site(m5):
    p = profile((3, 6), m5)
    assert p.nearest[1] == 0 and p.nearest_site[1] == 2


def test_k_set_examples(t3):
    got = k_set((0, 0), t3, 2, Side.MIN)
    assert got.colors == {0, 2} and got.kth_color == 2 and got.witness == 2
    assert k_set((2, Fraction(3, 2)), t3, 1).on_boundary


def test_linf_profile_uses_chebyshev_distance():
    S = ColoredSiteSet.from_points([(0, 0), (5, 2)], [0, 1], Metric.LINF)
    assert profile((1, 1), S).nearest == (1, 4)


def full_sort(x, S, k, side):
    """Second implementation: sort every color by its extreme distance, squared."""
    best = {}
    for s, c in zip(S.positions, S.colors):
        d = (s.x - x[0]) ** 2 + (s.y - x[1]) ** 2
        if c not in best:
            best[c] = d
        elif side is Side.MIN:
            best[c] = min(best[c], d)
        else:
            best[c] = max(best[c], d)
    ranked = sorted(best.items(), key=lambda kv: kv[1], reverse=side is Side.MAX)
    if k < len(ranked) and ranked[k - 1][1] == ranked[k][1]:
        return None
    return frozenset(c for c, _ in ranked[:k])


@settings(max_examples=60, deadline=None)
@given(st.fractions(-10, 15, max_denominator=50), st.fractions(-10, 15, max_denominator=50),
       st.integers(1, 3), st.sampled_from([Side.MIN, Side.MAX]))
def test_k_set_agrees_with_full_sort(x, y, k, side):
    S = ColoredSiteSet.from_points(*MIXED)
    got = k_set((x, y), S, k, side)
    assert got.colors == full_sort((x, y), S, k, side)


@st.composite
def instance_and_point(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(3, 10))
    m = draw(st.integers(1, n))
    pts, colors = random_instance(np.random.default_rng(seed), n, m)
    x = (draw(st.fractions(-5, 65, max_denominator=20)), draw(st.fractions(-5, 65, max_denominator=20)))
    return ColoredSiteSet.from_points(pts, colors), x


@settings(max_examples=60, deadline=None)
@given(instance_and_point())
def test_profile_invariants(case):
    S, x = case
    p = profile(x, S)
    for c in range(S.m):
        assert p.nearest[c] <= p.farthest[c]
    for side in (Side.MIN, Side.MAX):
        assert k_set(x, S, S.m, side).colors == frozenset(range(S.m))
    order = list(range(S.n))[::-1]
    R = ColoredSiteSet.from_points([S.positions[i] for i in order], [S.colors[i] for i in order])
    q = profile(x, R)
    assert q.nearest == p.nearest and q.farthest == p.farthest


def test_equal_distances_only_for_singleton_colors():
    rng = np.random.default_rng(8)
    pts, colors = random_instance(rng, 9, 4)
    S = ColoredSiteSet.from_points(pts, colors)
    sizes = [len(c) for c in S.color_classes]
    for _ in range(30):
        x = (Fraction(int(rng.integers(0, 600)), 7), Fraction(int(rng.integers(0, 600)), 11))
        p = profile(x, S)
        for c in range(S.m):
            assert (p.nearest[c] == p.farthest[c]) == (sizes[c] == 1)


@settings(max_examples=30, deadline=None)
@given(instance_and_point())
def test_nearest_color_at_a_site(case):
    S, _ = case
    for s in S.sites:
        assert k_set(s.position, S, 1, Side.MIN).colors == {s.color}


def test_samples_lie_in_their_face(t3):
    d = nearest_voronoi_clipped(t3)
    for f in range(1, len(d.faces)):
        samples = face_samples(d, f, 8)
        assert len(samples) == 8 and len(set(samples)) == 8
        site = d.faces[f].label.associated_site
        for x in samples:
            assert k_set(x, t3, 1).witness == site


def test_triangle_order_one_validates(t3):
    d = nearest_voronoi_clipped(t3)
    report = validate_diagram(d, t3, 1, Side.MIN)
    assert report.ok and report.faces == 3 and report.samples == 24


def test_quad_all_orders_validate(p4):
    for seq in build_sequences(p4):
        for o in seq.orders:
            for d in (o.refined, o.coarse):
                assert validate_diagram(d, p4, o.order, seq.side).ok


def test_swapped_labels_are_caught():
    S = generate_sites(9, 4, seed=3, bbox=(0, 0, 100, 100))
    mins, _ = build_sequences(S, 2)
    d = mins.coarse(2)
    faces = [f for f in range(1, len(d.faces))]
    a, b = next((f, g) for f in faces for g in faces if d.faces[f].label != d.faces[g].label)
    d.faces[a], d.faces[b] = (replace(d.faces[a], label=d.faces[b].label),
                              replace(d.faces[b], label=d.faces[a].label))
    report = validate_diagram(d, S, 2, Side.MIN)
    assert not report.ok and len(report.mismatches) >= 1
    assert all(isinstance(m.sample, tuple) for m in report.mismatches)


def test_point_helper_exact():
    assert point("1/3", 2) == (Fraction(1, 3), Fraction(2))
