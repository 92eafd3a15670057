from itertools import permutations

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from colorvoronoi.census import (
    Side,
    census,
    diagram_vertex_count,
    refined_vertex_count,
    subset_condition_records,
    verify_identities,
)
from colorvoronoi.facets import facets_2d, facets_3d, lifted
from colorvoronoi.geometry import ColoredSiteSet, Location, Metric, classify_point
from colorvoronoi.sitefile import generate_sites
from oracles import census_tables, random_instance


def rows(a):
    return [[int(v) for v in row] for row in a]


def test_triangle(t3):
    t = census(t3)
    expected = [[0, 0, 0]] * 3 + [[1, 0, 0]]
    assert rows(t.v) == expected and rows(t.vbar) == expected
    assert diagram_vertex_count(t, 1, Side.MIN) == 1
    assert diagram_vertex_count(t, 3, Side.MIN) == 0
    assert refined_vertex_count(t, 1, Side.MIN) == 1
    assert refined_vertex_count(t, 2, Side.MIN) == 1


def test_quad(p4):
    t = census(p4)
    assert rows(t.v)[3] == [2, 2, 0, 0] and rows(t.vbar)[3] == [2, 2, 0, 0]
    totals = [diagram_vertex_count(t, k, Side.MIN) + diagram_vertex_count(t, k, Side.MAX) for k in (1, 2, 3)]
    assert totals == [4, 8, 4]


def test_mixed(m5):
    t = census(m5)
    assert rows(t.v) == [[0, 0, 0], [0, 0, 0], [2, 2, 0], [1, 0, 0]]
    assert rows(t.vbar) == rows(t.v)
    report = verify_identities(m5, t, facets_2d(m5), facets_3d(lifted(m5)))
    assert report.passed, report.format_table()
    names = {r.name for r in report.records}
    assert {"euclidean_total", "nearest_side_formula", "farthest_side_formula",
            "vertex_facet_lifting", "convex_3d_facets", "subset_v1", "subset_v2"} <= names


def test_triangle_report_rows(t3):
    t = census(t3)
    report = verify_identities(t3, t, facets_2d(t3), facets_3d(lifted(t3)))
    first = next(r for r in report.records if r.name == "euclidean_total" and r.params == (1,))
    assert (first.lhs, first.rhs) == (2, 2)
    lifting = next(r for r in report.records if r.name == "vertex_facet_lifting" and r.params == (3, 0))
    assert (lifting.lhs, lifting.rhs) == (2, 2)


def test_single_color_has_no_diagram_vertices():
    S = ColoredSiteSet.from_points([(0, 0), (4, 0), (0, 3), (5, 7)], [0, 0, 0, 0])
    t = census(S)
    assert diagram_vertex_count(t, 1, Side.MIN) == 0
    assert diagram_vertex_count(t, 1, Side.MAX) == 0
    # the 1-chromatic cell still counts Voronoi vertices of the refined diagram
    assert t.v[1, 0] == 2 and refined_vertex_count(t, 1, Side.MIN) == 2


def test_empty_rows_at_the_top(m5):
    t = census(m5)
    m = m5.m
    for table in (t.v, t.vbar):
        assert table[3, m - 1] == table[3, m - 2] == table[2, m - 1] == 0
    assert t.v.sum() == sum(e.side is Side.MIN for e in t.entries)


@st.composite
def instances(draw, max_n=10):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(3, max_n))
    m = draw(st.integers(1, n))
    return random_instance(np.random.default_rng(seed), n, m)


@settings(max_examples=40, deadline=None)
@given(instances())
def test_matches_brute_force(inst):
    pts, colors = inst
    t = census(ColoredSiteSet.from_points(pts, colors))
    v, vbar = census_tables(pts, colors)
    assert rows(t.v) == v and rows(t.vbar) == vbar


@settings(max_examples=20, deadline=None)
@given(instances(max_n=9), st.randoms(use_true_random=False))
def test_invariant_under_reordering_and_relabeling(inst, rnd):
    pts, colors = inst
    base = census(ColoredSiteSet.from_points(pts, colors))
    order = list(range(len(pts)))
    rnd.shuffle(order)
    relabel = list(range(max(colors) + 1))
    rnd.shuffle(relabel)
    other = census(ColoredSiteSet.from_points([pts[i] for i in order],
                                              [relabel[colors[i]] for i in order]))
    assert rows(other.v) == rows(base.v) and rows(other.vbar) == rows(base.vbar)


@settings(max_examples=20, deadline=None)
@given(instances(max_n=12))
def test_entries_audit(inst):
    pts, colors = inst
    S = ColoredSiteSet.from_points(pts, colors)
    for e in census(S).entries:
        assert all(classify_point(e.ball, S.positions[i]) is Location.ON_BOUNDARY for i in e.triple)
        defining = {S.colors[i] for i in e.triple}
        bad = Location.INSIDE if e.side is Side.MIN else Location.OUTSIDE
        hit = {S.colors[i] for i in range(S.n) if i not in e.triple
               and classify_point(e.ball, S.positions[i]) is bad}
        assert not hit & defining
        assert len(hit) == e.weight and len(defining) == e.chromaticity


@settings(max_examples=25, deadline=None)
@given(instances(max_n=14))
def test_all_euclidean_identities(inst):
    pts, colors = inst
    S = ColoredSiteSet.from_points(pts, colors)
    report = verify_identities(S, census(S), facets_2d(S), facets_3d(lifted(S)), subsets=5)
    assert report.passed, report.format_table()


def test_distinct_colors_total():
    for seed in range(5):
        S = generate_sites(10, 10, seed=seed, bbox=(0, 0, 200, 200))
        t = census(S)
        for k in range(1, 10):
            total = diagram_vertex_count(t, k, Side.MIN) + diagram_vertex_count(t, k, Side.MAX)
            assert total == 4 * k * (10 - k) - 20


def test_subset_conditions(m5):
    report = subset_condition_records(m5, subsets=10, seed=4)
    assert len(report.records) == 20 and report.passed


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.integers(5, 10))
def test_linf_census_matches_brute_force(seed, n):
    m = 1 + seed % n
    S = generate_sites(n, m, seed=seed, metric=Metric.LINF, bbox=(0, 0, 60, 60))
    t = census(S)
    pts = [(p.x, p.y) for p in S.positions]
    v, vbar = census_tables(pts, list(S.colors), metric="linf")
    assert rows(t.v) == v and rows(t.vbar) == vbar


def test_linf_bounds_records():
    S = generate_sites(12, 5, seed=1, metric=Metric.LINF, bbox=(0, 0, 300, 300))
    report = verify_identities(S, census(S))
    assert report.records and report.passed
    assert {r.relation for r in report.records} == {"<="}


def test_linf_census_classifies_every_square():
    from itertools import combinations

    from colorvoronoi.geometry import squares_through_three

    S = ColoredSiteSet.from_points([(0, 0), (5, 2), (2, 9), (8, 7), (11, 4)], range(5), Metric.LINF)
    t = census(S)
    expected = 0
    counts = set()
    for tri in combinations(range(S.n), 3):
        squares = squares_through_three(*(S.positions[i] for i in tri))
        counts.add(len(squares))
        for sq in squares:
            others = [classify_point(sq, S.positions[i]) for i in range(S.n) if i not in tri]
            expected += Location.INSIDE not in others
    # without shared coordinates a triple has zero or one square
    assert counts == {0, 1}
    assert int(t.v[3, 0]) == expected
