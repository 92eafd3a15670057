from fractions import Fraction

import pytest

import colorvoronoi.builder as builder
from colorvoronoi.builder import (
    advance_maximal,
    advance_minimal,
    boundary_sites,
    build_sequences,
    choose_clip_box,
    coarsen,
    farthest_voronoi_clipped,
    nearest_voronoi_clipped,
)
from colorvoronoi.census import Side, census, diagram_vertex_count, refined_vertex_count
from colorvoronoi.crosscheck import builder_records, total_records
from colorvoronoi.errors import ColorLeak, CorrespondenceFailure, MetricMismatch
from colorvoronoi.geometry import ColoredSiteSet, Metric
from colorvoronoi.sitefile import generate_sites


def refined_cells(k):
    return {(3, k - 1), (3, k - 2), (3, k - 3), (2, k - 1), (2, k - 2), (1, k - 1)}


def coarse_cells(k):
    return {(3, k - 1), (3, k - 2), (2, k - 1)}


def pairs(d, **flags):
    out = set()
    for s in d.segments[:d.n_inner]:
        if all(getattr(s, name) == value for name, value in flags.items()):
            out.add(frozenset(s.sites))
    return out


def test_clip_box_encloses_census(t3, p4):
    for S in (t3, p4):
        box = choose_clip_box(S)
        for e in census(S).entries:
            assert box.contains_strictly(e.ball.center)
        assert all(box.contains_strictly(p) for p in S.positions)
    box = choose_clip_box(t3, census(t3))
    assert box.xmin < 2 - Fraction(5, 2) and box.xmax > 2 + Fraction(5, 2)


def test_clip_box_single_color_has_margin():
    S = ColoredSiteSet.from_points([(0, 0), (3, 1), (1, 4)], [0, 0, 0])
    box = choose_clip_box(S, census(S))
    assert box.xmin <= -1 and box.ymin <= -1 and box.xmax >= 4 and box.ymax >= 5


def test_nearest_triangle(t3):
    d = nearest_voronoi_clipped(t3)
    assert d.n_faces == 3
    assert d.vertex_points() == {(2, Fraction(3, 2))}
    box_hits = [v for v in range(d.n_vertices) if d.is_box_vertex(v) and d.keys[v][0] != 2]
    assert len(box_hits) == 3


def test_farthest_triangle(t3):
    d = farthest_voronoi_clipped(t3)
    assert d.n_faces == 3
    assert d.vertex_points() == {(2, Fraction(3, 2))}


def test_single_site():
    S = ColoredSiteSet.from_points([(3, 3)], [0])
    for d in (nearest_voronoi_clipped(S), farthest_voronoi_clipped(S)):
        assert d.n_faces == 1 and d.n_inner == 0
        assert d.faces[1].label.associated_site == 0


def test_two_sites_flip():
    S = ColoredSiteSet.from_points([(0, 0), (4, 1)], [0, 1])
    near = nearest_voronoi_clipped(S)
    far = farthest_voronoi_clipped(S)
    left_near = near.faces[near.face_of[0]].label.associated_site
    left_far = far.faces[far.face_of[0]].label.associated_site
    assert near.n_faces == far.n_faces == 2
    assert left_near != left_far


def test_interior_point_owns_no_farthest_face():
    S = ColoredSiteSet.from_points([(0, 0), (10, 1), (4, 9), (5, 3)], range(4))
    d = farthest_voronoi_clipped(S)
    owners = {d.faces[f].label.associated_site for f in range(1, len(d.faces))}
    assert d.n_faces == 3 and owners == {0, 1, 2}


def test_coarsen_removes_one_chromatic_edges():
    S = generate_sites(9, 4, seed=3, bbox=(0, 0, 100, 100))
    refined = nearest_voronoi_clipped(S)
    coarse = coarsen(refined)
    mono = sum(1 for s in refined.segments[:refined.n_inner] if s.chromaticity == 1)
    assert mono > 0
    assert pairs(coarse) == pairs(refined) - pairs(refined, chromaticity=1)
    for f in range(1, len(coarse.faces)):
        assert coarse.faces[f].label.associated_site is None


def test_coarsen_is_identity_with_distinct_colors(p4):
    refined = nearest_voronoi_clipped(p4)
    coarse = coarsen(refined)
    assert coarse.n_inner == refined.n_inner and coarse.n_faces == refined.n_faces
    assert coarse.vertex_points() == refined.vertex_points()


def test_boundary_sites_triangle(t3):
    coarse = coarsen(nearest_voronoi_clipped(t3))
    for f in range(1, len(coarse.faces)):
        H = coarse.faces[f].label.colors
        S_f = boundary_sites(coarse, f)
        assert S_f == {0, 1, 2} - H
        assert not {t3.colors[s] for s in S_f} & H


def test_boundary_sites_of_a_box_only_face():
    S = ColoredSiteSet.from_points([(0, 0), (3, 1), (1, 4)], [0, 0, 0])
    coarse = coarsen(nearest_voronoi_clipped(S))
    assert coarse.n_faces == 1 and boundary_sites(coarse, 1) == set()


def test_advance_triangle(t3):
    mins, maxs = build_sequences(t3, 3)
    assert [o.stats.coarse_vertices for o in mins.orders] == [1, 1, 0]
    assert [o.stats.coarse_vertices for o in maxs.orders] == [1, 1, 0]
    assert mins.orders[1].stats.refined_vertices == 1
    for seq in (mins, maxs):
        top = seq.coarse(3)
        assert top.n_faces == 1 and top.faces[1].label.colors == frozenset({0, 1, 2})


def test_advance_by_hand_matches_sequence(m5):
    mins, maxs = build_sequences(m5)
    refined2 = advance_minimal(mins.coarse(1))
    assert refined2.vertex_points() == mins.refined(2).vertex_points()
    far2 = advance_maximal(maxs.coarse(1), mins.refined(2))
    assert far2.vertex_points() == maxs.refined(2).vertex_points()
    t = census(m5)
    for k in (1, 2, 3):
        assert mins.orders[k - 1].stats.refined_vertices == refined_vertex_count(t, k, Side.MIN)
        assert maxs.orders[k - 1].stats.coarse_vertices == diagram_vertex_count(t, k, Side.MAX)


def test_distinct_colors_new_vertices_follow_census():
    S = generate_sites(8, 8, seed=4, bbox=(0, 0, 200, 200))
    t = census(S)
    mins, maxs = build_sequences(S)
    for i in range(1, 8):
        assert mins.orders[i - 1].stats.new_vertices[3] == t.v[3, i - 1]
        assert maxs.orders[i - 1].stats.new_vertices[3] == t.vbar[3, i - 1]


@pytest.mark.parametrize("seed", range(4))
def test_vertex_sets_equal_census_centers(seed):
    S = generate_sites(11, 4, seed=seed, bbox=(0, 0, 150, 150))
    t = census(S)
    for seq in build_sequences(S):
        for o in seq.orders:
            k = o.order
            assert o.refined.vertex_points() == set(t.centers(seq.side, refined_cells(k)))
            assert o.coarse.vertex_points() == set(t.centers(seq.side, coarse_cells(k)))


@pytest.mark.parametrize("seed", range(3))
def test_coarse_edges_are_new_then_old(seed):
    S = generate_sites(10, 5, seed=seed, bbox=(0, 0, 150, 150))
    for seq in build_sequences(S):
        for k in range(1, S.m):
            coarse = seq.coarse(k)
            assert all(s.is_new and s.chromaticity == 2 for s in coarse.segments[:coarse.n_inner])
            assert pairs(coarse) <= pairs(seq.refined(k), is_new=True, chromaticity=2)
            assert pairs(coarse) == pairs(seq.refined(k + 1), is_new=False)


def test_structure_after_every_step():
    S = generate_sites(14, 6, seed=9, bbox=(0, 0, 200, 200))
    for seq in build_sequences(S):
        for o in seq.orders:
            for d in (o.refined, o.coarse):
                d.check()
                assert d.euler_characteristic() == 1 + d.components()
                assert all(seq.clip_box.contains_strictly(p) for p in d.vertex_points())


def test_extra_sites_exceed_boundary_sites():
    S = generate_sites(9, 4, seed=0, bbox=(0, 0, 100, 100))
    mins, maxs = build_sequences(S)
    record = []
    advance_maximal(maxs.coarse(1), mins.refined(2), record)
    assert any(not plus <= sf for _, sf, plus in record)
    assert maxs.orders[1].stats.faces_with_extra_sites > 0


def test_extra_sites_are_needed(monkeypatch):
    S = generate_sites(9, 4, seed=0, bbox=(0, 0, 100, 100))
    t = census(S)
    monkeypatch.setattr(builder, "extra_sites", lambda *args, **kw: set())
    try:
        _, maxs = build_sequences(S)
    except Exception:
        return
    got = [o.stats.coarse_vertices for o in maxs.orders]
    assert got != [diagram_vertex_count(t, k, Side.MAX) for k in range(1, 5)]


def test_bounded_faces_take_no_extra_sites():
    S = generate_sites(16, 8, seed=1, bbox=(0, 0, 200, 200))
    mins, maxs = build_sequences(S, 4)
    for k in range(1, 4):
        coarse = maxs.coarse(k)
        record = []
        advance_maximal(coarse, mins.refined(k + 1), record)
        for f, _, plus in record:
            touches_box = any(coarse.is_box(h) for cyc in coarse.face_cycles(f) for h in cyc)
            if not touches_box:
                assert plus == set()


def test_mismatched_nearest_diagram_fails_correspondence():
    S = generate_sites(9, 4, seed=0, bbox=(0, 0, 100, 100))
    mins, maxs = build_sequences(S)
    # the nearest side two orders ahead lacks the delimiting pairs
    with pytest.raises(CorrespondenceFailure):
        advance_maximal(maxs.coarse(1), mins.refined(3))
    # the nearest side of the same order hands over sites whose colors are already taken
    with pytest.raises(ColorLeak):
        advance_maximal(maxs.coarse(2), mins.refined(2))


def test_linf_is_rejected():
    S = generate_sites(6, 3, seed=0, metric=Metric.LINF, bbox=(0, 0, 50, 50))
    with pytest.raises(MetricMismatch):
        build_sequences(S)


def test_distinct_colors_totals():
    S = generate_sites(12, 12, seed=21, bbox=(0, 0, 300, 300))
    mins, maxs = build_sequences(S, 11)
    for k in range(1, 12):
        total = mins.orders[k - 1].stats.coarse_vertices + maxs.orders[k - 1].stats.coarse_vertices
        assert total == 4 * k * (12 - k) - 24
    assert total_records(S, (mins, maxs)).passed


def test_forty_sites_all_records_pass():
    S = generate_sites(40, 10, seed=1)
    t = census(S)
    sequences = build_sequences(S, 9)
    report = builder_records(S, t, sequences)
    report.extend(total_records(S, sequences))
    assert report.passed, report.format_table()
