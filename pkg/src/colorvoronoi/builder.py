"""Iterative construction of the nearest-side and farthest-side color diagrams of every order.

Order 1 is the ordinary nearest (farthest) site diagram.  Order ``i + 1`` is
built face by face from the coarse order-``i`` diagram: inside a face ``f``
the refined diagram coincides with the Voronoi diagram of the sites that
define the boundary of ``f`` (on the farthest side, together with extra sites
read off the nearest side at infinity).  Instead of clipping whole Voronoi
cells against ``f``, the edges of that Voronoi diagram are traced from the
points where they enter ``f``: boundary vertices where the outer site
changes, and box crossings inside ``f``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Optional

import numpy as np

from .census import CensusTable, Side
from .delaunay import lifted_hull
from .dcel import (
    TRIPLE,
    ClipBox,
    FaceLabel,
    Frame,
    PlanarSubdivision,
    Segment,
    assemble,
    clip_box_around,
    in_wedge,
)
from .errors import (
    ColorLeak,
    CorrespondenceFailure,
    GeometryMismatch,
    InconsistentLabels,
    MetricMismatch,
)
from .geometry import ColoredSiteSet, Metric, translated_int_array, triple_centers


# clip box ------------------------------------------------------------------


def _corner_safe(S: ColoredSiteSet, box: ClipBox) -> bool:
    for cx, cy in box.corners():
        radii = [(p.x - cx) ** 2 + (p.y - cy) ** 2 for p in S.positions]
        if len(set(radii)) != len(radii):
            return False
    return True


def choose_clip_box(S: ColoredSiteSet, census: Optional[CensusTable] = None) -> ClipBox:
    """Integer box strictly containing every site and every possible diagram vertex.

    With a census the vertex candidates are its ball centers and the margin
    is the largest radius; otherwise every circumcenter of a site triple is
    enclosed, which covers all orders on both sides at once.
    """
    pts = [(float(p.x), float(p.y)) for p in S.positions]
    margin = 1.0
    if census is not None and census.entries:
        pts += [(float(e.ball.center.x), float(e.ball.center.y)) for e in census.entries]
        r2 = max(e.ball.radius_squared for e in census.entries)
        margin = isqrt(-(-r2.numerator // r2.denominator)) + 2
    elif S.n >= 3:
        L = S.scale
        coords = S.integer_coords
        P = translated_int_array(coords, 3, 16)
        if P is None:
            P = np.array(coords, dtype=object)
            P = P - P.min(axis=0)
        shift = (min(c[0] for c in coords), min(c[1] for c in coords))
        for i in range(S.n - 2):
            _, _, D, X, Y = triple_centers(P, i)
            ok = D != 0
            if not np.any(ok):
                continue
            cx = (X[ok] / D[ok]).astype(float)
            cy = (Y[ok] / D[ok]).astype(float)
            pts.append(((cx.min() + shift[0]) / L, (cy.min() + shift[1]) / L))
            pts.append(((cx.max() + shift[0]) / L, (cy.max() + shift[1]) / L))
    span = max(max(abs(x), abs(y)) for x, y in pts)
    margin = max(margin, 1.0 + 1e-6 * span)
    box = clip_box_around(pts, margin)
    step = 0
    while not _corner_safe(S, box):
        # alternate axes so that no bisector can keep a corner on it
        x0, y0, x1, y1 = box.as_tuple()
        box = ClipBox(x0 - 1, y0, x1 + 1, y1) if step % 2 == 0 else ClipBox(x0, y0 - 1, x1, y1 + 1)
        step += 1
    return box


# Voronoi diagrams of site subsets -------------------------------------------


class _Bisectors:
    """Edges of the nearest or farthest Voronoi diagram of ``ids`` as intervals on bisectors.

    ``edges[(p, q)] = [lo, hi]`` where each end is ``(tau, vertex key)`` or
    ``None`` for an end at infinity; ``around[key]`` lists the three pairs
    meeting at a Voronoi vertex.
    """

    def __init__(self, frame: Frame, ids, farthest: bool):
        self.edges: dict = {}
        self.around: dict = {}
        ids = sorted(ids)
        if len(ids) == 2:
            self.edges[(ids[0], ids[1])] = [None, None]
        if len(ids) < 3:
            return
        coords = frame.coords
        near, far = lifted_hull([coords[i] for i in ids])
        for a, b, c in far if farthest else near:
            tri = (ids[a], ids[b], ids[c])
            key = (TRIPLE, *sorted(tri))
            pairs = []
            for u, v in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                pair = (u, v) if u < v else (v, u)
                (ux, uy), (vx, vy) = coords[u], coords[v]
                dx, dy, _, _ = frame.bisector(*pair)
                # nearest edges leave to the right of u -> v, farthest ones to the left
                dot = (vy - uy) * dx - (vx - ux) * dy
                slot = 0 if (dot > 0) != farthest else 1
                ends = self.edges.setdefault(pair, [None, None])
                if ends[slot] is not None:
                    raise GeometryMismatch(f"bisector {pair} has two ends on one side")
                ends[slot] = (frame.tau(key, pair), key)
                pairs.append(pair)
            self.around[key] = pairs


# face-local tracing ----------------------------------------------------------


def _less(a, b) -> bool:
    return a[0] * b[1] < b[0] * a[1]


@dataclass
class _FaceBoundary:
    sites: set
    events: list            # (pair, vertex key, sign along the bisector)
    runs: Optional[list]    # box runs as (start position, end position); None = whole box
    delimiters: list        # (arriving half-edge, leaving half-edge) around each box run
    full_cycles: int = 0


def _face_boundary(D: PlanarSubdivision, f: int, H: frozenset) -> _FaceBoundary:
    frame = D.frame
    colors = frame.colors
    sites, events, runs, delimiters = set(), [], [], []
    full = 0
    for cyc in D.face_cycles(f):
        flags = [D.is_box(h) for h in cyc]
        if all(flags):
            full += 1
            continue
        n = len(cyc)
        for idx, h in enumerate(cyc):
            if flags[idx]:
                if not flags[idx - 1]:
                    j = idx
                    while flags[j % n]:
                        j += 1
                    last = cyc[(j - 1) % n]
                    runs.append(
                        (frame.box_position(D.keys[D.origin[h]]),
                         frame.box_position(D.keys[D.dest(last)]))
                    )
                    delimiters.append((cyc[idx - 1], cyc[j % n]))
                continue
            outer = D.sites(h)[1]
            if colors[outer] in H:
                raise ColorLeak(f"boundary site {outer} has color {colors[outer]} inside the face's set")
            sites.add(outer)
            prev = cyc[idx - 1]
            if flags[idx - 1]:
                continue
            p = D.sites(prev)[1]
            if p == outer:
                continue
            pair = (p, outer) if p < outer else (outer, p)
            w = D.keys[D.origin[h]]
            if not frame.on_bisector(w, pair):
                raise GeometryMismatch(f"vertex {w} is not on the bisector of {pair}")
            dx, dy, _, _ = frame.bisector(*pair)
            u = D.direction(h)
            rx, ry = D.direction(prev)
            v = (-rx, -ry)
            plus = in_wedge(u, v, (dx, dy))
            minus = in_wedge(u, v, (-dx, -dy))
            if plus == minus:
                raise GeometryMismatch(f"ambiguous edge direction at vertex {w}")
            events.append((pair, w, 1 if plus else -1))
    return _FaceBoundary(sites, events, None if full and not runs else runs, delimiters, full)


def _in_runs(pos, runs) -> bool:
    if runs is None:
        return True
    for a, b in runs:
        if a < b:
            if a < pos < b:
                return True
        elif pos > a or pos < b:
            return True
    return False


def _trace_face(frame: Frame, bis: _Bisectors, boundary: _FaceBoundary, farthest: bool, labels) -> list[Segment]:
    """Pieces of the Voronoi edges of ``bis`` that lie inside one face."""
    colors = frame.colors
    queue = []
    by_pair = defaultdict(list)
    for pair, w, s in boundary.events:
        t = frame.tau(w, pair)
        by_pair[pair].append((t, w))
        queue.append((pair, w, t, s))
    inside = frame.inside
    for pair, (lo, hi) in bis.edges.items():
        if lo is not None and hi is not None and inside(lo[1]) and inside(hi[1]):
            continue
        crossing = frame.line_box(*pair)
        if crossing is None:
            continue
        for t, key, s in ((crossing[0], crossing[1], 1), (crossing[2], crossing[3], -1)):
            if lo is not None and not _less(lo[0], t):
                continue
            if hi is not None and not _less(t, hi[0]):
                continue
            if _in_runs(frame.box_position(key), boundary.runs):
                queue.append((pair, key, t, s))

    pieces = []
    arrived = set()
    emitted = set()
    visited = set()
    while queue:
        pair, start, t0, s = queue.pop()
        if (pair, start) in arrived:
            continue
        lo, hi = bis.edges[pair]
        end = hi if s > 0 else lo
        best = None
        vertex_end = False
        if end is not None and inside(end[1]):
            best = end
            vertex_end = True
        for tw, kw in by_pair.get(pair, ()):
            if kw == start:
                continue
            ahead = _less(t0, tw) if s > 0 else _less(tw, t0)
            if not ahead:
                continue
            if best is None or (_less(tw, best[0]) if s > 0 else _less(best[0], tw)):
                best = (tw, kw)
                vertex_end = False
        if not vertex_end:
            crossing = frame.line_box(*pair)
            if crossing is None:
                raise GeometryMismatch(f"bisector {pair} misses the box")
            exit_ = (crossing[2], crossing[3]) if s > 0 else (crossing[0], crossing[1])
            if best is None or (_less(exit_[0], best[0]) if s > 0 else _less(best[0], exit_[0])):
                best = exit_
        stop = best[1]
        arrived.add((pair, stop))
        ident = (pair, start, stop) if start < stop else (pair, stop, start)
        if ident not in emitted:
            emitted.add(ident)
            p, q = pair
            left, right = (p, q) if (s > 0) != farthest else (q, p)
            dx, dy, _, _ = frame.bisector(p, q)
            pieces.append(Segment(
                start, stop, (s * dx, s * dy), (left, right),
                1 if colors[p] == colors[q] else 2, True, labels(left), labels(right),
            ))
        if vertex_end and stop not in visited:
            visited.add(stop)
            for other in bis.around[stop]:
                if other == pair:
                    continue
                lo2, hi2 = bis.edges[other]
                if lo2 is not None and lo2[1] == stop:
                    queue.append((other, stop, lo2[0], 1))
                else:
                    queue.append((other, stop, hi2[0], -1))
    return pieces


def _labeler(H: frozenset, colors):
    cache = {}

    def label(site):
        lab = cache.get(site)
        if lab is None:
            lab = cache[site] = FaceLabel(H | {colors[site]}, site)
        return lab

    return label


# order one ---------------------------------------------------------------------


def _order_one(frame: Frame, ids, farthest: bool) -> PlanarSubdivision:
    ids = sorted(ids)
    bis = _Bisectors(frame, ids, farthest)
    labels = _labeler(frozenset(), frame.colors)
    pieces = _trace_face(frame, bis, _FaceBoundary(set(), [], None, []), farthest, labels)
    default = labels(ids[0]) if len(ids) == 1 else None
    d = assemble(frame, pieces, default)
    d.check()
    return d


def _frame_for(S: ColoredSiteSet, box) -> Frame:
    if S.metric is not Metric.EUCLIDEAN:
        raise MetricMismatch("the diagram builder supports the Euclidean metric only")
    return Frame(S, box if box is not None else choose_clip_box(S))


def nearest_voronoi_clipped(S: ColoredSiteSet, box: Optional[ClipBox] = None, ids=None) -> PlanarSubdivision:
    """Nearest-site Voronoi diagram of ``ids`` (default: all sites) clipped to ``box``."""
    frame = _frame_for(S, box)
    return _order_one(frame, range(S.n) if ids is None else ids, False)


def farthest_voronoi_clipped(S: ColoredSiteSet, box: Optional[ClipBox] = None, ids=None) -> PlanarSubdivision:
    """Farthest-site Voronoi diagram of ``ids`` (default: all sites) clipped to ``box``."""
    frame = _frame_for(S, box)
    return _order_one(frame, range(S.n) if ids is None else ids, True)


# coarsening ------------------------------------------------------------------------


def coarsen(refined: PlanarSubdivision) -> PlanarSubdivision:
    """Drop edges with the same color set on both sides and merge the faces they separated."""
    frame = refined.frame
    kept = []
    for i in range(refined.n_inner):
        s = refined.segments[i]
        hl, hr = s.left_label.colors, s.right_label.colors
        if hl != hr:
            kept.append(Segment(s.a, s.b, s.direction, s.sites, s.chromaticity, s.is_new,
                                FaceLabel(hl), FaceLabel(hr)))
    adj = defaultdict(list)
    for idx, s in enumerate(kept):
        adj[s.a].append(idx)
        adj[s.b].append(idx)

    def through(key, idx):
        """The other kept segment continuing segment ``idx`` straight through ``key``, if any."""
        if key[0] != TRIPLE:
            return None
        around = adj[key]
        if len(around) != 2:
            return None
        j = around[0] if around[1] == idx else around[1]
        if set(kept[j].sites) != set(kept[idx].sites):
            return None
        return j

    used = [False] * len(kept)
    merged = []
    for idx, s in enumerate(kept):
        if used[idx]:
            continue
        used[idx] = True
        ends = []
        for key in (s.b, s.a):
            cur, at = idx, key
            while True:
                j = through(at, cur)
                if j is None or used[j]:
                    break
                used[j] = True
                at = kept[j].b if kept[j].a == at else kept[j].a
                cur = j
            ends.append(at)
        merged.append(Segment(ends[1], ends[0], s.direction, s.sites, s.chromaticity, s.is_new,
                              s.left_label, s.right_label))
    default = FaceLabel(refined.faces[1].label.colors)
    d = assemble(frame, merged, default, InconsistentLabels)
    d.check()
    return d


# advancing one order -------------------------------------------------------------


def boundary_sites(D: PlanarSubdivision, f: int) -> set[int]:
    """Outer defining sites of the boundary edges of face ``f``."""
    return _face_boundary(D, f, D.faces[f].label.colors).sites


def _old_edges(D: PlanarSubdivision) -> list[Segment]:
    """Edges of a coarse diagram seen from the next order: each side gains the site across it."""
    colors = D.frame.colors
    out = []
    for i in range(D.n_inner):
        s = D.segments[i]
        left, right = s.sites
        hl, hr = s.left_label.colors, s.right_label.colors
        out.append(Segment(
            s.a, s.b, s.direction, (right, left), s.chromaticity, False,
            FaceLabel(hl | {colors[right]}, right), FaceLabel(hr | {colors[left]}, left),
        ))
    return out


def advance_minimal(coarse: PlanarSubdivision) -> PlanarSubdivision:
    """Refined nearest-side diagram of the next order from the coarse one of this order."""
    frame = coarse.frame
    segments = _old_edges(coarse)
    for f in range(1, len(coarse.faces)):
        H = coarse.faces[f].label.colors
        boundary = _face_boundary(coarse, f, H)
        bis = _Bisectors(frame, boundary.sites, False)
        segments += _trace_face(frame, bis, boundary, False, _labeler(H, frame.colors))
    d = assemble(frame, segments)
    d.check()
    return d


def _box_hits(R: PlanarSubdivision) -> dict:
    """Ring index of every box vertex where a non-box edge ends, keyed by (pair, outward sign)."""
    hits = {}
    for idx, h in enumerate(R.box_ring):
        g = R.next[h ^ 1]
        while g != h:
            if not R.is_box(g):
                pair = tuple(sorted(R.sites(g)))
                dx, dy, _, _ = R.frame.bisector(*pair)
                ox, oy = R.direction(g)
                sign = -1 if ox * dx + oy * dy > 0 else 1
                hits[(pair, sign)] = idx
            g = R.next[g ^ 1]
    return hits


def _outward_key(D: PlanarSubdivision, h: int, arriving: bool):
    pair = tuple(sorted(D.sites(h)))
    dx, dy, _, _ = D.frame.bisector(*pair)
    ox, oy = D.direction(h)
    dot = ox * dx + oy * dy
    if not arriving:
        dot = -dot
    return pair, (1 if dot > 0 else -1)


def extra_sites(coarse_max: PlanarSubdivision, f: int, refined_min: PlanarSubdivision, hits=None) -> set[int]:
    """Associated sites of the nearest-side refined faces met at infinity opposite to face ``f``."""
    if hits is None:
        hits = _box_hits(refined_min)
    boundary = _face_boundary(coarse_max, f, coarse_max.faces[f].label.colors)
    ring = refined_min.box_ring
    out = set()
    if boundary.runs is None and boundary.full_cycles:
        for h in ring:
            out.add(refined_min.faces[refined_min.face_of[h]].label.associated_site)
        return out
    for e_in, e_out in boundary.delimiters:
        pin, sin = _outward_key(coarse_max, e_in, True)
        pout, sout = _outward_key(coarse_max, e_out, False)
        a = hits.get((pin, -sin))
        b = hits.get((pout, -sout))
        if a is None or b is None:
            raise CorrespondenceFailure(
                f"no nearest-side unbounded edge matches {pin if a is None else pout}"
            )
        i = a
        while True:
            h = ring[i]
            out.add(refined_min.faces[refined_min.face_of[h]].label.associated_site)
            i = (i + 1) % len(ring)
            if i == b:
                break
    return out


def advance_maximal(coarse_max: PlanarSubdivision, refined_min_next: PlanarSubdivision,
                    record: Optional[list] = None) -> PlanarSubdivision:
    """Refined farthest-side diagram of the next order.

    ``refined_min_next`` is the nearest-side refined diagram of that next
    order; it supplies the sites owning unbounded faces far away.  When
    ``record`` is a list, one ``(face, boundary sites, extra sites)`` triple
    is appended per face.
    """
    frame = coarse_max.frame
    hits = _box_hits(refined_min_next)
    colors = frame.colors
    segments = _old_edges(coarse_max)
    for f in range(1, len(coarse_max.faces)):
        H = coarse_max.faces[f].label.colors
        boundary = _face_boundary(coarse_max, f, H)
        plus = set()
        if boundary.runs or boundary.full_cycles:
            plus = extra_sites(coarse_max, f, refined_min_next, hits)
        for s in plus:
            if colors[s] in H:
                raise ColorLeak(f"extra site {s} has color {colors[s]} inside the face's set")
        if record is not None:
            record.append((f, frozenset(boundary.sites), frozenset(plus)))
        bis = _Bisectors(frame, boundary.sites | plus, True)
        segments += _trace_face(frame, bis, boundary, True, _labeler(H, colors))
    d = assemble(frame, segments)
    d.check()
    return d


# sequences --------------------------------------------------------------------------


@dataclass
class OrderStats:
    order: int
    refined_vertices: int
    refined_edges: int
    refined_faces: int
    coarse_vertices: int
    coarse_edges: int
    coarse_faces: int
    new_vertices: dict = field(default_factory=dict)
    faces_with_extra_sites: int = 0


@dataclass
class OrderDiagrams:
    order: int
    refined: PlanarSubdivision
    coarse: PlanarSubdivision
    stats: OrderStats


@dataclass
class DiagramSequence:
    side: Side
    sites: ColoredSiteSet
    clip_box: ClipBox
    orders: list = field(default_factory=list)

    def refined(self, k: int) -> PlanarSubdivision:
        return self.orders[k - 1].refined

    def coarse(self, k: int) -> PlanarSubdivision:
        return self.orders[k - 1].coarse

    def stats(self) -> list[OrderStats]:
        return [o.stats for o in self.orders]


def _stats(k, refined, coarse, previous, extra=0) -> OrderStats:
    before = set() if previous is None else {key for key in previous.keys if key[0] == TRIPLE}
    new = {1: 0, 2: 0, 3: 0}
    for v in refined.interior_vertices():
        if refined.keys[v] not in before:
            new[refined.vertex_chromaticity(v)] += 1
    return OrderStats(
        k,
        len(refined.interior_vertices()), refined.n_inner, refined.n_faces,
        len(coarse.interior_vertices()), coarse.n_inner, coarse.n_faces,
        new, extra,
    )


def build_sequences(S: ColoredSiteSet, k: Optional[int] = None, box: Optional[ClipBox] = None,
                    sides=(Side.MIN, Side.MAX)):
    """Coarse and refined diagrams of orders 1..k on each requested side.

    Returns ``(nearest sequence, farthest sequence)``; a side that was not
    requested is ``None``.  The farthest side always needs the nearest one,
    which is then built as well but only returned when requested.
    """
    if S.metric is not Metric.EUCLIDEAN:
        raise MetricMismatch("the diagram builder supports the Euclidean metric only")
    k = S.m if k is None else k
    if not 1 <= k <= S.m:
        raise ValueError(f"k must lie in 1..{S.m}")
    sides = {Side(s) for s in sides}
    frame = _frame_for(S, box)
    mins = DiagramSequence(Side.MIN, S, frame.box)
    refined = _order_one(frame, range(S.n), False)
    coarse = coarsen(refined)
    mins.orders.append(OrderDiagrams(1, refined, coarse, _stats(1, refined, coarse, None)))
    for i in range(2, k + 1):
        refined = advance_minimal(coarse)
        coarse = coarsen(refined)
        previous = mins.orders[-1].refined
        mins.orders.append(OrderDiagrams(i, refined, coarse, _stats(i, refined, coarse, previous)))
    maxs = None
    if Side.MAX in sides:
        maxs = DiagramSequence(Side.MAX, S, frame.box)
        refined = _order_one(frame, range(S.n), True)
        coarse = coarsen(refined)
        maxs.orders.append(OrderDiagrams(1, refined, coarse, _stats(1, refined, coarse, None)))
        for i in range(2, k + 1):
            record = []
            refined = advance_maximal(coarse, mins.refined(i), record)
            coarse = coarsen(refined)
            extra = sum(1 for _, sf, plus in record if not plus <= sf)
            previous = maxs.orders[-1].refined
            maxs.orders.append(
                OrderDiagrams(i, refined, coarse, _stats(i, refined, coarse, previous, extra))
            )
    return (mins if Side.MIN in sides else None), maxs
