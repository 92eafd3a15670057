"""Clip box, exact vertex frame and the half-edge structure shared by every diagram.

Diagram vertices are named combinatorially instead of by coordinates:

* ``(0, i, j, k)`` is the center of the circle through sites i < j < k,
* ``(1, p, q, side)`` is where the bisector of sites p < q crosses a box side,
* ``(2, c)`` is box corner c (counterclockwise from the lower-left one).

Under general position equal keys mean equal points and vice versa, so the
glue step is a dictionary lookup.  Coordinates are kept as homogeneous
integers ``(x, y, w)`` with ``w > 0`` on a grid scaled by a common
denominator, and every edge direction is an integer vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import floor, lcm
from typing import NamedTuple, Optional

from .errors import GeometryMismatch
from .geometry import ColoredSiteSet, Point2

TRIPLE, BOX, CORNER = 0, 1, 2

# Box sides in counterclockwise order and the direction of travel along each.
BOTTOM, RIGHT, TOP, LEFT = 0, 1, 2, 3
_SIDE_DIRECTION = ((1, 0), (0, 1), (-1, 0), (0, -1))


@dataclass(frozen=True)
class ClipBox:
    xmin: Fraction
    ymin: Fraction
    xmax: Fraction
    ymax: Fraction

    def __post_init__(self):
        for name in ("xmin", "ymin", "xmax", "ymax"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("empty clip box")

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.xmin, self.ymin, self.xmax, self.ymax)

    def corners(self) -> tuple[Point2, ...]:
        return (
            Point2(self.xmin, self.ymin),
            Point2(self.xmax, self.ymin),
            Point2(self.xmax, self.ymax),
            Point2(self.xmin, self.ymax),
        )

    def contains_strictly(self, p) -> bool:
        return self.xmin < p[0] < self.xmax and self.ymin < p[1] < self.ymax

    def widened(self, margin) -> "ClipBox":
        return ClipBox(self.xmin - margin, self.ymin - margin, self.xmax + margin, self.ymax + margin)


def _tau_less(a, b) -> bool:
    return a[0] * b[1] < b[0] * a[1]


class Frame:
    """Sites and clip box on one integer grid, with cached vertex coordinates."""

    def __init__(self, S: ColoredSiteSet, box: ClipBox):
        self.sites = S
        self.box = box
        F = lcm(S.scale, *(c.denominator for c in box.as_tuple()))
        self.scale = F
        self.coords = [(int(p.x * F), int(p.y * F)) for p in S.positions]
        self.colors = S.colors
        self.x0, self.y0, self.x1, self.y1 = (int(c * F) for c in box.as_tuple())
        corners = ((self.x0, self.y0), (self.x1, self.y0), (self.x1, self.y1), (self.x0, self.y1))
        self._hom: dict = {(CORNER, c): (x, y, 1) for c, (x, y) in enumerate(corners)}
        self._lines: dict = {}
        self._points: dict = {}
        for c, (x, y) in enumerate(corners):
            seen = {}
            for s, (px, py) in enumerate(self.coords):
                r = (px - x) ** 2 + (py - y) ** 2
                if r in seen:
                    raise GeometryMismatch(
                        f"bisector of sites {seen[r]} and {s} passes through box corner {c}"
                    )
                seen[r] = s

    # coordinates -------------------------------------------------------

    def hom(self, key) -> tuple[int, int, int]:
        h = self._hom.get(key)
        if h is None:
            if key[0] != TRIPLE:
                self.line_box(key[1], key[2])
                h = self._hom.get(key)
                if h is None:
                    raise GeometryMismatch(f"unknown box vertex {key}")
                return h
            (ax, ay), (bx, by), (cx, cy) = (self.coords[i] for i in key[1:])
            bx, by, cx, cy = bx - ax, by - ay, cx - ax, cy - ay
            D = 2 * (bx * cy - by * cx)
            if D == 0:
                raise GeometryMismatch(f"collinear triple {key[1:]}")
            b2, c2 = bx * bx + by * by, cx * cx + cy * cy
            x = ax * D + cy * b2 - by * c2
            y = ay * D + bx * c2 - cx * b2
            h = (x, y, D) if D > 0 else (-x, -y, -D)
            self._hom[key] = h
        return h

    def point(self, key) -> Point2:
        p = self._points.get(key)
        if p is None:
            x, y, w = self.hom(key)
            p = Point2(Fraction(x, w * self.scale), Fraction(y, w * self.scale))
            self._points[key] = p
        return p

    def inside(self, key) -> bool:
        x, y, w = self.hom(key)
        return self.x0 * w < x < self.x1 * w and self.y0 * w < y < self.y1 * w

    def box_position(self, key) -> tuple[int, Fraction]:
        """Side index and signed coordinate increasing counterclockwise along that side."""
        if key[0] == CORNER:
            c = key[1]
            return (c, (self.x0, self.y0, -self.x1, -self.y1)[c])
        side = key[3]
        x, y, w = self.hom(key)
        along = (Fraction(x, w), Fraction(y, w), Fraction(-x, w), Fraction(-y, w))[side]
        return (side, along)

    # bisectors ---------------------------------------------------------

    def bisector(self, p: int, q: int):
        """Direction ``d`` (site p on the left when moving along +d) and the sums P + Q."""
        (px, py), (qx, qy) = self.coords[p], self.coords[q]
        return py - qy, qx - px, px + qx, py + qy

    def tau(self, key, pair) -> tuple[int, int]:
        """Position of vertex ``key`` along the bisector of ``pair`` as a fraction (num, den > 0)."""
        dx, dy, sx, sy = self.bisector(*pair)
        x, y, w = self.hom(key)
        return ((2 * x - sx * w) * dx + (2 * y - sy * w) * dy, w)

    def on_bisector(self, key, pair) -> bool:
        x, y, w = self.hom(key)
        (px, py), (qx, qy) = self.coords[pair[0]], self.coords[pair[1]]
        return (x - px * w) ** 2 + (y - py * w) ** 2 == (x - qx * w) ** 2 + (y - qy * w) ** 2

    def line_box(self, p: int, q: int):
        """Entry and exit of the bisector of p < q through the box: ``(tau_in, key_in, tau_out, key_out)``."""
        pair = (p, q)
        if pair in self._lines:
            return self._lines[pair]
        dx, dy, sx, sy = self.bisector(p, q)
        dd = dx * dx + dy * dy
        entering, leaving = [], []
        if dx:
            for B, side in ((self.x0, LEFT), (self.x1, RIGHT)):
                num, den = (2 * B - sx) * dd, dx
                if den < 0:
                    num, den = -num, -den
                enters = (side == LEFT) == (dx > 0)
                (entering if enters else leaving).append(((num, den), side, B))
        elif not 2 * self.x0 < sx < 2 * self.x1:
            self._lines[pair] = None
            return None
        if dy:
            for B, side in ((self.y0, BOTTOM), (self.y1, TOP)):
                num, den = (2 * B - sy) * dd, dy
                if den < 0:
                    num, den = -num, -den
                enters = (side == BOTTOM) == (dy > 0)
                (entering if enters else leaving).append(((num, den), side, B))
        elif not 2 * self.y0 < sy < 2 * self.y1:
            self._lines[pair] = None
            return None
        t_in = entering[0]
        for e in entering[1:]:
            if _tau_less(t_in[0], e[0]):
                t_in = e
            elif not _tau_less(e[0], t_in[0]):
                raise GeometryMismatch(f"bisector {pair} passes through a box corner")
        t_out = leaving[0]
        for e in leaving[1:]:
            if _tau_less(e[0], t_out[0]):
                t_out = e
            elif not _tau_less(t_out[0], e[0]):
                raise GeometryMismatch(f"bisector {pair} passes through a box corner")
        if not _tau_less(t_in[0], t_out[0]):
            self._lines[pair] = None
            return None
        result = []
        for tau, side, B in (t_in, t_out):
            key = (BOX, p, q, side)
            if side in (LEFT, RIGHT):
                w = 2 * dx
                h = (B * w, sy * dx + (2 * B - sx) * dy, w)
            else:
                w = 2 * dy
                h = (sx * dy + (2 * B - sy) * dx, B * w, w)
            if w < 0:
                h = (-h[0], -h[1], -h[2])
            self._hom[key] = h
            result += [tau, key]
        out = tuple(result)
        self._lines[pair] = out
        return out


@dataclass(frozen=True)
class FaceLabel:
    """Color set of a face and, in refined diagrams, the site realizing its last color."""

    colors: frozenset
    associated_site: Optional[int] = None


class Segment:
    """One edge of a subdivision before assembly, oriented from ``a`` to ``b``."""

    __slots__ = ("a", "b", "direction", "sites", "chromaticity", "is_new", "left_label", "right_label")

    def __init__(self, a, b, direction, sites, chromaticity, is_new, left_label, right_label):
        self.a = a
        self.b = b
        self.direction = direction
        self.sites = sites
        self.chromaticity = chromaticity
        self.is_new = is_new
        self.left_label = left_label
        self.right_label = right_label

    def reversed(self) -> "Segment":
        sites = None if self.sites is None else (self.sites[1], self.sites[0])
        return Segment(
            self.b, self.a, (-self.direction[0], -self.direction[1]), sites,
            self.chromaticity, self.is_new, self.right_label, self.left_label,
        )

    def __repr__(self):
        return f"Segment({self.a} -> {self.b}, sites={self.sites})"


class HalfEdge(NamedTuple):
    origin: int
    twin: int
    next: int
    prev: int
    face: int
    chromaticity: int
    is_new: bool
    sites: Optional[tuple[int, int]]
    is_box: bool


@dataclass
class FaceRecord:
    label: Optional[FaceLabel]
    edge: int
    holes: list[int] = field(default_factory=list)


def _cross(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


def _angle_cmp(a, b) -> int:
    ha = 0 if a[1] > 0 or (a[1] == 0 and a[0] > 0) else 1
    hb = 0 if b[1] > 0 or (b[1] == 0 and b[0] > 0) else 1
    if ha != hb:
        return ha - hb
    c = _cross(a, b)
    return -1 if c > 0 else (1 if c < 0 else 0)


_ANGLE_KEY = cmp_to_key(lambda s, t: _angle_cmp(s[0], t[0]))


def in_wedge(u, v, x) -> bool:
    """Whether direction ``x`` lies strictly inside the counterclockwise wedge from ``u`` to ``v``."""
    if _cross(u, v) > 0:
        return _cross(u, x) > 0 and _cross(x, v) > 0
    return _cross(u, x) > 0 or _cross(x, v) > 0


class PlanarSubdivision:
    """Half-edges ``2i`` and ``2i + 1`` are the two sides of edge ``i``; face 0 is the outside of the box."""

    def __init__(self, frame, keys, origin, nxt, prv, face_of, segments, n_inner, faces, box_ring):
        self.frame = frame
        self.keys = keys
        self.origin = origin
        self.next = nxt
        self.prev = prv
        self.face_of = face_of
        self.segments = segments
        self.n_inner = n_inner
        self.faces = faces
        self.box_ring = box_ring

    @property
    def clip_box(self) -> ClipBox:
        return self.frame.box

    # sizes ----------------------------------------------------------------

    def is_box_vertex(self, v: int) -> bool:
        return self.keys[v][0] != TRIPLE

    def interior_vertices(self) -> list[int]:
        return [v for v, k in enumerate(self.keys) if k[0] == TRIPLE]

    @property
    def n_vertices(self) -> int:
        return len(self.keys)

    @property
    def n_edges(self) -> int:
        return len(self.segments)

    @property
    def n_faces(self) -> int:
        """Faces inside the box."""
        return len(self.faces) - 1

    def vertex_point(self, v: int) -> Point2:
        return self.frame.point(self.keys[v])

    def vertex_points(self, interior_only: bool = True) -> set[Point2]:
        return {
            self.frame.point(k) for k in self.keys if not interior_only or k[0] == TRIPLE
        }

    # half-edges -------------------------------------------------------------

    def dest(self, h: int) -> int:
        return self.origin[h ^ 1]

    def is_box(self, h: int) -> bool:
        return (h >> 1) >= self.n_inner

    def sites(self, h: int):
        """(left, right) defining sites of half-edge ``h``; ``None`` on the box."""
        s = self.segments[h >> 1].sites
        if s is None or not h & 1:
            return s
        return (s[1], s[0])

    def direction(self, h: int):
        d = self.segments[h >> 1].direction
        return d if not h & 1 else (-d[0], -d[1])

    def left_label(self, h: int):
        s = self.segments[h >> 1]
        return s.right_label if h & 1 else s.left_label

    def half_edge(self, h: int) -> HalfEdge:
        s = self.segments[h >> 1]
        return HalfEdge(
            self.origin[h], h ^ 1, self.next[h], self.prev[h], self.face_of[h],
            s.chromaticity, s.is_new, self.sites(h), self.is_box(h),
        )

    def cycle(self, h: int) -> list[int]:
        out = [h]
        e = self.next[h]
        while e != h:
            out.append(e)
            e = self.next[e]
        return out

    def face_cycles(self, f: int) -> list[list[int]]:
        rec = self.faces[f]
        return [self.cycle(rec.edge)] + [self.cycle(h) for h in rec.holes]

    def face_label(self, f: int) -> Optional[FaceLabel]:
        return self.faces[f].label

    def vertex_sites(self, v: int) -> tuple[int, ...]:
        k = self.keys[v]
        return k[1:] if k[0] == TRIPLE else ()

    def vertex_chromaticity(self, v: int) -> int:
        return len({self.frame.colors[s] for s in self.vertex_sites(v)})

    # invariants -------------------------------------------------------------

    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.segments) + len(self.faces)

    def components(self) -> int:
        return 1 + sum(len(f.holes) for f in self.faces)

    def check(self):
        """Raise :class:`GeometryMismatch` if a structural invariant fails."""
        H = len(self.origin)
        for h in range(H):
            if self.next[self.prev[h]] != h or self.prev[self.next[h]] != h:
                raise GeometryMismatch(f"next/prev broken at half-edge {h}")
            if self.origin[self.next[h]] != self.origin[h ^ 1]:
                raise GeometryMismatch(f"half-edge {h} does not chain to its successor")
            if self.face_of[self.next[h]] != self.face_of[h]:
                raise GeometryMismatch(f"face changes along the cycle of half-edge {h}")
        if self.euler_characteristic() != 1 + self.components():
            raise GeometryMismatch("Euler relation fails")


def _lexicographic_less(a, b) -> bool:
    (ax, ay, aw), (bx, by, bw) = a, b
    l, r = ax * bw, bx * aw
    if l != r:
        return l < r
    return ay * bw < by * aw


def _point_in_polygon(p: Point2, polygon: list[Point2]) -> bool:
    inside = False
    x, y = p
    n = len(polygon)
    for i in range(n):
        (x1, y1), (x2, y2) = polygon[i], polygon[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            t = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if t > x:
                inside = not inside
    return inside


def assemble(frame: Frame, segments, default_label=None, error=GeometryMismatch) -> PlanarSubdivision:
    """Glue segments that meet only at shared vertex keys into a subdivision of the clip box.

    Box edges are added between consecutive box vertices.  Every face takes
    the left label of its boundary half-edges (which must agree); a face
    bounded only by the box gets ``default_label``.
    """
    vid: dict = {}
    keys: list = []

    def register(k):
        v = vid.get(k)
        if v is None:
            v = vid[k] = len(keys)
            keys.append(k)
        return v

    for c in range(4):
        register((CORNER, c))
    for s in segments:
        register(s.a)
        register(s.b)
    ring_keys = sorted((k for k in keys if k[0] != TRIPLE), key=frame.box_position)
    segs = list(segments)
    n_inner = len(segs)
    for i, k in enumerate(ring_keys):
        side = frame.box_position(k)[0]
        segs.append(Segment(k, ring_keys[(i + 1) % len(ring_keys)], _SIDE_DIRECTION[side],
                            None, 0, False, None, None))
    H = 2 * len(segs)
    origin = [0] * H
    out: list[list] = [[] for _ in keys]
    for i, s in enumerate(segs):
        a, b = vid[s.a], vid[s.b]
        if a == b:
            raise GeometryMismatch(f"degenerate segment at {s.a}")
        origin[2 * i] = a
        origin[2 * i + 1] = b
        d = s.direction
        out[a].append((d, 2 * i))
        out[b].append(((-d[0], -d[1]), 2 * i + 1))
    nxt = [0] * H
    for v, lst in enumerate(out):
        if len(lst) > 2:
            lst.sort(key=_ANGLE_KEY)
            for j in range(len(lst)):
                if _angle_cmp(lst[j][0], lst[j - 1][0]) == 0:
                    raise GeometryMismatch(f"overlapping edges at vertex {keys[v]}")
        for j, (_, h) in enumerate(lst):
            nxt[h ^ 1] = lst[j - 1][1]
    prv = [0] * H
    for h in range(H):
        prv[nxt[h]] = h

    def label_of(h):
        s = segs[h >> 1]
        return s.right_label if h & 1 else s.left_label

    face_of = [-1] * H
    faces = [FaceRecord(None, 2 * n_inner + 1)]
    holes = []
    homs = [frame.hom(k) for k in keys]
    for start in range(H):
        if face_of[start] != -1:
            continue
        cyc = [start]
        face_of[start] = -2
        e = nxt[start]
        while e != start:
            if face_of[e] != -1:
                raise GeometryMismatch("half-edge cycles overlap")
            face_of[e] = -2
            cyc.append(e)
            e = nxt[e]
        if any(h >= 2 * n_inner and h & 1 for h in cyc):
            for h in cyc:
                face_of[h] = 0
            continue
        low = None
        for h in cyc:
            if low is None or _lexicographic_less(homs[origin[h]], homs[origin[low]]):
                low = h
        v = origin[low]
        negative = False
        for h in cyc:
            if origin[h] == v:
                d_in = segs[prv[h] >> 1].direction
                rev_in = d_in if prv[h] & 1 else (-d_in[0], -d_in[1])
                d_out = segs[h >> 1].direction
                d_out = d_out if not h & 1 else (-d_out[0], -d_out[1])
                if in_wedge(d_out, rev_in, (-1, 0)):
                    negative = True
        labels = {label_of(h) for h in cyc if h < 2 * n_inner}
        if len(labels) > 1:
            raise error(f"half-edges of one cycle carry labels {sorted(map(repr, labels))[:3]}")
        label = labels.pop() if labels else None
        if negative:
            holes.append((cyc, label))
        else:
            f = len(faces)
            faces.append(FaceRecord(label, start))
            for h in cyc:
                face_of[h] = f

    def polygon(cyc):
        return [frame.point(keys[origin[h]]) for h in cyc]

    for cyc, label in holes:
        candidates = [f for f in range(1, len(faces)) if faces[f].label == label]
        if label is None:
            raise error("a hole carries no label")
        if len(candidates) != 1:
            probe = frame.point(keys[origin[cyc[0]]])
            containing = [
                f for f in candidates
                if _point_in_polygon(probe, polygon(nxt_cycle(faces[f].edge, nxt)))
            ]
            if not containing:
                containing = [
                    f for f in range(1, len(faces))
                    if faces[f].label is None
                    and _point_in_polygon(probe, polygon(nxt_cycle(faces[f].edge, nxt)))
                ]
            if len(containing) != 1:
                raise GeometryMismatch("could not place a hole in a unique face")
            candidates = containing
        f = candidates[0]
        if faces[f].label is None:
            faces[f].label = label
        faces[f].holes.append(cyc[0])
        for h in cyc:
            face_of[h] = f
    for rec in faces[1:]:
        if rec.label is None:
            if default_label is None:
                raise error("a face bounded only by the box has no label")
            rec.label = default_label
    ring = [2 * (n_inner + i) for i in range(len(ring_keys))]
    return PlanarSubdivision(frame, keys, origin, nxt, prv, face_of, segs, n_inner, faces, ring)


def nxt_cycle(h: int, nxt) -> list[int]:
    out = [h]
    e = nxt[h]
    while e != h:
        out.append(e)
        e = nxt[e]
    return out


def clip_box_around(points, margin) -> ClipBox:
    """Smallest integer box containing ``points`` widened by at least ``margin``."""
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return ClipBox(
        floor(min(xs) - margin), floor(min(ys) - margin),
        -floor(-(max(xs) + margin)), -floor(-(max(ys) + margin)),
    )
