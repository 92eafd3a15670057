"""Brute-force point queries: color distances, k nearest / farthest color sets and diagram audits."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .census import Side
from .dcel import PlanarSubdivision
from .geometry import ColoredSiteSet, Metric, Point2, point


def _scaled_distances(x, S: ColoredSiteSet):
    """Distances from ``x`` to every site, all multiplied by one positive factor, as integers.

    Euclidean distances are squared.  Returns the integers and the factor.
    """
    x = point(*x)
    L = S.scale
    xd, yd = x.x.denominator, x.y.denominator
    w = xd * yd
    px, py = x.x.numerator * yd * L, x.y.numerator * xd * L
    out = []
    if S.metric is Metric.LINF:
        for cx, cy in S.integer_coords:
            out.append(max(abs(px - cx * w), abs(py - cy * w)))
        return out, w * L
    for cx, cy in S.integer_coords:
        dx, dy = px - cx * w, py - cy * w
        out.append(dx * dx + dy * dy)
    return out, (w * L) ** 2


def _per_color(dist, S: ColoredSiteSet):
    m = S.m
    near = [None] * m
    far = [None] * m
    near_id = [-1] * m
    far_id = [-1] * m
    for s, (d, c) in enumerate(zip(dist, S.colors)):
        if near[c] is None or d < near[c]:
            near[c], near_id[c] = d, s
        if far[c] is None or d > far[c]:
            far[c], far_id[c] = d, s
    return near, far, near_id, far_id


@dataclass(frozen=True)
class ColorDistanceProfile:
    """Per color: nearest and farthest distance (squared for Euclidean) with witness sites."""

    nearest: tuple
    farthest: tuple
    nearest_site: tuple
    farthest_site: tuple
    metric: Metric

    @property
    def m(self) -> int:
        return len(self.nearest)


def profile(x, S: ColoredSiteSet) -> ColorDistanceProfile:
    dist, factor = _scaled_distances(x, S)
    near, far, near_id, far_id = _per_color(dist, S)
    return ColorDistanceProfile(
        tuple(Fraction(d, factor) for d in near),
        tuple(Fraction(d, factor) for d in far),
        tuple(near_id), tuple(far_id), S.metric,
    )


@dataclass(frozen=True)
class KSet:
    """``colors`` is ``None`` when the query point lies on a region boundary."""

    colors: Optional[frozenset]
    kth_color: Optional[int]
    witness: Optional[int]
    witness_tied: bool = False

    @property
    def on_boundary(self) -> bool:
        return self.colors is None


def k_set(x, S: ColoredSiteSet, k: int, side=Side.MIN) -> KSet:
    """The k nearest (Min) or k farthest (Max) colors at ``x``.

    ``witness_tied`` flags a point where the k-th color or its witness site is
    not unique even though the color set is.
    """
    side = Side(side)
    if not 1 <= k <= S.m:
        raise ValueError(f"k must lie in 1..{S.m}")
    dist, _ = _scaled_distances(x, S)
    near, far, near_id, far_id = _per_color(dist, S)
    if side is Side.MIN:
        per, wit = near, near_id
        order = sorted(range(S.m), key=lambda c: per[c])
    else:
        per, wit = far, far_id
        order = sorted(range(S.m), key=lambda c: -per[c])
    if k < S.m and per[order[k - 1]] == per[order[k]]:
        return KSet(None, None, None, True)
    kth = order[k - 1]
    tied = k >= 2 and per[order[k - 2]] == per[kth]
    tied = tied or sum(1 for s in S.color_classes[kth] if dist[s] == per[kth]) > 1
    return KSet(frozenset(order[:k]), kth, wit[kth], tied)


# diagram audit -------------------------------------------------------------


def _orient(a, b, p) -> int:
    """Orientation of homogeneous points (all weights positive)."""
    (ax, ay, aw), (bx, by, bw), (px, py, pw) = a, b, p
    det = (
        ax * (by * pw - py * bw)
        - ay * (bx * pw - px * bw)
        + aw * (bx * py - px * by)
    )
    return (det > 0) - (det < 0)


def _strictly_inside(p, polygon) -> Optional[bool]:
    """Crossing-number test on homogeneous integer points; ``None`` on the boundary."""
    px, py, pw = p
    inside = False
    n = len(polygon)
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        above_a = a[1] * pw > py * a[2]
        above_b = b[1] * pw > py * b[2]
        o = _orient(a, b, p)
        if o == 0:
            lo_x = min(a[0] * b[2], b[0] * a[2])
            hi_x = max(a[0] * b[2], b[0] * a[2])
            lo_y = min(a[1] * b[2], b[1] * a[2])
            hi_y = max(a[1] * b[2], b[1] * a[2])
            w = a[2] * b[2]
            if lo_x * pw <= px * w <= hi_x * pw and lo_y * pw <= py * w <= hi_y * pw:
                return None
        if above_a != above_b:
            # upward edges cross to the right of p when p is on their left, downward ones the opposite
            if (o > 0) == above_b:
                inside = not inside
    return inside


def _in_face(p, polygons) -> bool:
    if not _strictly_inside(p, polygons[0]):
        return False
    for hole in polygons[1:]:
        r = _strictly_inside(p, hole)
        if r is None or r:
            return False
    return True


def _fractions():
    """1/2, 1/4, 3/4, 1/8, 3/8, ... : distinct points along an edge."""
    den = 2
    while True:
        for num in range(1, den, 2):
            yield Fraction(num, den)
        den *= 2


def face_samples(d: PlanarSubdivision, f: int, count: int = 8) -> list[Point2]:
    """``count`` exact points strictly inside face ``f``, placed just inside its boundary edges."""
    frame = d.frame
    F = frame.scale
    cycles = d.face_cycles(f)
    polygons = [[frame.hom(d.keys[d.origin[h]]) for h in cyc] for cyc in cycles]
    edges = [h for cyc in cycles for h in cyc]
    out = []
    positions = _fractions()
    while len(out) < count:
        t = next(positions)
        for h in edges:
            if len(out) >= count:
                break
            a = d.vertex_point(d.origin[h])
            b = d.vertex_point(d.dest(h))
            base = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
            nx, ny = -(b[1] - a[1]), b[0] - a[0]
            eps = Fraction(1, 8)
            for _ in range(200):
                x, y = base[0] + eps * nx, base[1] + eps * ny
                hom = (x.numerator * y.denominator * F, y.numerator * x.denominator * F,
                       x.denominator * y.denominator)
                if _in_face(hom, polygons):
                    out.append(Point2(x, y))
                    break
                eps /= 2
    return out


@dataclass
class Mismatch:
    face: int
    sample: Point2
    expected: object
    found: object


@dataclass
class ValidationReport:
    faces: int = 0
    samples: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def validate_diagram(d: PlanarSubdivision, S: ColoredSiteSet, k: int, side=Side.MIN,
                     samples_per_face: int = 8) -> ValidationReport:
    """Query the oracle at interior samples of every face and compare with the face label."""
    report = ValidationReport()
    for f in range(1, len(d.faces)):
        label = d.faces[f].label
        report.faces += 1
        refined = label.associated_site is not None
        for x in face_samples(d, f, samples_per_face):
            report.samples += 1
            got = k_set(x, S, k, side)
            if got.on_boundary or got.colors != label.colors:
                report.mismatches.append(Mismatch(f, x, label, got))
            elif refined and (got.witness_tied or got.witness != label.associated_site):
                report.mismatches.append(Mismatch(f, x, label, got))
    return report
