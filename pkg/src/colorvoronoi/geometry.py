"""Exact rational predicates and metric balls for colored planar sites.

Every quantity is a :class:`fractions.Fraction` or a Python integer.  The
vectorised helpers translate and scale the sites to small integers first and
only use ``int64`` arrays when the worst-case magnitude provably fits.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd, lcm
from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import CollinearInput, DegenerateConfiguration

Rational = Fraction


class Point2(NamedTuple):
    x: Fraction
    y: Fraction


class Point3(NamedTuple):
    x: Fraction
    y: Fraction
    z: Fraction


def point(x, y) -> Point2:
    return Point2(Fraction(x), Fraction(y))


def parse_rational(text: str) -> Fraction:
    """Parse ``"3"``, ``"-0.25"`` or ``"7/3"`` exactly."""
    text = text.strip()
    if not text:
        raise ValueError("empty number")
    return Fraction(text)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Metric(str, Enum):
    EUCLIDEAN = "l2"
    LINF = "linf"


class Location(Enum):
    INSIDE = "inside"
    ON_BOUNDARY = "on_boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class Site:
    id: int
    position: Point2
    color: int


@dataclass(frozen=True)
class ColoredSiteSet:
    sites: tuple[Site, ...]
    m: int
    metric: Metric = Metric.EUCLIDEAN

    def __post_init__(self):
        n = len(self.sites)
        if not (n >= self.m >= 1):
            raise ValueError(f"need n >= m >= 1, got n={n}, m={self.m}")
        for i, s in enumerate(self.sites):
            if s.id != i:
                raise ValueError("site ids must be 0..n-1 in order")
            if not 0 <= s.color < self.m:
                raise ValueError(f"site {i} has color {s.color} outside 0..{self.m - 1}")
        if len({s.color for s in self.sites}) != self.m:
            raise ValueError("every color 0..m-1 must occur")
        if len({s.position for s in self.sites}) != n:
            raise ValueError("site positions must be distinct")

    @classmethod
    def from_points(cls, points, colors, metric=Metric.EUCLIDEAN) -> "ColoredSiteSet":
        """Build a set from coordinate pairs and colors; colors are compacted to 0..m-1."""
        colors = list(colors)
        relabel = {c: i for i, c in enumerate(sorted(set(colors)))}
        sites = tuple(
            Site(i, point(*p), relabel[c]) for i, (p, c) in enumerate(zip(points, colors))
        )
        return cls(sites, len(relabel), Metric(metric))

    @property
    def n(self) -> int:
        return len(self.sites)

    @cached_property
    def positions(self) -> tuple[Point2, ...]:
        return tuple(s.position for s in self.sites)

    @cached_property
    def colors(self) -> tuple[int, ...]:
        return tuple(s.color for s in self.sites)

    @cached_property
    def color_classes(self) -> tuple[tuple[int, ...], ...]:
        classes = [[] for _ in range(self.m)]
        for s in self.sites:
            classes[s.color].append(s.id)
        return tuple(tuple(c) for c in classes)

    @cached_property
    def scale(self) -> int:
        """Common denominator of all coordinates."""
        return lcm(*(q.denominator for p in self.positions for q in p))

    @cached_property
    def integer_coords(self) -> tuple[tuple[int, int], ...]:
        """Coordinates multiplied by :attr:`scale`; all predicates are invariant under this."""
        L = self.scale
        return tuple((int(p.x * L), int(p.y * L)) for p in self.positions)

    def subset(self, ids: Sequence[int]) -> "ColoredSiteSet":
        """Sites ``ids`` re-indexed from 0, colors compacted."""
        ids = sorted(ids)
        return ColoredSiteSet.from_points(
            [self.positions[i] for i in ids], [self.colors[i] for i in ids], self.metric
        )

    def with_metric(self, metric) -> "ColoredSiteSet":
        return ColoredSiteSet(self.sites, self.m, Metric(metric))


@dataclass(frozen=True)
class Circle:
    center: Point2
    radius_squared: Fraction

    def __post_init__(self):
        if self.radius_squared <= 0:
            raise ValueError("radius_squared must be positive")


@dataclass(frozen=True)
class SquareBall:
    center: Point2
    radius: Fraction

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")


Ball = Union[Circle, SquareBall]


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def orient2d(p, q, r) -> int:
    return _sign((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))


def circumcircle(p, q, r) -> Circle:
    bx, by = q[0] - p[0], q[1] - p[1]
    cx, cy = r[0] - p[0], r[1] - p[1]
    d = 2 * (bx * cy - by * cx)
    if d == 0:
        raise CollinearInput(f"collinear points {tuple(p)}, {tuple(q)}, {tuple(r)}")
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = Fraction(cy * b2 - by * c2, 1) / d
    uy = Fraction(bx * c2 - cx * b2, 1) / d
    return Circle(Point2(p[0] + ux, p[1] + uy), ux * ux + uy * uy)


def _compare(a, b) -> Location:
    if a < b:
        return Location.INSIDE
    if a == b:
        return Location.ON_BOUNDARY
    return Location.OUTSIDE


def classify_point(ball: Ball, p) -> Location:
    dx = p[0] - ball.center[0]
    dy = p[1] - ball.center[1]
    if isinstance(ball, Circle):
        return _compare(dx * dx + dy * dy, ball.radius_squared)
    return _compare(max(abs(dx), abs(dy)), ball.radius)


def lift(p) -> Point3:
    x, y = Fraction(p[0]), Fraction(p[1])
    return Point3(x, y, x * x + y * y)


def orient3d(a, b, c, d) -> int:
    bx, by, bz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
    cx, cy, cz = c[0] - a[0], c[1] - a[1], c[2] - a[2]
    dx, dy, dz = d[0] - a[0], d[1] - a[1], d[2] - a[2]
    return _sign(
        bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) + bz * (cx * dy - cy * dx)
    )


# Square sides as rows of the linear system (cx, cy, r) -> coordinate.
_SIDES = (
    (1, 0, -1, 0),  # left:   cx - r = px
    (1, 0, 1, 0),   # right:  cx + r = px
    (0, 1, -1, 1),  # bottom: cy - r = py
    (0, 1, 1, 1),   # top:    cy + r = py
)


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _adjugate(m):
    """Transposed cofactor matrix, so that ``adj @ m = det(m) * I``."""
    cof = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            minor = m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]]
            cof[j][i] = (-1) ** (i + j) * minor
    return cof


# Side assignment -> (adjugate, determinant) for every non-singular system.
_ASSIGNMENTS = {}
for _a in np.ndindex(4, 4, 4):
    _m = [_SIDES[s][:3] for s in _a]
    _d = _det3(_m)
    _ASSIGNMENTS[_a] = (_adjugate(_m), _d) if _d else None


def squares_through_three(p, q, r) -> list[SquareBall]:
    """All axis-parallel squares with ``p``, ``q`` and ``r`` on their boundary.

    Each point is assigned to one of the four sides (64 assignments); every
    assignment is a 3x3 rational system whose solution is kept when it has a
    positive radius and really puts all three points on the boundary.
    """
    pts = [point(*p), point(*q), point(*r)]
    if len(set(pts)) != 3:
        raise ValueError("points must be pairwise distinct")
    L = lcm(*(c.denominator for t in pts for c in t))
    ipts = [(int(t.x * L), int(t.y * L)) for t in pts]
    found = set()
    for assignment, solver in _ASSIGNMENTS.items():
        rhs = [ipts[i][_SIDES[s][3]] for i, s in enumerate(assignment)]
        if solver is None:
            # Only repeated sides make the system singular.
            for i, j in combinations(range(3), 2):
                if assignment[i] == assignment[j] and rhs[i] == rhs[j]:
                    raise DegenerateConfiguration(
                        f"points {pts[i]} and {pts[j]} share a coordinate"
                    )
            continue
        adj, det = solver
        cx, cy, rad = (sum(a * b for a, b in zip(row, rhs)) for row in adj)
        if det < 0:
            cx, cy, rad, det = -cx, -cy, -rad, -det
        if rad <= 0:
            continue
        # boundary check in integers: max(|x - c|) == r, scaled by det
        if all(max(abs(x * det - cx), abs(y * det - cy)) == rad for x, y in ipts):
            s = det * L
            found.add(SquareBall(Point2(Fraction(cx, s), Fraction(cy, s)), Fraction(rad, s)))
    return sorted(found, key=lambda b: (b.radius, b.center))


@dataclass
class GeneralPositionReport:
    violations: list[tuple[str, tuple[int, ...]]]

    @property
    def ok(self) -> bool:
        return not self.violations


# int64 is used when the magnitude bound of every intermediate fits in 62 bits.
_INT64_LIMIT = 2**62


def translated_int_array(coords, degree: int, factor: int):
    """Integer coordinates shifted to start at 0, as ``int64`` when
    ``factor * span**degree`` fits, otherwise ``None``."""
    arr = np.array(coords, dtype=object)
    if arr.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    arr = arr - arr.min(axis=0)
    span = int(arr.max()) if arr.size else 0
    if factor * max(span, 1) ** degree >= _INT64_LIMIT:
        return None
    return arr.astype(np.int64)


def triple_centers(P: np.ndarray, i: int):
    """For fixed ``i``, all triples (i, j, k) with i < j < k: returns
    j, k, D, X, Y where the circumcenter is (X / D, Y / D) in the coordinates of ``P``."""
    n = len(P)
    J, K = np.triu_indices(n - i - 1, k=1)
    J = J + i + 1
    K = K + i + 1
    a = P[i]
    b = P[J] - a
    c = P[K] - a
    bx, by, cx, cy = b[:, 0], b[:, 1], c[:, 0], c[:, 1]
    D = 2 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    X = a[0] * D + (cy * b2 - by * c2)
    Y = a[1] * D + (bx * c2 - cx * b2)
    return J, K, D, X, Y


def _collinear_and_cocircular(S: ColoredSiteSet) -> list[tuple[str, tuple[int, ...]]]:
    coords = S.integer_coords
    n = len(coords)
    out: list[tuple[str, tuple[int, ...]]] = []
    P = translated_int_array(coords, 3, 16)
    if P is None:
        return _collinear_and_cocircular_exact(S)
    keys, owners = [], []
    for i in range(n - 2):
        J, K, D, X, Y = triple_centers(P, i)
        flat = D == 0
        for j, k in zip(J[flat], K[flat]):
            out.append(("collinear", (i, int(j), int(k))))
        ok = ~flat
        D, X, Y, J, K = D[ok], X[ok], Y[ok], J[ok], K[ok]
        sgn = np.sign(D)
        D, X, Y = D * sgn, X * sgn, Y * sgn
        g = np.gcd(np.gcd(np.abs(X), np.abs(Y)), D)
        keys.append(np.stack([X // g, Y // g, D // g], axis=1))
        owners.append(np.stack([np.full(len(J), i), J, K], axis=1))
    if not keys:
        return out
    keys = np.concatenate(keys)
    owners = np.concatenate(owners)
    if len(keys) == 0:
        return out
    order = np.lexsort((keys[:, 2], keys[:, 1], keys[:, 0]))
    ranked = keys[order]
    same = np.all(ranked[1:] == ranked[:-1], axis=1)
    group_id = np.concatenate([[0], np.cumsum(~same)])
    dup = np.zeros(len(order), dtype=bool)
    dup[1:] |= same
    dup[:-1] |= same
    groups: dict[int, list[tuple[int, int, int]]] = {}
    for t in np.nonzero(dup)[0]:
        groups.setdefault(int(group_id[t]), []).append(tuple(int(v) for v in owners[order[t]]))
    pts = S.positions
    for triples in groups.values():
        # Same center: cocircular exactly when the radii agree too.
        by_radius: dict[Fraction, set[int]] = {}
        for t in triples:
            c = circumcircle(*(pts[v] for v in t))
            by_radius.setdefault(c.radius_squared, set()).update(t)
        for ids in by_radius.values():
            if len(ids) >= 4:
                out.append(("cocircular", tuple(sorted(ids))[:4]))
    return out


def _collinear_and_cocircular_exact(S: ColoredSiteSet):
    pts = S.integer_coords
    out = []
    circles: dict[tuple, set[int]] = {}
    for i, j, k in combinations(range(len(pts)), 3):
        try:
            c = circumcircle(pts[i], pts[j], pts[k])
        except CollinearInput:
            out.append(("collinear", (i, j, k)))
            continue
        circles.setdefault((c.center, c.radius_squared), set()).update((i, j, k))
    for ids in circles.values():
        if len(ids) >= 4:
            out.append(("cocircular", tuple(sorted(ids))[:4]))
    return out


def _linf_violations(S: ColoredSiteSet) -> list[tuple[str, tuple[int, ...]]]:
    out = []
    for axis, name in ((0, "shared x"), (1, "shared y")):
        seen: dict[Fraction, int] = {}
        for s in S.sites:
            v = s.position[axis]
            if v in seen:
                out.append((name, (seen[v], s.id)))
            else:
                seen[v] = s.id
    pts = S.positions
    L = S.scale
    coords = S.integer_coords
    for t in combinations(range(S.n), 3):
        try:
            squares = squares_through_three(*(pts[v] for v in t))
        except DegenerateConfiguration:
            out.append(("degenerate square family", t))
            continue
        for sq in squares:
            # compare in integers: every quantity scaled by L and the ball's denominator
            w = lcm(sq.center.x.denominator, sq.center.y.denominator, sq.radius.denominator)
            cx, cy, r = (int(q * L * w) for q in (sq.center.x, sq.center.y, sq.radius))
            extra = [
                v for v, (x, y) in enumerate(coords)
                if v not in t and max(abs(x * w - cx), abs(y * w - cy)) == r
            ]
            if extra:
                out.append(("four on a square", tuple(sorted(t + (extra[0],)))))
    return out


def check_general_position(S: ColoredSiteSet) -> GeneralPositionReport:
    violations = _collinear_and_cocircular(S)
    if S.metric is Metric.LINF:
        violations += _linf_violations(S)
    # Four points on one square are reported once per triple; keep the first.
    unique = list(dict.fromkeys(violations))
    return GeneralPositionReport(unique)
