"""Diagram-vertex census through site triples and the exact identities it satisfies."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import GeneralPositionViolation
from .facets import FacetTable, aggregate_U, facets_2d
from .geometry import (
    Circle,
    ColoredSiteSet,
    Location,
    Metric,
    Point2,
    SquareBall,
    check_general_position,
    classify_point,
    squares_through_three,
    translated_int_array,
)


class Side(str, Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class CensusEntry:
    triple: tuple[int, int, int]
    ball: Circle | SquareBall
    side: Side
    chromaticity: int
    weight: int


@dataclass
class CensusTable:
    """``v[c, j]`` / ``vbar[c, j]``: c-chromatic weight-j vertices on the nearest / farthest side."""

    v: np.ndarray
    vbar: np.ndarray
    metric: Metric
    n: int
    m: int
    entries: list[CensusEntry] = field(default_factory=list)

    def cell(self, c: int, j: int, side: Side = Side.MIN) -> int:
        if j < 0 or j >= self.m or not 1 <= c <= 3:
            return 0
        table = self.v if side is Side.MIN else self.vbar
        return int(table[c, j])

    def centers(self, side: Side, cells) -> list[Point2]:
        """Ball centers of entries on ``side`` whose (c, j) is in ``cells``."""
        cells = set(cells)
        return [
            e.ball.center
            for e in self.entries
            if e.side is side and (e.chromaticity, e.weight) in cells
        ]


def _empty_table(S: ColoredSiteSet) -> CensusTable:
    z = np.zeros((4, S.m), dtype=np.int64)
    return CensusTable(z, z.copy(), S.metric, S.n, S.m)


def _record(table: CensusTable, entry: CensusEntry):
    target = table.v if entry.side is Side.MIN else table.vbar
    target[entry.chromaticity, entry.weight] += 1
    table.entries.append(entry)


def census(S: ColoredSiteSet, check: bool = True) -> CensusTable:
    """Every ball through three sites, classified per side by chromaticity and weight."""
    if check:
        report = check_general_position(S)
        if not report.ok:
            raise GeneralPositionViolation(report.violations)
    if S.metric is Metric.LINF:
        return _census_linf(S)
    return _census_euclidean(S)


def _census_euclidean(S: ColoredSiteSet) -> CensusTable:
    table = _empty_table(S)
    n, m = S.n, S.m
    if n < 3:
        return table
    coords = S.integer_coords
    P = translated_int_array(coords, 4, 32)
    if P is None:
        P = np.array(coords, dtype=object)
        P = P - P.min(axis=0)
    offset = [min(c[0] for c in coords), min(c[1] for c in coords)]
    L = S.scale
    colors = np.array(S.colors)
    onehot = np.zeros((n, m), dtype=np.int64)
    onehot[np.arange(n), colors] = 1
    for i in range(n - 2):
        w = P - P[i]
        w2 = w[:, 0] * w[:, 0] + w[:, 1] * w[:, 1]
        for j in range(i + 1, n - 1):
            K = np.arange(j + 1, n)
            bx, by = w[j]
            cx, cy = w[K, 0], w[K, 1]
            D = 2 * (bx * cy - by * cx)
            b2 = bx * bx + by * by
            c2 = cx * cx + cy * cy
            Ux = cy * b2 - by * c2
            Uy = bx * c2 - cx * b2
            # D times the power of each site with respect to each circle.
            f = D[:, None] * w2[None, :] - 2 * (Ux[:, None] * w[None, :, 0] + Uy[:, None] * w[None, :, 1])
            power_sign = np.sign(f) * np.sign(D)[:, None]
            ck = colors[K]
            for side, mask in ((Side.MIN, power_sign < 0), (Side.MAX, power_sign > 0)):
                present = (mask.astype(np.int64) @ onehot) > 0
                rows = np.arange(len(K))
                conflict = present[rows, colors[i]] | present[rows, colors[j]] | present[rows, ck]
                weight = present.sum(axis=1)
                for r in np.nonzero(~conflict)[0]:
                    k = int(K[r])
                    d = int(D[r])
                    ux, uy = Fraction(int(Ux[r]), d), Fraction(int(Uy[r]), d)
                    center = Point2(
                        (int(P[i][0]) + offset[0] + ux) / L, (int(P[i][1]) + offset[1] + uy) / L
                    )
                    ball = Circle(center, (ux * ux + uy * uy) / (L * L))
                    chrom = len({int(colors[i]), int(colors[j]), int(ck[r])})
                    _record(table, CensusEntry((i, j, k), ball, side, chrom, int(weight[r])))
    return table


def _census_linf(S: ColoredSiteSet) -> CensusTable:
    table = _empty_table(S)
    pts, colors = S.positions, S.colors
    for t in combinations(range(S.n), 3):
        defining = {colors[v] for v in t}
        for ball in squares_through_three(*(pts[v] for v in t)):
            inside, outside = set(), set()
            for v in range(S.n):
                loc = classify_point(ball, pts[v])
                if loc is Location.INSIDE:
                    inside.add(colors[v])
                elif loc is Location.OUTSIDE:
                    outside.add(colors[v])
            for side, hit in ((Side.MIN, inside), (Side.MAX, outside)):
                if not hit & defining:
                    _record(table, CensusEntry(t, ball, side, len(defining), len(hit)))
    return table


def diagram_vertex_count(t: CensusTable, k: int, side: Side) -> int:
    """Vertices of the coarse order-k diagram on ``side``."""
    return t.cell(3, k - 1, side) + t.cell(3, k - 2, side) + t.cell(2, k - 1, side)


def refined_vertex_count(t: CensusTable, k: int, side: Side) -> int:
    """Vertices of the refined order-k diagram on ``side``."""
    return (
        t.cell(3, k - 1, side) + t.cell(3, k - 2, side) + t.cell(3, k - 3, side)
        + t.cell(2, k - 1, side) + t.cell(2, k - 2, side) + t.cell(1, k - 1, side)
    )


@dataclass(frozen=True)
class VerificationRecord:
    name: str
    params: tuple
    lhs: int
    rhs: int
    relation: str

    @property
    def passed(self) -> bool:
        if self.relation == "=":
            return self.lhs == self.rhs
        if self.relation == "<=":
            return self.lhs <= self.rhs
        return self.lhs >= self.rhs


@dataclass
class VerificationReport:
    records: list[VerificationRecord] = field(default_factory=list)

    def add(self, name, params, lhs, rhs, relation="="):
        self.records.append(VerificationRecord(name, tuple(params), int(lhs), int(rhs), relation))

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list[VerificationRecord]:
        return [r for r in self.records if not r.passed]

    def extend(self, other: "VerificationReport"):
        self.records.extend(other.records)

    def format_table(self) -> str:
        lines = [f"{'identity':<28} {'params':<10} {'lhs':>10} {'rel':^4} {'rhs':>10}  result"]
        for r in self.records:
            params = ",".join(str(p) for p in r.params)
            verdict = "PASS" if r.passed else "FAIL"
            lines.append(
                f"{r.name:<28} {params:<10} {r.lhs:>10} {r.relation:^4} {r.rhs:>10}  {verdict}"
            )
        return "\n".join(lines)


def _aggregate_V(t: CensusTable, j: int, side: Side) -> int:
    if j < 0:
        return 0
    return t.cell(3, j, side) + sum(
        t.cell(2, i, side) + (j - i + 1) * t.cell(1, i, side) for i in range(j + 1)
    )


def _euclidean_records(S, t: CensusTable, f2: FacetTable, f3: FacetTable, report):
    n, m = S.n, S.m
    U = lambda j: aggregate_U(f2, j)  # noqa: E731  nearest and farthest tables coincide
    for k in range(1, m):
        lhs = diagram_vertex_count(t, k, Side.MIN) + diagram_vertex_count(t, k, Side.MAX)
        rhs = (
            4 * k * (n - k) - 2 * n
            - 2 * sum(f3[2, i] for i in range(k - 1))
            - sum((2 * k - 2 * i - 1) * f3[1, i] for i in range(k))
        )
        report.add("euclidean_total", (k,), lhs, rhs)
    for k in range(1, m):
        rhs = (
            2 * k * (2 * n - k) - 2 * n
            - 2 * sum(t.cell(2, i) for i in range(k - 1))
            - sum((2 * k - 2 * i - 1) * t.cell(1, i) for i in range(k))
            - U(k - 1) - U(k - 2)
        )
        report.add("nearest_side_formula", (k,), diagram_vertex_count(t, k, Side.MIN), rhs)
        rhs = (
            U(k - 1) + U(k - 2) - 2 * k * k
            - 2 * sum(t.cell(2, i, Side.MAX) for i in range(k - 1))
            - sum((2 * k - 2 * i - 1) * t.cell(1, i, Side.MAX) for i in range(k))
        )
        report.add("farthest_side_formula", (k,), diagram_vertex_count(t, k, Side.MAX), rhs)
    for c in (1, 2, 3):
        for j in range(m):
            lhs = t.cell(c, j, Side.MIN) + t.cell(c, j, Side.MAX)
            report.add("vertex_facet_lifting", (c, j), lhs, f3[c, j])
    for j in range(m - 1):
        report.add("uv_sum_nearest", (j,), _aggregate_V(t, j, Side.MIN) + U(j),
                   (j + 1) * (2 * n - j - 2))
        report.add("uv_difference_farthest", (j,), _aggregate_V(t, j, Side.MAX) - U(j),
                   -(j + 1) * (j + 2))
        lhs = f3[3, j] + sum(f3[2, i] + (j - i + 1) * f3[1, i] for i in range(j + 1))
        report.add("convex_3d_facets", (j,), lhs, 2 * (j + 1) * (n - j - 2))
    for k in range(m - 1):
        x = aggregate_U(f2, k)
        report.add("facet_sandwich_lower", (k,), x, (k + 1) * (k + 2), ">=")
        report.add("facet_sandwich_upper", (k,), x, (k + 1) * (2 * n - k - 2), "<=")


def subset_condition_records(S: ColoredSiteSet, subsets: int = 20, seed: int = 0) -> VerificationReport:
    """Vertex / unbounded-edge relations of nearest and farthest diagrams on random color-complete subsets."""
    report = VerificationReport()
    rng = np.random.default_rng(seed)
    classes = S.color_classes
    drawn = 0
    while drawn < subsets:
        chosen = [c for c in range(S.m) if rng.random() < 0.5]
        ids = [s for c in chosen for s in classes[c]]
        if len(ids) < 2:
            continue
        sub = S.subset(ids)
        t = census(sub, check=False)
        u0 = sum(facets_2d(sub)[c, 0] for c in (1, 2))
        r = len(ids)
        report.add("subset_v1", (drawn, r), refined_vertex_count(t, 1, Side.MIN), 2 * r - 2 - u0)
        report.add("subset_v2", (drawn, r), refined_vertex_count(t, 1, Side.MAX), u0 - 2)
        drawn += 1
    return report


def verify_identities(
    S: ColoredSiteSet,
    t: CensusTable,
    facets2d: FacetTable | None = None,
    facets3d_of_lift: FacetTable | None = None,
    subsets: int = 20,
    seed: int = 0,
) -> VerificationReport:
    """One record per identity instance; Euclidean gives equalities, L-infinity gives bounds."""
    report = VerificationReport()
    n, m = S.n, S.m
    if S.metric is Metric.EUCLIDEAN:
        _euclidean_records(S, t, facets2d, facets3d_of_lift, report)
        if subsets:
            report.extend(subset_condition_records(S, subsets, seed))
        return report
    for k in range(1, m):
        total = 4 * k * (n - k) - 2 * n
        near = diagram_vertex_count(t, k, Side.MIN)
        far = diagram_vertex_count(t, k, Side.MAX)
        report.add("linf_nearest_bound", (k,), near, min(total, 4 * (n - k) ** 2), "<=")
        report.add("linf_farthest_bound", (k,), far, min(total, 2 * k * k), "<=")
        report.add("linf_total_bound", (k,), near + far, total, "<=")
    return report
