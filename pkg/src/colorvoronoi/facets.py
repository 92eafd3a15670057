"""Colored j-facet counts of planar and spatial point sets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .errors import MetricMismatch
from .geometry import ColoredSiteSet, Metric, _INT64_LIMIT


@dataclass
class FacetTable:
    """``counts[c, j]`` is the number of c-chromatic j-facets; row 0 is unused."""

    dimension: int
    counts: np.ndarray
    n: int
    m: int

    def __getitem__(self, key) -> int:
        c, j = key
        if j < 0 or j >= self.m or not 1 <= c <= self.dimension:
            return 0
        return int(self.counts[c, j])

    def total(self) -> int:
        return int(self.counts.sum())

    def as_lists(self) -> dict[int, list[int]]:
        return {c: [int(v) for v in self.counts[c]] for c in range(1, self.dimension + 1)}


def _onehot(colors: Sequence[int], m: int) -> np.ndarray:
    out = np.zeros((len(colors), m), dtype=np.int64)
    out[np.arange(len(colors)), list(colors)] = 1
    return out


def _tally(table, chrom, defining, present):
    """Add one facet per row of ``present`` (rows x colors, bool) that avoids its defining colors."""
    rows = np.arange(len(present))
    conflict = np.zeros(len(present), dtype=bool)
    for col in defining:
        conflict |= present[rows, col]
    weight = present.sum(axis=1)
    ok = ~conflict
    np.add.at(table, (chrom[ok], weight[ok]), 1)


def _int_matrix(rows, factor: int, degree: int):
    arr = np.array(rows, dtype=object)
    arr = arr - arr.min(axis=0)
    span = max(int(arr.max()), 1)
    if factor * span**degree < _INT64_LIMIT:
        return arr.astype(np.int64)
    return arr


def facets_2d(S: ColoredSiteSet) -> FacetTable:
    """Both orientations of every site pair, classified by the open half-plane on their left."""
    n, m = S.n, S.m
    P = _int_matrix(S.integer_coords, 4, 2)
    colors = np.array(S.colors)
    onehot = _onehot(S.colors, m)
    table = np.zeros((3, m), dtype=np.int64)
    for i in range(n - 1):
        J = np.arange(i + 1, n)
        d = P[J] - P[i]                      # directions i -> j
        w = P[None, :, :] - P[i]              # all points relative to i
        det = d[:, None, 0] * w[:, :, 1] - d[:, None, 1] * w[:, :, 0]
        chrom = np.where(colors[J] == colors[i], 1, 2)
        ci = np.full(len(J), colors[i])
        for mask in (det > 0, det < 0):
            present = (mask.astype(np.int64) @ onehot) > 0
            _tally(table, chrom, (ci, colors[J]), present)
    return FacetTable(2, table, n, m)


def facets_3d(points: Sequence[tuple[Sequence, int]]) -> FacetTable:
    """Both orientations of every point triple, classified by the open half-space on their positive side."""
    coords = [tuple(Fraction(v) for v in p) for p, _ in points]
    colors_list = [int(c) for _, c in points]
    n = len(coords)
    m = max(colors_list) + 1 if colors_list else 0
    L = lcm(*(v.denominator for p in coords for v in p)) if coords else 1
    P = _int_matrix([[int(v * L) for v in p] for p in coords], 6, 3) if n else None
    colors = np.array(colors_list)
    onehot = _onehot(colors_list, m)
    table = np.zeros((4, max(m, 1)), dtype=np.int64)
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            K = np.arange(j + 1, n)
            b = P[j] - P[i]
            c = P[K] - P[i]
            normal = np.stack(
                [
                    b[1] * c[:, 2] - b[2] * c[:, 1],
                    b[2] * c[:, 0] - b[0] * c[:, 2],
                    b[0] * c[:, 1] - b[1] * c[:, 0],
                ],
                axis=1,
            )
            w = P - P[i]
            det = normal @ w.T
            ck = colors[K]
            chrom = 1 + (colors[i] != colors[j]).astype(np.int64) + (
                (ck != colors[i]) & (ck != colors[j])
            ).astype(np.int64)
            ci = np.full(len(K), colors[i])
            cj = np.full(len(K), colors[j])
            for mask in (det > 0, det < 0):
                present = (mask.astype(np.int64) @ onehot) > 0
                _tally(table, chrom, (ci, cj, ck), present)
    return FacetTable(3, table, n, m)


def lifted(S: ColoredSiteSet) -> list[tuple[tuple[Fraction, Fraction, Fraction], int]]:
    """Sites on the paraboloid z = x^2 + y^2 with their colors."""
    return [((p.x, p.y, p.x * p.x + p.y * p.y), c) for p, c in zip(S.positions, S.colors)]


def euclid_unbounded_tables(S: ColoredSiteSet) -> tuple[FacetTable, FacetTable]:
    """Unbounded-edge tables of the nearest and farthest refined sequences (both equal the 2D facets)."""
    if S.metric is not Metric.EUCLIDEAN:
        raise MetricMismatch("unbounded-edge tables from facets need the Euclidean metric")
    t = facets_2d(S)
    return t, t


def aggregate_U(t: FacetTable, j: int) -> int:
    """Sum over i <= j of t[2, i] + (j - i + 1) t[1, i]; zero for negative j."""
    return sum(t[2, i] + (j - i + 1) * t[1, i] for i in range(j + 1))
