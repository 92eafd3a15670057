"""Builder output against the census and the point oracle, as verification records."""

from __future__ import annotations

from .census import CensusTable, VerificationReport, diagram_vertex_count, refined_vertex_count
from .oracle import validate_diagram


def coarse_cells(k: int) -> set[tuple[int, int]]:
    """(chromaticity, weight) cells whose census entries are vertices of the coarse order-k diagram."""
    return {(3, k - 1), (3, k - 2), (2, k - 1)}


def builder_records(S, t: CensusTable, sequences, samples_per_face: int = 0) -> VerificationReport:
    report = VerificationReport()
    for seq in sequences:
        if seq is None:
            continue
        side = seq.side
        tag = side.value
        for o in seq.orders:
            k = o.order
            report.add(f"builder_coarse_{tag}", (k,), o.stats.coarse_vertices,
                       diagram_vertex_count(t, k, side))
            report.add(f"builder_refined_{tag}", (k,), o.stats.refined_vertices,
                       refined_vertex_count(t, k, side))
            for c in (1, 2, 3):
                report.add(f"builder_new_{tag}", (k, c), o.stats.new_vertices.get(c, 0),
                           t.cell(c, k - 1, side))
            expected = set(t.centers(side, coarse_cells(k)))
            got = o.coarse.vertex_points()
            report.add(f"builder_points_{tag}", (k,), len(expected ^ got), 0)
            if samples_per_face:
                bad = 0
                for d in (o.refined, o.coarse):
                    bad += len(validate_diagram(d, S, k, side, samples_per_face).mismatches)
                report.add(f"oracle_mismatches_{tag}", (k,), bad, 0)
    return report


def total_records(S, sequences) -> VerificationReport:
    """Builder vertex totals per order against 4k(n - k) - 2n; exact only when every color is a single site."""
    report = VerificationReport()
    mins, maxs = sequences
    n = S.n
    for k in range(1, min(len(mins.orders), len(maxs.orders)) + 1):
        if k >= S.m:
            break
        total = mins.orders[k - 1].stats.coarse_vertices + maxs.orders[k - 1].stats.coarse_vertices
        report.add("builder_total", (k,), total, 4 * k * (n - k) - 2 * n, "=" if S.m == n else "<=")
    return report

