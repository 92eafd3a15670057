"""Plain-text site files and the seeded random instance generator."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import SiteFileError
from .geometry import ColoredSiteSet, Metric, check_general_position, format_rational, parse_rational


def parse_site_file(text: str, metric=Metric.EUCLIDEAN) -> ColoredSiteSet:
    """One ``x y color`` record per line; ``#`` starts a comment line."""
    points, colors = [], []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise SiteFileError(f"expected 'x y color', got {len(parts)} fields", lineno)
        try:
            x, y = parse_rational(parts[0]), parse_rational(parts[1])
        except (ValueError, ZeroDivisionError) as exc:
            raise SiteFileError(f"bad coordinate: {exc}", lineno) from None
        if not parts[2].isdigit():
            raise SiteFileError(f"color must be a non-negative integer, got {parts[2]!r}", lineno)
        if (x, y) in seen:
            raise SiteFileError(f"duplicate site (also on line {seen[(x, y)]})", lineno)
        seen[(x, y)] = lineno
        points.append((x, y))
        colors.append(int(parts[2]))
    if not points:
        raise SiteFileError("no sites")
    return ColoredSiteSet.from_points(points, colors, metric)


def format_site_file(S: ColoredSiteSet, header: Sequence[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    for s in S.sites:
        lines.append(f"{format_rational(s.position.x)} {format_rational(s.position.y)} {s.color}")
    return "\n".join(lines) + "\n"


def generate_sites(n: int, m: int, seed: int = 0, metric=Metric.EUCLIDEAN,
                   bbox=(0, 0, 1000, 1000), max_rounds: int = 500) -> ColoredSiteSet:
    """``n`` integer sites in ``bbox`` with colors covering ``0..m-1``, in general position.

    Offending sites are redrawn until the general-position check passes; the
    whole process depends only on the arguments.
    """
    if not n >= m >= 1:
        raise ValueError(f"need n >= m >= 1, got n={n}, m={m}")
    metric = Metric(metric)
    x0, y0, x1, y1 = (int(v) for v in bbox)
    width, height = x1 - x0 + 1, y1 - y0 + 1
    if width * height < n or (metric is Metric.LINF and min(width, height) < n):
        raise ValueError("bounding box too small for the requested number of sites")
    rng = np.random.default_rng(seed)
    colors = np.concatenate([np.arange(m), rng.integers(0, m, n - m)])
    colors = [int(c) for c in rng.permutation(colors)]

    if metric is Metric.LINF:
        xs = [int(v) for v in rng.choice(width, n, replace=False) + x0]
        ys = [int(v) for v in rng.choice(height, n, replace=False) + y0]
        pts = list(zip(xs, ys))
    else:
        flat = rng.choice(width * height, n, replace=False)
        pts = [(int(v % width) + x0, int(v // width) + y0) for v in flat]

    for _ in range(max_rounds):
        S = ColoredSiteSet.from_points(pts, colors, metric)
        report = check_general_position(S)
        if report.ok:
            return S
        bad = sorted({max(ids) for _, ids in report.violations})
        for i in bad:
            while True:
                if metric is Metric.LINF:
                    used_x = {p[0] for p in pts}
                    used_y = {p[1] for p in pts}
                    cand = (int(rng.integers(x0, x1 + 1)), int(rng.integers(y0, y1 + 1)))
                    if cand[0] in used_x or cand[1] in used_y:
                        continue
                else:
                    cand = (int(rng.integers(x0, x1 + 1)), int(rng.integers(y0, y1 + 1)))
                    if cand in pts:
                        continue
                pts[i] = cand
                break
    raise ValueError("could not reach general position; enlarge the bounding box")
