"""Nearest and farthest Delaunay triangles from an exact convex hull of lifted points."""

from __future__ import annotations

from typing import Sequence

from .errors import GeneralPositionViolation


def _orient3d(a, b, c, d) -> int:
    bx, by, bz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
    cx, cy, cz = c[0] - a[0], c[1] - a[1], c[2] - a[2]
    dx, dy, dz = d[0] - a[0], d[1] - a[1], d[2] - a[2]
    return bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) + bz * (cx * dy - cy * dx)


def _orient2d(a, b, c) -> int:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def lifted_hull(points: Sequence[tuple[int, int]]):
    """Return (nearest, farthest) Delaunay triangles as counterclockwise index triples.

    The points are lifted to z = x^2 + y^2; the lower hull projects to the
    Delaunay triangulation and the upper hull to the farthest-point one.
    """
    n = len(points)
    if n < 3:
        return [], []
    if n == 3:
        o = _orient2d(*points)
        if o == 0:
            raise GeneralPositionViolation([("collinear", (0, 1, 2))])
        tri = (0, 1, 2) if o > 0 else (0, 2, 1)
        return [tri], [tri]
    P = [(x, y, x * x + y * y) for x, y in points]

    seed = None
    for d in range(3, n):
        if _orient3d(P[0], P[1], P[2], P[d]) != 0:
            seed = d
            break
    if seed is None:
        raise GeneralPositionViolation([("coplanar lift", (0, 1, 2, 3))])
    quad = (0, 1, 2, seed)
    faces: dict[int, tuple[int, int, int]] = {}
    edge_face: dict[tuple[int, int], int] = {}
    counter = 0

    def add(a, b, c):
        nonlocal counter
        faces[counter] = (a, b, c)
        edge_face[(a, b)] = counter
        edge_face[(b, c)] = counter
        edge_face[(c, a)] = counter
        counter += 1

    for skip in range(4):
        a, b, c = (quad[t] for t in range(4) if t != skip)
        other = quad[skip]
        if _orient3d(P[a], P[b], P[c], P[other]) > 0:
            a, b = b, a
        add(a, b, c)

    for p in range(3, n):
        if p == seed:
            continue
        pp = P[p]
        visible = set()
        for fid, (a, b, c) in faces.items():
            s = _orient3d(P[a], P[b], P[c], pp)
            if s > 0:
                visible.add(fid)
            elif s == 0:
                raise GeneralPositionViolation([("coplanar lift", (a, b, c, p))])
        if not visible:
            raise GeneralPositionViolation([("interior lifted point", (p,))])
        horizon = []
        for fid in visible:
            a, b, c = faces[fid]
            for u, v in ((a, b), (b, c), (c, a)):
                if edge_face[(v, u)] not in visible:
                    horizon.append((u, v))
        for fid in visible:
            a, b, c = faces.pop(fid)
            for u, v in ((a, b), (b, c), (c, a)):
                if edge_face.get((u, v)) == fid:
                    del edge_face[(u, v)]
        for u, v in horizon:
            add(u, v, p)

    nearest, farthest = [], []
    for a, b, c in faces.values():
        o = _orient2d(points[a], points[b], points[c])
        if o < 0:
            nearest.append((a, c, b))
        elif o > 0:
            farthest.append((a, b, c))
        else:
            raise GeneralPositionViolation([("collinear", (a, b, c))])
    return sorted(nearest), sorted(farthest)
