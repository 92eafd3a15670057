import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colorvoronoi.delaunay import lifted_hull
from colorvoronoi.errors import GeneralPositionViolation
from colorvoronoi.geometry import orient2d
from oracles import circumcenter, random_instance


def _hull_size(pts):
    n = len(pts)
    count = 0
    for i in range(n):
        for j in range(n):
            if i != j and all(orient2d(pts[i], pts[j], pts[k]) > 0 for k in range(n) if k not in (i, j)):
                count += 1
    return count


def _radius2(c, p):
    return (p[0] - c[0]) ** 2 + (p[1] - c[1]) ** 2


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(4, 14))
def test_empty_and_full_circles(seed, n):
    pts, _ = random_instance(np.random.default_rng(seed), n, 1)
    nearest, farthest = lifted_hull(pts)
    h = _hull_size(pts)
    assert len(nearest) == 2 * n - 2 - h
    assert len(farthest) == h - 2
    for tri in nearest + farthest:
        assert orient2d(*(pts[i] for i in tri)) > 0
    for tri in nearest:
        c = circumcenter(*(pts[i] for i in tri))
        r = _radius2(c, pts[tri[0]])
        assert all(_radius2(c, p) > r for k, p in enumerate(pts) if k not in tri)
    for tri in farthest:
        c = circumcenter(*(pts[i] for i in tri))
        r = _radius2(c, pts[tri[0]])
        assert all(_radius2(c, p) < r for k, p in enumerate(pts) if k not in tri)


def test_small_inputs():
    assert lifted_hull([(0, 0)]) == ([], [])
    assert lifted_hull([(0, 0), (1, 0)]) == ([], [])
    near, far = lifted_hull([(0, 0), (0, 3), (4, 0)])
    assert near == far and len(near) == 1
    assert orient2d(*[[(0, 0), (0, 3), (4, 0)][i] for i in near[0]]) > 0


def test_degenerate_inputs_raise():
    with pytest.raises(GeneralPositionViolation):
        lifted_hull([(0, 0), (1, 0), (2, 0), (3, 0)])
    with pytest.raises(GeneralPositionViolation):
        lifted_hull([(1, 0), (0, 1), (-1, 0), (0, -1)])


def test_convex_quadrilateral_uses_opposite_diagonals():
    pts = [(0, 0), (10, 0), (11, 9), (1, 10)]
    near, far = lifted_hull(pts)
    assert len(near) == 2 and len(far) == 2

    def diagonal(tris):
        shared = set(tris[0]) & set(tris[1])
        assert len(shared) == 2
        return frozenset(shared)

    assert diagonal(near) != diagonal(far)
