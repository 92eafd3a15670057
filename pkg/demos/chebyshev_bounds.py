"""
Color diagrams under the maximum norm
=====================================

With square balls the exact identities no longer hold, but the vertex counts
stay below closed-form bounds.  Here the census runs on random instances and
the slack against each bound is printed.
"""

from colorvoronoi.census import Side, census, diagram_vertex_count
from colorvoronoi.geometry import Metric, squares_through_three
from colorvoronoi.sitefile import generate_sites

# three points with distinct x and y coordinates lie on at most one square
print(squares_through_three((0, 0), (4, 1), (2, 3)))

for seed in range(3):
    S = generate_sites(16, 6, seed=seed, metric=Metric.LINF)
    t = census(S)
    n = S.n
    print(f"instance {seed}: n={n} m={S.m}")
    for k in range(1, S.m):
        near = diagram_vertex_count(t, k, Side.MIN)
        far = diagram_vertex_count(t, k, Side.MAX)
        total = 4 * k * (n - k) - 2 * n
        print(f"  k={k}: nearest {near:3d} <= {min(total, 4 * (n - k) ** 2):3d}   "
              f"farthest {far:3d} <= {min(total, 2 * k * k):3d}")
