"""
Counting color Voronoi vertices without drawing anything
=========================================================

Every vertex of a nearest or farthest color diagram of any order is the
center of a circle through three sites.  Classifying each circle by how many
colors it touches and how many other colors it swallows gives a table from
which the vertex count of every diagram can be read off, and the tables obey
exact integer identities.
"""

from colorvoronoi.census import Side, census, diagram_vertex_count, verify_identities
from colorvoronoi.facets import facets_2d, facets_3d, lifted
from colorvoronoi.sitefile import generate_sites

# 14 sites in 5 colors, integer coordinates, general position guaranteed
S = generate_sites(14, 5, seed=3)
print(f"{S.n} sites, {S.m} colors")

# v[c][j]: circles through c distinct colors with j other colors strictly inside
t = census(S)
print("nearest side  v[c][j]:")
for c in (1, 2, 3):
    print(f"  c={c}", list(t.v[c]))
print("farthest side vbar[c][j]:")
for c in (1, 2, 3):
    print(f"  c={c}", list(t.vbar[c]))

# vertex count of the order-k diagrams, both sides
for k in range(1, S.m + 1):
    near = diagram_vertex_count(t, k, Side.MIN)
    far = diagram_vertex_count(t, k, Side.MAX)
    print(f"order {k}: nearest {near:3d}  farthest {far:3d}  sum {near + far:3d}"
          f"  (4k(n-k)-2n = {4 * k * (S.n - k) - 2 * S.n})")

# the sum falls short of 4k(n-k)-2n exactly by the correction terms built from
# 1- and 2-chromatic facets of the lifted sites; the report checks every identity
report = verify_identities(S, t, facets_2d(S), facets_3d(lifted(S)))
print(report.format_table())
print("all identities hold:", report.passed)
