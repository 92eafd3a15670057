"""
Building the diagrams order by order
====================================

The builder starts from the ordinary nearest and farthest site diagrams and
advances one order at a time.  Inside each face of the current coarse diagram
it traces the Voronoi diagram of the sites that define the face boundary.  On
the farthest side an unbounded face may need extra sites, which are read off
the nearest side of the next order far away from the sites.
"""

import tempfile
from pathlib import Path

from colorvoronoi.builder import advance_maximal, build_sequences
from colorvoronoi.census import census
from colorvoronoi.crosscheck import builder_records
from colorvoronoi.oracle import validate_diagram
from colorvoronoi.serialize import dumps, loads, sequences_to_document
from colorvoronoi.svg import render
from colorvoronoi.sitefile import generate_sites

S = generate_sites(9, 4, seed=0, bbox=(0, 0, 100, 100))
mins, maxs = build_sequences(S)
print("clip box:", [str(v) for v in mins.clip_box.as_tuple()])

for seq in (mins, maxs):
    for st in seq.stats():
        print(f"{seq.side.value} order {st.order}: coarse V={st.coarse_vertices} E={st.coarse_edges} "
              f"F={st.coarse_faces}, refined V={st.refined_vertices}, new by chromaticity {st.new_vertices}")

# faces of the farthest order-1 diagram whose next-order sites are not all on their boundary
record = []
advance_maximal(maxs.coarse(1), mins.refined(2), record)
for face, boundary, extra in record:
    if not extra <= boundary:
        print(f"face {face}: boundary sites {sorted(boundary)}, extra sites {sorted(extra - boundary)}")

# every vertex agrees with the census, every face with brute-force queries
report = builder_records(S, census(S), (mins, maxs), samples_per_face=8)
print("builder agrees with census and oracle:", report.passed)
r = validate_diagram(mins.refined(2), S, 2)
print(f"order-2 refined nearest diagram: {r.faces} faces, {r.samples} samples, {len(r.mismatches)} mismatches")

# serialize and draw; new edges black, inherited edges gray, same-color edges in their color
doc = loads(dumps(sequences_to_document(S, (mins, maxs))))
out = Path(tempfile.mkdtemp(prefix="colorvoronoi-"))
for side in ("min", "max"):
    for order in (1, 2):
        path = out / f"{side}-order{order}-refined.svg"
        path.write_text(render(doc, order, side, refined=True))
print("pictures written to", out)
