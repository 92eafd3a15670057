"""Deterministic JSON documents for diagram sequences, and their loader."""

from __future__ import annotations

import json
from fractions import Fraction

from .dcel import TRIPLE, PlanarSubdivision
from .geometry import ColoredSiteSet, format_rational

FORMAT = "colorvoronoi-diagrams/1"


class SchemaError(ValueError):
    """A diagram document does not follow the expected layout."""


def diagram_to_dict(d: PlanarSubdivision, new_keys=frozenset()) -> dict:
    """Vertices sorted by (x, y), half-edges by (origin, destination), faces by label.

    ``new_keys`` holds the vertex keys that first appear at this order.
    """
    points = [d.vertex_point(v) for v in range(d.n_vertices)]
    vorder = sorted(range(d.n_vertices), key=lambda v: points[v])
    vid = {v: i for i, v in enumerate(vorder)}
    H = len(d.origin)
    horder = sorted(range(H), key=lambda h: (vid[d.origin[h]], vid[d.dest(h)]))
    hid = {h: i for i, h in enumerate(horder)}

    def face_key(f):
        lab = d.faces[f].label
        if f == 0:
            return (0, (), -1, 0)
        site = -1 if lab.associated_site is None else lab.associated_site
        first = min(hid[h] for h in d.cycle(d.faces[f].edge))
        return (1, tuple(sorted(lab.colors)), site, first)

    forder = sorted(range(len(d.faces)), key=face_key)
    fid = {f: i for i, f in enumerate(forder)}
    vertices = []
    for v in vorder:
        key = d.keys[v]
        p = points[v]
        vertices.append({
            "id": vid[v],
            "x": format_rational(p.x),
            "y": format_rational(p.y),
            "on_box": key[0] != TRIPLE,
            "new": key in new_keys,
            "sites": list(key[1:]) if key[0] == TRIPLE else [],
        })
    half_edges = []
    for h in horder:
        s = d.segments[h >> 1]
        sites = d.sites(h)
        half_edges.append({
            "id": hid[h],
            "origin": vid[d.origin[h]],
            "twin": hid[h ^ 1],
            "next": hid[d.next[h]],
            "prev": hid[d.prev[h]],
            "face": fid[d.face_of[h]],
            "box": d.is_box(h),
            "chromaticity": s.chromaticity,
            "is_new": s.is_new,
            "sites": None if sites is None else list(sites),
        })
    faces = []
    for f in forder:
        rec = d.faces[f]
        lab = rec.label
        faces.append({
            "id": fid[f],
            "outside": f == 0,
            "colors": None if lab is None else sorted(lab.colors),
            "associated_site": None if lab is None else lab.associated_site,
            "edge": hid[rec.edge],
            "holes": sorted(hid[h] for h in rec.holes),
        })
    return {"vertices": vertices, "half_edges": half_edges, "faces": faces}


def sites_to_list(S: ColoredSiteSet) -> list:
    return [
        {"id": s.id, "x": format_rational(s.position.x), "y": format_rational(s.position.y), "color": s.color}
        for s in S.sites
    ]


def sequences_to_document(S: ColoredSiteSet, sequences) -> dict:
    box = None
    out = []
    for seq in sequences:
        if seq is None:
            continue
        box = seq.clip_box
        orders = []
        previous = frozenset()
        for o in seq.orders:
            keys = {k for k in o.refined.keys if k[0] == TRIPLE}
            new = frozenset(keys - previous)
            st = o.stats
            orders.append({
                "order": o.order,
                "stats": {
                    "refined_vertices": st.refined_vertices,
                    "refined_edges": st.refined_edges,
                    "refined_faces": st.refined_faces,
                    "coarse_vertices": st.coarse_vertices,
                    "coarse_edges": st.coarse_edges,
                    "coarse_faces": st.coarse_faces,
                    "new_vertices": {str(c): n for c, n in sorted(st.new_vertices.items())},
                },
                "refined": diagram_to_dict(o.refined, new),
                "coarse": diagram_to_dict(o.coarse, new),
            })
            previous = frozenset(keys)
        out.append({"side": seq.side.value, "orders": orders})
    return {
        "format": FORMAT,
        "sites": sites_to_list(S),
        "clip_box": [format_rational(v) for v in box.as_tuple()] if box else None,
        "sequences": out,
    }


def dumps(document: dict) -> str:
    return json.dumps(document, indent=1, sort_keys=False) + "\n"


def _require(cond, message):
    if not cond:
        raise SchemaError(message)


def _rational(text, where) -> Fraction:
    try:
        return Fraction(text)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SchemaError(f"{where}: not a rational number: {text!r}") from None


def check_diagram(d: dict, where: str = "diagram"):
    """Structural checks: keys present, links in range, twin and next/prev consistent."""
    _require(isinstance(d, dict), f"{where}: not an object")
    for key in ("vertices", "half_edges", "faces"):
        _require(isinstance(d.get(key), list), f"{where}: missing list {key!r}")
    V, H, F = len(d["vertices"]), len(d["half_edges"]), len(d["faces"])
    for i, v in enumerate(d["vertices"]):
        _require(v.get("id") == i, f"{where}: vertex ids must be 0..{V - 1} in order")
        _rational(v.get("x"), f"{where} vertex {i}")
        _rational(v.get("y"), f"{where} vertex {i}")
    for i, h in enumerate(d["half_edges"]):
        _require(h.get("id") == i, f"{where}: half-edge ids must be 0..{H - 1} in order")
        for link, bound in (("origin", V), ("twin", H), ("next", H), ("prev", H), ("face", F)):
            _require(isinstance(h.get(link), int) and 0 <= h[link] < bound,
                     f"{where} half-edge {i}: bad {link}")
    hs = d["half_edges"]
    for i, h in enumerate(hs):
        _require(hs[h["twin"]]["twin"] == i, f"{where} half-edge {i}: twin is not an involution")
        _require(hs[h["next"]]["prev"] == i, f"{where} half-edge {i}: next/prev disagree")
        _require(hs[h["next"]]["origin"] == hs[h["twin"]]["origin"],
                 f"{where} half-edge {i}: next does not start where this one ends")
    for i, f in enumerate(d["faces"]):
        _require(f.get("id") == i, f"{where}: face ids must be 0..{F - 1} in order")
        _require(isinstance(f.get("edge"), int) and 0 <= f["edge"] < H, f"{where} face {i}: bad edge")


def loads(text: str) -> dict:
    """Parse and check a diagram document; raises :class:`SchemaError`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not JSON: {exc}") from None
    _require(isinstance(doc, dict) and doc.get("format") == FORMAT, f"format must be {FORMAT!r}")
    _require(isinstance(doc.get("sites"), list), "missing site list")
    for s in doc["sites"]:
        _rational(s.get("x"), "site")
        _rational(s.get("y"), "site")
        _require(isinstance(s.get("color"), int), "site color must be an integer")
    _require(isinstance(doc.get("clip_box"), list) and len(doc["clip_box"]) == 4, "bad clip_box")
    for v in doc["clip_box"]:
        _rational(v, "clip_box")
    _require(isinstance(doc.get("sequences"), list), "missing sequences")
    for seq in doc["sequences"]:
        _require(seq.get("side") in ("min", "max"), "side must be 'min' or 'max'")
        for o in seq.get("orders", []):
            _require(isinstance(o.get("order"), int), "order must be an integer")
            for kind in ("refined", "coarse"):
                check_diagram(o.get(kind), f"{seq['side']} order {o['order']} {kind}")
    return doc
