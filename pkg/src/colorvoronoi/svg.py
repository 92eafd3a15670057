"""SVG rendering of one diagram from a loaded diagram document.

Styling: new 2-chromatic edges black, old 2-chromatic edges gray,
1-chromatic edges in the color of their sites, vertices that are new at
this order as small squares, sites as filled disks in their color.
"""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import quoteattr

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
)


def _color(c: int) -> str:
    return PALETTE[c % len(PALETTE)]


def _num(v) -> str:
    return f"{float(v):.6g}"


def render(document: dict, order: int = 1, side: str = "min", refined: bool = False,
           show_old_edges: bool = True) -> str:
    seq = next((s for s in document["sequences"] if s["side"] == side), None)
    if seq is None:
        raise KeyError(f"no {side} sequence in the document")
    entry = next((o for o in seq["orders"] if o["order"] == order), None)
    if entry is None:
        raise KeyError(f"order {order} not in the {side} sequence")
    diagram = entry["refined" if refined else "coarse"]
    x0, y0, x1, y1 = (Fraction(v) for v in document["clip_box"])
    w, h = x1 - x0, y1 - y0
    size = max(w, h)
    stroke = size / 400
    sites = document["sites"]
    verts = diagram["vertices"]

    def xy(v):
        # flip y so that the picture has the usual orientation
        return Fraction(v["x"]), y0 + y1 - Fraction(v["y"])

    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_num(x0)} {_num(y0)} {_num(w)} {_num(h)}" width="800" '
        f'height="{_num(800 * h / w)}">',
        f'<title>{side} order {order} {"refined" if refined else "coarse"}</title>',
        f'<rect class="box" x="{_num(x0)}" y="{_num(y0)}" width="{_num(w)}" height="{_num(h)}" '
        f'fill="white" stroke="black" stroke-width="{_num(stroke)}"/>',
    ]
    for he in diagram["half_edges"]:
        if he["box"] or he["id"] > he["twin"]:
            continue
        a = xy(verts[he["origin"]])
        b = xy(verts[diagram["half_edges"][he["twin"]]["origin"]])
        if he["chromaticity"] == 1:
            cls, color = "edge mono", _color(sites[he["sites"][0]]["color"])
        elif he["is_new"]:
            cls, color = "edge new", "black"
        else:
            if not show_old_edges:
                continue
            cls, color = "edge old", "gray"
        out.append(
            f'<line class={quoteattr(cls)} x1="{_num(a[0])}" y1="{_num(a[1])}" '
            f'x2="{_num(b[0])}" y2="{_num(b[1])}" stroke="{color}" stroke-width="{_num(stroke)}"/>'
        )
    half = stroke * 3
    for v in verts:
        if v["on_box"] or not v.get("new"):
            continue
        x, y = xy(v)
        out.append(
            f'<rect class="vertex" x="{_num(x - half)}" y="{_num(y - half)}" '
            f'width="{_num(2 * half)}" height="{_num(2 * half)}" fill="black"/>'
        )
    for s in sites:
        x, y = Fraction(s["x"]), y0 + y1 - Fraction(s["y"])
        out.append(
            f'<circle class="site" cx="{_num(x)}" cy="{_num(y)}" r="{_num(stroke * 4)}" '
            f'fill="{_color(s["color"])}"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
