"""Command line: gen | census | facets | build | verify | svg.

Exit codes: 0 success (all identities hold), 1 an identity failed,
2 usage, input or general-position error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .builder import build_sequences
from .census import Side, census, verify_identities
from .crosscheck import builder_records, total_records
from .errors import ColorVoronoiError, GeneralPositionViolation
from .facets import facets_2d, facets_3d, lifted
from .geometry import Metric, check_general_position
from .serialize import SchemaError, dumps, loads, sequences_to_document
from .sitefile import format_site_file, generate_sites, parse_site_file
from .svg import render


class UsageError(Exception):
    pass


def _write(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _load_sites(path: str, metric: str, check: bool = True):
    try:
        text = Path(path).read_text() if path != "-" else sys.stdin.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    S = parse_site_file(text, Metric(metric))
    if check:
        report = check_general_position(S)
        if not report.ok:
            raise GeneralPositionViolation(report.violations)
    return S


def _table(name: str, rows, m: int) -> str:
    head = f"{name:<8}" + "".join(f"{j:>8}" for j in range(m))
    lines = [head]
    for label, values in rows:
        lines.append(f"{label:<8}" + "".join(f"{int(v):>8}" for v in values))
    return "\n".join(lines)


def cmd_gen(args) -> int:
    try:
        S = generate_sites(args.n, args.m, args.seed, args.metric, tuple(args.bbox))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    header = [f"n={args.n} m={args.m} metric={args.metric} seed={args.seed} bbox={' '.join(map(str, args.bbox))}"]
    _write(format_site_file(S, header), args.out)
    return 0


def cmd_census(args) -> int:
    S = _load_sites(args.sites, args.metric)
    t = census(S, check=False)
    text = "\n\n".join([
        _table("v[c][j]", [(f"c={c}", t.v[c]) for c in (1, 2, 3)], S.m),
        _table("vbar", [(f"c={c}", t.vbar[c]) for c in (1, 2, 3)], S.m),
    ])
    _write(text + "\n", args.out)
    return 0


def cmd_facets(args) -> int:
    S = _load_sites(args.sites, args.metric)
    f2 = facets_2d(S)
    f3 = facets_3d(lifted(S))
    text = "\n\n".join([
        _table("e2[c][j]", [(f"c={c}", f2.counts[c]) for c in (1, 2)], S.m),
        _table("e3lift", [(f"c={c}", f3.counts[c]) for c in (1, 2, 3)], S.m),
    ])
    _write(text + "\n", args.out)
    return 0


def _sides(side: str):
    return (Side.MIN, Side.MAX) if side == "both" else (Side(side),)


def cmd_build(args) -> int:
    S = _load_sites(args.sites, args.metric)
    if S.metric is not Metric.EUCLIDEAN:
        raise UsageError("the diagram builder is Euclidean only; use 'census' for L-infinity counts")
    k = args.k or S.m
    if not 1 <= k <= S.m:
        raise UsageError(f"--k must lie in 1..{S.m}")
    mins, maxs = build_sequences(S, k, sides=_sides(args.side))
    doc = sequences_to_document(S, (mins, maxs))
    if args.out:
        _write(dumps(doc), args.out)
    n = S.n
    for i in range(k):
        parts = [f"order {i + 1}:"]
        total = 0
        for seq in (mins, maxs):
            if seq is None:
                continue
            st = seq.orders[i].stats
            total += st.coarse_vertices
            parts.append(
                f"{seq.side.value} V={st.coarse_vertices} E={st.coarse_edges} F={st.coarse_faces}"
                f" (refined V={st.refined_vertices} E={st.refined_edges} F={st.refined_faces})"
            )
        if mins is not None and maxs is not None:
            parts.append(f"total V={total} 4k(n-k)-2n={4 * (i + 1) * (n - i - 1) - 2 * n}")
        print("  ".join(parts))
    return 0


def cmd_verify(args) -> int:
    S = _load_sites(args.sites, args.metric)
    t = census(S, check=False)
    if S.metric is Metric.EUCLIDEAN:
        report = verify_identities(S, t, facets_2d(S), facets_3d(lifted(S)), subsets=args.subsets,
                                   seed=args.seed)
        k = args.k or S.m
        if not 1 <= k <= S.m:
            raise UsageError(f"--k must lie in 1..{S.m}")
        sequences = build_sequences(S, k)
        report.extend(builder_records(S, t, sequences, args.samples_per_face))
        report.extend(total_records(S, sequences))
    else:
        report = verify_identities(S, t)
    _write(report.format_table() + "\n", args.out)
    failures = report.failures()
    print(f"{len(report.records) - len(failures)}/{len(report.records)} records pass", file=sys.stderr)
    return 0 if not failures else 1


def cmd_svg(args) -> int:
    try:
        doc = loads(Path(args.diagram).read_text())
        text = render(doc, args.order, args.side, args.refined, not args.hide_old_edges)
    except OSError as exc:
        raise UsageError(f"cannot read {args.diagram}: {exc.strerror}") from None
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    _write(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="colorvoronoi", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, sites=True):
        if sites:
            sp.add_argument("sites", help="site file ('-' for stdin)")
            sp.add_argument("--metric", choices=["l2", "linf"], default="l2")
        sp.add_argument("--out", default=None, help="output file (default stdout)")

    g = sub.add_parser("gen", help="write a random site file in general position")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--metric", choices=["l2", "linf"], default="l2")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--bbox", type=int, nargs=4, default=[0, 0, 1000, 1000],
                   metavar=("X0", "Y0", "X1", "Y1"))
    common(g, sites=False)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("census", help="vertex counts by chromaticity and weight")
    common(c)
    c.set_defaults(func=cmd_census)

    f = sub.add_parser("facets", help="colored j-facet tables of the sites and of their lift")
    common(f)
    f.set_defaults(func=cmd_facets)

    b = sub.add_parser("build", help="construct diagrams of orders 1..k")
    common(b)
    b.add_argument("--k", type=int, default=None)
    b.add_argument("--side", choices=["min", "max", "both"], default="both")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check every identity and the builder against the census")
    common(v)
    v.add_argument("--k", type=int, default=None)
    v.add_argument("--samples-per-face", type=int, default=0)
    v.add_argument("--subsets", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("svg", help="render one diagram of a built document")
    s.add_argument("diagram")
    s.add_argument("--order", type=int, default=1)
    s.add_argument("--side", choices=["min", "max"], default="min")
    s.add_argument("--refined", action="store_true")
    s.add_argument("--hide-old-edges", action="store_true")
    common(s, sites=False)
    s.set_defaults(func=cmd_svg)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        return args.func(args)
    except (UsageError, SchemaError, ColorVoronoiError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
