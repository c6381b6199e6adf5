"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import yaml

from . import __version__
from .coloring import (
    default_lll_colors,
    lll_coloring,
    peel_coloring,
    signature_coloring,
    verify_coloring,
)
from .experiments import PRESETS, run_experiment
from .generators import FAMILIES, FamilySpec
from .geometry import GeometryError, bound_report, collinearity_profile, count_collinear_ktuples
from .hypergraph import build_collinearity_hypergraph, degree_histogram, pair_overlap_counts
from .pointio import (
    ParseError,
    format_coloring,
    format_points,
    load_coloring,
    load_points,
    load_points_with_meta,
)
from .selection import DEFAULT_STRATEGIES, exact_max_subset, gowers_witness, select_best

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _table(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, default=str) + "\n"
    buf = io.StringIO()
    fields = list(rows[0]) if rows else []
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _ratio(x) -> str:
    return f"{float(x):.12g}" if isinstance(x, (Fraction, float)) else str(x)


def cmd_generate(args) -> int:
    params = {}
    for name in ("q", "k", "ell", "d", "n", "box"):
        v = getattr(args, name)
        if v is not None:
            params[name] = v
    spec = FamilySpec(args.family, params, args.seed)
    points = spec.build()
    meta = {"family": args.family, **params, "seed": args.seed}
    _emit(format_points(points, meta), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    points = load_points(args.file)
    stats = collinearity_profile(points)
    row = {
        "n": stats.n,
        "ell_max": stats.ell_max,
        "max_codegree": stats.max_codegree,
        "profile": " ".join(f"{i}:{c}" for i, c in stats.s.items()),
    }
    for k in (3, 4, 5):
        row[f"ktuples_{k}"] = count_collinear_ktuples(stats, k)
    if stats.ell_max >= 3:
        rep = bound_report(stats)
        row["triple_ratio"] = _ratio(rep.triple_ratio)
        row["ktuple_ratio_4"] = _ratio(rep.ktuple_ratio(4))
        row["st_constant"] = _ratio(rep.st_constant)
    rows = [row]
    if args.hypergraph:
        H = build_collinearity_hypergraph(points, args.hypergraph)
        hrow = {"r": H.r, "n": H.n, "m": H.m}
        hrow["degree_histogram"] = " ".join(f"{d}:{c}" for d, c in degree_histogram(H).items())
        hrow["pj"] = " ".join(f"{j}:{pair_overlap_counts(H, j)}" for j in range(2, H.r))
        rows.append(hrow)
        if args.format == "csv":
            _emit(_table(rows[:1], "csv") + _table(rows[1:], "csv"), args.out)
            return EXIT_OK
    _emit(_table(rows, args.format), args.out)
    return EXIT_OK


def _strategies(s: str) -> list[str]:
    return [x.strip() for x in s.split(",") if x.strip()]


def cmd_select(args) -> int:
    points = load_points(args.file)
    if args.witness:
        w = gowers_witness(points, args.witness, args.seed)
        footer = {"witness": w.kind, "q": w.q, "seed": args.seed}
        from .geometry import PointSet

        sub = PointSet(w.points, dim=points.dim) if w.points else PointSet([], dim=points.dim)
        _emit(format_points(sub, footer=footer), args.out)
        return EXIT_OK if w.resolved else EXIT_FAIL
    res = select_best(points, args.k, _strategies(args.strategy), args.seed)
    _emit(format_points(res.subset, footer=_result_footer(res)), args.out)
    return EXIT_OK


def _result_footer(res) -> dict:
    footer = {"strategy": res.strategy, "seed": res.seed, "k": res.k, "size": res.size}
    if res.proven_optimal is not None:
        footer["proven_optimal"] = str(res.proven_optimal).lower()
    cert = res.certificate
    if cert is not None:
        for name, val in vars(cert).items():
            if name != "sizes":
                footer[f"cert.{name}"] = _ratio(val) if isinstance(val, (Fraction, float)) else val
    return footer


def cmd_oracle(args) -> int:
    points = load_points(args.file)
    res = exact_max_subset(points, args.k, args.node_limit, args.seed)
    _emit(format_points(res.subset, footer=_result_footer(res)), args.out)
    return EXIT_OK


def cmd_color(args) -> int:
    points = load_points(args.file)
    if args.method == "peel":
        coloring = peel_coloring(points, args.selector, args.seed, args.k)
    elif args.method == "lll":
        colors = args.colors or default_lll_colors(len(points), collinearity_profile(points).ell_max)
        out = lll_coloring(points, colors, args.max_resamples, args.seed, args.k)
        if not out.success:
            sys.stderr.write(f"resampling gave up after {out.resamples} resamples; {out.residual} violations remain\n")
            return EXIT_FAIL
        coloring = out.coloring
    else:
        ell = args.ell or max(max(p) for p in points)
        coloring = signature_coloring(points, ell, points.dim)
    _emit(format_coloring(coloring), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    points = load_points(args.file)
    if args.coloring:
        verdict = verify_coloring(points, load_coloring(args.coloring), args.k)
        for v in verdict.violations:
            pts = "; ".join(" ".join(map(str, p)) for p in v.points)
            sys.stdout.write(f"violation color={v.color}: {pts}\n")
        sys.stdout.write("valid\n" if verdict.valid else f"invalid: {len(verdict.violations)} violations\n")
        return EXIT_OK if verdict.valid else EXIT_FAIL
    if args.subset:
        sub, meta = load_points_with_meta(args.subset)
        k = args.k if args.k is not None else int(meta.get("k", 2))
        outside = [p for p in sub if p not in points]
        ell = collinearity_profile(sub).ell_max
        ok = not outside and ell <= k
        sys.stdout.write(f"size={len(sub)} max_collinear={ell} k={k} outside={len(outside)}\n")
        sys.stdout.write("valid\n" if ok else "invalid\n")
        return EXIT_OK if ok else EXIT_FAIL
    k = 2 if args.k is None else args.k
    ell = collinearity_profile(points).ell_max
    ok = ell <= k
    sys.stdout.write(f"n={len(points)} max_collinear={ell} k={k}\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_experiment(args) -> int:
    if args.preset:
        sweep = dict(PRESETS[args.preset])
    else:
        sweep = yaml.safe_load(Path(args.config).read_text())
    if args.seeds:
        sweep["seeds"] = [int(s) for s in args.seeds.split(",")]
    if args.format == "json":
        import csv as _csv

        text = run_experiment(sweep)
        rows = list(_csv.DictReader(io.StringIO(text)))
        _emit(json.dumps(rows, indent=2) + "\n", args.out)
    elif args.out:
        with open(args.out, "w", newline="") as fh:
            run_experiment(sweep, fh)
    else:
        run_experiment(sweep, sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gpsubset", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, k_default: int | None = 2):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--k", type=int, default=k_default)
        p.add_argument("--out")
        return p

    g = common(sub.add_parser("generate", help="emit a point family"), k_default=None)
    g.add_argument("family", choices=FAMILIES)
    for name in ("q", "ell", "d", "n", "box"):
        g.add_argument(f"--{name}", type=int)
    g.set_defaults(func=cmd_generate)

    a = common(sub.add_parser("analyze", help="collinearity profile and bound ratios"))
    a.add_argument("file")
    a.add_argument("--format", choices=("csv", "json"), default="csv")
    a.add_argument("--hypergraph", type=int, metavar="R", help="also dump H_R statistics")
    a.set_defaults(func=cmd_analyze)

    s = common(sub.add_parser("select", help="large subset with at most k collinear"))
    s.add_argument("file")
    s.add_argument("--strategy", default=",".join(DEFAULT_STRATEGIES))
    s.add_argument("--witness", type=int, metavar="Q", help="find q collinear or q in general position")
    s.set_defaults(func=cmd_select)

    o = common(sub.add_parser("oracle", help="exact maximum subset by branch and bound"))
    o.add_argument("file")
    o.add_argument("--node-limit", type=int, default=5_000_000)
    o.set_defaults(func=cmd_oracle)

    c = common(sub.add_parser("color", help="color into classes with at most k collinear"))
    c.add_argument("file")
    c.add_argument("--method", choices=("peel", "lll", "signature"), default="peel")
    c.add_argument("--selector", default="best")
    c.add_argument("--colors", type=int)
    c.add_argument("--max-resamples", type=int, default=10**6)
    c.add_argument("--ell", type=int)
    c.set_defaults(func=cmd_color)

    v = common(sub.add_parser("verify", help="check a coloring or subset"), k_default=None)
    v.add_argument("file")
    grp = v.add_mutually_exclusive_group()
    grp.add_argument("--coloring")
    grp.add_argument("--subset")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="run a sweep and write CSV")
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="YAML or JSON sweep description")
    src.add_argument("--preset", choices=sorted(PRESETS))
    e.add_argument("--seeds", help="comma-separated seeds overriding the sweep's")
    e.add_argument("--seed", type=int, help=argparse.SUPPRESS)
    e.add_argument("--format", choices=("csv", "json"), default="csv")
    e.add_argument("--out")
    e.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is not None and args.command == "experiment":
        args.seeds = args.seeds or str(args.seed)
    try:
        return args.func(args)
    except (ParseError, GeometryError, ValueError, KeyError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
