"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 constraint violation or numerical
anomaly.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .errors import EntanglementError
from .geometry import hypercube_com, i1_margins, in_tetrahedra_union, partial_coms
from .inequalities import (
    TOL,
    ConstraintReport,
    polygon_check,
    qubit_qutrit_curve_residual,
    qutetrit_check,
)
from .montecarlo import boundary_scan, region_volume, violation_campaign
from .reduction import profile
from .schmidt import max_off_diagonal, to_schmidt
from .state import load_state, named_state, renormalize, validate

EXIT_OK, EXIT_INPUT, EXIT_ANOMALY = 0, 1, 2


def _dims(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must be comma-separated integers, got {text!r}") from None


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def analyze(state) -> dict:
    """Everything ``analyze`` reports for one state."""
    prof = profile(state)
    dims = tuple(state.dims)
    reports: list[ConstraintReport] = []
    if len(dims) >= 2 and len(set(dims)) == 1:
        reports += polygon_check(prof.y)
    if dims == (2, 2, 4):
        reports += qutetrit_check(*prof.y)
    if dims in ((2, 3), (3, 2)):
        y_qubit, y_qutrit = (prof.y[0], prof.y[1]) if dims[0] == 2 else (prof.y[1], prof.y[0])
        r = qubit_qutrit_curve_residual(y_qubit, y_qutrit)
        reports.append(ConstraintReport("qubit_qutrit_curve", -abs(r)))
    sf = to_schmidt(state)
    out = {
        "dims": list(dims),
        "profile": prof.to_dict(),
        "constraints": [r.to_dict() for r in reports],
        "schmidt": {
            "max_off_diagonal": max_off_diagonal(sf.state),
            "eigenvalues": [e.tolist() for e in sf.eigenvalues],
        },
    }
    if all(m == 2 for m in dims):
        q = hypercube_com(sf)
        out["hypercube_com"] = q.tolist()
        out["i1_margins"] = i1_margins(q).tolist()
    if dims == (2, 2, 2):
        pc = partial_coms(sf)
        out["partial_com"] = pc.to_dict() | {"in_tetrahedra_union": in_tetrahedra_union(pc.q)}
    return out


def cmd_analyze(args) -> int:
    if args.input:
        state = load_state(args.input, renorm=args.renormalize)
    elif args.state:
        if not args.dims:
            raise EntanglementError("--state needs --dims")
        state = validate(named_state(args.state, args.dims))
    else:
        raise EntanglementError("analyze needs --input or --state")
    if args.renormalize:
        state = renormalize(state)
    result = analyze(state)
    result["version"] = __version__
    if args.format == "csv":
        p = result["profile"]
        rows = [
            [n + 1, p["dims"][n], _fmt(p["q"][n]), _fmt(p["y"][n]), _fmt(p["schmidt_weight"][n]), _fmt(p["entropy"][n])]
            for n in range(len(p["dims"]))
        ]
        _write(_csv(rows, ["party", "dim", "q", "y", "schmidt_weight", "entropy"]), args.out)
    else:
        _write(_json(result), args.out)
    violated = [c for c in result["constraints"] if not c["satisfied"]]
    return EXIT_ANOMALY if violated else EXIT_OK


def cmd_campaign(args) -> int:
    constraints = args.constraints.split(",") if args.constraints else None
    if args.format == "csv":
        if not args.out:
            raise EntanglementError("--format csv streams per-sample rows and needs --out")
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            report = violation_campaign(args.dims, args.samples, args.seed, constraints, args.threads, stream=fh)
        sys.stdout.write(report.to_json(timing=not args.no_timing))
    else:
        report = violation_campaign(args.dims, args.samples, args.seed, constraints, args.threads)
        _write(report.to_json(timing=not args.no_timing), args.out)
    return EXIT_OK if report.violation_count == 0 else EXIT_ANOMALY


def cmd_volume(args) -> int:
    report = region_volume(args.region, args.samples, args.seed, args.threads)
    if args.format == "csv":
        d = report.to_dict(timing=not args.no_timing)
        header = ["region", "seed", "sample_count", "volume_estimate", "standard_error", "reference_volume"]
        row = [
            report.meta["region"],
            d["seed"],
            d["sample_count"],
            _fmt(d["volume_estimate"]),
            _fmt(d["standard_error"]),
            _fmt(report.meta["reference_volume"]),
        ]
        if "wall_time" in d:
            header.append("wall_time")
            row.append(_fmt(d["wall_time"]))
        _write(_csv([row], header), args.out)
    else:
        _write(report.to_json(timing=not args.no_timing), args.out)
    return EXIT_OK


def cmd_boundary(args) -> int:
    grid = boundary_scan(args.region, args.resolution)
    cols = ["y1", "y2", "y3_lower", "y3_upper"]
    if args.format == "json":
        rows = [
            {c: (None if np.isnan(grid[c][i]) else float(grid[c][i])) for c in cols}
            for i in range(grid["y1"].size)
        ]
        _write(_json({"region": args.region, "resolution": args.resolution, "rows": rows}), args.out)
    else:
        rows = [[_fmt(grid[c][i]) for c in cols] for i in range(grid["y1"].size)]
        _write(_csv(rows, cols), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compurity", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="json"):
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default=fmt_default)

    def stochastic(p):
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--samples", type=int, required=True)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--no-timing", action="store_true", help="omit wall_time from the report")

    p = sub.add_parser("analyze", help="measures, constraint margins and geometry for one state")
    p.add_argument("--input", help="state JSON file")
    p.add_argument("--state", help="named state: ghz, w, product, bell")
    p.add_argument("--dims", type=_dims)
    p.add_argument("--renormalize", action="store_true")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("campaign", help="Haar-random violation search")
    p.add_argument("--dims", type=_dims, required=True)
    p.add_argument("--constraints", help="comma-separated: polygon, i1, pairs, qutetrit, curve")
    stochastic(p)
    common(p)
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("volume", help="Monte Carlo volume of an allowed region")
    p.add_argument("--region", required=True)
    stochastic(p)
    common(p)
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("boundary", help="boundary surfaces on a (y1, y2) grid")
    p.add_argument("--region", required=True)
    p.add_argument("--resolution", type=int, default=101)
    common(p, fmt_default="csv")
    p.set_defaults(func=cmd_boundary)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EntanglementError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
