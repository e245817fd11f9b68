"""Command-line front end.

Exit codes: 0 on success, 1 for domain or I/O errors, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from typing import Callable, Optional, Sequence

from binomci import evaluate
from binomci.evaluate import EvalPoint, Grid
from binomci.intervals import ConfidenceSpec, Method, SampleSummary, UsageError, compute
from binomci.numerics import BracketError, ConvergenceError, DomainError
from binomci.svg import PlotRequest, render_svg

FLOAT_FORMAT = ".12g"


def fmt(value: float) -> str:
    return format(value, FLOAT_FORMAT)


def parse_methods(text: str) -> list[Method]:
    names = [name for name in text.split(",") if name.strip()]
    if not names:
        raise UsageError("no methods given")
    methods: list[Method] = []
    for name in names:
        chosen = list(Method) if name.strip().lower() == "all" else [Method.parse(name)]
        methods.extend(m for m in chosen if m not in methods)
    return methods


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def curves_to_csv(metric: str, curves: dict[Method, Sequence[EvalPoint]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "method", metric])
    for method, points in curves.items():
        for pt in points:
            writer.writerow([fmt(pt.p), method.value, fmt(pt.value)])
    return buf.getvalue()


def read_curves_csv(path: str) -> dict[str, list[EvalPoint]]:
    """Parse a CSV written by the curve commands back into EvalPoints per method."""
    curves: dict[str, list[EvalPoint]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:2] != ["p", "method"] or len(header) != 3:
            raise ValueError(f"unexpected header {header}")
        for p, method, value in reader:
            curves.setdefault(method, []).append(EvalPoint(float(p), float(value)))
    return curves


def _spec(args: argparse.Namespace) -> ConfidenceSpec:
    return ConfidenceSpec(alpha=args.alpha, kappa=args.kappa)


# ---------------------------------------------------------------------------
# subcommands


def cmd_compute(args: argparse.Namespace) -> str:
    method = Method.parse(args.method)
    if method is not Method.STEVENS and (args.u is not None or args.seed is not None):
        raise UsageError("--u and --seed are only valid with --method stevens")
    if method is Method.STEVENS and args.u is None and args.seed is None:
        raise UsageError("--method stevens needs --u or --seed")
    interval = compute(method, SampleSummary(args.n, args.x), _spec(args), u=args.u, seed=args.seed)
    record = interval.as_dict()
    if args.format == "json":
        return json.dumps(record) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(record))
        writer.writerow([fmt(v) if isinstance(v, float) else ("" if v is None else v) for v in record.values()])
        return buf.getvalue()
    lines = [f"{key}: {fmt(v) if isinstance(v, float) else v}" for key, v in record.items() if v is not None]
    return "\n".join(lines) + "\n"


def _write_curves(args, metric: str, curves, y_label: str, nominal: Optional[float], title: str) -> str:
    write_atomic(args.out, curves_to_csv(metric, curves))
    if args.svg:
        request = PlotRequest(
            series=[(m.value, pts) for m, pts in curves.items()],
            output_path=args.svg,
            nominal_line=nominal,
            title=title,
            y_label=y_label,
        )
        write_atomic(args.svg, render_svg(request))
    rows = sum(len(pts) for pts in curves.values())
    return f"wrote {rows} rows to {args.out}" + (f" and {args.svg}" if args.svg else "") + "\n"


def cmd_coverage(args: argparse.Namespace) -> str:
    spec, grid = _spec(args), Grid.parse(args.grid)
    curves = {m: evaluate.coverage_curve(m, args.n, spec, grid) for m in parse_methods(args.methods)}
    return _write_curves(args, "coverage", curves, "coverage probability", spec.level,
                         f"Exact coverage, n = {args.n}")


def cmd_length(args: argparse.Namespace) -> str:
    spec, grid = _spec(args), Grid.parse(args.grid)
    curves = {
        m: evaluate.length_curve(m, args.n, spec, grid, args.quad_points)
        for m in parse_methods(args.methods)
    }
    return _write_curves(args, "expected_length", curves, "expected length", None,
                         f"Expected length, n = {args.n}")


def cmd_bias(args: argparse.Namespace) -> str:
    spec, grid = _spec(args), Grid.parse(args.grid)
    curves = {
        m: evaluate.bias_curve(m, args.n, spec, grid, args.window, args.grid_density)
        for m in parse_methods(args.method)
    }
    return _write_curves(args, "smoothed_bias", curves, "smoothed coverage bias", 0.0,
                         f"Smoothed coverage bias, n = {args.n}")


def cmd_compare(args: argparse.Namespace) -> str:
    sample, spec = SampleSummary(args.n, args.x), _spec(args)
    rows = []
    for method in Method:
        iv = compute(method, sample, spec, u=0.5 if method.randomized else None)
        rows.append((method.value, iv.lower, iv.upper, iv.width))
    note = "stevens is shown at u = 0.5, where it coincides with mid_p"

    if args.format == "json":
        payload = [dict(zip(("method", "lower", "upper", "width"), row)) for row in rows]
        return json.dumps({"n": sample.n, "x": sample.x, "alpha": spec.alpha, "kappa": spec.kappa,
                           "intervals": payload, "note": note}, indent=2) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["method", "lower", "upper", "width"])
        for name, lo, hi, w in rows:
            writer.writerow([name, fmt(lo), fmt(hi), fmt(w)])
        return buf.getvalue()
    out = [f"n = {sample.n}, x = {sample.x}, alpha = {fmt(spec.alpha)}, kappa = {fmt(spec.kappa)}", ""]
    out.append(f"{'method':<18}{'lower':>12}{'upper':>12}{'width':>12}")
    for name, lo, hi, w in rows:
        mark = "*" if name == Method.STEVENS.value else ""
        out.append(f"{name + mark:<18}{lo:>12.6f}{hi:>12.6f}{w:>12.6f}")
    out.append("")
    out.append(f"* {note}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# parser


def _add_level(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=0.05, help="two-sided miscoverage (default 0.05)")
    p.add_argument("--kappa", type=float, default=None, help="critical value override (default z_{1-alpha/2})")


def _add_curve_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", default="0.001:0.999:999", help="p grid as start:stop:count")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--svg", default=None, help="optional SVG chart path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="binomci",
        description="Confidence intervals for a binomial proportion and their exact evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    method_names = ", ".join(m.value for m in Method)

    p = sub.add_parser("compute", help="compute one interval")
    p.add_argument("--method", required=True, help=method_names)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    _add_level(p)
    p.add_argument("--u", type=float, default=None, help="randomization value (stevens only)")
    p.add_argument("--seed", type=int, default=None, help="seed to draw u (stevens only)")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(handler=cmd_compute)

    p = sub.add_parser("coverage", help="exact coverage curves")
    p.add_argument("--methods", required=True, help=f"comma list of {method_names}, or all")
    p.add_argument("--n", type=int, required=True)
    _add_level(p)
    _add_curve_output(p)
    p.set_defaults(handler=cmd_coverage)

    p = sub.add_parser("length", help="expected length curves")
    p.add_argument("--methods", required=True, help=f"comma list of {method_names}, or all")
    p.add_argument("--n", type=int, required=True)
    _add_level(p)
    _add_curve_output(p)
    p.add_argument("--quad-points", type=int, default=evaluate.DEFAULT_QUAD_POINTS,
                   help="Gauss-Legendre nodes for the stevens average over u")
    p.set_defaults(handler=cmd_length)

    p = sub.add_parser("bias", help="smoothed coverage bias curves")
    p.add_argument("--method", "--methods", dest="method", required=True,
                   help=f"{method_names} (comma list or all accepted)")
    p.add_argument("--n", type=int, required=True)
    _add_level(p)
    _add_curve_output(p)
    p.add_argument("--window", type=float, default=evaluate.DEFAULT_WINDOW)
    p.add_argument("--grid-density", type=int, default=evaluate.DEFAULT_GRID_DENSITY)
    p.set_defaults(handler=cmd_bias, grid="0.05:0.95:181")

    p = sub.add_parser("compare", help="all eight intervals for one sample")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    _add_level(p)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(handler=cmd_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler: Callable[[argparse.Namespace], str] = args.handler
    try:
        stdout.write(handler(args))
    except UsageError as exc:
        print(f"binomci {args.command}: usage error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, BracketError, ConvergenceError, OSError, ValueError) as exc:
        print(f"binomci {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
