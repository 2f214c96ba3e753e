"""Command-line entry point: ``hamkit {solve,residuals,sweep,bound,compare}``.

Exit status is 0 on success, 2 on invalid input and 1 on internal failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from contextlib import contextmanager
from fractions import Fraction
from typing import Optional, Sequence

from .diagnostics import (
    DEFAULT_OMEGA,
    ContractionParams,
    c0_sweep,
    compare_reference,
    contraction_constant,
    existence_radius,
    format_sci,
    rational_grid,
    residual_table,
    write_sweep_csv,
)
from .exactmath import format_rational, parse_rational
from .ham import Method, check_c0
from .ifoham import solve
from .problem import ProblemError, load_problem

ELIDE_WIDTH = 120

# options whose values may legitimately start with "-" (e.g. "--c0 -6/5")
_VALUE_OPTIONS = {
    "--c0", "--grid", "--orders", "--omega", "--L", "--Ltilde", "--A",
    "--a", "--b", "--M", "--ref-grid",
}

REFERENCES = {"tan": math.tan, "exp": math.exp, "sin": math.sin, "cos": math.cos}


class UsageError(Exception):
    """User-facing validation failure (exit status 2)."""


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_float(text: str) -> float:
    try:
        return float(parse_rational(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def elide(text: str, width: int = ELIDE_WIDTH) -> str:
    if len(text) <= width:
        return text
    keep = width - 3
    head = keep // 2
    return text[:head] + "..." + text[len(text) - (keep - head):]


def parse_grid(spec: str) -> list[Fraction]:
    """``start:stop:step`` (inclusive) or a comma-separated list."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid must be start:stop:step, got {spec!r}")
        try:
            return rational_grid(*(parse_rational(p) for p in parts))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    try:
        return [parse_rational(p) for p in spec.split(",") if p.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_orders(spec: str) -> list[int]:
    """``"4"``, ``"0-4"`` or ``"0,2,4"``."""
    out: set[int] = set()
    try:
        for part in spec.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = part.split("-", 1)
                out.update(range(int(lo), int(hi) + 1))
            elif part:
                out.add(int(part))
    except ValueError:
        raise UsageError(f"invalid order list {spec!r}") from None
    if not out or min(out) < 0:
        raise UsageError(f"invalid order list {spec!r}")
    return sorted(out)


def parse_omega(spec: str) -> tuple[Fraction, Fraction]:
    parts = spec.split(":") if ":" in spec else spec.split(",")
    if len(parts) != 2:
        raise UsageError(f"omega must be a:b, got {spec!r}")
    try:
        a, b = (parse_rational(p) for p in parts)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not a < b:
        raise UsageError("omega must satisfy a < b")
    return a, b


@contextmanager
def _output(path: Optional[str]):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _load(args):
    try:
        return load_problem(args.problem)
    except OSError as exc:
        raise UsageError(f"cannot read problem file: {exc}") from None


def _method_c0(args):
    method = Method(args.method)
    if method is Method.PICARD:
        return method, None
    try:
        return method, check_c0(args.c0)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- commands ----------------------------------------------------------------

def solution_json(series) -> str:
    return json.dumps(series.to_json(), indent=2) + "\n"


def cmd_solve(args) -> int:
    ivp = _load(args)
    method, c0 = _method_c0(args)
    series = solve(ivp, method, c0, args.order, args.truncate_degree)
    with _output(args.out) as out:
        if args.format == "json":
            out.write(solution_json(series))
        elif args.format == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["k", "term", "partial_sum"])
            for k, (u, x) in enumerate(zip(series.terms, series.partial_sums)):
                w.writerow([k, str(u), str(x)])
        else:
            head = f"method={method.value}"
            if c0 is not None:
                head += f" c0={format_rational(c0)}"
            out.write(f"{head} order={series.order}\n")
            for k, u in enumerate(series.terms):
                out.write(f"u_{k} = {u}\n")
            for m, x in enumerate(series.partial_sums):
                out.write(f"x_{m} = {x}\n")
    return 0


def cmd_residuals(args) -> int:
    ivp = _load(args)
    method, c0 = _method_c0(args)
    omega = parse_omega(args.omega) if args.omega else DEFAULT_OMEGA
    reports = residual_table(ivp, method, c0, args.order, omega, args.truncate_degree)
    series = solve(ivp, method, c0, args.order, args.truncate_degree)
    with _output(args.out) as out:
        if args.format == "json":
            doc = [
                {
                    "m": r.order,
                    "partial_sum": x.to_json(),
                    "E_exact": format_rational(r.E_exact),
                    "E": r.E_float,
                    "cpu_seconds": round(r.cpu_seconds, 3),
                }
                for r, x in zip(reports, series.partial_sums)
            ]
            out.write(json.dumps(doc, indent=2) + "\n")
        elif args.format == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["m", "E", "cpu_seconds"])
            for r in reports:
                w.writerow([r.order, format(r.E_float, ".17g"), f"{r.cpu_seconds:.3f}"])
        else:
            sums = [elide(str(x)) for x in series.partial_sums]
            width = max(len("sum u_k"), *(len(s) for s in sums))
            out.write(f"{'m':>3}  {'sum u_k':<{width}}  {'E_m':>9}  CPU time [s]\n")
            for r, s in zip(reports, sums):
                out.write(f"{r.order:>3}  {s:<{width}}  {r.rendered:>9}  {r.cpu_seconds:.3f}\n")
    return 0


def cmd_sweep(args) -> int:
    ivp = _load(args)
    method = Method(args.method)
    if method is Method.PICARD:
        raise UsageError("sweep requires --method ham or ifoham")
    grid = parse_grid(args.grid)
    if not grid:
        raise UsageError("empty c0 grid")
    if any(c == 0 for c in grid):
        raise UsageError("c0 must be nonzero; grid contains 0")
    orders = parse_orders(args.orders)
    omega = parse_omega(args.omega) if args.omega else DEFAULT_OMEGA
    rows = c0_sweep(ivp, method, grid, orders, omega, jobs=args.jobs)
    with _output(args.out) as out:
        write_sweep_csv(rows, out)
    return 0


def cmd_bound(args) -> int:
    box = (args.a, args.b, args.M)
    derived = False
    if any(v is not None for v in box):
        if any(v is None for v in box):
            raise UsageError("--a, --b and --M must be given together")
        if args.A is not None:
            raise UsageError("give either --A or --a/--b/--M, not both")
        try:
            A = existence_radius(*box)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        derived = True
    elif args.A is None:
        raise UsageError("need --A or --a/--b/--M")
    else:
        A = args.A
    try:
        params = ContractionParams(args.L, args.Ltilde, A, float(args.c0))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    bound = contraction_constant(params)
    with _output(args.out) as out:
        if args.format == "json":
            doc = {"A": A, "A_derived": derived, "k": bound.k, "contraction": bound.contracts}
            out.write(json.dumps(doc) + "\n")
        else:
            if derived:
                out.write(f"A = {A:.6g}\n")
            out.write(f"k = {bound.k:.6f}\n")
            out.write(f"contraction: {'yes' if bound.contracts else 'no'}\n")
    return 0


def _read_reference_file(path: str) -> tuple[list[float], list[float]]:
    ts, vs = [], []
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().lower() in ("t", "#"):
                    continue
                ts.append(float(row[0]))
                vs.append(float(row[1]))
    except (OSError, ValueError, IndexError) as exc:
        raise UsageError(f"cannot read reference file: {exc}") from None
    return ts, vs


def cmd_compare(args) -> int:
    ivp = _load(args)
    method, c0 = _method_c0(args)
    series = solve(ivp, method, c0, args.order, args.truncate_degree)
    if args.reference_file:
        grid, ref = _read_reference_file(args.reference_file)
    else:
        grid = [float(v) for v in parse_grid(args.ref_grid)]
        ref = REFERENCES[args.reference]
    errors = compare_reference(series, grid, ref)
    with _output(args.out) as out:
        if args.format == "json":
            out.write(json.dumps([{"m": m, "max_abs_error": e} for m, e in enumerate(errors)]) + "\n")
        elif args.format == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["m", "max_abs_error"])
            for m, e in enumerate(errors):
                w.writerow([m, format(e, ".17g")])
        else:
            out.write(f"{'m':>3}  max |x_m - ref|\n")
            for m, e in enumerate(errors):
                out.write(f"{m:>3}  {format_sci(e)}\n")
    return 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hamkit",
        description="Exact HAM / IFOHAM / Picard series solvers for polynomial IVPs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, problem=True, method=True):
        if problem:
            p.add_argument("problem", help="JSON problem file")
        if method:
            p.add_argument("--method", choices=[m.value for m in Method], default="ifoham")
            p.add_argument("--c0", type=_rational, default=Fraction(-1),
                           help="convergence-control parameter (n, n/d or decimal)")
            p.add_argument("--truncate-degree", type=int, default=None)
        p.add_argument("--format", choices=["text", "json", "csv"], default="text")
        p.add_argument("--out", default=None, help="write to this path instead of stdout")

    p = sub.add_parser("solve", help="print series terms and partial sums")
    common(p)
    p.add_argument("--order", type=int, default=4)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("residuals", help="squared-residual table per order")
    common(p)
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--omega", default=None, help="integration interval a:b (default -1:1)")
    p.set_defaults(func=cmd_residuals)

    p = sub.add_parser("sweep", help="residuals over a c0 grid as CSV")
    p.add_argument("problem")
    p.add_argument("--method", choices=["ham", "ifoham"], default="ifoham")
    p.add_argument("--grid", default="-1.3:-0.05:0.05", help="start:stop:step or a,b,c")
    p.add_argument("--orders", default="0-4", help="e.g. 4, 0-4 or 0,2,4")
    p.add_argument("--omega", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bound", help="contraction constant of the weighted-average map")
    p.add_argument("--L", type=_positive_float, required=True)
    p.add_argument("--Ltilde", type=_positive_float, required=True)
    p.add_argument("--A", type=_positive_float, default=None)
    p.add_argument("--a", type=_positive_float, default=None)
    p.add_argument("--b", type=_positive_float, default=None)
    p.add_argument("--M", type=_positive_float, default=None)
    p.add_argument("--c0", type=_rational, default=Fraction(-1))
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("compare", help="max error of each partial sum against a reference")
    common(p)
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--reference", choices=sorted(REFERENCES), default="tan")
    p.add_argument("--reference-file", default=None, help="CSV of t,value samples")
    p.add_argument("--ref-grid", default="-0.5:0.5:0.25", help="float grid for --reference")
    p.set_defaults(func=cmd_compare)
    return parser


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_join_negative_values(argv))
    if getattr(args, "order", 0) < 0:
        print("hamkit: error: order must be nonnegative", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UsageError, ProblemError, ValueError) as exc:
        print(f"hamkit: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"hamkit: internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
