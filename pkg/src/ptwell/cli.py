"""Command-line front end.

Data goes to stdout as CSV (header row, comma separated) or JSON
({"meta": ..., "rows": [...]}); diagnostics go to stderr.

Exit codes: 0 ok, 1 bad arguments, 2 solver failure, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import platform
import re
import sys
from datetime import datetime, timezone

import numpy as np
import scipy

from . import __version__
from .analysis import (
    figure1_curves,
    hermitian_limit_level,
    limit_report,
    spectrum_table,
    weak_limit_level,
)
from .model import DomainError, WellSpec
from .oracle import ConfigError, OracleConfig, OracleError, default_lambda, fd_spectrum, tail_margin_ok
from .secular import DEFAULT_TOL, SolverError, solve_level
from .wavefunc import build, evaluate

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_VERIFY = 0, 1, 2, 3

SPECTRUM_COLUMNS = ["N", "omega", "k", "E", "p", "q", "alpha", "R", "G", "branch"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


_PI_EXPR = re.compile(r"^\s*([0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


def parse_length(text: str) -> float:
    """Float, or a multiple of pi such as '4pi', '4*pi', 'pi/500'."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_EXPR.match(text.lower())
    if not m:
        raise argparse.ArgumentTypeError(f"not a number or pi multiple: {text!r}")
    sign_only = {"": 1.0, "+": 1.0, "-": -1.0}
    coef = sign_only[m.group(1)] if m.group(1) in sign_only else float(m.group(1))
    div = float(m.group(2)) if m.group(2) else 1.0
    return coef * math.pi / div


def parse_float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _jsonable(value):
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_table(out, fmt_name: str, columns, rows, meta, comments=None) -> None:
    if fmt_name == "json":
        doc = {
            "meta": {k: _jsonable(v) for k, v in meta.items()},
            "rows": [{c: _jsonable(v) for c, v in zip(columns, row)} for row in rows],
        }
        out.write(json.dumps(doc, indent=1) + "\n")
        return
    for key, value in (comments or {}).items():
        out.write(f"# {key}={fmt(value)}\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(fmt(v) for v in row) + "\n")


def read_csv(text: str):
    """(columns, rows) of an emitted CSV; '#' lines are skipped, numbers parsed as float."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    columns = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        row = []
        for cell in ln.split(","):
            try:
                row.append(float(cell))
            except ValueError:
                row.append(cell)
        rows.append(row)
    return columns, rows


def _meta(args, command, inputs, **extra):
    meta = {
        "command": command,
        "inputs": inputs,
        "versions": {
            "ptwell": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
    }
    meta.update(extra)
    if getattr(args, "meta_time", False):
        meta["generated"] = datetime.now(timezone.utc).isoformat()
    return meta


def _spec(T) -> WellSpec:
    try:
        return WellSpec(T)
    except DomainError as exc:
        raise UsageError(str(exc))


def _positive_int(name, value, minimum=1):
    if value < minimum:
        raise UsageError(f"{name} must be at least {minimum}")


def cmd_spectrum(args, out) -> int:
    spec = _spec(args.T)
    _positive_int("--levels", args.levels)
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    rows = spectrum_table(spec, args.levels, args.tol)
    table = [[getattr(r, c) for c in SPECTRUM_COLUMNS] for r in rows]
    meta = _meta(args, "spectrum", {"T": spec.T, "levels": args.levels}, tolerances={"residual": args.tol})
    write_table(out, args.format, SPECTRUM_COLUMNS, table, meta)
    return EXIT_OK


def cmd_wavefunction(args, out) -> int:
    spec = _spec(args.T)
    if not args.xmin < args.xmax:
        raise UsageError("--xmin must be below --xmax")
    _positive_int("--samples", args.samples, 2)
    if args.level < 0:
        raise UsageError("--level must be nonnegative")
    level = solve_level(spec, args.level, args.tol)
    wf = build(level)
    # centre + half-width * t with t odd in the sample index, so a symmetric
    # range gives an exactly mirrored grid that contains x = 0 when samples is odd
    n = args.samples
    t = (2.0 * np.arange(n) - (n - 1)) / (n - 1)
    x = 0.5 * (args.xmin + args.xmax) + 0.5 * (args.xmax - args.xmin) * t
    psi = evaluate(wf, x)
    info = {
        "T": spec.T, "level": level.N, "omega": level.omega, "k": level.k, "E": level.E,
        "G": level.G, "sigma_re": wf.sigma.real, "sigma_im": wf.sigma.imag,
    }
    meta = _meta(args, "wavefunction",
                 {"T": spec.T, "level": args.level, "xmin": args.xmin, "xmax": args.xmax,
                  "samples": args.samples},
                 state=info, tolerances={"residual": args.tol})
    rows = [[xi, p.real, p.imag] for xi, p in zip(x.tolist(), psi.tolist())]
    write_table(out, args.format, ["x", "re_psi", "im_psi"], rows, meta, comments=info)
    return EXIT_OK


def cmd_figure1(args, out) -> int:
    spec = _spec(args.T)
    if args.samples < 100:
        raise UsageError("--samples must be at least 100")
    _positive_int("--levels", args.levels)
    omega, lhs, rhs = figure1_curves(spec.T, args.samples, args.levels)
    columns = ["omega", "lhs"] + [f"rhs_{N}" for N in range(args.levels)]
    rows = np.column_stack([omega, lhs, rhs.T]).tolist()
    meta = _meta(args, "figure1", {"T": spec.T, "samples": args.samples, "levels": args.levels})
    write_table(out, args.format, columns, rows, meta)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    spec = _spec(args.T)
    _positive_int("--levels", args.levels)
    levels = [solve_level(spec, N, args.tol) for N in range(args.levels)]
    p_min = min(lv.sigma_parts.p for lv in levels)
    h = args.h
    lam = args.lam if args.lam is not None else default_lambda(p_min, h)
    try:
        cfg = OracleConfig(lam=lam, h=h, count=args.levels)
    except ConfigError as exc:
        raise UsageError(str(exc))
    if not tail_margin_ok(cfg, p_min):
        print(f"warning: lambda={lam:.6g} < pi + 6/p_min = {math.pi + 6 / p_min:.6g}; "
              "truncation error may dominate", file=sys.stderr)
    pairs = fd_spectrum(spec, cfg)
    columns = ["N", "E_analytic", "re_E_fd", "im_E_fd", "abs_dre", "inner_weight"]
    rows, worst = [], 0.0
    for lv, pair in zip(levels, pairs):
        d = abs(pair.energy.real - lv.E)
        worst = max(worst, d)
        rows.append([lv.N, lv.E, pair.energy.real, pair.energy.imag, d, pair.inner_weight])
    meta = _meta(args, "verify",
                 {"T": spec.T, "levels": args.levels, "lambda": cfg.lam, "h": cfg.h},
                 tolerances={"bound": args.bound, "residual": args.tol},
                 passed=worst <= args.bound)
    write_table(out, args.format, columns, rows, meta)
    if worst > args.bound:
        print(f"verification failed: max |dRe E| = {worst:.3e} > {args.bound:.1e}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_limits(args, out) -> int:
    if not args.T_list or any(not (T > 0 and math.isfinite(T)) for T in args.T_list):
        raise UsageError("--T-list must hold positive couplings")
    _positive_int("--levels", args.levels)
    rep = limit_report(args.T_list, args.levels, args.tol)
    columns = ["T", "N", "E", "E_hermitian", "E_weak", "dev_hermitian", "dev_weak"]
    rows = []
    for T, energies in zip(rep.T_values, rep.energies):
        for N, E in enumerate(energies):
            rows.append([T, N, E, hermitian_limit_level(N), weak_limit_level(N),
                         E - hermitian_limit_level(N), E - weak_limit_level(N)])
    meta = _meta(args, "limits", {"T_list": rep.T_values, "levels": args.levels})
    write_table(out, args.format, columns, rows, meta)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ptwell", description="Bound states of the imaginary square well.")
    parser.add_argument("--version", action="version", version=f"ptwell {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, T_default=None):
        if T_default is None:
            p.add_argument("--T", type=float, required=True, help="coupling (potential +-i T^2)")
        else:
            p.add_argument("--T", type=float, default=T_default)
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--meta-time", action="store_true", help="add a 'generated' stamp to JSON meta")

    p = sub.add_parser("spectrum", help="solved levels N = 0..levels-1")
    common(p)
    p.add_argument("--levels", type=int, default=10)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("wavefunction", help="sample psi(x) of one level")
    common(p)
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--xmin", type=parse_length, default=-2 * math.pi)
    p.add_argument("--xmax", type=parse_length, default=2 * math.pi)
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("figure1", help="curves of the graphical solution")
    common(p, T_default=1.0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--levels", type=int, default=6)
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("verify", help="compare with the finite-difference oracle")
    common(p)
    p.add_argument("--levels", type=int, default=5)
    p.add_argument("--lambda", dest="lam", type=parse_length, default=None,
                   help="truncation half-width, e.g. 4pi (default max(4pi, pi + 8/p_min))")
    p.add_argument("--h", type=parse_length, default=math.pi / 500, help="grid step, e.g. pi/500")
    p.add_argument("--bound", type=float, default=1e-3, help="allowed |Re E_fd - E|")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("limits", help="E_N(T) against both limiting level formulas")
    p.add_argument("--T-list", dest="T_list", type=parse_float_list, required=True)
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--meta-time", action="store_true")
    p.set_defaults(func=cmd_limits)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, DomainError) as exc:
        print(f"ptwell: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, OracleError) as exc:
        print(f"ptwell: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
