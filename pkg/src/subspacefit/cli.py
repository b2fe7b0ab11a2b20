"""Command-line front end.

Exit codes: 0 success, 1 re-scored report disagrees, 2 input or parse
error, 3 solver refusal, 64 usage error (unknown flag, missing argument).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import lab
from .approximation import best_subspace, phi
from .fiber import CyclicAction, best_invariant
from .linalg import InputError, complement_projector
from .report import dumps, parse_dataset, report_to_dict, rescore
from .union import (
    FitReport,
    Partition,
    SolverConfig,
    SolverRefusal,
    UnionModel,
    exhaustive_union,
    k_subspaces,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_REFUSED = 3
EXIT_USAGE = 64

RESCORE_TOL = 1e-10


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def parse_grid(text: str) -> list:
    """``start:stop:step`` (stop inclusive) or a comma-separated list."""
    if ":" in text:
        try:
            start, stop, step = (float(x) for x in text.split(":"))
        except ValueError:
            raise InputError(f"grid must be start:stop:step, got {text!r}") from None
        if step <= 0 or stop < start:
            raise InputError(f"empty or invalid grid {text!r}")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    return parse_list(text, float)


def parse_list(text: str, kind=float) -> list:
    try:
        return [kind(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"cannot parse list {text!r}") from None


def _add_output(p):
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument("--no-timestamp", action="store_true", help="set the timestamp field to null")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subspacefit", description="Least-squares subspace model fitting.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit-single", help="best subspace of dimension <= rank")
    p.add_argument("--input", required=True)
    p.add_argument("--rank", type=int, required=True)
    _add_output(p)

    p = sub.add_parser("fit-union", help="best union of subspaces")
    p.add_argument("--input", required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--max-iters", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol-improve", type=float, default=1e-10)
    p.add_argument("--exhaustive-limit", type=int, default=12)
    p.add_argument("--exhaustive", action="store_true", help="use the exact partition search")
    _add_output(p)

    p = sub.add_parser("fit-invariant", help="best shift-invariant subspace")
    p.add_argument("--input", required=True)
    p.add_argument("--group-order", type=int, required=True)
    p.add_argument("--block-size", type=int, required=True)
    p.add_argument("--pidim", type=int, required=True)
    _add_output(p)

    p = sub.add_parser("demo", help="attainment and weak-convergence scans")
    p.add_argument(
        "--name", required=True, choices=["lines-plane", "weak-limit", "rank-closure", "msap-separation"]
    )
    p.add_argument("--grid", help="parameter grid, start:stop:step or comma list")
    p.add_argument("--truncation", type=int, default=lab.DEFAULT_TRUNCATION)
    p.add_argument("--n-values", help="sequence indices, comma list or start:stop:step")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--dim", type=int, default=4, help="ambient dimension for msap-separation")
    p.add_argument("--t-values", help="comma list of t values")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="also write plot-ready CSV here")
    p.add_argument("--out")

    p = sub.add_parser("report", help="re-score a saved report against data")
    p.add_argument("--report", required=True)
    p.add_argument("--input", required=True)
    return parser


def _emit(obj: dict, out) -> None:
    text = dumps(obj)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _phi_warning(data, subspace) -> list:
    q = complement_projector(subspace.projector)
    _, imag = phi(data, q, return_imag=True)
    if abs(imag) > 1e-10 * data.energy:
        return [f"imaginary residue {imag:.3g} in projector cost"]
    return []


def _fit_single(args):
    data = parse_dataset(args.input)
    fit = best_subspace(data, args.rank)
    report = FitReport(
        cost=fit.cost,
        model=UnionModel((fit.subspace,), args.rank),
        partition=Partition((0,) * data.size, 1),
        iterations=1,
        restarts_used=1,
        converged=True,
        trace=[fit.cost],
        warnings=_phi_warning(data, fit.subspace),
    )
    _emit(report_to_dict(report, not args.no_timestamp), args.out)


def _fit_union(args):
    data = parse_dataset(args.input)
    cfg = SolverConfig.from_env(
        restarts=args.restarts,
        max_iters=args.max_iters,
        seed=args.seed,
        tol_improve=args.tol_improve,
        exhaustive_limit=args.exhaustive_limit,
    )
    if args.exhaustive:
        report = exhaustive_union(data, args.count, args.rank, cfg.exhaustive_limit)
        report.seed = cfg.seed
    else:
        report = k_subspaces(data, args.count, args.rank, cfg)
    _emit(report_to_dict(report, not args.no_timestamp), args.out)


def _fit_invariant(args):
    data = parse_dataset(args.input)
    action = CyclicAction(args.group_order, args.block_size)
    _, report = best_invariant(data, action, args.pidim)
    _emit(report_to_dict(report, not args.no_timestamp), args.out)


def _demo(args):
    name = args.name
    if name == "lines-plane":
        grid = parse_grid(args.grid or "0:10:0.5")
        result = lab.lines_plane_scan(grid)
    elif name == "weak-limit":
        n_values = parse_grid(args.n_values) if args.n_values else None
        n_values = None if n_values is None else [int(round(n)) for n in n_values]
        result = lab.weak_limit_trace(args.truncation, n_values)
    elif name == "rank-closure":
        t = parse_list(args.t_values) if args.t_values else [0.5] * args.k
        n_values = parse_grid(args.n_values) if args.n_values else None
        n_values = None if n_values is None else [int(round(n)) for n in n_values]
        result = lab.rank_closure_trace(len(t), t, args.truncation, n_values)
    else:
        raw = args.t_values or args.grid
        t_grid = parse_grid(raw) if raw else None
        result = lab.separation_scan(args.k, args.dim, t_grid, seed=args.seed)
    _emit(result.to_dict(), args.out)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(result.to_csv())


def _report(args):
    try:
        with open(args.report, encoding="utf-8") as fh:
            saved = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read report {args.report}: {exc}") from None
    data = parse_dataset(args.input)
    try:
        reported = float(saved["cost"])
    except (KeyError, TypeError, ValueError):
        raise InputError(f"report {args.report} has no numeric cost") from None
    cost = rescore(saved, data)
    diff = abs(cost - reported)
    ok = diff <= RESCORE_TOL * (1.0 + data.energy)
    _emit({"reported_cost": reported, "rescored_cost": cost, "difference": diff, "match": ok}, None)
    return EXIT_OK if ok else EXIT_MISMATCH


_COMMANDS = {
    "fit-single": _fit_single,
    "fit-union": _fit_union,
    "fit-invariant": _fit_invariant,
    "demo": _demo,
    "report": _report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        code = _COMMANDS[args.command](args)
    except SolverRefusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
