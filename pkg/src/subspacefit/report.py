"""JSON serialization of fit reports and CSV data ingestion."""

from __future__ import annotations

import datetime as _dt
import json

import numpy as np

from .approximation import DataSet, Subspace, cost_single
from .fiber import CyclicAction, FiberedModel
from .linalg import InputError
from .union import FitReport, UnionModel, cost_union


class ParseError(InputError):
    pass


def parse_scalar(text: str) -> complex:
    """Parse ``"1.5"``, ``"1+2i"``, ``"-3.5e-2-1j"`` or ``"2i"``."""
    s = text.strip().replace(" ", "")
    if s.endswith("i"):
        s = s[:-1] + "j"
    if not s or "i" in s:
        raise ValueError(f"cannot parse {text!r} as a number")
    try:
        z = complex(s)
    except ValueError:
        raise ValueError(f"cannot parse {text!r} as a number") from None
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError(f"non-finite value {text!r}")
    return z


def parse_dataset_text(text: str, label=None) -> DataSet:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        cells = stripped.split(",")
        row = []
        for col, cell in enumerate(cells, start=1):
            try:
                row.append(parse_scalar(cell))
            except ValueError as exc:
                raise ParseError(f"row {lineno}, column {col}: {exc}") from None
        if rows and len(row) != len(rows[0][1]):
            raise ParseError(
                f"row {lineno} has {len(row)} entries, expected {len(rows[0][1])}"
            )
        rows.append((lineno, row))
    if not rows:
        raise InputError("data file contains no vectors")
    return DataSet(np.array([r for _, r in rows], dtype=np.complex128), label=label)


def parse_dataset(path, fmt: str = "csv") -> DataSet:
    """Read a CSV data set: one vector per row, optional ``# dim=d`` header."""
    if fmt != "csv":
        raise InputError(f"unsupported data format {fmt!r}")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_dataset_text(text, label=str(path))


def write_dataset_csv(data: DataSet, path) -> None:
    def fmt(z):
        re_, im = float(z.real), float(z.imag)
        if im == 0:
            return repr(re_)
        return f"{re_!r}{'+' if im >= 0 else '-'}{abs(im)!r}i"

    with open(path, "w", encoding="utf-8") as fh:
        for row in data.vectors:
            fh.write(",".join(fmt(z) for z in row) + "\n")


def _encode_basis(b: np.ndarray) -> list:
    # list of columns, each a list of [re, im]
    return [[[float(z.real), float(z.imag)] for z in col] for col in b.T]


def _decode_basis(cols, ambient_dim) -> np.ndarray:
    if not cols:
        return np.zeros((ambient_dim, 0), dtype=np.complex128)
    arr = np.array(cols, dtype=float)
    return (arr[..., 0] + 1j * arr[..., 1]).T


def encode_model(model) -> dict:
    if isinstance(model, UnionModel):
        return {
            "type": "union",
            "ambient_dim": model.ambient_dim,
            "rank_bound": model.rank_bound,
            "bases": [_encode_basis(s.basis) for s in model.subspaces],
        }
    if isinstance(model, FiberedModel):
        return {
            "type": "invariant",
            "ambient_dim": model.action.q,
            "group": {"p": model.action.p, "q": model.action.q},
            "pidim": model.pidim_bound,
            "bases": [_encode_basis(f.basis) for f in model.fibers],
        }
    raise TypeError(f"cannot encode model of type {type(model).__name__}")


def decode_model(obj: dict):
    try:
        kind = obj["type"]
        d = int(obj["ambient_dim"])
        subs = tuple(Subspace(_decode_basis(b, d)) for b in obj["bases"])
        if kind == "union":
            return UnionModel(subs, int(obj["rank_bound"]))
        if kind == "invariant":
            action = CyclicAction(int(obj["group"]["p"]), int(obj["group"]["q"]))
            return FiberedModel(action, subs, int(obj["pidim"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed model: {exc}") from None
    raise InputError(f"unknown model type {kind!r}")


def report_to_dict(report: FitReport, timestamp: bool = True) -> dict:
    return {
        "cost": float(report.cost),
        "model": encode_model(report.model),
        "partition": list(report.partition.assignment),
        "iterations": int(report.iterations),
        "restarts_used": int(report.restarts_used),
        "seed": int(report.seed),
        "converged": bool(report.converged),
        "trace": [float(c) for c in report.trace],
        "warnings": list(report.warnings),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat() if timestamp else None,
    }


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def rescore(report: dict, data: DataSet) -> float:
    """Cost of the model stored in a report dict on ``data``."""
    model = decode_model(report["model"])
    if isinstance(model, UnionModel):
        return cost_union(data, model)
    return cost_single(data, model.assemble())
