"""Numerical scans of subspace families where the least-squares infimum is or is not attained.

Four families are provided:

* ``lines_plane_scan``: lines ``span{e3 + c e2}`` in R^3 together with the
  plane ``span{e1, e2}``; the data ``{e2}`` has infimum 0 over the lines,
  approached as ``c -> inf`` but reached only by the plane.
* ``weak_limit_trace``: rank-2 projectors onto ``span{e1 + e_n, e2 + e_{n+1}}``
  in a truncation of l^2, whose matrix entries on a fixed probe window
  converge to those of ``(P_{e1} + P_{e2}) / 2``.
* ``rank_closure_trace``: rank-k projectors whose probe entries converge to
  a diagonal positive operator of rank k and norm at most 1.
* ``separation_scan``: k-dimensional subspaces approaching a single excluded
  subspace; the cost on k points tends to 0 without reaching it while k-1
  points are fitted exactly.

Infinite-dimensional families are truncated to R^N.  Entries indexed by
escaping basis vectors leave the probe window after finitely many steps, so
probe residuals become exactly zero rather than merely small.

Not simulated: the family of all finite-dimensional subspaces of an
infinite-dimensional space, and the co-dimension-one family minus a single
hyperplane, neither of which survives truncation faithfully.  No routine
here decides whether an arbitrary family attains its infima.
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field

import numpy as np

from .approximation import DataSet, Subspace, cost_single
from .linalg import InputError, orthonormalize

PROBE_SIZE = 10
DEFAULT_TRUNCATION = 64
ATTAIN_RTOL = 1e-9


@dataclass
class AttainmentScan:
    label: str
    grid: list
    costs: list
    infimum_estimate: float
    attained_candidates: list
    external_minimizer_cost: float | None = None
    external_attains: bool = False
    # separation family only: costs of the k-1 point data set, and the excluded member
    reduced_costs: list | None = None
    excluded_cost: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["parameter", "cost"])
        for x, c in zip(self.grid, self.costs):
            w.writerow([repr(float(x)), repr(float(c))])
        return buf.getvalue()


@dataclass
class WeakConvergenceTrace:
    label: str
    truncation: int
    indices: list
    residuals: list
    psd_gaps: list
    decomposition_residuals: list | None = None
    probe_size: int = PROBE_SIZE
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["index", "residual", "psd_gap"]
        if self.decomposition_residuals is not None:
            header.append("decomposition_residual")
        w.writerow(header)
        for i, n in enumerate(self.indices):
            row = [n, repr(float(self.residuals[i])), repr(float(self.psd_gaps[i]))]
            if self.decomposition_residuals is not None:
                row.append(repr(float(self.decomposition_residuals[i])))
            w.writerow(row)
        return buf.getvalue()


def _finish_scan(label, grid, costs, external=None, energy=1.0, **extra) -> AttainmentScan:
    evaluated = list(costs) + ([external] if external is not None else [])
    inf = float(min(evaluated))
    band = inf + ATTAIN_RTOL * (1.0 + energy)
    attained = [(float(x), float(c)) for x, c in zip(grid, costs) if c <= band]
    return AttainmentScan(
        label=label,
        grid=[float(x) for x in grid],
        costs=[float(c) for c in costs],
        infimum_estimate=inf,
        attained_candidates=attained,
        external_minimizer_cost=None if external is None else float(external),
        external_attains=external is not None and external <= band,
        **extra,
    )


def lines_plane_scan(c_grid) -> AttainmentScan:
    """Cost of ``{e2}`` against the lines ``span{e3 + c e2}`` and the plane ``span{e1, e2}``."""
    c_grid = [float(c) for c in c_grid]
    if not c_grid:
        raise InputError("lines_plane_scan needs a non-empty grid")
    e = np.eye(3)
    data = DataSet([e[1]])
    costs = [cost_single(data, Subspace.span([e[2] + c * e[1]])) for c in c_grid]
    plane = cost_single(data, Subspace(e[:, :2]))
    return _finish_scan("lines-plane", c_grid, costs, external=plane, energy=data.energy)


def _probe_residual(diff: np.ndarray) -> float:
    return float(np.max(np.abs(diff[:PROBE_SIZE, :PROBE_SIZE])))


def _unit(N, i):
    # basis vector e_i, 1-based as in l^2
    v = np.zeros(N)
    v[i - 1] = 1.0
    return v


def _rank_one(v):
    return np.outer(v, v) / np.dot(v, v)


def weak_limit_trace(N: int = DEFAULT_TRUNCATION, n_list=None) -> WeakConvergenceTrace:
    """Projectors onto ``span{e1 + e_n, e2 + e_{n+1}}`` versus ``Q = (P_{e1} + P_{e2}) / 2``.

    For each ``n`` this records the largest probe-window entry of ``P_n - Q``,
    the smallest eigenvalue of ``P_n - Q``, and the max-norm distance of
    ``P_n`` from ``Q + (P_{e_n} + P_{e_{n+1}}) / 2``.
    """
    n_list = list(range(3, 31)) if n_list is None else [int(n) for n in n_list]
    if not n_list:
        raise InputError("weak_limit_trace needs at least one index")
    if min(n_list) < 3:
        raise InputError("sequence indices start at n = 3")
    if max(n_list) + 1 > N:
        raise InputError(f"index {max(n_list)} + 1 exceeds truncation N = {N}")
    q = (_rank_one(_unit(N, 1)) + _rank_one(_unit(N, 2))) / 2
    residuals, gaps, decomp = [], [], []
    for n in n_list:
        v = _unit(N, 1) + _unit(N, n)
        w = _unit(N, 2) + _unit(N, n + 1)
        pn = (np.outer(v, v) + np.outer(w, w)) / 2
        diff = pn - q
        residuals.append(_probe_residual(diff))
        gaps.append(float(np.linalg.eigvalsh(diff)[0]))
        tail = (_rank_one(_unit(N, n)) + _rank_one(_unit(N, n + 1))) / 2
        decomp.append(float(np.max(np.abs(diff - tail))))
    return WeakConvergenceTrace(
        label="weak-limit",
        truncation=N,
        indices=n_list,
        residuals=residuals,
        psd_gaps=gaps,
        decomposition_residuals=decomp,
    )


def rank_closure_trace(k: int, t, N: int = DEFAULT_TRUNCATION, n_list=None) -> WeakConvergenceTrace:
    """Rank-k projectors ``x_n`` approaching ``x = diag(t_1^2, ..., t_k^2, 0, ...)``.

    ``x_n`` projects onto the orthogonal vectors
    ``|t_i| e_i + sqrt(1 - t_i^2) e_{n i + n (k + 1)}``.
    """
    t = np.asarray(t, dtype=float)
    if int(k) != k or k < 1 or t.shape != (k,):
        raise InputError(f"need k >= 1 values in t, got k={k}, t={t.tolist()}")
    if np.any(np.abs(t) > 1):
        raise InputError("t values must lie in [-1, 1]")
    k = int(k)
    n_list = list(range(1, N // (2 * k + 1) + 1)) if n_list is None else [int(n) for n in n_list]
    if not n_list or min(n_list) < 1:
        raise InputError("sequence indices must be positive")
    if max(n_list) * (2 * k + 1) > N:
        raise InputError(f"escape index {max(n_list) * (2 * k + 1)} exceeds truncation N = {N}")
    s = np.sqrt(1.0 - t**2)
    x = np.zeros((N, N))
    x[np.arange(k), np.arange(k)] = t**2
    residuals, gaps = [], []
    for n in n_list:
        gens = np.stack(
            [abs(t[i - 1]) * _unit(N, i) + s[i - 1] * _unit(N, n * i + n * (k + 1)) for i in range(1, k + 1)]
        )
        gram = gens @ gens.T
        if np.max(np.abs(gram - np.eye(k))) > 1e-12:
            raise InputError(f"generators at n={n} are not orthonormal")
        xn = gens.T @ gens
        diff = xn - x
        residuals.append(_probe_residual(diff))
        gaps.append(float(np.linalg.eigvalsh(diff)[0]))
    return WeakConvergenceTrace(
        label="rank-closure",
        truncation=N,
        indices=n_list,
        residuals=residuals,
        psd_gaps=gaps,
        extra={"k": k, "t": t.tolist()},
    )


def separation_scan(k: int = 2, d: int = 4, t_grid=None, seed: int = 0) -> AttainmentScan:
    """Subspaces ``span{v_1, ..., v_{k-1}, v_k + t u}`` for data ``{v_1, ..., v_k}``.

    ``v_i`` are seeded Gaussian vectors and ``u`` is a unit vector orthogonal
    to all of them.  Every member with ``t != 0`` differs from the excluded
    subspace ``span{v_1, ..., v_k}``.  ``reduced_costs`` holds the costs of
    the first ``k - 1`` vectors, which every member contains.
    """
    if int(k) != k or int(d) != d or k < 1 or k >= d:
        raise InputError(f"need 1 <= k < d, got k={k}, d={d}")
    k, d = int(k), int(d)
    t_grid = list(np.logspace(0, -6, 13)) if t_grid is None else [float(t) for t in t_grid]
    if not t_grid or min(t_grid) <= 0:
        raise InputError("t grid must be non-empty and positive")
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(k, d))
    full = orthonormalize(list(v) + list(np.eye(d)))
    u = full[:, k].real
    data = DataSet(v)
    reduced = DataSet(v[: k - 1]) if k > 1 else None
    costs, reduced_costs = [], []
    for t in t_grid:
        gens = list(v[: k - 1]) + [v[k - 1] + t * u]
        sub = Subspace.span(gens)
        costs.append(cost_single(data, sub))
        reduced_costs.append(cost_single(reduced, sub) if reduced is not None else 0.0)
    excluded = cost_single(data, Subspace.span(list(v)))
    return _finish_scan(
        "msap-separation",
        t_grid,
        costs,
        energy=data.energy,
        reduced_costs=[float(c) for c in reduced_costs],
        excluded_cost=float(excluded),
    )
