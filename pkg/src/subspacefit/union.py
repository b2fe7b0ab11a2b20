"""Union-of-subspaces fitting: exact partition search and K-subspaces."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .approximation import DataSet, Subspace, _residual_sq, best_subspace
from .linalg import InputError


class SolverRefusal(RuntimeError):
    """The requested solve is outside what the solver is willing to run."""


@dataclass(frozen=True)
class SolverConfig:
    restarts: int = 20
    max_iters: int = 200
    seed: int = 0
    tol_improve: float = 1e-10
    exhaustive_limit: int = 12
    threads: int = 1

    def __post_init__(self):
        for name in ("restarts", "max_iters", "exhaustive_limit", "threads"):
            if int(getattr(self, name)) < 1:
                raise InputError(f"{name} must be a positive integer, got {getattr(self, name)}")
        if self.tol_improve < 0:
            raise InputError("tol_improve must be non-negative")

    @classmethod
    def from_env(cls, **kwargs) -> "SolverConfig":
        """Like the constructor, with ``threads`` defaulting to ``$THREADS``."""
        if "threads" not in kwargs and os.environ.get("THREADS"):
            kwargs["threads"] = int(os.environ["THREADS"])
        return cls(**kwargs)


@dataclass(frozen=True, eq=False)
class UnionModel:
    subspaces: tuple
    rank_bound: int

    def __post_init__(self):
        subs = tuple(self.subspaces)
        if not subs:
            raise InputError("union model needs at least one subspace")
        d = subs[0].ambient_dim
        if any(s.ambient_dim != d for s in subs):
            raise InputError("subspaces live in different ambient dimensions")
        if any(s.dim > self.rank_bound for s in subs):
            raise InputError(f"a subspace exceeds the rank bound {self.rank_bound}")
        object.__setattr__(self, "subspaces", subs)

    @property
    def count(self) -> int:
        return len(self.subspaces)

    @property
    def ambient_dim(self) -> int:
        return self.subspaces[0].ambient_dim

    def __len__(self):
        return self.count


@dataclass(frozen=True)
class Partition:
    assignment: tuple
    count: int

    def __post_init__(self):
        a = tuple(int(x) for x in self.assignment)
        if any(x < 0 or x >= self.count for x in a):
            raise InputError(f"assignment values must lie in [0, {self.count})")
        object.__setattr__(self, "assignment", a)

    def blocks(self):
        return [[i for i, b in enumerate(self.assignment) if b == j] for j in range(self.count)]

    def __len__(self):
        return len(self.assignment)


@dataclass
class FitReport:
    cost: float
    model: object
    partition: Partition
    iterations: int = 0
    restarts_used: int = 0
    seed: int = 0
    converged: bool = True
    trace: list = field(default_factory=list)
    warnings: list = field(default_factory=list)


def _residual_table(data: DataSet, model: UnionModel) -> np.ndarray:
    if data.dim != model.ambient_dim:
        raise InputError(
            f"dimension mismatch: data in C^{data.dim}, model in C^{model.ambient_dim}"
        )
    return np.stack([_residual_sq(data.vectors, s) for s in model.subspaces], axis=1)


def cost_union(data: DataSet, model: UnionModel) -> float:
    """Sum over the data of the squared distance to the nearest subspace."""
    return float(np.sum(_residual_table(data, model).min(axis=1)))


def assign(data: DataSet, model: UnionModel) -> Partition:
    """Nearest-subspace labels; ties go to the lowest index."""
    table = _residual_table(data, model)
    return Partition(tuple(np.argmin(table, axis=1)), model.count)


def fit_partition(data: DataSet, partition: Partition, l: int, r: int) -> UnionModel:
    """Refit every block with its optimal subspace; empty blocks get the zero subspace."""
    if len(partition) != data.size:
        raise InputError(f"partition has {len(partition)} labels for {data.size} vectors")
    if partition.count > l:
        raise InputError(f"partition uses {partition.count} blocks but only {l} allowed")
    subs = []
    for block in partition.blocks():
        if block:
            subs.append(best_subspace(data.subset(block), r).subspace)
        else:
            subs.append(Subspace.zero(data.dim))
    return UnionModel(tuple(subs), r)


def restricted_growth_strings(m: int, max_blocks: int):
    """Yield set partitions of ``range(m)`` into at most ``max_blocks`` blocks.

    Each partition is a restricted growth string ``a`` with ``a[0] = 0`` and
    ``a[i] <= 1 + max(a[:i])``, so each set partition appears exactly once.
    """
    if m == 0:
        yield ()
        return
    a = [0] * m
    # highest[i] = max(a[:i+1])
    highest = [0] * m

    def rec(i):
        if i == m:
            yield tuple(a)
            return
        top = min(highest[i - 1] + 1, max_blocks - 1)
        for v in range(top + 1):
            a[i] = v
            highest[i] = max(highest[i - 1], v)
            yield from rec(i + 1)

    yield from rec(1)


def exhaustive_union(data: DataSet, l: int, r: int, exhaustive_limit: int = 12) -> FitReport:
    """Global optimum by enumerating every partition into at most ``l`` blocks.

    Block costs are the exact single-subspace optimum, memoized per subset
    (at most ``2^m`` distinct solves).  The first minimal partition in
    enumeration order wins.
    """
    m = data.size
    if l < 1:
        raise InputError(f"subspace count must be at least 1, got {l}")
    if r > data.dim:
        raise InputError(f"rank bound {r} exceeds ambient dimension {data.dim}")
    if m > exhaustive_limit:
        raise SolverRefusal(
            f"instance too large for exhaustive solver: {m} points > limit {exhaustive_limit}"
        )
    l_eff = min(l, m)
    memo = {}

    def block_cost(mask, members):
        c = memo.get(mask)
        if c is None:
            c = best_subspace(data.subset(members), r).cost
            memo[mask] = c
        return c

    best_cost = np.inf
    best_rgs = None
    for rgs in restricted_growth_strings(m, l_eff):
        nblocks = max(rgs) + 1
        masks = [0] * nblocks
        members = [[] for _ in range(nblocks)]
        for i, b in enumerate(rgs):
            masks[b] |= 1 << i
            members[b].append(i)
        total = 0.0
        for mask, mem in zip(masks, members):
            total += block_cost(mask, mem)
            if total >= best_cost:
                break
        else:
            if total < best_cost:
                best_cost = total
                best_rgs = rgs
    count = max(best_rgs) + 1
    partition = Partition(best_rgs, count)
    model = fit_partition(data, partition, count, r)
    return FitReport(
        cost=float(best_cost),
        model=model,
        partition=partition,
        iterations=1,
        restarts_used=1,
        seed=0,
        converged=True,
        trace=[float(best_cost)],
    )


def _farthest_point_labels(data: DataSet, l: int, r: int) -> np.ndarray:
    """Seed lines through mutually far points, then label by nearest line."""
    vecs = data.vectors
    norms = np.sum(np.abs(vecs) ** 2, axis=1)
    chosen = [int(np.argmax(norms))]
    lines = [Subspace.span([vecs[chosen[0]]])]
    while len(lines) < l:
        table = np.stack([_residual_sq(vecs, s) for s in lines], axis=1).min(axis=1)
        table[chosen] = -1.0
        nxt = int(np.argmax(table))
        chosen.append(nxt)
        lines.append(Subspace.span([vecs[nxt]]))
    lines = [s if s.dim <= r else Subspace.zero(data.dim) for s in lines]
    labels = np.argmin(np.stack([_residual_sq(vecs, s) for s in lines], axis=1), axis=1)
    labels[chosen] = np.arange(l)
    return labels


def _repair_empty(labels: np.ndarray, residuals: np.ndarray, l: int) -> np.ndarray:
    """Give each empty block the worst-fit point taken from a block with spares."""
    labels = labels.copy()
    residuals = residuals.copy()
    for j in range(l):
        if np.any(labels == j):
            continue
        sizes = np.bincount(labels, minlength=l)
        donors = sizes[labels] > 1
        cand = np.where(donors, residuals, -np.inf)
        i = int(np.argmax(cand))
        labels[i] = j
        residuals[i] = -np.inf
    return labels


def _one_restart(data, l, r, labels, cfg, tol):
    labels = _repair_empty(labels, np.zeros(data.size), l)
    model = fit_partition(data, Partition(tuple(labels), l), l, r)
    trace = [cost_union(data, model)]
    converged = False
    it = 0
    for it in range(1, cfg.max_iters + 1):
        table = _residual_table(data, model)
        new_labels = np.argmin(table, axis=1)
        new_labels = _repair_empty(new_labels, table.min(axis=1), l)
        model = fit_partition(data, Partition(tuple(new_labels), l), l, r)
        cost = cost_union(data, model)
        trace.append(cost)
        if trace[-2] - cost < tol:
            converged = True
            break
    return model, trace, it, converged


def k_subspaces(data: DataSet, l: int, r: int, cfg: SolverConfig | None = None) -> FitReport:
    """Alternating assign / refit from several seeded initial partitions.

    Restart 0 starts from a farthest-point seeding; the others start from
    uniformly random labels drawn from independent child streams of
    ``cfg.seed``.  The best restart wins, ties to the lowest restart index.
    """
    cfg = cfg or SolverConfig()
    if l < 1:
        raise InputError(f"subspace count must be at least 1, got {l}")
    if r > data.dim:
        raise InputError(f"rank bound {r} exceeds ambient dimension {data.dim}")
    if l > data.size:
        raise InputError(f"cannot fit {l} subspaces to {data.size} vectors")
    tol = cfg.tol_improve * (1.0 + data.energy)
    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)

    def run(i):
        if i == 0:
            labels = _farthest_point_labels(data, l, r)
        else:
            labels = np.random.default_rng(streams[i]).integers(0, l, size=data.size)
        return _one_restart(data, l, r, labels, cfg, tol)

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(run, range(cfg.restarts)))
    else:
        results = [run(i) for i in range(cfg.restarts)]

    best = min(range(cfg.restarts), key=lambda i: (results[i][1][-1], i))
    model, trace, iters, converged = results[best]
    report = FitReport(
        cost=float(trace[-1]),
        model=model,
        partition=assign(data, model),
        iterations=iters,
        restarts_used=cfg.restarts,
        seed=cfg.seed,
        converged=converged,
        trace=[float(c) for c in trace],
    )
    if not converged:
        report.warnings.append(f"best restart hit max_iters={cfg.max_iters} before converging")
    return report
