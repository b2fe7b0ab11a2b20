"""Shift-invariant subspace fitting for the cyclic group Z/pZ acting on C^(pq).

The generator shifts a vector by ``q`` positions (one block), cyclically.
A unitary DFT across the block index splits C^(pq) into ``p`` fibers of
dimension ``q``, one per character, on which the shift acts by a scalar.
Invariant subspaces are exactly direct sums of per-fiber subspaces, so the
invariant fitting problem separates into ``p`` independent low-rank fits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .approximation import DataSet, Subspace, best_subspace, cost_single
from .linalg import InputError, as_complex_matrix, dft_matrix, max_abs
from .union import FitReport, Partition


@dataclass(frozen=True)
class CyclicAction:
    p: int
    q: int

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise InputError(f"{name} must be a positive integer, got {v}")
            object.__setattr__(self, name, int(v))

    @property
    def dim(self) -> int:
        return self.p * self.q


def shift_operator(action: CyclicAction) -> np.ndarray:
    """Permutation matrix with ``(S x)[n] = x[(n - q) mod pq]``."""
    d = action.dim
    s = np.zeros((d, d))
    n = np.arange(d)
    s[n, (n - action.q) % d] = 1.0
    return s


@dataclass(frozen=True, eq=False)
class FiberData:
    """``fibers[chi]`` is the m x q array of fiber components at character chi."""

    action: CyclicAction
    fibers: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.fibers, dtype=np.complex128)
        if f.ndim != 3 or f.shape[0] != self.action.p or f.shape[2] != self.action.q:
            raise InputError(
                f"fiber array shape {f.shape} does not match p={self.action.p}, q={self.action.q}"
            )
        object.__setattr__(self, "fibers", f)

    def dataset(self, chi: int) -> DataSet:
        return DataSet(self.fibers[chi], label=f"fiber {chi}")


def _blocks(vectors: np.ndarray, action: CyclicAction) -> np.ndarray:
    # (m, pq) -> (m, p, q): block position j, intra-block index s
    return vectors.reshape(vectors.shape[0], action.p, action.q)


def fiber_decompose(data: DataSet, action: CyclicAction) -> FiberData:
    if data.dim != action.dim:
        raise InputError(f"data dimension {data.dim} != p*q = {action.dim}")
    w = dft_matrix(action.p)
    x = _blocks(data.vectors, action)
    fibers = np.einsum("cj,mjs->cms", w, x)
    return FiberData(action, fibers)


def fiber_recompose(fd: FiberData) -> DataSet:
    w = dft_matrix(fd.action.p)
    x = np.einsum("cj,cms->mjs", w.conj(), fd.fibers)
    return DataSet(x.reshape(x.shape[0], fd.action.dim))


def _fiber_vectors_to_ambient(action: CyclicAction, chi: int, cols: np.ndarray) -> np.ndarray:
    """Embed fiber-chi column vectors (q x k) as vectors of C^(pq) (pq x k)."""
    w = dft_matrix(action.p)
    # inverse transform of a delta at chi: block j gets conj(W[chi, j]) * v
    out = np.einsum("j,sk->jsk", w[chi].conj(), cols)
    return out.reshape(action.dim, cols.shape[1])


@dataclass(frozen=True, eq=False)
class FiberedModel:
    action: CyclicAction
    fibers: tuple
    pidim_bound: int

    def __post_init__(self):
        fibers = tuple(self.fibers)
        if len(fibers) != self.action.p:
            raise InputError(f"need {self.action.p} fibers, got {len(fibers)}")
        if any(f.ambient_dim != self.action.q for f in fibers):
            raise InputError(f"fiber subspaces must live in C^{self.action.q}")
        if any(f.dim > self.pidim_bound for f in fibers):
            raise InputError(f"a fiber exceeds the bound {self.pidim_bound}")
        object.__setattr__(self, "fibers", fibers)

    def assemble(self) -> Subspace:
        """The invariant subspace of C^(pq) with these fibers."""
        cols = [
            _fiber_vectors_to_ambient(self.action, chi, f.basis)
            for chi, f in enumerate(self.fibers)
        ]
        return Subspace(np.concatenate(cols, axis=1))

    def generators(self) -> np.ndarray:
        """``pi_dimension`` many vectors whose shifts span the assembled subspace.

        Generator ``i`` carries the i-th basis vector of every fiber that has
        one.
        """
        k = pi_dimension(self)
        gens = np.zeros((self.action.dim, k), dtype=np.complex128)
        for chi, f in enumerate(self.fibers):
            if f.dim:
                padded = np.zeros((self.action.q, k), dtype=np.complex128)
                padded[:, : f.dim] = f.basis
                gens += _fiber_vectors_to_ambient(self.action, chi, padded)
        return gens


def pi_dimension(model: FiberedModel) -> int:
    """Minimal number of generators of the invariant subspace: the largest fiber dimension."""
    return max(f.dim for f in model.fibers)


def is_invariant(v: Subspace, action: CyclicAction, tol: float = 1e-9) -> bool:
    if v.ambient_dim != action.dim:
        raise InputError(f"subspace dimension {v.ambient_dim} != p*q = {action.dim}")
    s = shift_operator(action)
    p = v.projector.matrix
    return max_abs(s @ p @ s.T - p) <= tol


def fibered_cost(fd: FiberData, model: FiberedModel) -> float:
    return float(sum(cost_single(fd.dataset(chi), f) for chi, f in enumerate(model.fibers)))


def best_invariant(data: DataSet, action: CyclicAction, k: int):
    """Optimal invariant subspace with at most ``k`` generators.

    Each fiber gets its own Eckart-Young fit of rank ``k``; the total cost is
    the sum of fiber costs, which by Parseval equals the direct-domain cost
    of the assembled subspace.  Returns ``(model, report)``.
    """
    if int(k) != k or k < 0:
        raise InputError(f"generator bound must be a non-negative integer, got {k}")
    if k > action.q:
        raise InputError(f"generator bound {k} exceeds block size {action.q}")
    fd = fiber_decompose(data, action)
    fits = [best_subspace(fd.dataset(chi), k) for chi in range(action.p)]
    model = FiberedModel(action, tuple(f.subspace for f in fits), int(k))
    cost = float(sum(f.cost for f in fits))
    report = FitReport(
        cost=cost,
        model=model,
        partition=Partition((0,) * data.size, 1),
        iterations=1,
        restarts_used=1,
        seed=0,
        converged=True,
        trace=[cost],
    )
    return model, report


def random_fibered_model(action: CyclicAction, k: int, rng) -> FiberedModel:
    """Fibers spanned by ``k`` random complex Gaussian vectors each."""
    fibers = []
    for _ in range(action.p):
        g = rng.normal(size=(action.q, k)) + 1j * rng.normal(size=(action.q, k))
        qmat, _ = np.linalg.qr(as_complex_matrix(g))
        fibers.append(Subspace(qmat[:, :k]))
    return FiberedModel(action, tuple(fibers), k)
