"""Least-squares subspace cost, its projector form, and single-subspace fitting."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    TOL_RANK,
    InputError,
    Projector,
    as_complex_matrix,
    as_complex_vector,
    check_orthonormal,
    orthonormalize,
    projector_from_basis,
    svd,
)

TOL_PSD = 1e-9


class NotAStateError(InputError):
    """The functional takes negative values on the positive cone."""


@dataclass(frozen=True, eq=False)
class DataSet:
    """A finite set of vectors in C^d, stored as the rows of ``vectors``."""

    vectors: np.ndarray
    label: str | None = None

    def __post_init__(self):
        v = np.array(self.vectors, dtype=np.complex128)
        if v.ndim == 1:
            v = v[None, :]
        if v.ndim != 2 or v.shape[0] == 0 or v.shape[1] == 0:
            raise InputError(f"data set needs at least one non-empty vector, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise InputError("data set has non-finite entries")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def size(self) -> int:
        return self.vectors.shape[0]

    def __len__(self):
        return self.size

    @property
    def matrix(self) -> np.ndarray:
        """Data matrix with the vectors as columns (d x m)."""
        return self.vectors.T

    @property
    def energy(self) -> float:
        """Sum of squared norms."""
        return float(np.sum(np.abs(self.vectors) ** 2))

    def subset(self, indices) -> "DataSet":
        return DataSet(self.vectors[list(indices)], self.label)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of C^d given by an orthonormal basis (columns, possibly none)."""

    basis: np.ndarray

    def __post_init__(self):
        b = check_orthonormal(self.basis)
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def zero(cls, d: int) -> "Subspace":
        return cls(np.zeros((d, 0), dtype=np.complex128))

    @classmethod
    def span(cls, vectors, tol_rank=TOL_RANK) -> "Subspace":
        return cls(orthonormalize(vectors, tol_rank))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> Projector:
        return projector_from_basis(self.basis)

    def residuals(self, vectors: np.ndarray) -> np.ndarray:
        """Rows of ``vectors`` minus their orthogonal projections."""
        b = self.basis
        return vectors - (vectors @ b.conj()) @ b.T


def _check_dim(d, subspace):
    if d != subspace.ambient_dim:
        raise InputError(f"dimension mismatch: data in C^{d}, subspace in C^{subspace.ambient_dim}")


def _residual_sq(vectors: np.ndarray, subspace: Subspace) -> np.ndarray:
    res = subspace.residuals(vectors)
    return np.sum(res.real**2 + res.imag**2, axis=-1)


def distance_sq(f, v: Subspace) -> float:
    """Squared distance from ``f`` to ``v``, computed as ``||f - P_V f||^2``."""
    f = as_complex_vector(f, "f")
    _check_dim(f.size, v)
    return float(_residual_sq(f[None, :], v)[0])


def cost_single(data: DataSet, v: Subspace) -> float:
    """Sum of squared distances of the data to ``v``."""
    _check_dim(data.dim, v)
    return float(np.sum(_residual_sq(data.vectors, v)))


def phi(data: DataSet, q, *, return_imag=False):
    """Evaluate ``sum_f <Q f, f>`` for a d x d operator ``Q``.

    ``Q`` may be a :class:`Projector` or any square matrix.  The real part is
    returned; with ``return_imag=True`` the imaginary residue comes back as
    a second value.
    """
    q = q.matrix if isinstance(q, Projector) else as_complex_matrix(q, "Q")
    if q.shape != (data.dim, data.dim):
        raise InputError(f"operator shape {q.shape} does not match data dimension {data.dim}")
    f = data.vectors
    val = np.sum(f.conj() * (f @ q.T))
    if return_imag:
        return float(val.real), float(val.imag)
    return float(val.real)


@dataclass(frozen=True, eq=False)
class BestSubspace:
    subspace: Subspace
    cost: float
    singular_values: np.ndarray = field(repr=False)

    def __iter__(self):
        # allows ``v, cost = best_subspace(...)``
        yield self.subspace
        yield self.cost


def best_subspace(data: DataSet, r: int, tol_rank=TOL_RANK) -> BestSubspace:
    """Optimal subspace of dimension at most ``r`` (Eckart-Young).

    The subspace is spanned by the top left singular vectors of the data
    matrix and the cost is the tail sum of squared singular values.  When the
    data has numerical rank below ``r`` only the rank-many directions are
    kept.
    """
    if int(r) != r or r < 0:
        raise InputError(f"rank bound must be a non-negative integer, got {r}")
    r = int(r)
    if r > data.dim:
        raise InputError(f"rank bound {r} exceeds ambient dimension {data.dim}")
    res = svd(data.matrix)
    s = res.singular_values
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol_rank * smax)) if smax > 0 else 0
    keep = min(r, rank)
    cost = float(np.sum(s[r:] ** 2))
    return BestSubspace(Subspace(res.left_vectors[:, :keep]), cost, s)


@dataclass(frozen=True, eq=False)
class SymmetricFunctional:
    """Linear functional ``A -> Re trace(sigma A)`` on d x d matrices."""

    sigma: np.ndarray

    def __post_init__(self):
        s = as_complex_matrix(self.sigma, "sigma")
        if s.shape[0] != s.shape[1]:
            raise InputError(f"sigma must be square, got {s.shape}")
        s.setflags(write=False)
        object.__setattr__(self, "sigma", s)

    @property
    def dim(self) -> int:
        return self.sigma.shape[0]

    def __call__(self, a) -> float:
        a = as_complex_matrix(a, "A")
        return float(np.trace(self.sigma @ a).real)


def functional_to_frame(functional: SymmetricFunctional, tol_psd=TOL_PSD) -> DataSet:
    """Vectors ``F`` with ``trace(sigma A) = sum_f <A f, f>`` for every PSD ``A``.

    Uses the eigendecomposition of the Hermitian part of sigma; each
    eigenpair above the tolerance contributes ``sqrt(lambda) u``.  A
    significantly negative eigenvalue means the functional is negative
    somewhere on the PSD cone, and :class:`NotAStateError` is raised.  The
    returned set may be a single zero vector when sigma vanishes.
    """
    s = functional.sigma
    herm = (s + s.conj().T) / 2
    scale = float(np.linalg.norm(s, 2))
    lam, vecs = np.linalg.eigh(herm)
    if scale > 0 and lam[0] < -tol_psd * scale:
        raise NotAStateError(
            f"functional is not non-negative on PSD operators (eigenvalue {lam[0]:.3g})"
        )
    keep = lam > tol_psd * scale
    order = np.argsort(-lam[keep], kind="stable")
    frame = (vecs[:, keep] * np.sqrt(lam[keep]))[:, order].T
    if frame.shape[0] == 0:
        frame = np.zeros((1, functional.dim))
    return DataSet(frame, label="frame")
