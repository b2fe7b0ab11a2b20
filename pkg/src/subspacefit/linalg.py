"""Dense complex linear algebra primitives.

Everything here works on ``complex128`` numpy arrays.  Real input is
embedded with zero imaginary part.  The SVD is a parallel-ordered one-sided
(Hestenes) Jacobi iteration, which is accurate for the small dense matrices
this package handles and gives reproducible singular vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL_SYM = 1e-10
TOL_IDEM = 1e-10
TOL_ORTH = 1e-10
TOL_RANK = 1e-9

_JACOBI_MAX_SWEEPS = 60


class InputError(ValueError):
    """Raised when an argument violates an operation's preconditions."""


def as_complex_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-D complex128 array (copy)."""
    arr = np.array(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise InputError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} has non-finite entries")
    return arr


def as_complex_vector(v, name="vector"):
    arr = np.array(v, dtype=np.complex128)
    if arr.ndim != 1 or arr.size == 0:
        raise InputError(f"{name} must be a non-empty 1-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} has non-finite entries")
    return arr


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclass(frozen=True, eq=False)
class Projector:
    """Orthogonal projector stored as a dense ``d x d`` matrix.

    Construction validates self-adjointness and idempotence.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = as_complex_matrix(self.matrix, "projector")
        if m.shape[0] != m.shape[1]:
            raise InputError(f"projector must be square, got {m.shape}")
        if max_abs(m - m.conj().T) > TOL_SYM:
            raise InputError("projector is not self-adjoint")
        if max_abs(m @ m - m) > TOL_IDEM:
            raise InputError("projector is not idempotent")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.matrix).real))


@dataclass(frozen=True, eq=False)
class SvdResult:
    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray

    @property
    def u(self):
        return self.left_vectors

    @property
    def s(self):
        return self.singular_values

    @property
    def v(self):
        return self.right_vectors

    def reconstruct(self) -> np.ndarray:
        return (self.left_vectors * self.singular_values) @ self.right_vectors.conj().T


def _round_robin(n):
    """Disjoint column-pair rounds covering every pair once (circle method)."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        pairs = [
            (players[i], players[size - 1 - i])
            for i in range(size // 2)
            if players[i] >= 0 and players[size - 1 - i] >= 0
        ]
        rounds.append(
            (np.array([min(p) for p in pairs], dtype=int), np.array([max(p) for p in pairs], dtype=int))
        )
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _complete_columns(u, keep):
    """Replace columns of ``u`` not flagged in ``keep`` so all columns are orthonormal."""
    d, n = u.shape
    out = u.copy()
    accepted = [out[:, j] for j in range(n) if keep[j]]
    candidates = iter(np.eye(d, dtype=np.complex128).T)
    for j in range(n):
        if keep[j]:
            continue
        while True:
            w = next(candidates).copy()
            for _ in range(2):
                for a in accepted:
                    w -= a * np.vdot(a, w)
            nrm = np.linalg.norm(w)
            if nrm > 0.5:
                break
        out[:, j] = w / nrm
        accepted.append(out[:, j])
    return out


def _jacobi_tall(a):
    """One-sided Jacobi on a matrix with at least as many rows as columns."""
    a = a.copy()
    _, n = a.shape
    v = np.eye(n, dtype=np.complex128)
    eps = np.finfo(float).eps
    rounds = _round_robin(n) if n > 1 else []
    for _ in range(_JACOBI_MAX_SWEEPS):
        rotated = False
        for left, right in rounds:
            ai = a[:, left]
            aj = a[:, right]
            alpha = np.sum(np.abs(ai) ** 2, axis=0)
            beta = np.sum(np.abs(aj) ** 2, axis=0)
            gamma = np.sum(ai.conj() * aj, axis=0)
            g = np.abs(gamma)
            active = g > n * eps * np.sqrt(alpha * beta)
            if not np.any(active):
                continue
            rotated = True
            li, ri = left[active], right[active]
            alpha, beta, gamma, g = alpha[active], beta[active], gamma[active], g[active]
            phase = gamma / g
            zeta = (beta - alpha) / (2.0 * g)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            for mat in (a, v):
                xi = mat[:, li]
                xj = mat[:, ri] * phase.conj()
                mat[:, li] = c * xi - s * xj
                mat[:, ri] = s * xi + c * xj
        if not rotated:
            break
    sigma = np.linalg.norm(a, axis=0)
    return a, sigma, v


def svd(a) -> SvdResult:
    """Thin singular value decomposition ``A = U diag(s) V*``.

    Returns ``r = min(d, m)`` triplets sorted by non-increasing singular
    value (stable on ties).  Each left singular vector is rotated so that its
    first non-negligible entry is real and positive, and the matching right
    vector gets the same phase.
    """
    a = as_complex_matrix(a, "A")
    d, m = a.shape
    transposed = m > d
    work = a.conj().T if transposed else a
    cols, sigma, v = _jacobi_tall(work)

    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    cols = cols[:, order]
    v = v[:, order]

    smax = sigma[0] if sigma.size else 0.0
    keep = sigma > max(smax, 1.0) * 1e-300
    keep &= sigma > smax * work.shape[1] * np.finfo(float).eps
    u = np.zeros_like(cols)
    u[:, keep] = cols[:, keep] / sigma[keep]
    if not np.all(keep):
        u = _complete_columns(u, keep)

    if transposed:
        u, v = v, u
    for j in range(u.shape[1]):
        col = u[:, j]
        mags = np.abs(col)
        idx = int(np.argmax(mags > 1e-12 * mags.max()))
        ph = col[idx] / mags[idx]
        u[:, j] *= ph.conj()
        v[:, j] *= ph.conj()
    return SvdResult(u, sigma, v)


def orthonormalize(vectors, tol_rank=TOL_RANK) -> np.ndarray:
    """Orthonormal basis of the span of ``vectors``, as columns.

    Modified Gram-Schmidt with one reorthogonalization pass.  A vector is
    dropped when its residual norm is at most ``tol_rank`` times the largest
    input norm, so the result can have zero columns.
    """
    vecs = [np.asarray(v, dtype=np.complex128).ravel() for v in vectors]
    if not vecs:
        raise InputError("orthonormalize needs at least one vector to fix the dimension")
    d = vecs[0].size
    if any(v.size != d for v in vecs):
        raise InputError("vectors have mismatched dimensions")
    scale = max(np.linalg.norm(v) for v in vecs)
    basis = []
    for v in vecs:
        w = v.copy()
        for _ in range(2):
            for b in basis:
                w -= b * np.vdot(b, w)
        nrm = np.linalg.norm(w)
        if scale == 0 or nrm <= tol_rank * scale:
            continue
        basis.append(w / nrm)
    if not basis:
        return np.zeros((d, 0), dtype=np.complex128)
    return np.column_stack(basis)


def check_orthonormal(b, tol=TOL_ORTH) -> np.ndarray:
    b = as_complex_matrix(b, "basis")
    k = b.shape[1]
    if k > b.shape[0]:
        raise InputError(f"{k} columns cannot be orthonormal in dimension {b.shape[0]}")
    if k and max_abs(b.conj().T @ b - np.eye(k)) > tol:
        raise InputError("basis columns are not orthonormal")
    return b


def projector_from_basis(b) -> Projector:
    b = check_orthonormal(b)
    return Projector(b @ b.conj().T)


def complement_projector(p: Projector) -> Projector:
    return Projector(np.eye(p.dim, dtype=np.complex128) - p.matrix)


def dft_matrix(p: int) -> np.ndarray:
    """Unitary DFT matrix with entries ``exp(-2 pi i jk/p) / sqrt(p)``."""
    if int(p) != p or p < 1:
        raise InputError(f"DFT size must be a positive integer, got {p}")
    p = int(p)
    jk = np.outer(np.arange(p), np.arange(p)) % p
    return np.exp(-2j * np.pi * jk / p) / np.sqrt(p)
