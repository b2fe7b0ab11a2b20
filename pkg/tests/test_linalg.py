import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subspacefit.linalg import (
    InputError,
    Projector,
    complement_projector,
    dft_matrix,
    orthonormalize,
    projector_from_basis,
    svd,
)


def charpoly_eigenvalues(g):
    """Eigenvalues from Faddeev-LeVerrier coefficients and a polynomial root finder."""
    n = g.shape[0]
    coeffs = [1.0 + 0j]
    m = np.zeros_like(g)
    for k in range(1, n + 1):
        m = g @ m + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(g @ m) / k)
    return np.sort(np.roots(coeffs).real)[::-1]


def gram_schmidt(vectors, tol):
    basis = []
    scale = max(np.linalg.norm(v) for v in vectors)
    for v in vectors:
        w = v - sum((np.vdot(b, v) * b for b in basis), np.zeros_like(v))
        if np.linalg.norm(w) > tol * scale:
            basis.append(w / np.linalg.norm(w))
    return np.column_stack(basis)


class TestSvd:
    def test_diagonal(self):
        np.testing.assert_array_equal(svd(np.diag([2.0, 1.0])).singular_values, [2.0, 1.0])

    def test_zero(self):
        res = svd(np.zeros((3, 2)))
        np.testing.assert_array_equal(res.singular_values, [0.0, 0.0])
        np.testing.assert_allclose(res.u.conj().T @ res.u, np.eye(2), atol=1e-12)

    def test_against_characteristic_polynomial(self, rng):
        a = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
        sigma = svd(a).singular_values
        expected = charpoly_eigenvalues(a.conj().T @ a)
        np.testing.assert_allclose(sigma**2, expected, rtol=1e-8)

    @pytest.mark.parametrize("shape", [(1, 1), (5, 1), (1, 5), (4, 3), (3, 4), (6, 6), (8, 2), (12, 12)])
    def test_invariants(self, rng, shape):
        a = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        res = svd(a)
        r = min(shape)
        assert res.u.shape == (shape[0], r) and res.v.shape == (shape[1], r)
        np.testing.assert_allclose(res.u.conj().T @ res.u, np.eye(r), atol=1e-10)
        np.testing.assert_allclose(res.v.conj().T @ res.v, np.eye(r), atol=1e-10)
        assert np.max(np.abs(res.reconstruct() - a)) <= 1e-12 * res.s[0]
        assert np.all(np.diff(res.s) <= 0)

    def test_rank_deficient_keeps_orthonormal_vectors(self, rng):
        a = rng.normal(size=(6, 2)) @ rng.normal(size=(2, 5))
        res = svd(a)
        np.testing.assert_allclose(res.u.conj().T @ res.u, np.eye(5), atol=1e-10)
        assert np.max(np.abs(res.reconstruct() - a)) <= 1e-12 * res.s[0]
        assert res.s[2] < 1e-12 * res.s[0]

    def test_sign_convention(self, rng):
        res = svd(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
        for col in res.u.T:
            first = col[np.argmax(np.abs(col) > 1e-12)]
            assert abs(first.imag) < 1e-14 and first.real > 0

    def test_deterministic(self, rng):
        a = rng.normal(size=(5, 3))
        r1, r2 = svd(a), svd(a.copy())
        np.testing.assert_array_equal(r1.u, r2.u)
        np.testing.assert_array_equal(r1.s, r2.s)

    def test_rejects_nonfinite(self):
        with pytest.raises(InputError):
            svd(np.array([[1.0, np.nan]]))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**32 - 1))
    def test_frobenius_identity(self, d, m, seed):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(d, m)) + 1j * rng.normal(size=(d, m))
        s = svd(a).singular_values
        fro = np.sum(np.abs(a) ** 2)
        assert abs(np.sum(s**2) - fro) <= 1e-10 * fro


class TestOrthonormalize:
    def test_scaled_axes(self):
        b = orthonormalize([np.array([2.0, 0]), np.array([0, 3.0])])
        np.testing.assert_allclose(np.abs(b), np.eye(2), atol=1e-15)

    def test_drops_near_dependence(self):
        b = orthonormalize([np.array([1.0, 0]), np.array([1.0, 1e-15])], tol_rank=1e-9)
        assert b.shape == (2, 1)
        np.testing.assert_allclose(np.abs(b[:, 0]), [1, 0])

    def test_against_gram_schmidt(self, rng):
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        w = rng.normal(size=4) + 1j * rng.normal(size=4)
        b = orthonormalize([v, 2 * v, w])
        assert b.shape == (4, 2)
        ref = gram_schmidt([v, 2 * v, w], 1e-9)
        np.testing.assert_allclose(b @ b.conj().T, ref @ ref.conj().T, atol=1e-12)

    def test_all_zero_gives_empty(self):
        assert orthonormalize([np.zeros(3)]).shape == (3, 0)

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            orthonormalize([np.ones(2), np.ones(3)])

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 6), st.integers(1, 5))
    def test_projector_invariant_under_permutation_and_scaling(self, seed, d, n):
        rng = np.random.default_rng(seed)
        vecs = list(rng.normal(size=(n, d)) + 1j * rng.normal(size=(n, d)))
        p1 = projector_from_basis(orthonormalize(vecs)).matrix
        perm = rng.permutation(n)
        scales = rng.uniform(0.1, 10, size=n) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=n))
        p2 = projector_from_basis(orthonormalize([vecs[i] * scales[i] for i in perm])).matrix
        assert np.max(np.abs(p1 - p2)) <= 1e-9


class TestProjectors:
    def test_single_axis(self):
        p = projector_from_basis(np.array([[1.0], [0.0]]))
        np.testing.assert_array_equal(p.matrix, [[1, 0], [0, 0]])

    def test_empty_basis(self):
        p = projector_from_basis(np.zeros((3, 0)))
        np.testing.assert_array_equal(p.matrix, np.zeros((3, 3)))
        assert p.rank == 0

    def test_diagonal_line(self):
        p = projector_from_basis(np.array([[1.0], [1.0]]) / np.sqrt(2))
        np.testing.assert_allclose(p.matrix, np.full((2, 2), 0.5), atol=1e-15)

    def test_rejects_non_orthonormal(self):
        with pytest.raises(InputError):
            projector_from_basis(np.array([[2.0], [0.0]]))

    def test_rejects_non_idempotent(self):
        with pytest.raises(InputError):
            Projector(np.eye(2) * 0.5)

    def test_complement(self):
        zero = projector_from_basis(np.zeros((3, 0)))
        np.testing.assert_array_equal(complement_projector(zero).matrix, np.eye(3))
        np.testing.assert_array_equal(complement_projector(Projector(np.eye(3))).matrix, np.zeros((3, 3)))
        e1 = projector_from_basis(np.array([[1.0], [0.0]]))
        np.testing.assert_array_equal(complement_projector(e1).matrix, [[0, 0], [0, 1]])

    def test_complement_involution(self, rng):
        b = orthonormalize(list(rng.normal(size=(2, 5))))
        p = projector_from_basis(b)
        np.testing.assert_allclose(complement_projector(complement_projector(p)).matrix, p.matrix, atol=1e-15)

    def test_constructed_projectors_are_between_zero_and_identity(self, rng):
        for _ in range(20):
            b = orthonormalize(list(rng.normal(size=(3, 6)) + 1j * rng.normal(size=(3, 6))))
            ev = np.linalg.eigvalsh(projector_from_basis(b).matrix)
            assert ev.min() >= -1e-10 and ev.max() <= 1 + 1e-10


class TestDft:
    def test_small(self):
        np.testing.assert_array_equal(dft_matrix(1), [[1]])
        np.testing.assert_allclose(dft_matrix(2), np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-16)

    @pytest.mark.parametrize("p", [1, 2, 3, 4, 7, 16, 64])
    def test_unitary(self, p):
        w = dft_matrix(p)
        np.testing.assert_allclose(w @ w.conj().T, np.eye(p), atol=1e-12)

    def test_matches_numpy_fft(self, rng):
        x = rng.normal(size=6) + 1j * rng.normal(size=6)
        np.testing.assert_allclose(dft_matrix(6) @ x, np.fft.fft(x, norm="ortho"), atol=1e-13)

    def test_zero_rejected(self):
        with pytest.raises(InputError):
            dft_matrix(0)
