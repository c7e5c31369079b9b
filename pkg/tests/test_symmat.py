"""Spectral primitives: eigendecomposition, rank truncation, centrality.

Closed-form 2x2 values come from the characteristic polynomial by hand;
reconstruction residuals are their own oracle.
"""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netcpd import (DegenerateInputError, InvalidInputError, SymMatrix,
                    ed_truncate, eigh_sym, eigenvector_centrality)

RT2 = np.sqrt(2.0)


class TestSymMatrix:
    def test_symmetrizes_roundoff(self):
        a = np.array([[1.0, 2.0], [2.0 + 1e-12, 1.0]])
        m = SymMatrix(a)
        assert m.values[0, 1] == m.values[1, 0]

    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidInputError):
            SymMatrix(np.array([[0.0, 1.0], [0.5, 0.0]]))

    def test_rejects_tiny(self):
        with pytest.raises(InvalidInputError):
            SymMatrix(np.array([[1.0]]))


class TestEighSym:
    def test_two_by_two_swap(self):
        # [[0,1],[1,0]]: lambda = +-1, eigenvectors (1,1)/sqrt2 and (1,-1)/sqrt2.
        dec = eigh_sym(SymMatrix(np.array([[0.0, 1.0], [1.0, 0.0]])))
        np.testing.assert_allclose(dec.eigenvalues, [1.0, -1.0], atol=1e-12)
        np.testing.assert_allclose(dec.eigenvectors[:, 0], [1 / RT2, 1 / RT2], atol=1e-12)
        np.testing.assert_allclose(dec.eigenvectors[:, 1], [1 / RT2, -1 / RT2], atol=1e-12)

    def test_zero_matrix(self):
        dec = eigh_sym(SymMatrix(np.zeros((4, 4))))
        np.testing.assert_allclose(dec.eigenvalues, np.zeros(4), atol=0)

    def test_residual_oracle_5x5(self):
        rng = np.random.default_rng(17)
        a = rng.normal(size=(5, 5))
        m = SymMatrix(a + a.T)
        dec = eigh_sym(m)
        v, lam = dec.eigenvectors, dec.eigenvalues
        assert np.max(np.abs(v.T @ v - np.eye(5))) < 1e-10
        assert np.max(np.abs((v * lam) @ v.T - m.values)) < 1e-10

    def test_ordering_by_absolute_value(self):
        m = SymMatrix(np.diag([1.0, -3.0, 2.0]))
        dec = eigh_sym(m)
        np.testing.assert_allclose(dec.eigenvalues, [-3.0, 2.0, 1.0])

    def test_sign_convention_deterministic(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=(6, 6))
        m = SymMatrix(a + a.T)
        d1, d2 = eigh_sym(m), eigh_sym(m)
        np.testing.assert_array_equal(d1.eigenvectors, d2.eigenvectors)
        for j in range(6):
            col = d1.eigenvectors[:, j]
            assert col[np.argmax(np.abs(col))] >= 0

    def test_nonfinite_rejected(self):
        a = np.zeros((3, 3))
        a[0, 1] = a[1, 0] = np.nan
        with pytest.raises(InvalidInputError):
            eigh_sym(SymMatrix(a))


class TestEdTruncate:
    def test_rank_one_exact(self):
        m = SymMatrix(0.5 * np.ones((4, 4)))
        np.testing.assert_allclose(ed_truncate(m, 1).values, m.values, atol=1e-12)

    def test_full_rank_identity(self):
        rng = np.random.default_rng(11)
        a = rng.normal(size=(6, 6))
        m = SymMatrix(a + a.T)
        np.testing.assert_allclose(ed_truncate(m, 6).values, m.values, atol=1e-10)

    def test_two_by_two_keeps_positive_on_tie(self):
        m = SymMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
        np.testing.assert_allclose(ed_truncate(m, 1).values,
                                   [[0.5, 0.5], [0.5, 0.5]], atol=1e-12)

    @pytest.mark.parametrize("k", [0, 5, -1])
    def test_rank_out_of_range(self, k):
        m = SymMatrix(np.eye(4))
        with pytest.raises(InvalidInputError):
            ed_truncate(m, k)

    def test_idempotent(self):
        rng = np.random.default_rng(5)
        a = rng.normal(size=(7, 7))
        m = SymMatrix(a + a.T)
        once = ed_truncate(m, 3)
        np.testing.assert_allclose(ed_truncate(once, 3).values, once.values, atol=1e-8)

    def test_rank_bound(self):
        rng = np.random.default_rng(7)
        a = rng.normal(size=(8, 8))
        m = SymMatrix(a + a.T)
        for k in (1, 3, 5):
            sv = np.linalg.svd(ed_truncate(m, k).values, compute_uv=False)
            lead = np.abs(eigh_sym(m).eigenvalues[0])
            assert np.all(sv[k:] < 1e-8 * lead)

    def test_permutation_equivariance(self):
        # needs a strict spectral gap at the cut; build one explicitly
        rng = np.random.default_rng(23)
        q, _ = np.linalg.qr(rng.normal(size=(6, 6)))
        m = SymMatrix((q * np.array([9.0, -6.0, 4.0, 2.0, 1.0, 0.5])) @ q.T)
        k = 2
        for trial in range(5):
            perm = rng.permutation(6)
            p = np.eye(6)[perm]
            lhs = ed_truncate(SymMatrix(p @ m.values @ p.T), k).values
            rhs = p @ ed_truncate(m, k).values @ p.T
            np.testing.assert_allclose(lhs, rhs, atol=1e-8)

    def test_eckart_young_spot_check(self):
        # rank-k truncation beats 100 random symmetric rank-k competitors
        rng = np.random.default_rng(29)
        a = rng.normal(size=(4, 4))
        m = SymMatrix(a + a.T)
        for k in (1, 2, 3):
            best = np.linalg.norm(m.values - ed_truncate(m, k).values)
            for _ in range(100):
                q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
                d = np.zeros(4)
                d[:k] = rng.normal(size=k) * 3.0
                r = (q * d) @ q.T
                assert best <= np.linalg.norm(m.values - r) + 1e-12


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000),
       n=st.integers(min_value=2, max_value=8))
def test_ed_reconstruction_property(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n))
    m = SymMatrix(a + a.T)
    np.testing.assert_allclose(ed_truncate(m, n).values, m.values, atol=1e-8)


class TestEigenvectorCentrality:
    def test_complete_graph(self):
        adj = np.ones((3, 3)) - np.eye(3)
        np.testing.assert_allclose(eigenvector_centrality(SymMatrix(adj)),
                                   np.ones(3), atol=1e-10)

    def test_star(self):
        # center 0: leading pair lambda=sqrt(2), v ~ (sqrt2, 1, 1)
        adj = np.array([[0, 1, 1], [1, 0, 0], [1, 0, 0]], dtype=float)
        got = eigenvector_centrality(SymMatrix(adj))
        np.testing.assert_allclose(got, [1.0, 1 / RT2, 1 / RT2], atol=1e-5)

    def test_single_edge(self):
        adj = np.array([[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(eigenvector_centrality(SymMatrix(adj)),
                                   [1.0, 1.0], atol=1e-10)

    def test_all_zero_degenerate(self):
        with pytest.raises(DegenerateInputError):
            eigenvector_centrality(SymMatrix(np.zeros((3, 3))))

    def test_negative_rejected(self):
        a = np.zeros((3, 3))
        a[0, 1] = a[1, 0] = -1.0
        with pytest.raises(InvalidInputError):
            eigenvector_centrality(SymMatrix(a))

    def test_disconnected_allowed(self):
        # two components; the denser one dominates, other nodes get ~0
        adj = np.zeros((5, 5))
        for i, j in ((0, 1), (0, 2), (1, 2)):
            adj[i, j] = adj[j, i] = 1.0
        adj[3, 4] = adj[4, 3] = 1.0
        got = eigenvector_centrality(SymMatrix(adj))
        np.testing.assert_allclose(got[:3], np.ones(3), atol=1e-8)
        np.testing.assert_allclose(got[3:], np.zeros(2), atol=1e-8)
