import unittest

import numpy as np

from pyrepsim.cca import cca, linear_regression_r2, pillai_trace, r2_cca, rho_bar_cca
from pyrepsim.cka import cka
from pyrepsim.exceptions import DimensionMismatchError, RankError, ValidationError
from pyrepsim.kernels import GramMatrix, gram_linear
from pyrepsim.reprdata import ActivationMatrix, center_columns, orthonormal_basis, spectrum


def _pair(seed, n=30, p1=4, p2=6):
    rng = np.random.RandomState(seed)
    return center_columns(rng.randn(n, p1)), center_columns(rng.randn(n, p2))


def _projector(X):
    q = orthonormal_basis(X).q
    return GramMatrix(q @ q.T, centered=True)


class TestCCA(unittest.TestCase):

    def test_fixture(self):
        x = ActivationMatrix([1., -1., 0.], centered=True)
        y = ActivationMatrix([0., 1., -1.], centered=True)
        res = cca(x, y)

        assert res.effective_rank == 1
        np.testing.assert_allclose(res.rhos, [0.5], rtol=1e-14)
        np.testing.assert_allclose(r2_cca(res).value, 0.25, rtol=1e-14)
        np.testing.assert_allclose(rho_bar_cca(res).value, 0.5, rtol=1e-14)

    def test_invertible_transform(self):
        X, _ = _pair(0)
        A = np.random.RandomState(1).randn(4, 4)
        res = cca(X, center_columns(X.data @ A))
        np.testing.assert_allclose(res.rhos, np.ones(4), atol=1e-8)
        np.testing.assert_allclose(r2_cca(res).value, 1., atol=1e-8)

    def test_orthogonal_column_spaces(self):
        rng = np.random.RandomState(2)
        q, _ = np.linalg.qr(center_columns(rng.randn(20, 6)).data)
        X = ActivationMatrix(q[:, :3] @ rng.randn(3, 3), centered=True)
        Y = ActivationMatrix(q[:, 3:] @ rng.randn(3, 5), centered=True)
        assert np.all(cca(X, Y).rhos <= 1e-8)

    def test_canonical_variables(self):
        X, Y = _pair(3)
        res = cca(X, Y)

        assert np.all(np.diff(res.rhos) <= 1e-12)
        assert res.rhos[0] <= 1. + 1e-8
        assert res.rhos[-1] >= -1e-8
        np.testing.assert_allclose(X.data @ res.weights_x, res.canonical_x, atol=1e-10)
        np.testing.assert_allclose(Y.data @ res.weights_y, res.canonical_y, atol=1e-10)
        cov = res.canonical_x.T @ res.canonical_x / (X.n - 1)
        np.testing.assert_allclose(cov, np.eye(4), atol=1e-10)
        # the canonical pairs are correlated with the canonical correlations
        corr = np.diag(res.canonical_x.T @ res.canonical_y) / (X.n - 1)
        np.testing.assert_allclose(corr, res.rhos, atol=1e-10)

    def test_rank_deficient(self):
        rng = np.random.RandomState(4)
        A = rng.randn(30, 2)
        X = center_columns(np.hstack([A, A @ rng.randn(2, 3)]))
        _, Y = _pair(5)
        res = cca(X, Y)

        assert res.rank_x == 2
        assert res.effective_rank == 2
        assert r2_cca(res).metadata["p1"] == 5
        assert r2_cca(res, p1=res.effective_rank).metadata["p1"] == 2

    def test_duplicated_column(self):
        rng = np.random.RandomState(9)
        a = rng.randn(40)
        X = center_columns(np.column_stack([a, a]))
        Y = center_columns(np.column_stack([a, rng.randn(40), rng.randn(40)]))
        res = cca(X, Y)

        assert res.effective_rank == 1
        np.testing.assert_allclose(res.rhos, [1.], atol=1e-10)
        np.testing.assert_allclose(r2_cca(res).value, 0.5, atol=1e-10)
        np.testing.assert_allclose(rho_bar_cca(res).value, 0.5, atol=1e-10)
        np.testing.assert_allclose(r2_cca(res, p1=1).value, 1., atol=1e-10)

    def test_explicit_p1(self):
        X, Y = _pair(6)
        res = cca(X, Y)
        np.testing.assert_allclose(r2_cca(res, p1=8).value * 8, pillai_trace(res), rtol=1e-12)
        self.assertRaises(ValidationError, r2_cca, res, 2)

    def test_rho_bar_bounds_r2(self):
        for seed in range(5):
            res = cca(*_pair(seed))
            assert rho_bar_cca(res).value >= r2_cca(res).value

    def test_errors(self):
        X, _ = _pair(7)
        Y, _ = _pair(7, n=31)
        self.assertRaises(DimensionMismatchError, cca, X, Y)
        self.assertRaises(RankError, cca, X, ActivationMatrix(np.zeros((30, 2)), centered=True))
        self.assertRaises(ValidationError, cca, X, ActivationMatrix(np.random.rand(30, 2)))

    def test_get_json_data(self):
        data = cca(*_pair(8)).get_json_data()
        assert data["effective_rank"] == 4
        assert len(data["rhos"]) == 4


class TestIdentities(unittest.TestCase):

    def test_cca_as_cka_of_projectors(self):
        for seed in range(20):
            X, Y = _pair(seed)
            p1, p2 = X.p, Y.p
            expected = r2_cca(cca(X, Y)).value
            np.testing.assert_allclose(cka(_projector(X), _projector(Y)).value * np.sqrt(p2 / p1),
                                       expected, atol=1e-8)

    def test_regression_as_cka(self):
        for seed in range(20):
            X, Y = _pair(seed)
            expected = linear_regression_r2(X, Y).value
            scale = np.sqrt(Y.p) * np.linalg.norm(X.data.T @ X.data) / np.linalg.norm(X.data) ** 2
            np.testing.assert_allclose(cka(gram_linear(X), _projector(Y)).value * scale, expected, atol=1e-8)

    def test_cca_from_eigenvectors(self):
        for seed in range(5):
            X, Y = _pair(seed)
            sx, sy = spectrum(X), spectrum(Y)
            value = np.sum((sx.eigenvectors.T @ sy.eigenvectors) ** 2) / min(X.p, Y.p)
            np.testing.assert_allclose(value, r2_cca(cca(X, Y)).value, atol=1e-8)


if __name__ == "__main__":
    unittest.main()
