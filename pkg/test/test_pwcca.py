import unittest

import numpy as np

from pyrepsim.cca import cca, linear_regression_r2, modified_pwcca, pwcca
from pyrepsim.exceptions import DegenerateError
from pyrepsim.reprdata import ActivationMatrix, center_columns


def _pair(seed, n=12, p1=3, p2=4):
    rng = np.random.RandomState(seed)
    return center_columns(rng.randn(n, p1)), center_columns(rng.randn(n, p2))


def _inverse_sqrt(C):
    w, V = np.linalg.eigh(C)
    return V @ np.diag(1. / np.sqrt(w)) @ V.T


def _pwcca_literal(X, Y):
    cxx = _inverse_sqrt(X.data.T @ X.data)
    cyy = _inverse_sqrt(Y.data.T @ Y.data)
    U, s, _ = np.linalg.svd(cxx @ X.data.T @ Y.data @ cyy)
    r = min(X.p, Y.p)
    H = X.data @ cxx @ U[:, :r]
    alphas = np.sum(np.abs(X.data.T @ H), axis=0)
    return np.sum(alphas * s[:r]) / np.sum(alphas)


class TestPWCCA(unittest.TestCase):

    def test_self_similarity(self):
        X, _ = _pair(0)
        np.testing.assert_allclose(pwcca(X, X).value, 1., atol=1e-10)

    def test_single_feature(self):
        X, Y = _pair(1, p1=1)
        np.testing.assert_allclose(pwcca(X, Y).value, cca(X, Y).rhos[0], rtol=1e-12)

    def test_literal_formula(self):
        for seed in range(5):
            X, Y = _pair(seed)
            np.testing.assert_allclose(pwcca(X, Y).value, _pwcca_literal(X, Y), atol=1e-10)

    def test_asymmetric(self):
        X, Y = _pair(2, p1=3, p2=5)
        assert abs(pwcca(X, Y).value - pwcca(Y, X).value) > 1e-6

    def test_isotropic_scaling(self):
        X, Y = _pair(3)
        base = pwcca(X, Y).value
        np.testing.assert_allclose(pwcca(ActivationMatrix(3.7 * X.data, centered=True), Y).value, base, atol=1e-8)
        np.testing.assert_allclose(pwcca(X, ActivationMatrix(0.2 * Y.data, centered=True)).value, base, atol=1e-8)

    def test_orthogonal_transform_changes_value(self):
        X, Y = _pair(4)
        q, _ = np.linalg.qr(np.random.RandomState(5).randn(3, 3))
        assert abs(pwcca(center_columns(X.data @ q), Y).value - pwcca(X, Y).value) > 1e-6

    def test_metadata(self):
        X, Y = _pair(5)
        X = ActivationMatrix(X.data, centered=True, label="conv2")
        score = pwcca(X, Y)
        assert score.metadata["weights_from"] == "conv2"
        assert score.metadata["effective_rank"] == 3


class TestModifiedPWCCA(unittest.TestCase):

    def test_equals_regression(self):
        for seed in range(20):
            X, Y = _pair(seed, n=20, p1=3 + seed % 4, p2=2 + seed % 5)
            np.testing.assert_allclose(modified_pwcca(X, Y).value, linear_regression_r2(X, Y).value, atol=1e-8)

    def test_equals_regression_rank_deficient(self):
        for seed in range(5):
            rng = np.random.RandomState(seed)
            A = rng.randn(20, 2)
            X = center_columns(np.hstack([A, A @ rng.randn(2, 3)]))
            Y = center_columns(rng.randn(20, 1) @ rng.randn(1, 4))
            np.testing.assert_allclose(modified_pwcca(X, Y).value, linear_regression_r2(X, Y).value, atol=1e-8)
            np.testing.assert_allclose(modified_pwcca(Y, X).value, linear_regression_r2(Y, X).value, atol=1e-8)

    def test_self_similarity(self):
        X, _ = _pair(6)
        np.testing.assert_allclose(modified_pwcca(X, X).value, 1., atol=1e-10)

    def test_orthogonal_design(self):
        x = ActivationMatrix([1., -1., 0., 0.], centered=True)
        y = ActivationMatrix([0., 0., 1., -1.], centered=True)
        np.testing.assert_allclose(modified_pwcca(x, y).value, 0., atol=1e-12)

    def test_zero_representation(self):
        X, _ = _pair(7)
        Z = ActivationMatrix(np.zeros((X.n, 2)), centered=True)
        self.assertRaises(DegenerateError, modified_pwcca, X, Z)
        self.assertRaises(DegenerateError, pwcca, Z, X)


if __name__ == "__main__":
    unittest.main()
