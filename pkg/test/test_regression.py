import unittest

import numpy as np

from pyrepsim.cca import linear_regression_r2, regression_residual
from pyrepsim.exceptions import DegenerateError, ValidationError
from pyrepsim.reprdata import ActivationMatrix, center_columns


def _pair(seed, n=25, p1=3, p2=5):
    rng = np.random.RandomState(seed)
    return center_columns(rng.randn(n, p1)), center_columns(rng.randn(n, p2))


class TestLinearRegression(unittest.TestCase):

    def test_fixture(self):
        x = ActivationMatrix([1., -1., 0.], centered=True)
        y = ActivationMatrix([0., 1., -1.], centered=True)
        np.testing.assert_allclose(linear_regression_r2(x, y).value, 0.25, rtol=1e-14)

    def test_perfect_fit(self):
        _, Y = _pair(0)
        target = center_columns(Y.data @ np.random.RandomState(1).randn(5, 2))
        np.testing.assert_allclose(linear_regression_r2(target, Y).value, 1., atol=1e-10)

    def test_orthogonal_design(self):
        x = ActivationMatrix([1., -1., 0., 0.], centered=True)
        y = ActivationMatrix([0., 0., 1., -1.], centered=True)
        assert linear_regression_r2(x, y).value == 0.

    def test_residual_matches_normal_equations(self):
        for seed in range(5):
            X, Y = _pair(seed)
            B = np.linalg.solve(Y.data.T @ Y.data, Y.data.T @ X.data)
            explicit = np.linalg.norm(X.data - Y.data @ B) ** 2
            explained = linear_regression_r2(X, Y).value * np.linalg.norm(X.data) ** 2

            np.testing.assert_allclose(np.linalg.norm(X.data) ** 2 - explained, explicit, rtol=1e-8)
            np.testing.assert_allclose(regression_residual(X, Y), explicit, rtol=1e-8)

    def test_direction_metadata(self):
        X, Y = _pair(2)
        X = ActivationMatrix(X.data, centered=True, label="fc6")
        Y = ActivationMatrix(Y.data, centered=True, label="fc7")
        score = linear_regression_r2(X, Y)
        assert score.metadata["target"] == "fc6"
        assert score.metadata["design"] == "fc7"

    def test_zero_target(self):
        _, Y = _pair(3)
        Z = ActivationMatrix(np.zeros((Y.n, 2)), centered=True)
        self.assertRaises(DegenerateError, linear_regression_r2, Z, Y)

    def test_requires_centered(self):
        X, _ = _pair(4)
        self.assertRaises(ValidationError, linear_regression_r2, X, ActivationMatrix(np.random.rand(X.n, 2)))


if __name__ == "__main__":
    unittest.main()
