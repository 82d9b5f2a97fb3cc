import unittest

import numpy as np

from pyrepsim.cca import SVCCAParams, cca, r2_cca, rho_bar_cca, svcca
from pyrepsim.cca.svcca import retained_components
from pyrepsim.exceptions import DegenerateError, ValidationError
from pyrepsim.reprdata import center_columns


def _pair(seed, n=10, p1=4, p2=4):
    rng = np.random.RandomState(seed)
    return center_columns(rng.randn(n, p1)), center_columns(rng.randn(n, p2))


class TestRetainedComponents(unittest.TestCase):

    def test_threshold_reached_exactly(self):
        s = np.sqrt(np.array([5., 3., 2.]))
        # cumulative shares 0.5, 0.8, 1.0
        assert retained_components(s, 0.5) == 1
        assert retained_components(s, 0.8) == 2
        assert retained_components(s, 0.81) == 3
        assert retained_components(s, 1.0) == 3

    def test_zero_spectrum(self):
        self.assertRaises(DegenerateError, retained_components, np.zeros(3), 0.9)

    def test_invalid_threshold(self):
        self.assertRaises(ValidationError, SVCCAParams(0.).validate)
        self.assertRaises(ValidationError, SVCCAParams(1.5).validate)


class TestSVCCA(unittest.TestCase):

    def test_no_truncation_equals_cca(self):
        X, Y = _pair(0, n=20, p1=3, p2=5)
        r2, rho = svcca(X, Y, SVCCAParams(1.0))
        res = cca(X, Y)

        assert r2.metadata["kept_x"] == 3
        assert r2.metadata["kept_y"] == 5
        np.testing.assert_allclose(r2.value, r2_cca(res).value, atol=1e-12)
        np.testing.assert_allclose(rho.value, rho_bar_cca(res).value, atol=1e-12)

    def test_dominant_component(self):
        rng = np.random.RandomState(1)
        data = rng.randn(30, 3) * np.array([100., 1., 1.])
        X = center_columns(data)
        _, Y = _pair(2, n=30)
        r2, _ = svcca(X, Y, SVCCAParams(0.99))
        assert r2.metadata["kept_x"] == 1

    def test_literal_formula(self):
        X, Y = _pair(3)
        r2, rho = svcca(X, Y, SVCCAParams(0.5))

        def truncated(M):
            U, s, _ = np.linalg.svd(M.data, full_matrices=False)
            share = np.cumsum(s ** 2) / np.sum(s ** 2)
            kept = int(np.argmax(share >= 0.5)) + 1
            return U[:, :kept]

        ux, uy = truncated(X), truncated(Y)
        denominator = min(ux.shape[1], uy.shape[1])
        np.testing.assert_allclose(r2.value, np.linalg.norm(uy.T @ ux) ** 2 / denominator, atol=1e-12)
        np.testing.assert_allclose(rho.value, np.sum(np.linalg.svd(uy.T @ ux, compute_uv=False)) / denominator,
                                   atol=1e-12)

    def test_orthogonal_transform_of_x(self):
        X, Y = _pair(4, n=20)
        q, _ = np.linalg.qr(np.random.RandomState(5).randn(4, 4))
        r2, rho = svcca(X, Y)
        r2_t, rho_t = svcca(center_columns(X.data @ q), Y)

        assert r2.metadata["kept_x"] == r2_t.metadata["kept_x"]
        np.testing.assert_allclose(r2_t.value, r2.value, atol=1e-8)
        np.testing.assert_allclose(rho_t.value, rho.value, atol=1e-8)


if __name__ == "__main__":
    unittest.main()
