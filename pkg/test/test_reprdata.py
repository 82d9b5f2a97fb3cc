import os
import tempfile
import unittest

import numpy as np

from pyrepsim.exceptions import RankError, ValidationError
from pyrepsim.reprdata import (ActivationMatrix, center_columns, load_matrix, orthonormal_basis,
                               projector_distance, save_matrix, spectrum)


class TestActivationMatrix(unittest.TestCase):

    def test_copy_and_freeze(self):
        raw = np.ones((3, 2), dtype=np.float32)
        X = ActivationMatrix(raw, label="conv1")

        raw[0, 0] = 5.
        assert X.data.dtype == np.float64
        assert X.data[0, 0] == 1.
        assert X.shape == (3, 2)
        assert X.label == "conv1"
        with self.assertRaises(ValueError):
            X.data[0, 0] = 2.

    def test_vector_is_one_feature(self):
        X = ActivationMatrix([1., -1., 0.])
        assert X.n == 3
        assert X.p == 1

    def test_non_finite_entry(self):
        data = np.zeros((3, 2))
        data[2, 1] = np.nan
        with self.assertRaises(ValidationError) as ctx:
            ActivationMatrix(data)
        assert "row 2, column 1" in str(ctx.exception)

    def test_single_example(self):
        self.assertRaises(ValidationError, ActivationMatrix, np.ones((1, 4)))

    def test_centered_flag_is_checked(self):
        self.assertRaises(ValidationError, ActivationMatrix, np.ones((3, 2)), True)

    def test_metadata_is_read_only(self):
        X = ActivationMatrix(np.eye(2), metadata={"seed": 1})
        with self.assertRaises(TypeError):
            X.metadata["seed"] = 2


class TestCentering(unittest.TestCase):

    def test_center_columns(self):
        X = ActivationMatrix(np.random.RandomState(0).rand(20, 4) + 3, label="fc")
        Xc = center_columns(X)

        assert Xc.centered
        assert Xc.label == "fc"
        np.testing.assert_allclose(np.mean(Xc.data, axis=0), 0., atol=1e-12)

    def test_idempotent(self):
        Xc = center_columns(np.random.RandomState(0).rand(20, 4))
        assert center_columns(Xc) is Xc

    def test_large_offset(self):
        Xc = center_columns(ActivationMatrix([[1e12], [1e12 + 1], [1e12 + 3]]))
        np.testing.assert_allclose(Xc.data[:, 0], [-4. / 3, -1. / 3, 5. / 3], atol=1e-3)
        assert abs(np.mean(Xc.data)) <= 1e-12

        rng = np.random.RandomState(1)
        Xc = center_columns(rng.randn(50, 4) + 1e9)
        np.testing.assert_allclose(np.mean(Xc.data, axis=0), 0., atol=1e-12)


class TestOrthonormalBasis(unittest.TestCase):

    def test_basis_spans_columns(self):
        X = center_columns(np.random.RandomState(3).randn(30, 5))
        basis = orthonormal_basis(X)

        assert basis.r == 5
        assert basis.source_p == 5
        np.testing.assert_allclose(basis.q.T @ basis.q, np.eye(5), atol=1e-12)
        np.testing.assert_allclose(basis.q @ (basis.q.T @ X.data), X.data, atol=1e-10)

    def test_rank_deficient(self):
        rng = np.random.RandomState(4)
        A = rng.randn(30, 3)
        X = center_columns(np.hstack([A, A @ rng.randn(3, 4)]))
        assert orthonormal_basis(X).r == 3

    def test_zero_matrix(self):
        X = ActivationMatrix(np.zeros((4, 2)), centered=True, label="dead")
        with self.assertRaises(RankError) as ctx:
            orthonormal_basis(X)
        assert "dead" in str(ctx.exception)

    def test_requires_centered(self):
        self.assertRaises(ValidationError, orthonormal_basis, ActivationMatrix(np.random.rand(5, 2)))


class TestSpectrum(unittest.TestCase):

    def test_eigenpairs(self):
        X = center_columns(np.random.RandomState(5).randn(12, 4))
        s = spectrum(X)
        G = X.data @ X.data.T

        assert s.eigenvalues.shape == (4,)
        assert np.all(np.diff(s.eigenvalues) <= 0)
        np.testing.assert_allclose(G @ s.eigenvectors, s.eigenvectors * s.eigenvalues, atol=1e-10)
        idx = np.argmax(np.abs(s.eigenvectors), axis=0)
        assert np.all(s.eigenvectors[idx, np.arange(4)] > 0)

    def test_eigenvalues_sum_to_frobenius_norm(self):
        for seed in range(5):
            X = center_columns(np.random.RandomState(seed).randn(15, 6))
            np.testing.assert_allclose(np.sum(spectrum(X).eigenvalues), np.linalg.norm(X.data) ** 2, rtol=1e-10)

    def test_max_components(self):
        X = center_columns(np.random.RandomState(5).randn(12, 4))
        assert spectrum(X, max_components=2).eigenvalues.shape == (2,)

    def test_zero_matrix(self):
        s = spectrum(ActivationMatrix(np.zeros((4, 2)), centered=True))
        assert s.eigenvalues.size == 0
        assert s.eigenvectors.shape == (4, 0)


class TestProjectorDistance(unittest.TestCase):

    def test_same_column_space(self):
        rng = np.random.RandomState(6)
        X = center_columns(rng.randn(20, 3))
        Y = center_columns(X.data @ rng.randn(3, 3))
        assert projector_distance(orthonormal_basis(X), orthonormal_basis(Y)) <= 1e-8

    def test_orthogonal_spaces(self):
        q_a = np.array([[1.], [0.]])
        q_b = np.array([[0.], [1.]])
        assert projector_distance(q_a, q_b) == 1.


class TestLoadSave(unittest.TestCase):

    def test_label_from_file_name(self):
        with tempfile.TemporaryDirectory() as tmp:
            X = ActivationMatrix(np.random.RandomState(7).randn(6, 2))
            for name in ("block3.rsm", "block3.csv"):
                path = os.path.join(tmp, name)
                save_matrix(X, path)
                loaded = load_matrix(path)
                assert loaded.label == "block3"
                assert not loaded.centered
                np.testing.assert_array_equal(loaded.data, X.data)

    def test_unknown_format(self):
        self.assertRaises(ValidationError, load_matrix, "x.rsm", "npy")


if __name__ == "__main__":
    unittest.main()
