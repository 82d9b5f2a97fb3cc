import logging
import os
import types
import typing

import numpy as np
import scipy.linalg

from pyrepsim import defaults
from pyrepsim.exceptions import RankError, ValidationError
from pyrepsim.util import matrix_io
from pyrepsim.util.normalization import zero_mean_normalization, max_column_mean

logger = logging.getLogger(__name__)


def centering_tolerance(data):
    return 1e-10 * (1. + np.max(np.abs(data)))


class ActivationMatrix(object):

    def __init__(self, data, centered=False, label=None, metadata=None):
        """
        Responses of one layer to a fixed set of examples. Rows are examples,
        columns are features (neurons). The values are copied, upcast to float64
        and frozen.

        Parameters
        ----------
        data: array-like (n, p)
            Activations. A 1-D array is read as a single feature.
        centered: bool
            Whether every column has zero mean. Checked on construction.
        label: str
            Name of the layer, e.g. the file it was loaded from
        metadata: dict
            Provenance, e.g. the spectrum a generator placed in the matrix
        """
        values = np.array(data, dtype=np.float64, copy=True)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2:
            raise ValidationError("activations must be a 2-D (examples x features) matrix, "
                                  "got shape %s" % (values.shape,))
        if values.shape[0] < 2:
            raise ValidationError("at least 2 examples are needed, got %d" % values.shape[0])
        if values.shape[1] < 1:
            raise ValidationError("at least 1 feature is needed")
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise ValidationError("non-finite entry at row %d, column %d" % (bad[0], bad[1]))
        if centered and max_column_mean(values) > centering_tolerance(values):
            raise ValidationError("matrix flagged as centered has column mean %g"
                                  % max_column_mean(values))

        values.setflags(write=False)
        self.data = values
        self.centered = bool(centered)
        self.label = label
        self.metadata = types.MappingProxyType(dict(metadata or {}))

    @property
    def n(self):
        return self.data.shape[0]

    @property
    def p(self):
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    def __repr__(self):
        return "ActivationMatrix(n=%d, p=%d, centered=%s, label=%r)" % (
            self.n, self.p, self.centered, self.label)


class OrthonormalBasis(typing.NamedTuple):
    """
    Orthonormal basis Q (n x r) of the column space of a centered matrix X,
    together with the thin SVD factors X ~ Q diag(singular_values) right_vectors^T.
    """
    q: np.ndarray
    r: int
    source_p: int
    singular_values: np.ndarray
    right_vectors: np.ndarray


class Spectrum(typing.NamedTuple):
    """
    Eigenpairs of XX^T in descending eigenvalue order. Eigenvector columns have
    their largest-magnitude entry positive.
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_activation(X):
    if isinstance(X, ActivationMatrix):
        return X
    return ActivationMatrix(X)


def load_matrix(path, format=None):
    """
    Loads activations from a CSV or rsm-binary file.

    Parameters
    ----------
    path: str
    format: str
        "csv" or "rsm-binary". If None it is inferred from the file extension.

    Returns
    ----------
    ActivationMatrix
        Not centered, labelled with the file name without extension.
    """
    if format is None:
        format = matrix_io.guess_format(path)
    if format == "csv":
        data = matrix_io.read_csv(path)
    elif format == "rsm-binary":
        data = matrix_io.read_rsm(path)
    else:
        raise ValidationError("unknown matrix format %r, expected one of %s"
                              % (format, ", ".join(matrix_io.FORMATS)))

    label = os.path.splitext(os.path.basename(path))[0]
    return ActivationMatrix(data, centered=False, label=label)


def save_matrix(X, path, format=None):
    if format is None:
        format = matrix_io.guess_format(path)
    if format == "csv":
        matrix_io.write_csv(path, X.data)
    elif format == "rsm-binary":
        matrix_io.write_rsm(path, X.data)
    else:
        raise ValidationError("unknown matrix format %r" % format)


def center_columns(X):
    """
    Subtracts the column means. Idempotent: a matrix that is already
    flagged as centered is returned as is.

    Parameters
    ----------
    X: ActivationMatrix

    Returns
    ----------
    ActivationMatrix
    """
    X = as_activation(X)
    if X.centered:
        return X
    data, _ = zero_mean_normalization(X.data)
    # second pass removes the rounding error of the first mean, which scales
    # with the column offset rather than with the centered values
    data, _ = zero_mean_normalization(data)
    return ActivationMatrix(data, centered=True, label=X.label, metadata=X.metadata)


def _require_centered(X, operation):
    if not X.centered:
        raise ValidationError("%s expects column-centered input (see center_columns)" % operation)


def orthonormal_basis(X, rank_tol=defaults.RANK_TOL):
    """
    Orthonormal basis for the column space of a centered matrix, computed with a
    thresholded SVD so that rank deficient inputs are handled deterministically.

    Parameters
    ----------
    X: ActivationMatrix
        Centered activations
    rank_tol: float
        Singular values <= rank_tol * (largest singular value) are dropped

    Returns
    ----------
    OrthonormalBasis
    """
    _require_centered(X, "orthonormal_basis")
    if rank_tol < 0:
        raise ValidationError("rank_tol must be nonnegative, got %g" % rank_tol)

    U, s, Vt = scipy.linalg.svd(X.data, full_matrices=False)
    if s.size == 0 or s[0] == 0.:
        raise RankError("matrix %s has rank zero" % (X.label or "(unlabelled)"))

    keep = s > rank_tol * s[0]
    r = int(np.count_nonzero(keep))
    logger.debug("orthonormal basis: p=%d, effective rank=%d", X.p, r)
    return OrthonormalBasis(q=U[:, keep], r=r, source_p=X.p,
                            singular_values=s[keep], right_vectors=Vt[keep].T)


def fix_signs(vectors):
    """
    Flips columns so that the entry of largest magnitude is positive.
    """
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.
    return vectors * signs


def spectrum(X, max_components=None, rank_tol=defaults.RANK_TOL):
    """
    Eigendecomposition of XX^T from the SVD of X: eigenvalues are the squared
    singular values and eigenvectors the left singular vectors.

    Parameters
    ----------
    X: ActivationMatrix
        Centered activations
    max_components: int
        Keep at most this many leading eigenpairs. None keeps every nonzero one.
    rank_tol: float
        Relative threshold on singular values below which eigenpairs are dropped

    Returns
    ----------
    Spectrum
    """
    _require_centered(X, "spectrum")
    if max_components is not None and max_components < 1:
        raise ValidationError("max_components must be positive, got %d" % max_components)

    U, s, _ = scipy.linalg.svd(X.data, full_matrices=False)
    if s.size == 0 or s[0] == 0.:
        return Spectrum(eigenvalues=np.zeros(0), eigenvectors=np.zeros((X.n, 0)))

    keep = int(np.count_nonzero(s > rank_tol * s[0]))
    if max_components is not None:
        keep = min(keep, max_components)

    eigenvalues = np.clip(s[:keep] ** 2, 0., None)
    eigenvectors = fix_signs(U[:, :keep])
    return Spectrum(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def projector_distance(q_a, q_b):
    """
    Max-norm distance between the orthogonal projectors onto two subspaces.

    Parameters
    ----------
    q_a, q_b: OrthonormalBasis or np.ndarray (n, r)

    Returns
    ----------
    float
    """
    if isinstance(q_a, OrthonormalBasis):
        q_a = q_a.q
    if isinstance(q_b, OrthonormalBasis):
        q_b = q_b.q
    return float(np.max(np.abs(q_a @ q_a.T - q_b @ q_b.T)))
