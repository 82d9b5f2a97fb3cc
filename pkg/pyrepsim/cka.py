import logging
import types

import numpy as np

from pyrepsim import defaults
from pyrepsim.exceptions import DegenerateError, DimensionMismatchError, ValidationError
from pyrepsim.kernels import center_gram, gram_linear, gram_rbf
from pyrepsim.reprdata import center_columns

logger = logging.getLogger(__name__)

NORMALIZED_SLACK = 1e-8


class SimilarityScore(object):

    def __init__(self, value, index_name, normalized, metadata=None):
        """
        Value of a similarity index for one pair of representations.

        Parameters
        ----------
        value: float
        index_name: str
        normalized: bool
            Whether the index is bounded to [0, 1]
        metadata: dict
            Details of the evaluation, e.g. effective ranks or the regression direction
        """
        value = float(value)
        if not np.isfinite(value):
            raise DegenerateError("%s evaluated to %r" % (index_name, value))
        if normalized and not (-NORMALIZED_SLACK <= value <= 1. + NORMALIZED_SLACK):
            raise DegenerateError("%s = %.17g lies outside [0, 1]" % (index_name, value))
        self.value = value
        self.index_name = index_name
        self.normalized = bool(normalized)
        self.metadata = types.MappingProxyType(dict(metadata or {}))

    def __float__(self):
        return self.value

    def __repr__(self):
        return "SimilarityScore(%s=%.17g)" % (self.index_name, self.value)


def check_same_examples(a, b):
    if a.n != b.n:
        raise DimensionMismatchError("example-count mismatch: %d vs %d examples" % (a.n, b.n))


def _require_centered(*matrices):
    for X in matrices:
        if not X.centered:
            raise ValidationError("expected column-centered activations (see center_columns)")


def hsic(K, L):
    """
    Biased empirical HSIC estimator tr(KHLH) / (n-1)^2.

    Parameters
    ----------
    K, L: GramMatrix
        Kernel matrices over the same n examples

    Returns
    ----------
    SimilarityScore
    """
    check_same_examples(K, L)
    n = K.n
    Kc = center_gram(K).values
    Lc = center_gram(L).values
    # tr(HKH HLH) for symmetric matrices is the sum of the elementwise product
    value = np.sum(Kc * Lc) / (n - 1) ** 2
    return SimilarityScore(value, "hsic", normalized=False)


def cka(K, L):
    """
    Centered kernel alignment HSIC(K, L) / sqrt(HSIC(K, K) HSIC(L, L)).

    Parameters
    ----------
    K, L: GramMatrix

    Returns
    ----------
    SimilarityScore
        Values in [-1e-8, 0) are clamped to 0; the unclamped value is kept
        in the metadata under "raw_value".
    """
    check_same_examples(K, L)
    hsic_kl = hsic(K, L).value
    hsic_kk = hsic(K, K).value
    hsic_ll = hsic(L, L).value
    if hsic_kk <= 0. or hsic_ll <= 0.:
        raise DegenerateError("CKA is undefined for a constant representation (zero self-HSIC)")

    raw = hsic_kl / np.sqrt(hsic_kk * hsic_ll)
    return _normalized_score(raw, "cka")


def _normalized_score(raw, name, metadata=None):
    metadata = dict(metadata or {})
    value = raw
    if -NORMALIZED_SLACK <= raw < 0.:
        logger.warning("%s of %.3g clamped to 0", name, raw)
        value = 0.
    metadata["raw_value"] = float(raw)
    return SimilarityScore(value, name, normalized=True, metadata=metadata)


def _gram_path(n, p_x, p_y):
    return n <= max(p_x, p_y)


def linear_cka_feature(X, Y, method="auto"):
    """
    Linear CKA ||Y^T X||_F^2 / (||X^T X||_F ||Y^T Y||_F) of centered activations.

    Parameters
    ----------
    X, Y: ActivationMatrix
        Centered activations over the same examples
    method: str
        "feature" evaluates the p x p products, "gram" the n x n kernel matrices,
        "auto" picks whichever is smaller.

    Returns
    ----------
    SimilarityScore
    """
    _require_centered(X, Y)
    check_same_examples(X, Y)
    if method == "auto":
        method = "gram" if _gram_path(X.n, X.p, Y.p) else "feature"
    if method not in ("feature", "gram"):
        raise ValidationError("unknown CKA evaluation method %r" % method)

    if method == "gram":
        try:
            score = cka(gram_linear(X), gram_linear(Y))
        except DegenerateError:
            raise DegenerateError("linear CKA is undefined for an all-zero representation")
        return SimilarityScore(score.value, "cka-linear", normalized=True,
                               metadata=dict(score.metadata, path="gram"))

    xx = np.linalg.norm(X.data.T @ X.data)
    yy = np.linalg.norm(Y.data.T @ Y.data)
    if xx == 0. or yy == 0.:
        raise DegenerateError("linear CKA is undefined for an all-zero representation")
    raw = np.linalg.norm(Y.data.T @ X.data) ** 2 / (xx * yy)
    return _normalized_score(raw, "cka-linear", {"path": "feature"})


def linear_hsic_feature(X, Y):
    """
    Linear HSIC ||Y^T X||_F^2 / (n-1)^2, the squared Frobenius norm of the
    cross-covariance matrix. Not invariant to isotropic scaling.

    Parameters
    ----------
    X, Y: ActivationMatrix
        Centered activations over the same examples

    Returns
    ----------
    SimilarityScore
    """
    _require_centered(X, Y)
    check_same_examples(X, Y)
    value = np.linalg.norm(Y.data.T @ X.data) ** 2 / (X.n - 1) ** 2
    return SimilarityScore(value, "hsic-linear", normalized=False)


def dot_product_similarity(X, Y):
    """
    Dot-product similarity <vec(XX^T), vec(YY^T)> = ||Y^T X||_F^2.

    Parameters
    ----------
    X, Y: ActivationMatrix
        Centered activations over the same examples

    Returns
    ----------
    SimilarityScore
    """
    _require_centered(X, Y)
    check_same_examples(X, Y)
    value = np.linalg.norm(Y.data.T @ X.data) ** 2
    return SimilarityScore(value, "dot-product", normalized=False)


def cka_from_spectra(sx, sy):
    """
    Linear CKA written through the eigendecompositions of XX^T and YY^T:
    sum_ij lx_i ly_j <u_i, v_j>^2 / (||lx||_2 ||ly||_2).

    Parameters
    ----------
    sx, sy: Spectrum
        All nonzero eigenpairs of the centered matrices

    Returns
    ----------
    SimilarityScore
    """
    if sx.eigenvalues.size == 0 or sy.eigenvalues.size == 0:
        raise DegenerateError("empty spectrum")
    if sx.eigenvectors.shape[0] != sy.eigenvectors.shape[0]:
        raise DimensionMismatchError("example-count mismatch: %d vs %d examples"
                                     % (sx.eigenvectors.shape[0], sy.eigenvectors.shape[0]))

    overlap = (sx.eigenvectors.T @ sy.eigenvectors) ** 2
    numerator = sx.eigenvalues @ overlap @ sy.eigenvalues
    denominator = np.linalg.norm(sx.eigenvalues) * np.linalg.norm(sy.eigenvalues)
    return _normalized_score(numerator / denominator, "cka-spectral")


def _rbf_grams(X, Y, bandwidth_fraction):
    X = center_columns(X)
    Y = center_columns(Y)
    check_same_examples(X, Y)
    K = gram_rbf(X, bandwidth_fraction)
    L = gram_rbf(Y, bandwidth_fraction)
    metadata = {"bandwidth_fraction": bandwidth_fraction, "sigma_x": K.sigma, "sigma_y": L.sigma,
                "distances": "centered"}
    return K, L, metadata


def rbf_cka(X, Y, bandwidth_fraction=defaults.DEFAULT_BANDWIDTH_FRACTION):
    """
    CKA with RBF kernels whose bandwidths are a fraction of the median distance
    between (centered) examples.
    """
    K, L, metadata = _rbf_grams(X, Y, bandwidth_fraction)
    score = cka(K, L)
    return SimilarityScore(score.value, "cka-rbf", normalized=True,
                           metadata=dict(score.metadata, **metadata))


def rbf_hsic(X, Y, bandwidth_fraction=defaults.DEFAULT_BANDWIDTH_FRACTION):
    K, L, metadata = _rbf_grams(X, Y, bandwidth_fraction)
    return SimilarityScore(hsic(K, L).value, "hsic-rbf", normalized=False, metadata=metadata)
