import logging
import typing

import numpy as np
from scipy.spatial.distance import pdist, squareform

from pyrepsim import defaults
from pyrepsim.exceptions import DegenerateError, ValidationError
from pyrepsim.reprdata import as_activation
from pyrepsim.util.normalization import double_centering

logger = logging.getLogger(__name__)

KERNELS = ("linear", "rbf")


class KernelSpec(typing.NamedTuple):
    kind: str = "linear"
    bandwidth_fraction: typing.Optional[float] = None

    def validate(self):
        if self.kind not in KERNELS:
            raise ValidationError("unknown kernel %r, expected one of %s" % (self.kind, ", ".join(KERNELS)))
        if self.kind == "rbf" and not (self.bandwidth_fraction is not None and self.bandwidth_fraction > 0):
            raise ValidationError("the RBF kernel needs a positive bandwidth_fraction, got %r"
                                  % (self.bandwidth_fraction,))
        return self


class GramMatrix(object):

    def __init__(self, values, centered=False, kernel=None, sigma=None):
        """
        n x n matrix of kernel values between examples.

        Parameters
        ----------
        values: np.ndarray (n, n)
            Symmetric kernel matrix. It is symmetrized exactly as (K + K^T) / 2.
        centered: bool
            Whether rows and columns sum to zero. Checked on construction.
        kernel: KernelSpec
            The kernel the values came from, if known
        sigma: float
            RBF bandwidth that was used, if any
        """
        K = np.array(values, dtype=np.float64, copy=True)
        if K.ndim != 2 or K.shape[0] != K.shape[1]:
            raise ValidationError("a Gram matrix must be square, got shape %s" % (K.shape,))
        if K.shape[0] < 2:
            raise ValidationError("at least 2 examples are needed, got %d" % K.shape[0])
        if not np.all(np.isfinite(K)):
            raise ValidationError("Gram matrix has non-finite entries")

        scale = max(1., float(np.max(np.abs(K))))
        if np.max(np.abs(K - K.T)) > 1e-12 * scale:
            raise ValidationError("Gram matrix is not symmetric")
        K = (K + K.T) / 2.

        if centered:
            row_sums = np.max(np.abs(np.sum(K, axis=1)))
            if row_sums > 1e-8 * K.shape[0] * float(np.max(np.abs(K))):
                raise ValidationError("Gram matrix flagged as centered has row sum %g" % row_sums)

        K.setflags(write=False)
        self.values = K
        self.centered = bool(centered)
        self.kernel = kernel
        self.sigma = sigma

    @property
    def n(self):
        return self.values.shape[0]

    def __repr__(self):
        return "GramMatrix(n=%d, centered=%s, kernel=%r)" % (self.n, self.centered, self.kernel)


def gram_linear(X):
    """
    Linear kernel matrix XX^T.

    Parameters
    ----------
    X: ActivationMatrix

    Returns
    ----------
    GramMatrix
        centered iff X is centered
    """
    X = as_activation(X)
    return GramMatrix(X.data @ X.data.T, centered=X.centered, kernel=KernelSpec("linear"))


def median_pairwise_distance(X):
    """
    Median Euclidean distance over the n(n-1)/2 pairs of distinct examples.
    For an even number of pairs this is the mean of the two middle values.

    Parameters
    ----------
    X: ActivationMatrix

    Returns
    ----------
    float
    """
    X = as_activation(X)
    distances = pdist(X.data, metric="euclidean")
    if not np.any(distances > 0):
        raise DegenerateError("all examples coincide, the RBF bandwidth is undefined")
    return float(np.median(distances))


def gram_rbf(X, bandwidth_fraction=defaults.DEFAULT_BANDWIDTH_FRACTION):
    """
    RBF kernel matrix exp(-||x_i - x_j||^2 / (2 sigma^2)) with sigma set to
    bandwidth_fraction times the median distance between examples. Since sigma
    scales with the data, the kernel is invariant to isotropic scaling.

    Parameters
    ----------
    X: ActivationMatrix
    bandwidth_fraction: float
        Fraction of the median pairwise distance used as sigma

    Returns
    ----------
    GramMatrix
    """
    KernelSpec("rbf", bandwidth_fraction).validate()
    X = as_activation(X)

    sigma = bandwidth_fraction * median_pairwise_distance(X)
    logger.debug("RBF bandwidth: sigma=%g (fraction %g)", sigma, bandwidth_fraction)

    sq_distances = squareform(pdist(X.data, metric="sqeuclidean"))
    K = np.exp(-sq_distances / (2. * sigma ** 2))
    np.fill_diagonal(K, 1.)
    return GramMatrix(K, centered=False, kernel=KernelSpec("rbf", bandwidth_fraction), sigma=sigma)


def gram(X, kernel):
    kernel = kernel.validate()
    if kernel.kind == "linear":
        return gram_linear(X)
    return gram_rbf(X, kernel.bandwidth_fraction)


def center_gram(K):
    """
    Applies the centering matrix H = I - 11^T/n on both sides, i.e. returns HKH.

    Parameters
    ----------
    K: GramMatrix

    Returns
    ----------
    GramMatrix
        with centered = True
    """
    if K.centered:
        return K
    return GramMatrix(double_centering(K.values), centered=True, kernel=K.kernel, sigma=K.sigma)
