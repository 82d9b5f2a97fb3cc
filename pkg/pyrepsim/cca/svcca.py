import logging
import typing

import numpy as np
import scipy.linalg

from pyrepsim import defaults
from pyrepsim.cka import SimilarityScore, check_same_examples
from pyrepsim.exceptions import DegenerateError, ValidationError
from pyrepsim.reprdata import orthonormal_basis

logger = logging.getLogger(__name__)

# cumulative variance shares are compared with this much slack so that a
# threshold of 1.0 is reached despite rounding
SHARE_SLACK = 1e-12


class SVCCAParams(typing.NamedTuple):
    variance_threshold: float = defaults.SVCCA_THRESHOLD

    def validate(self):
        if not (0. < self.variance_threshold <= 1.):
            raise ValidationError("variance_threshold must lie in (0, 1], got %r" % (self.variance_threshold,))
        return self


def retained_components(singular_values, variance_threshold):
    """
    Smallest number of leading principal components whose share of the total
    variance (sum of squared singular values) reaches variance_threshold.

    Parameters
    ----------
    singular_values: np.ndarray
        Descending singular values
    variance_threshold: float

    Returns
    ----------
    int
    """
    variance = singular_values ** 2
    total = np.sum(variance)
    if total == 0.:
        raise DegenerateError("SVCCA of an all-zero representation")
    share = np.cumsum(variance) / total
    kept = int(np.searchsorted(share, variance_threshold - SHARE_SLACK, side="left")) + 1
    kept = min(kept, singular_values.shape[0])
    if kept < 1:
        raise DegenerateError("variance threshold %g retains no components" % variance_threshold)
    return kept


def svcca(X, Y, params=SVCCAParams(), rank_tol=defaults.RANK_TOL):
    """
    Singular vector CCA: both inputs are reduced to the leading principal
    components that explain variance_threshold of their variance, then CCA
    is applied to the reduced representations.

    Parameters
    ----------
    X, Y: ActivationMatrix
        Centered activations over the same examples
    params: SVCCAParams
    rank_tol: float

    Returns
    ----------
    (SimilarityScore, SimilarityScore)
        R^2_SVCCA = ||(U_Y T_Y)^T U_X T_X||_F^2 / min(kept_x, kept_y) and
        rho_SVCCA with the nuclear norm in place of the squared Frobenius norm
    """
    params = params.validate()
    if not (X.centered and Y.centered):
        raise ValidationError("SVCCA expects column-centered activations (see center_columns)")
    check_same_examples(X, Y)

    basis_x = orthonormal_basis(X, rank_tol)
    basis_y = orthonormal_basis(Y, rank_tol)
    kept_x = retained_components(basis_x.singular_values, params.variance_threshold)
    kept_y = retained_components(basis_y.singular_values, params.variance_threshold)
    logger.debug("SVCCA keeps %d of %d components of X and %d of %d of Y",
                 kept_x, basis_x.r, kept_y, basis_y.r)

    rhos = scipy.linalg.svdvals(basis_y.q[:, :kept_y].T @ basis_x.q[:, :kept_x])
    denominator = min(kept_x, kept_y)
    metadata = {"kept_x": kept_x, "kept_y": kept_y,
                "variance_threshold": params.variance_threshold}
    r2 = SimilarityScore(np.sum(rhos ** 2) / denominator, "svcca-r2", normalized=True, metadata=metadata)
    rho = SimilarityScore(np.sum(rhos) / denominator, "svcca-rho", normalized=True, metadata=metadata)
    return r2, rho
