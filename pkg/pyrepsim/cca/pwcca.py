import logging

import numpy as np

from pyrepsim import defaults
from pyrepsim.cca.cca import cca
from pyrepsim.cka import SimilarityScore
from pyrepsim.exceptions import DegenerateError

logger = logging.getLogger(__name__)


def pwcca(X, Y, rank_tol=defaults.RANK_TOL):
    """
    Projection-weighted canonical correlation sum(a_i rho_i) / sum(a_i) with
    a_i = sum_j |<h_i, x_j>|, where h_i are the canonical variables of X and
    x_j the columns of X. The weights come from the first argument only, so
    the index is asymmetric.

    Parameters
    ----------
    X, Y: ActivationMatrix
        Centered activations over the same examples
    rank_tol: float

    Returns
    ----------
    SimilarityScore
    """
    res = cca(X, Y, rank_tol)
    alphas = np.sum(np.abs(X.data.T @ res.canonical_x), axis=0)
    total = np.sum(alphas)
    if total == 0.:
        raise DegenerateError("all projection weights are zero")

    value = np.sum(alphas * res.rhos) / total
    return SimilarityScore(value, "pwcca", normalized=True,
                           metadata={"weights_from": X.label or "x", "effective_rank": res.effective_rank})


def modified_pwcca(X, Y, rank_tol=defaults.RANK_TOL):
    """
    PWCCA with squared projections and squared correlations,
    sum(a'_i rho_i^2) / sum(a'_i) with a'_i = sum_j <h_i, x_j>^2. The sums run
    over the complete canonical frame of X (rank X directions, correlations
    beyond min(rank X, rank Y) are zero); the result then equals the R^2 of the
    linear regression of X on Y.

    Parameters
    ----------
    X, Y: ActivationMatrix
        Centered activations over the same examples
    rank_tol: float

    Returns
    ----------
    SimilarityScore
    """
    res = cca(X, Y, rank_tol)
    frame = res.basis_x.q @ res.rotation_x
    rhos = np.zeros(res.rank_x)
    rhos[:res.effective_rank] = res.rhos

    alphas = np.sum((X.data.T @ frame) ** 2, axis=0)
    total = np.sum(alphas)
    if total == 0.:
        raise DegenerateError("all projection weights are zero")

    value = np.sum(alphas * rhos ** 2) / total
    return SimilarityScore(value, "pwcca-modified", normalized=True,
                           metadata={"weights_from": X.label or "x", "effective_rank": res.effective_rank})
