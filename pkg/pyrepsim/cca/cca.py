import logging

import numpy as np
import scipy.linalg

from pyrepsim import defaults
from pyrepsim.cka import SimilarityScore, check_same_examples
from pyrepsim.exceptions import ValidationError
from pyrepsim.reprdata import orthonormal_basis

logger = logging.getLogger(__name__)


class CCAResult(object):

    def __init__(self, rhos, weights_x, weights_y, canonical_x, canonical_y,
                 basis_x, basis_y, rotation_x, rotation_y):
        """
        Canonical correlation analysis of two centered matrices.

        Parameters
        ----------
        rhos: np.ndarray (r,)
            Canonical correlations in descending order
        weights_x: np.ndarray (p1, r)
            Canonical weights W_X with X W_X = canonical_x
        weights_y: np.ndarray (p2, r)
        canonical_x: np.ndarray (n, r)
            Canonical variables of X, mutually orthogonal with unit variance
        canonical_y: np.ndarray (n, r)
        basis_x, basis_y: OrthonormalBasis
            Rank-truncated orthonormal bases Q_X, Q_Y
        rotation_x: np.ndarray (rank X, rank X)
            Full set of left singular vectors of Q_X^T Q_Y
        rotation_y: np.ndarray (rank Y, rank Y)
            Full set of right singular vectors of Q_X^T Q_Y
        """
        self.rhos = rhos
        self.weights_x = weights_x
        self.weights_y = weights_y
        self.canonical_x = canonical_x
        self.canonical_y = canonical_y
        self.basis_x = basis_x
        self.basis_y = basis_y
        self.rotation_x = rotation_x
        self.rotation_y = rotation_y

    @property
    def effective_rank(self):
        return self.rhos.shape[0]

    @property
    def rank_x(self):
        return self.basis_x.r

    @property
    def rank_y(self):
        return self.basis_y.r

    def get_json_data(self):
        return {"rhos": self.rhos.tolist(),
                "effective_rank": self.effective_rank,
                "rank_x": self.rank_x,
                "rank_y": self.rank_y}


def _require_centered(X, Y):
    if not (X.centered and Y.centered):
        raise ValidationError("CCA expects column-centered activations (see center_columns)")


def cca(X, Y, rank_tol=defaults.RANK_TOL):
    """
    Canonical correlations as the singular values of Q_X^T Q_Y, where Q_X and
    Q_Y are orthonormal bases of the column spaces after dropping singular
    directions below rank_tol.

    Parameters
    ----------
    X: ActivationMatrix (n, p1)
        Centered activations
    Y: ActivationMatrix (n, p2)
        Centered activations over the same examples
    rank_tol: float
        Relative singular value threshold for the rank truncation

    Returns
    ----------
    CCAResult
        with r = min(rank X, rank Y) canonical pairs
    """
    _require_centered(X, Y)
    check_same_examples(X, Y)

    basis_x = orthonormal_basis(X, rank_tol)
    basis_y = orthonormal_basis(Y, rank_tol)
    r = min(basis_x.r, basis_y.r)
    logger.debug("CCA: rank X=%d, rank Y=%d", basis_x.r, basis_y.r)

    U, s, Vt = scipy.linalg.svd(basis_x.q.T @ basis_y.q, full_matrices=True)
    V = Vt.T
    rhos = s[:r]

    # Q = X V S^-1, so X (V S^-1 U) = Q U holds the canonical variables
    scale = np.sqrt(X.n - 1.)
    weights_x = scale * (basis_x.right_vectors / basis_x.singular_values) @ U[:, :r]
    weights_y = scale * (basis_y.right_vectors / basis_y.singular_values) @ V[:, :r]
    canonical_x = scale * basis_x.q @ U[:, :r]
    canonical_y = scale * basis_y.q @ V[:, :r]

    return CCAResult(rhos=rhos, weights_x=weights_x, weights_y=weights_y,
                     canonical_x=canonical_x, canonical_y=canonical_y,
                     basis_x=basis_x, basis_y=basis_y, rotation_x=U, rotation_y=V)


def _denominator(res, p1):
    if p1 is None:
        return min(res.basis_x.source_p, res.basis_y.source_p)
    if p1 < res.effective_rank:
        raise ValidationError("p1=%d is smaller than the number of canonical correlations (%d)"
                              % (p1, res.effective_rank))
    return p1


def r2_cca(res, p1=None):
    """
    Mean squared canonical correlation sum(rho_i^2) / p1 = ||Q_Y^T Q_X||_F^2 / p1.

    Parameters
    ----------
    res: CCAResult
    p1: int
        Denominator. Defaults to min(p1, p2), the width of the narrower
        representation, so duplicated or collinear features lower the score.
        Pass res.effective_rank to average over the canonical pairs only.

    Returns
    ----------
    SimilarityScore
    """
    p1 = _denominator(res, p1)
    value = np.sum(res.rhos ** 2) / p1
    return SimilarityScore(value, "cca-r2", normalized=True, metadata={"p1": p1})


def rho_bar_cca(res, p1=None):
    """
    Mean canonical correlation sum(rho_i) / p1 = ||Q_Y^T Q_X||_* / p1.
    """
    p1 = _denominator(res, p1)
    value = np.sum(res.rhos) / p1
    return SimilarityScore(value, "cca-rho", normalized=True, metadata={"p1": p1})


def pillai_trace(res):
    """
    Sum of squared canonical correlations, p1 times R^2_CCA.
    """
    return float(np.sum(res.rhos ** 2))
