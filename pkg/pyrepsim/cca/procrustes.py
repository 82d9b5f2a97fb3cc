import logging

import numpy as np
import scipy.linalg

from pyrepsim.cka import SimilarityScore, check_same_examples
from pyrepsim.exceptions import ValidationError

logger = logging.getLogger(__name__)


def procrustes_nuclear(X, Y):
    """
    Value of the orthogonal Procrustes objective max_Q tr(Y^T X Q), which is
    the nuclear norm ||Y^T X||_*. Symmetric and not normalized.

    Parameters
    ----------
    X, Y: ActivationMatrix
        Centered activations over the same examples

    Returns
    ----------
    SimilarityScore
    """
    check_same_examples(X, Y)
    value = np.sum(scipy.linalg.svdvals(Y.data.T @ X.data))
    return SimilarityScore(value, "procrustes", normalized=False)


def procrustes_rotation(X, Y):
    """
    Maximizer Q = U V^T of tr(Y^T X Q), where U S V^T = X^T Y. For p1 != p2 the
    result is the semi-orthogonal p1 x p2 matrix with the same property.

    Parameters
    ----------
    X: ActivationMatrix (n, p1)
    Y: ActivationMatrix (n, p2)

    Returns
    ----------
    np.ndarray (p1, p2)
    """
    check_same_examples(X, Y)
    U, _, Vt = scipy.linalg.svd(X.data.T @ Y.data, full_matrices=False)
    return U @ Vt


def procrustes_distance(X, Y):
    """
    Smallest squared error min_Q ||Y - X Q||_F^2 over orthogonal Q,
    i.e. ||X||_F^2 + ||Y||_F^2 - 2 ||Y^T X||_*.

    Parameters
    ----------
    X: ActivationMatrix (n, p1)
    Y: ActivationMatrix (n, p2) with p1 <= p2

    Returns
    ----------
    float
    """
    if X.p > Y.p:
        raise ValidationError("procrustes_distance needs p1 <= p2, got %d > %d" % (X.p, Y.p))
    nuclear = procrustes_nuclear(X, Y).value
    value = np.linalg.norm(X.data) ** 2 + np.linalg.norm(Y.data) ** 2 - 2. * nuclear
    return float(max(value, 0.))
