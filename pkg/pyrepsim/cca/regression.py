import logging

import numpy as np
import scipy.linalg

from pyrepsim import defaults
from pyrepsim.cka import SimilarityScore, check_same_examples
from pyrepsim.exceptions import DegenerateError, ValidationError
from pyrepsim.reprdata import orthonormal_basis

logger = logging.getLogger(__name__)


def _check_inputs(target, design):
    if not (target.centered and design.centered):
        raise ValidationError("linear regression expects column-centered activations (see center_columns)")
    check_same_examples(target, design)


def linear_regression_r2(target, design, rank_tol=defaults.RANK_TOL):
    """
    Fraction of the variance of target explained by a least squares fit with
    the columns of design, ||Q^T target||_F^2 / ||target||_F^2 with Q an
    orthonormal basis of the design. Asymmetric.

    Parameters
    ----------
    target: ActivationMatrix
        Centered activations that are fitted
    design: ActivationMatrix
        Centered activations used as regressors
    rank_tol: float

    Returns
    ----------
    SimilarityScore
    """
    _check_inputs(target, design)
    total = np.linalg.norm(target.data) ** 2
    if total == 0.:
        raise DegenerateError("cannot explain the variance of an all-zero target")

    q = orthonormal_basis(design, rank_tol).q
    value = np.linalg.norm(q.T @ target.data) ** 2 / total
    return SimilarityScore(value, "linreg", normalized=True,
                           metadata={"target": target.label or "x", "design": design.label or "y"})


def regression_residual(target, design):
    """
    Explicit least squares residual min_B ||target - design B||_F^2.

    Parameters
    ----------
    target, design: ActivationMatrix

    Returns
    ----------
    float
    """
    check_same_examples(target, design)
    B, _, _, _ = scipy.linalg.lstsq(design.data, target.data)
    return float(np.linalg.norm(target.data - design.data @ B) ** 2)
