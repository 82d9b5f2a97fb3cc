"""
Canonical ridge: CCA with ridge penalties kappa_x, kappa_y on the weights.

The sum of squared singular values of the regularized problem is

    sum_ij lx_i ly_j <u_i, v_j>^2 / ((lx_i + kappa_x)(ly_j + kappa_y))

in terms of the eigenpairs (lx_i, u_i) of XX^T and (ly_j, v_j) of YY^T. It
shrinks as the penalties grow, so it is divided by one of three upper bounds:

vn-trace
    sum over the first p1 paired eigenvalues (von Neumann trace inequality)
cauchy-schwarz-min
    Cauchy-Schwarz applied to the first p1 terms of each side
separable
    Cauchy-Schwarz over all terms, a bound that factorizes into X and Y parts

With zero penalties the first two give R^2_CCA. With kappa_y = 0 and kappa_x
large, vn-trace tends to the R^2 of regressing X on Y; with both penalties large,
separable tends to linear CKA.
"""
import logging
import typing

import numpy as np
import scipy.linalg

from pyrepsim import defaults
from pyrepsim.cka import SimilarityScore, check_same_examples
from pyrepsim.exceptions import DegenerateError, ValidationError
from pyrepsim.reprdata import orthonormal_basis, spectrum

logger = logging.getLogger(__name__)


class RidgeParams(typing.NamedTuple):
    kappa_x: float = 0.
    kappa_y: float = 0.
    normalization: str = "vn-trace"

    def validate(self):
        for name, kappa in (("kappa_x", self.kappa_x), ("kappa_y", self.kappa_y)):
            if not (np.isfinite(kappa) and kappa >= 0.):
                raise ValidationError("%s must be finite and nonnegative, got %r" % (name, kappa))
        if self.normalization not in defaults.RIDGE_NORMALIZATIONS:
            raise ValidationError("unknown normalization %r, expected one of %s"
                                  % (self.normalization, ", ".join(defaults.RIDGE_NORMALIZATIONS)))
        return self


class RidgeResult(typing.NamedTuple):
    singular_values: np.ndarray
    weights_x: np.ndarray
    weights_y: np.ndarray
    basis_x: np.ndarray
    basis_y: np.ndarray


def _check_inputs(X, Y):
    if not (X.centered and Y.centered):
        raise ValidationError("canonical ridge expects column-centered activations (see center_columns)")
    check_same_examples(X, Y)


def _shrinkage(eigenvalues, kappa):
    return eigenvalues / (eigenvalues + kappa)


def canonical_ridge(X, Y, params=RidgeParams(), rank_tol=defaults.RANK_TOL):
    """
    Solves the regularized CCA problem through the partially orthogonalized
    bases U S (S^2 + kappa I)^-1/2 of both inputs.

    Parameters
    ----------
    X, Y: ActivationMatrix
        Centered activations over the same examples
    params: RidgeParams
    rank_tol: float

    Returns
    ----------
    RidgeResult
    """
    params = params.validate()
    _check_inputs(X, Y)

    bx = orthonormal_basis(X, rank_tol)
    by = orthonormal_basis(Y, rank_tol)
    inv_x = 1. / np.sqrt(bx.singular_values ** 2 + params.kappa_x)
    inv_y = 1. / np.sqrt(by.singular_values ** 2 + params.kappa_y)
    basis_x = bx.q * (bx.singular_values * inv_x)
    basis_y = by.q * (by.singular_values * inv_y)

    U, s, Vt = scipy.linalg.svd(basis_x.T @ basis_y, full_matrices=False)
    weights_x = (bx.right_vectors * inv_x) @ U
    weights_y = (by.right_vectors * inv_y) @ Vt.T
    return RidgeResult(singular_values=s, weights_x=weights_x, weights_y=weights_y,
                       basis_x=basis_x, basis_y=basis_y)


def canonical_ridge_similarity(X, Y, params=RidgeParams(), rank_tol=defaults.RANK_TOL):
    """
    Normalized canonical ridge similarity, see the module docstring.

    Parameters
    ----------
    X, Y: ActivationMatrix
        Centered activations over the same examples
    params: RidgeParams
    rank_tol: float

    Returns
    ----------
    SimilarityScore
    """
    params = params.validate()
    _check_inputs(X, Y)

    sx = spectrum(X, rank_tol=rank_tol)
    sy = spectrum(Y, rank_tol=rank_tol)
    if sx.eigenvalues.size == 0 or sy.eigenvalues.size == 0:
        raise DegenerateError("canonical ridge of an all-zero representation")

    fx = _shrinkage(sx.eigenvalues, params.kappa_x)
    fy = _shrinkage(sy.eigenvalues, params.kappa_y)
    overlap = (sx.eigenvectors.T @ sy.eigenvectors) ** 2
    numerator = fx @ overlap @ fy

    p1 = min(fx.size, fy.size)
    if params.normalization == "vn-trace":
        denominator = np.sum(fx[:p1] * fy[:p1])
    elif params.normalization == "cauchy-schwarz-min":
        denominator = np.linalg.norm(fx[:p1]) * np.linalg.norm(fy[:p1])
    else:
        denominator = np.linalg.norm(fx) * np.linalg.norm(fy)
    if denominator == 0.:
        raise DegenerateError("canonical ridge normalization vanished")

    logger.debug("canonical ridge: kappa_x=%g kappa_y=%g %s, p1=%d",
                 params.kappa_x, params.kappa_y, params.normalization, p1)
    return SimilarityScore(numerator / denominator, "ridge", normalized=True,
                           metadata={"kappa_x": params.kappa_x, "kappa_y": params.kappa_y,
                                     "normalization": params.normalization})
