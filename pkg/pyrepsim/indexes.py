"""
Registry of the similarity indexes that can be requested by name.
"""
import logging

from pyrepsim import defaults
from pyrepsim.base_index import BaseIndex
from pyrepsim.cca import (RidgeParams, SVCCAParams, canonical_ridge_similarity, cca, linear_regression_r2,
                          modified_pwcca, procrustes_nuclear, pwcca, r2_cca, rho_bar_cca, svcca)
from pyrepsim.cka import linear_cka_feature, linear_hsic_feature, rbf_cka, rbf_hsic
from pyrepsim.exceptions import ValidationError

logger = logging.getLogger(__name__)


class LinearCKA(BaseIndex):
    name = "cka-linear"

    @BaseIndex._check_shapes
    def compute(self, X, Y):
        return linear_cka_feature(X, Y)


class RBFCKA(BaseIndex):
    name = "cka-rbf"

    @BaseIndex._check_shapes
    def compute(self, X, Y):
        return rbf_cka(X, Y, self.params["bandwidth_fraction"])


class LinearHSIC(BaseIndex):
    name = "hsic-linear"
    normalized = False

    @BaseIndex._check_shapes
    def compute(self, X, Y):
        return linear_hsic_feature(X, Y)


class RBFHSIC(BaseIndex):
    name = "hsic-rbf"
    normalized = False

    @BaseIndex._check_shapes
    def compute(self, X, Y):
        return rbf_hsic(X, Y, self.params["bandwidth_fraction"])


class CCAR2(BaseIndex):
    name = "cca-r2"

    @BaseIndex._check_shapes
    def compute(self, X, Y):
        return r2_cca(cca(X, Y, self.rank_tol), p1=min(X.p, Y.p))


class CCARho(BaseIndex):
    name = "cca-rho"

    @BaseIndex._check_shapes
    def compute(self, X, Y):
        return rho_bar_cca(cca(X, Y, self.rank_tol), p1=min(X.p, Y.p))


class SVCCAR2(BaseIndex):
    name = "svcca-r2"

    @BaseIndex._check_shapes
    def compute(self, X, Y):
        return svcca(X, Y, SVCCAParams(self.params["variance_threshold"]), self.rank_tol)[0]


class SVCCARho(BaseIndex):
    name = "svcca-rho"

    @BaseIndex._check_shapes
    def compute(self, X, Y):
        return svcca(X, Y, SVCCAParams(self.params["variance_threshold"]), self.rank_tol)[1]


class DirectedIndex(BaseIndex):
    """
    Asymmetric index. With direction "forward" the first representation is the
    regression target (or the source of the PWCCA weights); "reverse" swaps the roles.
    """
    symmetric = False

    def oriented(self, X, Y):
        if self.params["direction"] == "reverse":
            return Y, X
        return X, Y


class PWCCA(DirectedIndex):
    name = "pwcca"

    @BaseIndex._check_shapes
    def compute(self, X, Y):
        return pwcca(*self.oriented(X, Y), rank_tol=self.rank_tol)


class ModifiedPWCCA(DirectedIndex):
    name = "pwcca-modified"

    @BaseIndex._check_shapes
    def compute(self, X, Y):
        return modified_pwcca(*self.oriented(X, Y), rank_tol=self.rank_tol)


class LinearRegression(DirectedIndex):
    name = "linreg"

    @BaseIndex._check_shapes
    def compute(self, X, Y):
        return linear_regression_r2(*self.oriented(X, Y), rank_tol=self.rank_tol)


class CanonicalRidge(BaseIndex):
    name = "ridge"

    @BaseIndex._check_shapes
    def compute(self, X, Y):
        params = RidgeParams(self.params["kappa_x"], self.params["kappa_y"], self.params["normalization"])
        return canonical_ridge_similarity(X, Y, params, self.rank_tol)


class Procrustes(BaseIndex):
    name = "procrustes"
    normalized = False

    @BaseIndex._check_shapes
    def compute(self, X, Y):
        return procrustes_nuclear(X, Y)


all_indexes = {cls.name: cls for cls in (LinearCKA, RBFCKA, LinearHSIC, RBFHSIC, CCAR2, CCARho,
                                         SVCCAR2, SVCCARho, PWCCA, ModifiedPWCCA, LinearRegression,
                                         CanonicalRidge, Procrustes)}

index_parameters = {name: tuple(sorted(defaults.index_defaults.get(name, {}))) for name in all_indexes}


class SimilarityIndexSpec(object):

    def __init__(self, name, **params):
        """
        Name of a similarity index together with its parameters. Parameters the
        index needs but that are not given take their defaults from
        `pyrepsim.defaults.index_defaults`; parameters the index does not take
        are rejected.

        Parameters
        ----------
        name: str
            One of `all_indexes`
        params: dict
            bandwidth_fraction, variance_threshold, kappa_x, kappa_y,
            normalization or direction, as applicable
        """
        if name not in all_indexes:
            raise ValidationError("unknown index %r, expected one of %s" % (name, ", ".join(sorted(all_indexes))))

        params = {k: v for k, v in params.items() if v is not None}
        unexpected = sorted(set(params) - set(index_parameters[name]))
        if unexpected:
            raise ValidationError("index %s does not take parameter(s) %s" % (name, ", ".join(unexpected)))

        resolved = dict(defaults.index_defaults.get(name, {}))
        resolved.update(params)
        self.name = name
        self.params = resolved
        self._validate()

    def _validate(self):
        p = self.params
        if "bandwidth_fraction" in p and not p["bandwidth_fraction"] > 0:
            raise ValidationError("bandwidth_fraction must be positive, got %r" % (p["bandwidth_fraction"],))
        if "variance_threshold" in p:
            SVCCAParams(p["variance_threshold"]).validate()
        if "normalization" in p:
            RidgeParams(p["kappa_x"], p["kappa_y"], p["normalization"]).validate()
        if "direction" in p and p["direction"] not in defaults.DIRECTIONS:
            raise ValidationError("direction must be one of %s, got %r"
                                  % (", ".join(defaults.DIRECTIONS), p["direction"]))

    def build(self, rank_tol=defaults.RANK_TOL):
        """
        Returns
        ----------
        BaseIndex
        """
        logger.debug("building index %s with %s", self.name, self.params)
        return all_indexes[self.name](rank_tol=rank_tol, **self.params)

    def __repr__(self):
        return "SimilarityIndexSpec(%r, %r)" % (self.name, self.params)
