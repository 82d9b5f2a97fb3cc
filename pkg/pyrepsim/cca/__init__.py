from .cca import CCAResult, cca, r2_cca, rho_bar_cca, pillai_trace
from .svcca import SVCCAParams, svcca
from .pwcca import pwcca, modified_pwcca
from .regression import linear_regression_r2, regression_residual
from .canonical_ridge import RidgeParams, canonical_ridge, canonical_ridge_similarity
from .procrustes import procrustes_nuclear, procrustes_rotation, procrustes_distance
