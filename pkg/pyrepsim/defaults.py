"""
Default parameters shared by the library and the command line.
"""

# singular values below RANK_TOL * (largest singular value) are treated as zero
RANK_TOL = 1e-10

RBF_BANDWIDTH_PRESETS = (0.2, 0.4, 0.8)
DEFAULT_BANDWIDTH_FRACTION = 0.4

SVCCA_THRESHOLD = 0.99

RIDGE_NORMALIZATIONS = ("vn-trace", "cauchy-schwarz-min", "separable")

DIRECTIONS = ("forward", "reverse")

# scores within TIE_TOL * max|row| of the row maximum count as tied
TIE_TOL = 1e-9

# synthetic layer stacks
SIGNAL_RANK = 4
NOISE_LEVEL = 0.1
SPECTRUM_DECAY = 0.5

# invertible transforms with a larger condition number are resampled
MAX_CONDITION_NUMBER = 1e8
MAX_TRANSFORM_RETRIES = 10

THREADS_ENV_VAR = "REPSIM_THREADS"

index_defaults = {
    "cka-rbf": {"bandwidth_fraction": DEFAULT_BANDWIDTH_FRACTION},
    "hsic-rbf": {"bandwidth_fraction": DEFAULT_BANDWIDTH_FRACTION},
    "svcca-r2": {"variance_threshold": SVCCA_THRESHOLD},
    "svcca-rho": {"variance_threshold": SVCCA_THRESHOLD},
    "pwcca": {"direction": "forward"},
    "pwcca-modified": {"direction": "forward"},
    "linreg": {"direction": "forward"},
    "ridge": {"kappa_x": 0.0, "kappa_y": 0.0, "normalization": "vn-trace"},
}
