"""
Comparisons between whole sets of layers: similarity grids, the
corresponding-layer sanity check with jackknife errors, and the action of one
representation's Gram matrix on the eigenvectors of another.
"""
import itertools
import logging

import numpy as np
import scipy.stats

from pyrepsim import defaults
from pyrepsim.base_index import BaseIndex
from pyrepsim.cka import NORMALIZED_SLACK, check_same_examples
from pyrepsim.exceptions import DegenerateError, DimensionMismatchError, ValidationError
from pyrepsim.indexes import SimilarityIndexSpec
from pyrepsim.reprdata import as_activation, center_columns, spectrum
from pyrepsim.util import report_io
from pyrepsim.util.parallel import ordered_map

logger = logging.getLogger(__name__)


class SimilarityMatrixReport(object):

    def __init__(self, index_name, params, labels_a, labels_b, scores, symmetrized=False,
                 normalized=True, metadata=None):
        """
        Grid of similarity scores between two lists of layers.

        Parameters
        ----------
        index_name: str
        params: dict
            Effective index parameters, defaults included
        labels_a, labels_b: list of str
            Row and column layer labels
        scores: np.ndarray (len(labels_a), len(labels_b))
        symmetrized: bool
            Whether the grid is S + S^T of an evaluated grid
        normalized: bool
            Whether entries are bounded to [0, 1]
        metadata: dict
        """
        scores = np.array(scores, dtype=np.float64)
        assert scores.shape == (len(labels_a), len(labels_b))
        if not np.all(np.isfinite(scores)):
            raise DegenerateError("similarity grid has non-finite entries")
        if normalized and scores.size and not (np.min(scores) >= -NORMALIZED_SLACK
                                               and np.max(scores) <= 1. + NORMALIZED_SLACK):
            raise DegenerateError("normalized similarity grid has entries outside [0, 1]")
        scores.setflags(write=False)

        self.index_name = index_name
        self.params = dict(params)
        self.labels_a = list(labels_a)
        self.labels_b = list(labels_b)
        self.scores = scores
        self.symmetrized = bool(symmetrized)
        self.normalized = bool(normalized)
        self.metadata = dict(metadata or {})

    @property
    def square(self):
        return self.scores.shape[0] == self.scores.shape[1]

    def get_json_data(self):
        return {"index": self.index_name,
                "params": self.params,
                "labels_a": self.labels_a,
                "labels_b": self.labels_b,
                "scores": self.scores,
                "symmetrized": self.symmetrized,
                "normalized": self.normalized,
                "metadata": self.metadata}


class CorrespondenceReport(object):

    def __init__(self, accuracy, per_layer_argmax, excluded_layers=(), jackknife_se=None, metadata=None):
        """
        How often the most similar layer of the second network is the
        architecturally corresponding one.

        Parameters
        ----------
        accuracy: float
            Fraction of included layers whose best match is their counterpart
        per_layer_argmax: list
            Column index (into the full grid) of the best match of every
            included row. Aggregated reports hold one such list per network pair.
        excluded_layers: list of str
        jackknife_se: float
            Jackknife standard error of the accuracy over networks, if available
        metadata: dict
        """
        assert 0. <= accuracy <= 1.
        self.accuracy = float(accuracy)
        self.per_layer_argmax = list(per_layer_argmax)
        self.excluded_layers = list(excluded_layers)
        self.jackknife_se = None if jackknife_se is None else float(jackknife_se)
        self.metadata = dict(metadata or {})

    def get_json_data(self):
        return {"accuracy": self.accuracy,
                "per_layer_argmax": self.per_layer_argmax,
                "excluded_layers": self.excluded_layers,
                "jackknife_se": self.jackknife_se,
                "metadata": self.metadata}


class SpectrumReport(object):

    def __init__(self, own_scaling, cross_scaling, cosine, metadata=None):
        """
        Action of YY^T on the eigenvectors u_i of XX^T.

        Parameters
        ----------
        own_scaling: np.ndarray (k,)
            ||XX^T u_i|| which equals the eigenvalue of u_i
        cross_scaling: np.ndarray (k,)
            ||YY^T u_i||
        cosine: np.ndarray (k,)
            Cosine between u_i and YY^T u_i
        metadata: dict
        """
        self.own_scaling = np.asarray(own_scaling, dtype=np.float64)
        self.cross_scaling = np.asarray(cross_scaling, dtype=np.float64)
        self.cosine = np.asarray(cosine, dtype=np.float64)
        assert self.own_scaling.shape == self.cross_scaling.shape == self.cosine.shape
        self.metadata = dict(metadata or {})

    def get_json_data(self):
        return {"own_scaling": self.own_scaling,
                "cross_scaling": self.cross_scaling,
                "cosine": self.cosine,
                "metadata": self.metadata}


def _build_index(index, rank_tol):
    if isinstance(index, BaseIndex):
        return index
    if isinstance(index, str):
        index = SimilarityIndexSpec(index)
    return index.build(rank_tol)


def _labels(layers, prefix):
    return [X.label if X.label is not None else "%s%d" % (prefix, i) for i, X in enumerate(layers)]


def similarity_matrix(layers_a, layers_b, index, n_threads=None, rank_tol=defaults.RANK_TOL):
    """
    Evaluates an index on every pair (layers_a[i], layers_b[j]).

    Parameters
    ----------
    layers_a, layers_b: list of ActivationMatrix
        Layers over the same n examples
    index: SimilarityIndexSpec, BaseIndex or str
    n_threads: int
        Worker threads, capped by REPSIM_THREADS. The grid does not depend on it.
    rank_tol: float

    Returns
    ----------
    SimilarityMatrixReport
    """
    index = _build_index(index, rank_tol)
    layers_a = [center_columns(as_activation(X)) for X in layers_a]
    layers_b = [center_columns(as_activation(X)) for X in layers_b]
    if not layers_a or not layers_b:
        raise ValidationError("similarity_matrix needs at least one layer on each side")

    n = layers_a[0].n
    for X in itertools.chain(layers_a, layers_b):
        if X.n != n:
            raise DimensionMismatchError("example-count mismatch: %d vs %d examples" % (n, X.n))

    cells = list(itertools.product(range(len(layers_a)), range(len(layers_b))))
    values = ordered_map(lambda ij: index(layers_a[ij[0]], layers_b[ij[1]]).value, cells, n_threads)
    scores = np.array(values, dtype=np.float64).reshape(len(layers_a), len(layers_b))

    metadata = {"centering": "columns", "n": n, "symmetric_index": index.symmetric}
    if "direction" in index.params:
        metadata["direction"] = index.params["direction"]
    if "bandwidth_fraction" in index.params:
        metadata["kernel"] = "rbf"
    elif index.name.startswith(("cka", "hsic")):
        metadata["kernel"] = "linear"

    return SimilarityMatrixReport(index.name, index.params, _labels(layers_a, "a"), _labels(layers_b, "b"),
                                  scores, symmetrized=False, normalized=index.normalized, metadata=metadata)


def symmetrize(report, reverse=None):
    """
    Returns the grid S + S^T. If `reverse` holds the grid of the same layers
    with the roles of the two sides swapped, the result is S + R^T instead,
    i.e. s(a_i, b_j) + s(b_j, a_i) for asymmetric indexes.

    Parameters
    ----------
    report: SimilarityMatrixReport
    reverse: SimilarityMatrixReport

    Returns
    ----------
    SimilarityMatrixReport
        Flagged as symmetrized and no longer normalized
    """
    if reverse is None:
        if not report.square:
            raise ValidationError("only a square grid can be symmetrized, got shape %s" % (report.scores.shape,))
        other = report.scores.T
    else:
        if reverse.scores.shape != report.scores.T.shape:
            raise ValidationError("reverse grid has shape %s, expected %s"
                                  % (reverse.scores.shape, report.scores.T.shape))
        other = reverse.scores.T

    metadata = dict(report.metadata, symmetrization="S + R^T" if reverse is not None else "S + S^T")
    return SimilarityMatrixReport(report.index_name, report.params, report.labels_a, report.labels_b,
                                  report.scores + other, symmetrized=True, normalized=False, metadata=metadata)


def _row_argmax(row, tie_tol):
    best = np.max(row)
    tol = tie_tol * np.max(np.abs(row))
    candidates = np.flatnonzero(row >= best - tol)
    return int(candidates[0]), candidates.size > 1


def correspondence_accuracy(report, exclude_labels=(), tie_tol=defaults.TIE_TOL):
    """
    Fraction of layers whose most similar layer on the other side is the layer
    at the same position. Scores within tie_tol * max|row| of the row maximum
    are tied and the lowest column wins.

    The tolerance absorbs rounding between mathematically equal scores, but
    since it scales with max|row| it is not preserved by every strictly
    increasing transform: shifting a row towards zero can split a tie that
    was inside the tolerance. With tie_tol=0 only exact ties count and the
    accuracy depends on the score ordering alone.

    Parameters
    ----------
    report: SimilarityMatrixReport
        Square grid whose rows and columns list corresponding layers in the same order
    exclude_labels: list of str
        Layers dropped from both axes, e.g. the logits layer
    tie_tol: float
        Relative tie tolerance, 0 for exact ties only

    Returns
    ----------
    CorrespondenceReport
    """
    if tie_tol < 0:
        raise ValidationError("tie_tol must be non-negative, got %r" % (tie_tol,))
    if not report.square:
        raise ValidationError("correspondence accuracy needs a square grid, got shape %s"
                              % (report.scores.shape,))
    exclude_labels = list(exclude_labels)
    unknown = [label for label in exclude_labels if label not in report.labels_a]
    if unknown:
        raise ValidationError("cannot exclude unknown layer(s) %s" % ", ".join(unknown))

    keep = [i for i, label in enumerate(report.labels_a) if label not in exclude_labels]
    if not keep:
        raise ValidationError("all layers are excluded")

    sub = report.scores[np.ix_(keep, keep)]
    argmax = []
    matches = 0
    tied_rows = 0
    for i, row in enumerate(sub):
        j, tied = _row_argmax(row, tie_tol)
        tied_rows += tied
        argmax.append(keep[j])
        matches += (j == i)
    if tied_rows:
        logger.warning("%d of %d rows had tied maxima, resolved to the lowest index", tied_rows, len(keep))

    return CorrespondenceReport(matches / len(keep), argmax, excluded_layers=exclude_labels,
                                metadata={"index": report.index_name, "params": report.params,
                                          "tied_rows": tied_rows})


def jackknife_se(values):
    """
    Leave-one-out jackknife standard error of the mean of `values`.

    Parameters
    ----------
    values: list of float
        At least 2 values, e.g. per-network accuracies

    Returns
    ----------
    float
    """
    values = np.asarray(values, dtype=np.float64)
    m = values.size
    if m < 2:
        raise ValidationError("the jackknife needs at least 2 values, got %d" % m)
    loo_means = (np.sum(values) - values) / (m - 1)
    return _jackknife_from_estimates(loo_means)


def _jackknife_from_estimates(loo_estimates):
    m = loo_estimates.size
    if np.ptp(loo_estimates) == 0.:
        return 0.
    return float(np.sqrt((m - 1.) / m * np.sum((loo_estimates - np.mean(loo_estimates)) ** 2)))


def jackknife_z_test(acc_best, se_best, acc_other, se_other):
    """
    z = (a_best - a_other) / sqrt(se_best^2 + se_other^2) with a two-sided p-value
    from the standard normal distribution.

    Returns
    ----------
    (float, float)
        z statistic and p-value
    """
    diff = acc_best - acc_other
    scale = np.sqrt(se_best ** 2 + se_other ** 2)
    if scale == 0.:
        if diff == 0.:
            return 0., 1.
        return float(np.copysign(np.inf, diff)), 0.
    z = diff / scale
    return float(z), float(2. * scipy.stats.norm.sf(abs(z)))


def aggregate_correspondence(networks, index, exclude_labels=(), n_threads=None, rank_tol=defaults.RANK_TOL,
                             tie_tol=defaults.TIE_TOL):
    """
    Sanity check over several networks: correspondence accuracy for every
    unordered pair of networks, averaged. Asymmetric indexes are symmetrized as
    s(a_i, b_j) + s(b_j, a_i). The jackknife leaves out one network at a time
    together with all pairs it takes part in.

    Parameters
    ----------
    networks: list of list of ActivationMatrix
        Layers of every network, in corresponding order
    index: SimilarityIndexSpec, BaseIndex or str
    exclude_labels: list of str
    n_threads: int
    rank_tol: float
    tie_tol: float

    Returns
    ----------
    CorrespondenceReport
        per_layer_argmax holds one list per network pair; jackknife_se is None
        for fewer than 3 networks.
    """
    if len(networks) < 2:
        raise ValidationError("the sanity check needs at least 2 networks, got %d" % len(networks))
    depths = sorted(set(len(layers) for layers in networks))
    if len(depths) != 1:
        raise ValidationError("layer-count mismatch between networks: %s"
                              % ", ".join(str(len(layers)) for layers in networks))
    index = _build_index(index, rank_tol)

    pairs = list(itertools.combinations(range(len(networks)), 2))
    pair_accuracy = {}
    argmax = []
    for a, b in pairs:
        report = similarity_matrix(networks[a], networks[b], index, n_threads=n_threads)
        if not index.symmetric:
            report = symmetrize(report, similarity_matrix(networks[b], networks[a], index, n_threads=n_threads))
        result = correspondence_accuracy(report, exclude_labels, tie_tol)
        pair_accuracy[(a, b)] = result.accuracy
        argmax.append(result.per_layer_argmax)
        logger.info("networks %d and %d: accuracy %.4f", a, b, result.accuracy)

    accuracy = float(np.mean([pair_accuracy[pair] for pair in pairs]))

    se = None
    m = len(networks)
    if m >= 3:
        loo = np.array([np.mean([acc for pair, acc in pair_accuracy.items() if k not in pair]) for k in range(m)])
        se = _jackknife_from_estimates(loo)

    metadata = {"index": index.name, "params": index.params, "networks": m, "aggregation": "unordered pairs",
                "pairs": [{"networks": list(pair), "accuracy": pair_accuracy[pair]} for pair in pairs]}
    return CorrespondenceReport(accuracy, argmax, excluded_layers=exclude_labels, jackknife_se=se,
                                metadata=metadata)


def shared_subspace_spectrum(X, Y, max_components=None, rank_tol=defaults.RANK_TOL):
    """
    Applies YY^T to the leading eigenvectors u_i of XX^T. Since XX^T u_i points
    along u_i, comparing the length and direction of YY^T u_i with it shows
    which principal components of X the second representation preserves.

    Parameters
    ----------
    X, Y: ActivationMatrix
        Centered activations over the same examples
    max_components: int
        Number of eigenvectors of XX^T to use. None uses every nonzero one.
    rank_tol: float

    Returns
    ----------
    SpectrumReport
    """
    if not (X.centered and Y.centered):
        raise ValidationError("shared_subspace_spectrum expects column-centered activations (see center_columns)")
    check_same_examples(X, Y)

    sx = spectrum(X, max_components, rank_tol)
    if sx.eigenvalues.size == 0:
        raise DegenerateError("degenerate spectrum: %s is all zero" % (X.label or "X"))

    U = sx.eigenvectors
    own_action = X.data @ (X.data.T @ U)
    cross_action = Y.data @ (Y.data.T @ U)
    cross_scaling = np.linalg.norm(cross_action, axis=0)

    # cross_action vanishes for directions outside the column space of Y
    negligible = cross_scaling <= 1e-12 * max(np.linalg.norm(Y.data, 2) ** 2, sx.eigenvalues[0])
    safe = np.where(negligible, 1., cross_scaling)
    cosine = np.where(negligible, 0., np.sum(U * cross_action, axis=0) / safe)

    residual = np.max(np.linalg.norm(own_action - U * sx.eigenvalues, axis=0)) / sx.eigenvalues[0]
    logger.debug("spectrum of %d components, eigenvector residual %g", sx.eigenvalues.size, residual)
    return SpectrumReport(sx.eigenvalues, cross_scaling, cosine,
                          metadata={"components": int(sx.eigenvalues.size),
                                    "eigenvector_residual": float(residual),
                                    "negligible_cross": int(np.count_nonzero(negligible))})


def report_to_json(report):
    return report_io.dumps(report.get_json_data())


def report_to_csv(report):
    return report_io.grid_to_csv(report.scores, report.labels_a, report.labels_b)


def correspondence_report_to_json(report):
    return report_io.dumps(report.get_json_data())


def spectrum_report_to_json(report):
    return report_io.dumps(report.get_json_data())
