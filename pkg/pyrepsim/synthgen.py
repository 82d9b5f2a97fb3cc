"""
Deterministic generators of related representations.

All randomness comes from `numpy.random.Generator` on top of the counter-based
Philox bit generator, keyed by `SeedSequence([seed, stream])` so that different
draws of one generator call use separate streams. Gaussian numbers come from
`Generator.standard_normal`. Random orthogonal matrices are the Q factor of the
QR decomposition of a Gaussian matrix with the column signs chosen so that
diag(R) is positive.
"""
import logging
import typing

import numpy as np
import scipy.linalg

from pyrepsim import defaults
from pyrepsim.exceptions import DegenerateError, RankError, ValidationError
from pyrepsim.reprdata import ActivationMatrix, as_activation
from pyrepsim.util.normalization import zero_mean_normalization

logger = logging.getLogger(__name__)

RELATIONS = ("independent", "orthogonal-transform", "invertible-transform", "isotropic-scale",
             "shared-subspace")

# stream ids, one per kind of draw
STREAM_DATA = 0
STREAM_TRANSFORM = 1
STREAM_DICTIONARY = 2
STREAM_ROTATION_X = 3
STREAM_ROTATION_Y = 4
STREAM_NOISE = 5
STREAM_STRUCTURE = 6
STREAM_NETWORK = 7
STREAM_INDEPENDENT = 8


class Relation(typing.NamedTuple):
    """
    How a second representation relates to a first one. `alpha` is used by
    isotropic-scale; `shared_indices`, `spectrum_decay` and `noise_level` by
    shared-subspace.
    """
    kind: str = "independent"
    alpha: float = 1.
    shared_indices: typing.Tuple[int, ...] = ()
    spectrum_decay: float = defaults.SPECTRUM_DECAY
    noise_level: float = 0.

    def validate(self):
        if self.kind not in RELATIONS:
            raise ValidationError("unknown relation %r, expected one of %s" % (self.kind, ", ".join(RELATIONS)))
        if not np.isfinite(self.alpha) or self.alpha == 0.:
            raise ValidationError("isotropic scale factor must be finite and nonzero, got %r" % (self.alpha,))
        if not (0. < self.spectrum_decay <= 1.):
            raise ValidationError("spectrum_decay must lie in (0, 1], got %r" % (self.spectrum_decay,))
        if not self.noise_level >= 0.:
            raise ValidationError("noise_level must be nonnegative, got %r" % (self.noise_level,))
        return self


class SynthSpec(typing.NamedTuple):
    n: int
    p: int
    seed: int
    relation: Relation = Relation()

    def validate(self):
        if self.n < 2 or self.p < 2:
            raise ValidationError("synthetic dimensions must be at least 2, got n=%d, p=%d" % (self.n, self.p))
        _check_seed(self.seed)
        self.relation.validate()
        return self


class RelationTransform(typing.NamedTuple):
    matrix: np.ndarray
    condition_number: float


def _check_seed(seed):
    if int(seed) != seed or seed < 0 or seed >= 2 ** 64:
        raise ValidationError("seeds must be integers in [0, 2**64), got %r" % (seed,))


def make_rng(seed, stream=STREAM_DATA):
    """
    Philox-backed generator for one (seed, stream) pair.
    """
    _check_seed(seed)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


def _orthogonal_from(gaussian):
    q, r = np.linalg.qr(gaussian)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.
    return q * signs


def gen_random(n, p, seed):
    """
    Matrix of i.i.d. standard normal entries, centered afterwards.

    Parameters
    ----------
    n: int
        Number of examples
    p: int
        Number of features
    seed: int

    Returns
    ----------
    ActivationMatrix
    """
    if n < 1 or p < 1:
        raise ValidationError("dimensions must be positive, got n=%d, p=%d" % (n, p))
    if n < 2:
        raise ValidationError("at least 2 examples are needed, got %d" % n)
    data = make_rng(seed, STREAM_DATA).standard_normal((n, p))
    data, _ = zero_mean_normalization(data)
    return ActivationMatrix(data, centered=True, label="random-%d" % seed, metadata={"seed": int(seed)})


def random_orthogonal(p, seed, stream=STREAM_TRANSFORM):
    """
    Random p x p orthogonal matrix (QR of a Gaussian matrix, diag(R) > 0).

    Returns
    ----------
    RelationTransform
    """
    q = _orthogonal_from(make_rng(seed, stream).standard_normal((p, p)))
    return RelationTransform(matrix=q, condition_number=1.)


def random_invertible(p, seed, stream=STREAM_TRANSFORM,
                      max_condition_number=defaults.MAX_CONDITION_NUMBER,
                      max_retries=defaults.MAX_TRANSFORM_RETRIES):
    """
    Random p x p Gaussian matrix. Draws whose condition number exceeds
    max_condition_number are discarded and redrawn from the same stream.

    Returns
    ----------
    RelationTransform
    """
    rng = make_rng(seed, stream)
    for attempt in range(max_retries):
        A = rng.standard_normal((p, p))
        condition_number = float(np.linalg.cond(A))
        if np.isfinite(condition_number) and condition_number <= max_condition_number:
            logger.debug("invertible transform with condition number %g", condition_number)
            return RelationTransform(matrix=A, condition_number=condition_number)
        logger.warning("resampling singular transform (condition number %g, attempt %d)",
                       condition_number, attempt + 1)
    raise DegenerateError("no well-conditioned invertible transform after %d draws" % max_retries)


def apply_relation(X, relation, seed):
    """
    Second representation related to X by `relation`: XA for an invertible A,
    XU for an orthogonal U, alpha X, or an independent random matrix.

    Parameters
    ----------
    X: ActivationMatrix
    relation: Relation
    seed: int

    Returns
    ----------
    ActivationMatrix
        Its metadata records the relation and the condition number of the transform.
    """
    relation = relation.validate()
    X = as_activation(X)
    metadata = {"relation": relation.kind, "seed": int(seed)}

    if relation.kind == "independent":
        data = make_rng(seed, STREAM_INDEPENDENT).standard_normal(X.shape)
        data, _ = zero_mean_normalization(data)
        return ActivationMatrix(data, centered=True, metadata=metadata)
    if relation.kind == "isotropic-scale":
        metadata["alpha"] = relation.alpha
        return ActivationMatrix(relation.alpha * X.data, centered=X.centered, metadata=metadata)
    if relation.kind == "orthogonal-transform":
        transform = random_orthogonal(X.p, seed)
    elif relation.kind == "invertible-transform":
        transform = random_invertible(X.p, seed)
    else:
        raise ValidationError("use gen_shared_subspace_pair for the shared-subspace relation")

    metadata["condition_number"] = transform.condition_number
    data = X.data @ transform.matrix
    if X.centered:
        # remove rounding residue so the centered flag still validates
        data, _ = zero_mean_normalization(data)
    return ActivationMatrix(data, centered=X.centered, metadata=metadata)


def gen_shared_subspace_pair(spec):
    """
    Pair of centered n x p matrices built from a common dictionary of 2p
    orthonormal directions. Component i carries eigenvalue spectrum_decay**i in
    both matrices; components listed in shared_indices use the same direction in
    X and Y, all others use directions private to each matrix. Each matrix is
    finally mixed by its own random orthogonal p x p rotation, which leaves the
    spectrum intact.

    Parameters
    ----------
    spec: SynthSpec
        with a shared-subspace relation

    Returns
    ----------
    (ActivationMatrix, ActivationMatrix)
    """
    spec = spec.validate()
    n, p, rel = spec.n, spec.p, spec.relation
    shared = tuple(int(i) for i in rel.shared_indices)
    if len(set(shared)) != len(shared) or len(shared) > p:
        raise ValidationError("more shared indices than components (%d components)" % p)
    if any(i < 0 or i >= p for i in shared):
        raise ValidationError("shared indices must lie in [0, %d)" % p)
    if 2 * p > n - 1:
        raise ValidationError("the component dictionary needs 2p <= n - 1, got n=%d, p=%d" % (n, p))

    gaussian = make_rng(spec.seed, STREAM_DICTIONARY).standard_normal((n, 2 * p))
    gaussian, _ = zero_mean_normalization(gaussian)
    dictionary = _orthogonal_from(gaussian)

    eigenvalues = rel.spectrum_decay ** np.arange(p, dtype=np.float64)
    directions_x = dictionary[:, :p]
    directions_y = dictionary[:, p:].copy()
    directions_y[:, list(shared)] = directions_x[:, list(shared)]

    rotation_x = random_orthogonal(p, spec.seed, STREAM_ROTATION_X).matrix
    rotation_y = random_orthogonal(p, spec.seed, STREAM_ROTATION_Y).matrix
    data_x = (directions_x * np.sqrt(eigenvalues)) @ rotation_x
    data_y = (directions_y * np.sqrt(eigenvalues)) @ rotation_y

    if rel.noise_level > 0:
        noise = make_rng(spec.seed, STREAM_NOISE).standard_normal((2, n, p))
        data_x = data_x + rel.noise_level * noise[0]
        data_y = data_y + rel.noise_level * noise[1]
    data_x, _ = zero_mean_normalization(data_x)
    data_y, _ = zero_mean_normalization(data_y)

    metadata = {"eigenvalues": eigenvalues.tolist(), "shared_indices": list(shared),
                "noise_level": rel.noise_level, "seed": int(spec.seed)}
    logger.debug("shared-subspace pair n=%d p=%d sharing %s", n, p, shared)
    return (ActivationMatrix(data_x, centered=True, label="x", metadata=metadata),
            ActivationMatrix(data_y, centered=True, label="y", metadata=metadata))


def theorem1_transform(X, Y):
    """
    Invertible p x p matrix A with XA = Y for two rank-n matrices with p >= n.
    Stacking a basis of the null space of the rows under each matrix makes both
    square and invertible, X' = [X; N_X^T] and Y' = [Y; N_Y^T], and
    A = X'^-1 Y' maps the first n rows of X' onto those of Y'.

    Parameters
    ----------
    X, Y: ActivationMatrix (n, p)

    Returns
    ----------
    np.ndarray (p, p)
    """
    X = as_activation(X)
    Y = as_activation(Y)
    if X.shape != Y.shape:
        raise ValidationError("theorem1_transform needs equal shapes, got %s and %s" % (X.shape, Y.shape))
    n, p = X.shape
    if p < n:
        raise ValidationError("theorem1_transform needs p >= n, got n=%d, p=%d" % (n, p))
    for name, M in (("X", X), ("Y", Y)):
        rank = np.linalg.matrix_rank(M.data)
        if rank != n:
            raise RankError("%s has rank %d, expected full row rank %d" % (name, rank, n))

    x_full = np.vstack([X.data, scipy.linalg.null_space(X.data).T])
    y_full = np.vstack([Y.data, scipy.linalg.null_space(Y.data).T])
    return scipy.linalg.solve(x_full, y_full)


def gen_layer_stack(L, n, p, seed, noise_level=defaults.NOISE_LEVEL, structure_seed=0,
                    signal_rank=defaults.SIGNAL_RANK):
    """
    Layers of a synthetic "network". Layer l is S_l M_l + noise_level N_l: the
    n x k signal S_l depends only on structure_seed and is orthogonal to the
    signals of every other layer; the mixing M_l and the noise N_l depend on the
    network seed. Networks generated with the same structure_seed therefore have
    corresponding layers, while every layer has full rank n.

    Parameters
    ----------
    L: int
        Number of layers
    n: int
        Number of examples
    p: int
        Number of features, at least n
    seed: int
        Network seed
    noise_level: float
    structure_seed: int
    signal_rank: int
        Columns k of every signal

    Returns
    ----------
    list of ActivationMatrix
        Not centered, labelled layer_00, layer_01, ...
    """
    if L < 2:
        raise ValidationError("a layer stack needs at least 2 layers, got %d" % L)
    if p < n:
        raise ValidationError("layer stacks need p >= n, got n=%d, p=%d" % (n, p))
    if not (1 <= signal_rank < n):
        raise ValidationError("the signal rank must lie in [1, n), got %d" % signal_rank)
    if L * signal_rank > n:
        raise ValidationError("%d mutually orthogonal signals of rank %d need n >= %d, got %d"
                              % (L, signal_rank, L * signal_rank, n))
    if not noise_level >= 0.:
        raise ValidationError("noise_level must be nonnegative, got %r" % (noise_level,))

    signals = _orthogonal_from(make_rng(structure_seed, STREAM_STRUCTURE).standard_normal((n, L * signal_rank)))
    rng = make_rng(seed, STREAM_NETWORK)

    layers = []
    for layer in range(L):
        signal = signals[:, layer * signal_rank:(layer + 1) * signal_rank]
        mixing = rng.standard_normal((signal_rank, p))
        noise = rng.standard_normal((n, p))
        data = signal @ mixing + noise_level * noise

        s = scipy.linalg.svdvals(data)
        if s[n - 1] <= 1e-8 * s[0]:
            raise RankError("layer %d has rank below %d; increase noise_level" % (layer, n))
        layers.append(ActivationMatrix(data, centered=False, label="layer_%02d" % layer,
                                       metadata={"seed": int(seed), "structure_seed": int(structure_seed),
                                                 "noise_level": noise_level}))
    logger.debug("generated %d layers of shape (%d x %d), seed %d", L, n, p, seed)
    return layers


