import abc
import functools

from pyrepsim import defaults
from pyrepsim.cka import check_same_examples
from pyrepsim.exceptions import ValidationError
from pyrepsim.reprdata import as_activation, center_columns


class BaseIndex(object, metaclass=abc.ABCMeta):
    name = None
    symmetric = True
    normalized = True

    def __init__(self, rank_tol=defaults.RANK_TOL, **params):
        """
        Abstract base class for all similarity indexes

        Parameters
        ----------
        rank_tol: float
            Relative singular value threshold used by indexes that need an
            orthonormal basis or a spectrum
        params: dict
            Index specific parameters, echoed in every report. Missing ones
            take their value from `pyrepsim.defaults.index_defaults`.
        """
        if rank_tol < 0:
            raise ValidationError("rank_tol must be nonnegative, got %g" % rank_tol)
        self.rank_tol = rank_tol
        self.params = dict(defaults.index_defaults.get(self.name, {}))
        self.params.update(params)

    def __call__(self, X, Y):
        """
        Centers both representations and evaluates the index.

        Parameters
        ----------
        X: ActivationMatrix (N, P1)
        Y: ActivationMatrix (N, P2)
            Representations of the same N examples

        Returns
        ----------
        SimilarityScore
        """
        return self.compute(center_columns(as_activation(X)), center_columns(as_activation(Y)))

    def _check_shapes(func):
        @functools.wraps(func)
        def func_wrapper(self, X, Y, *args, **kwargs):
            check_same_examples(X, Y)
            return func(self, X, Y, *args, **kwargs)
        return func_wrapper

    @abc.abstractmethod
    def compute(self, X, Y):
        """
        Evaluates the index on centered representations.

        Parameters
        ----------
        X: ActivationMatrix (N, P1)
        Y: ActivationMatrix (N, P2)

        Returns
        ----------
        SimilarityScore
        """
        pass

    def get_json_data(self):
        """
        Json getter function

        Returns
        ----------
            dictionary
        """
        return {"index": self.name,
                "params": dict(self.params),
                "rank_tol": self.rank_tol,
                "symmetric": self.symmetric,
                "normalized": self.normalized}

    def __repr__(self):
        args = ", ".join("%s=%r" % kv for kv in sorted(self.params.items()))
        return "%s(%s)" % (type(self).__name__, args)
