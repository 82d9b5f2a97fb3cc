import logging
import os
from concurrent.futures import ThreadPoolExecutor

from pyrepsim import defaults
from pyrepsim.exceptions import ValidationError

logger = logging.getLogger(__name__)


def resolve_threads(n_threads=None):
    """
    Number of worker threads: n_threads if given, else the REPSIM_THREADS
    environment variable, else the number of CPUs. The environment variable
    also caps an explicit request.

    Returns
    ----------
    int
    """
    cap = None
    raw = os.environ.get(defaults.THREADS_ENV_VAR)
    if raw is not None and raw.strip():
        try:
            cap = int(raw)
        except ValueError:
            raise ValidationError("%s must be a positive integer, got %r" % (defaults.THREADS_ENV_VAR, raw))
        if cap < 1:
            raise ValidationError("%s must be a positive integer, got %r" % (defaults.THREADS_ENV_VAR, raw))

    if n_threads is None:
        n_threads = cap if cap is not None else (os.cpu_count() or 1)
    elif n_threads < 1:
        raise ValidationError("the number of threads must be positive, got %d" % n_threads)
    if cap is not None:
        n_threads = min(n_threads, cap)
    return n_threads


def ordered_map(func, items, n_threads=None):
    """
    Applies func to every item, possibly concurrently. Results come back in the
    order of items regardless of completion order.

    Parameters
    ----------
    func: callable
    items: iterable
    n_threads: int

    Returns
    ----------
    list
    """
    items = list(items)
    n_threads = min(resolve_threads(n_threads), max(len(items), 1))
    logger.debug("evaluating %d items with %d threads", len(items), n_threads)
    if n_threads == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=n_threads) as executor:
        return list(executor.map(func, items))
