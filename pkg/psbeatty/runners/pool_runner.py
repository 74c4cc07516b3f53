import logging
import os
from concurrent.futures import ProcessPoolExecutor

from ..constants import ENV_THREADS


def worker_count(default=None):
    """
    Number of workers allowed by the PSBEATTY_THREADS environment variable.

    Args:
        default (int): Used when the variable is unset (defaults to the CPU
            count).

    Returns:
        int: A positive worker count.
    """
    value = os.environ.get(ENV_THREADS)
    if value is None:
        return default or os.cpu_count() or 1
    try:
        count = int(value)
    except ValueError:
        raise ValueError('{} must be a positive integer, got {!r}'.format(
            ENV_THREADS, value))
    if count < 1:
        raise ValueError('{} must be a positive integer, got {!r}'.format(
            ENV_THREADS, value))
    return count


def split_range(lo, hi, parts):
    """
    Split the integer range [lo, hi] into at most `parts` adjacent pieces.

    The boundaries depend only on (lo, hi, parts), never on scheduling.

    Returns:
        list: (start, end) tuples covering [lo, hi] in order.
    """
    if hi < lo:
        return []
    parts = max(1, min(parts, hi - lo + 1))
    size, extra = divmod(hi - lo + 1, parts)
    bounds = []
    start = lo
    for i in range(parts):
        end = start + size - 1 + (1 if i < extra else 0)
        bounds.append((start, end))
        start = end + 1
    return bounds


class PoolRunner(object):
    """
    A Runner which maps a pure function over range segments.

    Results always come back in segment order, so reductions over them are
    independent of the worker count.
    """
    def __init__(self, workers=None, logger=None):
        """
        Create a new PoolRunner.

        Args:
            workers (int): Maximum number of worker processes; taken from
                PSBEATTY_THREADS when omitted. One worker runs serially.
            logger (Logger): The log handler for the runner.
        """
        self.workers = workers or worker_count()
        self.logger = logger or logging.getLogger(__name__)

    def map_segments(self, func, bounds):
        """
        Call func(start, end) for every segment.

        Args:
            func (callable): A picklable top-level function.
            bounds (list): (start, end) tuples.

        Returns:
            list: The results, in the order of `bounds`.
        """
        bounds = list(bounds)
        if self.workers == 1 or len(bounds) < 2:
            return [func(start, end) for start, end in bounds]

        self.logger.debug('Mapping {} over {} segments with {} workers'.format(
            getattr(func, '__name__', func), len(bounds), self.workers))
        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            futures = [executor.submit(func, start, end)
                       for start, end in bounds]
            return [future.result() for future in futures]

    def map_range(self, func, lo, hi, parts=None):
        """
        Split [lo, hi] into deterministic segments and map func over them.

        Args:
            func (callable): A picklable function of (start, end).
            lo (int): First value.
            hi (int): Last value.
            parts (int): Number of segments (defaults to the worker count).

        Returns:
            list: Per-segment results in order.
        """
        return self.map_segments(
            func, split_range(lo, hi, parts or self.workers))
