"""Integer partitions with a bound on the number of parts."""
from functools import lru_cache

import numpy as np


def enumerate_partitions(k, max_len):
    """All partitions of ``k`` with at most ``max_len`` parts.

    Reverse-lexicographic order: ``(3,), (2, 1), (1, 1, 1)``. ``k == 0`` gives
    the single empty partition.
    """
    return list(_partitions(k, max_len, k))


@lru_cache(maxsize=None)
def _partitions(k, max_len, max_part):
    if k == 0:
        return ((),)
    if max_len == 0:
        return ()
    out = []
    for first in range(min(k, max_part), 0, -1):
        for rest in _partitions(k - first, max_len - 1, first):
            out.append((first,) + rest)
    return tuple(out)


def partition_array(k, max_len):
    """Partitions of ``k`` as an int array of shape (count, max_len), zero padded."""
    parts = _partitions(k, max_len, k)
    arr = np.zeros((len(parts), max_len), dtype=np.int64)
    for row, kappa in enumerate(parts):
        arr[row, : len(kappa)] = kappa
    return arr


def conjugate(kappa):
    kappa = tuple(kappa)
    if not kappa:
        return ()
    return tuple(sum(1 for part in kappa if part > j) for j in range(kappa[0]))


def is_partition(kappa):
    return all(p > 0 for p in kappa) and all(a >= b for a, b in zip(kappa, kappa[1:]))
