"""External clustering-quality indices.

``A`` is the reference (true) partition, ``B`` the candidate. Label vectors
with arbitrary values or :class:`Segmentation` objects are accepted.
Integration and acontamination are not symmetric in (A, B).
"""

from fractions import Fraction
from math import comb

import numpy as np

from . import _kernels
from .exceptions import DegenerateInput, InputError
from .segmentation import Segmentation


def _codes(labels):
    if isinstance(labels, Segmentation):
        labels = labels.labels
    _, inv = np.unique(np.asarray(labels), return_inverse=True)
    return inv.ravel().astype(np.int64)


def _pair(A, B):
    a, b = _codes(A), _codes(B)
    if a.size != b.size:
        raise InputError(f"partitions label {a.size} and {b.size} elements")
    return a, b


def pair_counts(A, B):
    """(a, b, c, d): pairs together in both, only in A, only in B, in neither."""
    a, b = _pair(A, B)
    return _kernels.pair_counts(a, b)


def _ari_from_counts(a, b, c, d):
    total = a + b + c + d
    expected = (a + b) * (a + c) + (b + d) * (c + d)
    denom = total * total - expected
    if denom == 0:
        return 1.0
    return (total * (a + d) - expected) / denom


def adjusted_rand_index(A, B):
    """ARI from the four pair-agreement counts."""
    a, b = _pair(A, B)
    if a.size < 2:
        raise DegenerateInput("ARI needs at least two elements")
    return _ari_from_counts(*_kernels.pair_counts(a, b))


def contingency(A, B):
    a, b = _pair(A, B)
    table = np.zeros((a.max() + 1, b.max() + 1), dtype=np.int64)
    np.add.at(table, (a, b), 1)
    return table


def adjusted_rand_index_contingency(A, B):
    """ARI from the contingency table; cross-checks :func:`adjusted_rand_index`."""
    table = contingency(A, B)
    p = int(table.sum())
    if p < 2:
        raise DegenerateInput("ARI needs at least two elements")
    total = comb(p, 2)
    together = sum(comb(int(v), 2) for v in table.ravel())
    rows = sum(comb(int(v), 2) for v in table.sum(axis=1))
    cols = sum(comb(int(v), 2) for v in table.sum(axis=0))
    a = together
    b = rows - together
    c = cols - together
    d = total - a - b - c
    return _ari_from_counts(a, b, c, d)


def _exact_mean(num, den):
    # ratios of integer counts, averaged without rounding error
    total = sum(Fraction(int(a), int(b)) for a, b in zip(num, den))
    return float(total / len(num))


def _integrating(table):
    # argmax picks the lowest B index on ties
    best = np.argmax(table, axis=1)
    return best, table[np.arange(table.shape[0]), best]


def integration(A, B):
    """Per-cluster share of each A cluster captured by its integrating B cluster.

    Returns ``(per_cluster, mean, integrating)`` where ``integrating[j]`` is
    the index of the B cluster for the j-th A cluster (in sorted-label
    order).
    """
    table = contingency(A, B)
    best, hits = _integrating(table)
    sizes = table.sum(axis=1)
    return hits / sizes, _exact_mean(hits, sizes), best


def acontamination(A, B):
    """Share of each integrating B cluster that comes from its A cluster."""
    table = contingency(A, B)
    best, hits = _integrating(table)
    sizes = table.sum(axis=0)[best]
    return hits / sizes, _exact_mean(hits, sizes)


def evaluate(A, B):
    """ARI, mean integration and mean acontamination in one mapping."""
    _, int_mean, _ = integration(A, B)
    _, acont_mean = acontamination(A, B)
    return {
        "ari": adjusted_rand_index(A, B),
        "integration": int_mean,
        "acontamination": acont_mean,
    }
