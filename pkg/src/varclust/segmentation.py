"""Assignment of p variables to K clusters."""

from dataclasses import dataclass

import numpy as np

from .exceptions import InputError


@dataclass(frozen=True, eq=False)
class Segmentation:
    """Labels in 0..K-1 for each of p variables.

    Equality and hashing compare the label vectors exactly, so segmentations
    can be used as keys when detecting cycles.
    """

    labels: np.ndarray
    K: int

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64).ravel()
        if labels.size and (labels.min() < 0 or labels.max() >= self.K):
            raise InputError(f"labels must lie in 0..{self.K - 1}")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "K", int(self.K))

    @classmethod
    def from_labels(cls, labels):
        """Relabel arbitrary hashable labels to 0..K-1 in sorted order."""
        uniq, inv = np.unique(np.asarray(labels), return_inverse=True)
        return cls(inv.ravel(), len(uniq))

    @property
    def p(self):
        return self.labels.size

    def sizes(self):
        return np.bincount(self.labels, minlength=self.K)

    def members(self, i):
        return np.flatnonzero(self.labels == i)

    def clusters(self):
        return [self.members(i) for i in range(self.K)]

    def all_nonempty(self):
        return bool(np.all(self.sizes() > 0))

    def __eq__(self, other):
        if not isinstance(other, Segmentation):
            return NotImplemented
        return self.K == other.K and np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash((self.K, self.labels.tobytes()))

    def __repr__(self):
        return f"Segmentation(K={self.K}, sizes={self.sizes().tolist()})"
