"""BIC membership scores and the reassignment step."""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exceptions import EmptyCluster
from .linalg import FactorBasis, as_array, orthonormal_design
from .segmentation import Segmentation

SIGMA_FLOOR = 1e-12
RSS_FLOOR = 1e-12  # per observation; the RSS floor is n * RSS_FLOOR

VARIANTS = ("rss", "homogeneous")


@dataclass(frozen=True)
class ClusterModel:
    basis: FactorBasis
    sigma2_hat: float = None
    member_count: int = 0

    @property
    def k(self):
        return self.basis.k


def basis_stack(models, intercept=True):
    """Zero-padded (K, n, m) stack of orthonormal designs for the kernels."""
    designs = [orthonormal_design(m.basis if isinstance(m, ClusterModel) else m, intercept) for m in models]
    n = designs[0].shape[0]
    width = max(d.shape[1] for d in designs)
    out = np.zeros((len(designs), n, width))
    for i, d in enumerate(designs):
        out[i, :, : d.shape[1]] = d
    return out


def rss_table(X, models, intercept=True):
    """p x K residual sums of squares of every variable against every model."""
    return _kernels.rss_matrix(as_array(X), basis_stack(models, intercept))


def sigma_mle(X, members, basis):
    """Pooled noise variance of the members: total RSS / (n * p_i), floored."""
    members = np.asarray(members, dtype=np.int64)
    if members.size == 0:
        raise EmptyCluster("sigma_mle needs at least one member")
    A = as_array(X)[:, members]
    rss = _kernels.rss_matrix(A, basis_stack([basis]))[:, 0]
    return max(float(rss.sum()) / (A.shape[0] * members.size), SIGMA_FLOOR)


def bic_homogeneous(rss, sigma2_hat, k, n):
    """Score given a shared noise variance; larger is better."""
    return 0.5 * (-np.asarray(rss) / sigma2_hat - np.log(n) * k)


def bic_rss(rss, k, n):
    """Multiple-regression BIC with the RSS floored at ``n * RSS_FLOOR``."""
    rss = np.maximum(np.asarray(rss, dtype=np.float64), n * RSS_FLOOR)
    return -n * np.log(rss / n) - k * np.log(n)


def score_table(X, models, variant="rss"):
    """p x K matrix of BIC(l, i)."""
    A = as_array(X)
    n = A.shape[0]
    rss = rss_table(A, models)
    ks = np.array([m.k for m in models], dtype=np.float64)
    if variant == "rss":
        return bic_rss(rss, ks[None, :], n)
    if variant == "homogeneous":
        sig = np.array([m.sigma2_hat for m in models], dtype=np.float64)
        if np.any(~np.isfinite(sig)):
            raise ValueError("homogeneous variant needs sigma2_hat on every model")
        return bic_homogeneous(rss, sig[None, :], ks[None, :], n)
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def repair_empty(labels, scores, K):
    """Reseed empty clusters with the worst-fitting movable variable.

    A variable is movable when its cluster has at least two members. The
    worst fit is the lowest score at the variable's own cluster, ties to the
    lowest variable index.
    """
    labels = labels.copy()
    own = scores[np.arange(labels.size), labels]
    while True:
        counts = np.bincount(labels, minlength=K)
        empty = np.flatnonzero(counts == 0)
        if empty.size == 0:
            return labels
        movable = counts[labels] >= 2
        candidates = np.where(movable, own, np.inf)
        j = int(np.argmin(candidates))
        labels[j] = empty[0]
        own[j] = scores[j, empty[0]]


def assign(scores):
    """Argmax per row (lowest cluster index on ties) followed by repair."""
    K = scores.shape[1]
    labels = np.argmax(scores, axis=1).astype(np.int64)
    return repair_empty(labels, scores, K)


def reassign(X, models, variant="rss"):
    """Allocate every variable to its best-scoring cluster model.

    The result has exactly ``len(models)`` nonempty clusters (requires
    ``p >= len(models)``).
    """
    K = len(models)
    if K == 1:
        return Segmentation(np.zeros(as_array(X).shape[1], dtype=np.int64), 1)
    return Segmentation(assign(score_table(X, models, variant)), K)
