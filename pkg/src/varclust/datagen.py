"""Synthetic union-of-subspaces data with ground truth.

Two modes: ``shared`` draws each cluster's basis from a common pool of
round(K * d / 2) factors, ``independent`` draws a fresh Gaussian basis per
cluster. The stacked signal is standardized to unit column variance and
Gaussian noise of variance 1 / snr is added.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidConfig
from .linalg import DataMatrix
from .segmentation import Segmentation

MODES = ("shared", "independent")


@dataclass(frozen=True)
class SimConfig:
    n: int
    p: int
    K: int
    d: int
    snr: float = 1.0
    mode: str = "independent"
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise InvalidConfig(f"n must be >= 2, got {self.n}")
        if self.K < 1 or self.p < self.K:
            raise InvalidConfig(f"need 1 <= K <= p, got K={self.K}, p={self.p}")
        if self.d < 1:
            raise InvalidConfig(f"d must be >= 1, got {self.d}")
        if not self.snr > 0:
            raise InvalidConfig(f"snr must be positive, got {self.snr}")
        if self.mode not in MODES:
            raise InvalidConfig(f"mode must be one of {MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class SyntheticDataset:
    X: DataMatrix
    truth: Segmentation
    true_dims: tuple
    factor_pool: np.ndarray
    signal: np.ndarray


def cluster_sizes(p, K):
    base, rem = divmod(p, K)
    return np.array([base + (i < rem) for i in range(K)], dtype=np.int64)


def _scale(A):
    A = A - A.mean(axis=0)
    return A / A.std(axis=0, ddof=1)


def _coefficients(rng, k, m):
    magnitude = rng.uniform(0.1, 1.0, size=(k, m))
    sign = np.where(rng.uniform(-1.0, 1.0, size=(k, m)) < 0, -1.0, 1.0)
    return magnitude * sign


def _finish(cfg, rng, blocks, dims, pool):
    sizes = cluster_sizes(cfg.p, cfg.K)
    signal = _scale(np.hstack(blocks))
    noise = rng.normal(0.0, math.sqrt(1.0 / cfg.snr), size=signal.shape)
    X = DataMatrix(signal + noise, [f"x{j + 1}" for j in range(cfg.p)])
    truth = Segmentation(np.repeat(np.arange(cfg.K), sizes), cfg.K)
    return SyntheticDataset(X, truth, tuple(int(d) for d in dims), pool, signal)


def shared_pool_size(K, d, dims):
    return max(int(math.floor(K * d / 2 + 0.5)), max(dims))


def generate_shared(cfg, rng=None):
    """Clusters draw their bases, without replacement, from one factor pool."""
    if cfg.mode != "shared":
        raise InvalidConfig("generate_shared needs mode='shared'")
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    dims = rng.integers(1, cfg.d + 1, size=cfg.K)
    m = shared_pool_size(cfg.K, cfg.d, dims)
    if cfg.n <= m:
        raise InvalidConfig(f"n={cfg.n} too small for a pool of {m} factors")
    pool = _scale(rng.standard_normal((cfg.n, m)))
    sizes = cluster_sizes(cfg.p, cfg.K)
    blocks = []
    for i in range(cfg.K):
        cols = rng.choice(m, size=dims[i], replace=False)
        blocks.append(pool[:, cols] @ _coefficients(rng, dims[i], sizes[i]))
    return _finish(cfg, rng, blocks, dims, pool)


def generate_independent(cfg, rng=None):
    """Every cluster gets its own standard-normal basis."""
    if cfg.mode != "independent":
        raise InvalidConfig("generate_independent needs mode='independent'")
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    dims = rng.integers(1, cfg.d + 1, size=cfg.K)
    if cfg.n <= int(dims.max()):
        raise InvalidConfig(f"n={cfg.n} too small for subspaces of dimension {int(dims.max())}")
    sizes = cluster_sizes(cfg.p, cfg.K)
    bases, blocks = [], []
    for i in range(cfg.K):
        F = rng.standard_normal((cfg.n, dims[i]))
        bases.append(F)
        blocks.append(F @ _coefficients(rng, dims[i], sizes[i]))
    return _finish(cfg, rng, blocks, dims, np.hstack(bases))


def generate(cfg, rng=None):
    if cfg.mode == "shared":
        return generate_shared(cfg, rng)
    return generate_independent(cfg, rng)
