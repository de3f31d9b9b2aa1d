"""The k-centroids loop: PESEL -> PCA -> BIC reassignment.

One iteration maps a segmentation to per-cluster dimensions (PESEL),
principal-factor centroids (PCA) and a new segmentation (BIC). The model
score is

    mBIC = sum_i PESEL(X_i | k_i) - p ln K - K ln d_max

evaluated on the segmentation the centroids were fitted to. Restarts and the
search over K pick the largest mBIC.
"""

import dataclasses
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .assignment import VARIANTS, ClusterModel, reassign, sigma_mle
from .exceptions import ConfigError, InputError, TooManyClusters
from .linalg import FactorBasis, as_array, principal_factors
from .pesel import argmax_lowest, pesel_rank
from .segmentation import Segmentation

log = logging.getLogger(__name__)

INITS = ("random", "one_dimensional")


@dataclass(frozen=True)
class EngineConfig:
    d_max: int = 4
    runs: int = 20
    max_iter: int = 30
    variant: str = "rss"
    flat_prior: bool = False
    greedy: bool = True
    seed: int = 0
    init: str = "one_dimensional"
    custom_init: Segmentation = None
    threads: int = 1

    def __post_init__(self):
        if self.d_max < 1:
            raise ConfigError(f"d_max must be >= 1, got {self.d_max}")
        if self.runs < 1 or self.max_iter < 1:
            raise ConfigError("runs and max_iter must be >= 1")
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.init not in INITS:
            raise ConfigError(f"init must be one of {INITS}, got {self.init!r}")
        if self.threads is not None and self.threads < 1:
            raise ConfigError("threads must be >= 1")


def default_threads():
    """All but one available worker, at least one."""
    return max(1, (os.cpu_count() or 1) - 1)


@dataclass(frozen=True)
class FitResult:
    segmentation: Segmentation
    dims: tuple
    factors: list = field(repr=False)
    mbic: float
    mbic_trace: tuple
    iterations: int
    converged: bool
    seed_used: int
    stop_reason: str  # "fixed_point", "cycle" or "max_iter"
    run_index: int = 0


@dataclass(frozen=True)
class ModelSelection:
    best: FitResult
    per_K: dict
    K_chosen: int


def derive_seed(master, index):
    """Seed for restart ``index``; a run's seed never depends on the run count."""
    state = np.random.SeedSequence(int(master), spawn_key=(int(index),)).generate_state(2)
    return int(state[0]) << 32 | int(state[1])


def effective_d_max(n, p, d_max):
    return max(1, min(d_max, min(n, p) - 1))


def _check_K(p, K):
    if K < 1 or K > p:
        raise TooManyClusters(K, p)


# -- initialisation ---------------------------------------------------------

def init_random(p, K, rng):
    """Uniform random labels; empty clusters take a random member of the largest."""
    _check_K(p, K)
    labels = rng.integers(0, K, size=p).astype(np.int64)
    while True:
        counts = np.bincount(labels, minlength=K)
        empty = np.flatnonzero(counts == 0)
        if empty.size == 0:
            return Segmentation(labels, K)
        donor = int(np.argmax(counts))
        j = int(rng.choice(np.flatnonzero(labels == donor)))
        labels[j] = empty[0]


def _column_basis(x):
    c = x - x.mean()
    norm = np.linalg.norm(c)
    if norm == 0:
        raise InputError("cannot use a constant column as a one-dimensional center")
    return FactorBasis((c / norm)[:, None], 1, np.array([x.mean()]), 1)


def init_one_dimensional(X, K, rng, variant="rss"):
    """K distinct random variables act as 1-d centers; all variables are reassigned.

    With the homogeneous variant every center shares unit noise variance, so
    the allocation is by smallest residual.
    """
    A = as_array(X)
    p = A.shape[1]
    _check_K(p, K)
    centers = np.sort(rng.choice(p, size=K, replace=False))
    sigma = 1.0 if variant == "homogeneous" else None
    models = [ClusterModel(_column_basis(A[:, c]), sigma, 1) for c in centers]
    return reassign(A, models, variant)


# -- one iteration ----------------------------------------------------------

def mbic(pesel_totals, p, K, d_max, flat_prior=False):
    """Sum of per-cluster PESEL scores minus the model-prior penalty."""
    total = float(np.sum(pesel_totals))
    if flat_prior:
        return total
    return total - p * math.log(K) - K * math.log(d_max)


def fit_centroids(X, seg, cfg):
    """PESEL dimension, principal factors and PESEL score for every cluster."""
    A = as_array(X)
    dims, factors, scores, models = [], [], [], []
    for i in range(seg.K):
        members = seg.members(i)
        block = A[:, members]
        profile = pesel_rank(block, cfg.d_max)
        basis = principal_factors(block, profile.chosen_k)
        dims.append(basis.k)
        factors.append(basis)
        scores.append(float(profile.scores[basis.k - 1]))
        sigma = sigma_mle(A, members, basis) if cfg.variant == "homogeneous" else None
        models.append(ClusterModel(basis, sigma, members.size))
    return dims, factors, scores, models


def iterate_once(X, seg, cfg):
    """One PESEL -> PCA -> BIC step.

    Returns ``(new_segmentation, dims, factors, mbic)`` where ``mbic`` scores
    the input segmentation together with the new dimensions.
    """
    A = as_array(X)
    dims, factors, scores, models = fit_centroids(A, seg, cfg)
    value = mbic(scores, A.shape[1], seg.K, cfg.d_max, cfg.flat_prior)
    return reassign(A, models, cfg.variant), tuple(dims), factors, value


# -- runs ---------------------------------------------------------------------

def _prepare(X, cfg):
    A = as_array(X)
    n, p = A.shape
    d = effective_d_max(n, p, cfg.d_max)
    if d != cfg.d_max:
        log.warning("d_max=%d exceeds min(n, p) - 1; using %d", cfg.d_max, d)
        cfg = dataclasses.replace(cfg, d_max=d)
    return A, cfg


def _initial(A, K, cfg, rng, init_seg):
    if init_seg is not None:
        if init_seg.p != A.shape[1] or init_seg.K != K:
            raise InputError(
                f"initial segmentation has p={init_seg.p}, K={init_seg.K}; expected p={A.shape[1]}, K={K}"
            )
        if not init_seg.all_nonempty():
            raise InputError("initial segmentation has empty clusters")
        return init_seg
    if cfg.init == "random":
        return init_random(A.shape[1], K, rng)
    return init_one_dimensional(A, K, rng, cfg.variant)


def _run(A, K, cfg, run_seed, init_seg=None, run_index=0):
    rng = np.random.default_rng(run_seed)
    seg = _initial(A, K, cfg, rng, init_seg)
    seen = {seg}
    trace, states = [], []
    stop = "max_iter"
    for _ in range(cfg.max_iter):
        new_seg, dims, factors, value = iterate_once(A, seg, cfg)
        trace.append(value)
        states.append((seg, dims, factors))
        if new_seg == seg:
            stop = "fixed_point"
            break
        if new_seg in seen:
            stop = "cycle"
            break
        seen.add(new_seg)
        seg = new_seg
    pick = len(states) - 1
    if stop == "cycle":
        pick = argmax_lowest(trace)
        if pick != len(states) - 1:
            trace.append(trace[pick])
    seg, dims, factors = states[pick]
    return FitResult(
        segmentation=seg,
        dims=dims,
        factors=factors,
        mbic=trace[-1],
        mbic_trace=tuple(trace),
        iterations=len(states),
        converged=stop == "fixed_point",
        seed_used=run_seed,
        stop_reason=stop,
        run_index=run_index,
    )


def run_single(X, K, cfg, run_seed, init_seg=None):
    """Iterate from one initialisation until a fixed point, a cycle or ``max_iter``."""
    A, cfg = _prepare(X, cfg)
    _check_K(A.shape[1], K)
    return _run(A, K, cfg, run_seed, init_seg)


def _best(results):
    best = results[0]
    for r in results[1:]:
        if r.mbic > best.mbic:
            best = r
    return best


def run_multi(X, K, cfg):
    """Best of ``cfg.runs`` restarts by final mBIC, lowest run index on ties.

    Run ``r`` uses ``derive_seed(cfg.seed, r)``. A custom initialisation
    takes the slot of run 0.
    """
    A, cfg = _prepare(X, cfg)
    _check_K(A.shape[1], K)
    threads = cfg.threads or default_threads()

    def job(r):
        init_seg = cfg.custom_init if r == 0 else None
        return _run(A, K, cfg, derive_seed(cfg.seed, r), init_seg, r)

    if threads == 1 or cfg.runs == 1:
        results = [job(r) for r in range(cfg.runs)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, range(cfg.runs)))
    best = _best(results)
    log.info("K=%d: best mBIC %.4f from run %d", K, best.mbic, best.run_index)
    return best


def select_k(X, K_range, cfg):
    """Scan cluster counts in ascending order and keep the largest mBIC.

    In greedy mode the scan stops after the first K whose mBIC is below the
    previous one.
    """
    A = as_array(X)
    ks = sorted(set(int(k) for k in K_range))
    if not ks:
        raise ConfigError("empty K range")
    for K in ks:
        _check_K(A.shape[1], K)
    per_K = {}
    previous = None
    for K in ks:
        kcfg = cfg
        if cfg.custom_init is not None and cfg.custom_init.K != K:
            kcfg = dataclasses.replace(cfg, custom_init=None)
        fit = run_multi(A, K, kcfg)
        per_K[K] = fit
        if cfg.greedy and previous is not None and fit.mbic < previous.mbic:
            break
        previous = fit
    K_chosen = max(per_K, key=lambda k: (per_K[k].mbic, -k))
    return ModelSelection(per_K[K_chosen], per_K, K_chosen)
