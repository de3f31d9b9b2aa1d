"""Pure-numpy reference kernels."""

import numpy as np


def pair_counts(a, b):
    p = a.shape[0]
    i, j = np.triu_indices(p, 1)
    same_a = a[i] == a[j]
    same_b = b[i] == b[j]
    both = int(np.count_nonzero(same_a & same_b))
    a_only = int(np.count_nonzero(same_a & ~same_b))
    b_only = int(np.count_nonzero(~same_a & same_b))
    total = p * (p - 1) // 2
    return both, a_only, b_only, total - both - a_only - b_only


def rss_matrix(X, bases):
    # bases: (K, n, m) with orthonormal (or zero) columns
    K = bases.shape[0]
    out = np.empty((X.shape[1], K))
    for i in range(K):
        Z = bases[i]
        R = X - Z @ (Z.T @ X)
        out[:, i] = np.einsum("ij,ij->j", R, R)
    return out


def pesel_profile(eigs, N, P, kmax, floor):
    lam = np.asarray(eigs, dtype=np.float64)[:P]
    ks = np.arange(1, kmax + 1)
    with np.errstate(divide="ignore"):
        logs = np.log(np.maximum(lam, floor))
    head = np.cumsum(logs)[:kmax]
    total = lam.sum()
    tail_sum = total - np.cumsum(lam)[:kmax]
    tail_len = P - ks
    scores = np.empty(kmax)
    for idx, k in enumerate(ks):
        if np.any(lam[:k] < floor):
            scores[idx] = -np.inf
            continue
        if tail_len[idx] > 0:
            tail_mean = tail_sum[idx] / tail_len[idx]
            if tail_mean < floor:
                scores[idx] = -np.inf
                continue
            tail_term = tail_len[idx] * np.log(tail_mean)
        else:
            tail_term = 0.0
        lik = head[idx] + tail_term + P * np.log(2 * np.pi) + P
        pen = np.log(N) * (P * k - k * (k + 1) / 2 + k + P + 1) / 2
        scores[idx] = -(N / 2) * lik - pen
    return scores
