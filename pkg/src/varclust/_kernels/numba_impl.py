"""numba-compiled kernels with the same contracts as :mod:`numpy_impl`."""

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def pair_counts(a, b):
    p = a.shape[0]
    both = 0
    a_only = 0
    b_only = 0
    for i in range(p):
        for j in range(i + 1, p):
            sa = a[i] == a[j]
            sb = b[i] == b[j]
            if sa and sb:
                both += 1
            elif sa:
                a_only += 1
            elif sb:
                b_only += 1
    total = p * (p - 1) // 2
    return both, a_only, b_only, total - both - a_only - b_only


@njit(cache=True, nogil=True)
def _rss_matrix(X, Zflat, K, m):
    # one product for all K bases; for orthonormal Z the RSS is |x|^2 - |Z'x|^2
    C = np.dot(Zflat, X)
    n, p = X.shape
    out = np.empty((p, K))
    for j in range(p):
        xx = 0.0
        for r in range(n):
            xx += X[r, j] * X[r, j]
        for i in range(K):
            proj = 0.0
            for c in range(i * m, (i + 1) * m):
                proj += C[c, j] * C[c, j]
            out[j, i] = max(xx - proj, 0.0)
    return out


def rss_matrix(X, bases):
    K, n, m = bases.shape
    Zflat = np.ascontiguousarray(bases.transpose(0, 2, 1).reshape(K * m, n))
    return _rss_matrix(X, Zflat, K, m)


@njit(cache=True, nogil=True)
def _pesel_profile(lam, N, P, kmax, floor):
    scores = np.empty(kmax)
    total = 0.0
    for j in range(P):
        total += lam[j]
    head = 0.0
    head_sum = 0.0
    bad = False
    log2pi = math.log(2.0 * math.pi)
    for k in range(1, kmax + 1):
        v = lam[k - 1]
        head_sum += v
        if v < floor:
            bad = True
        else:
            head += math.log(v)
        if bad:
            scores[k - 1] = -np.inf
            continue
        tail_len = P - k
        if tail_len > 0:
            tail_mean = (total - head_sum) / tail_len
            if tail_mean < floor:
                scores[k - 1] = -np.inf
                continue
            tail_term = tail_len * math.log(tail_mean)
        else:
            tail_term = 0.0
        lik = head + tail_term + P * log2pi + P
        pen = math.log(N) * (P * k - k * (k + 1) / 2.0 + k + P + 1) / 2.0
        scores[k - 1] = -(N / 2.0) * lik - pen
    return scores


def pesel_profile(eigs, N, P, kmax, floor):
    lam = np.ascontiguousarray(np.asarray(eigs, dtype=np.float64)[:P])
    return _pesel_profile(lam, float(N), int(P), int(kmax), float(floor))
