"""PESEL: rank selection for a single block of variables.

The score of rank ``k`` is a Laplace approximation to the log of the
semi-integrated likelihood, computed from the covariance eigenvalues. Write
``N`` for the dimension that is integrated over and ``P`` for the length of
the spectrum. In the tall regime (n > p) ``N = n`` and ``P = p``; in the wide
regime (n <= p) the roles are exchanged and the spectrum comes from the
row-centered n x n Gram matrix. Then::

    -(N/2) [sum_{j<=k} ln l_j + (P-k) ln(mean_{j>k} l_j) + P ln(2 pi) + P]
        - ln(N) (P k - k (k+1)/2 + k + P + 1) / 2
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .linalg import EigenSpectrum, as_array, covariance_spectrum

EIGEN_FLOOR = 1e-12


@dataclass(frozen=True)
class PeselProfile:
    scores: np.ndarray  # scores[k - 1] for k = 1..cap
    chosen_k: int
    regime: str  # "tall" (n > p) or "wide" (n <= p)

    @property
    def best_score(self):
        return float(self.scores[self.chosen_k - 1])


def _dims(spectrum):
    if spectrum.side == "variables":
        return spectrum.n_used, spectrum.p_used
    return spectrum.p_used, spectrum.n_used


def pesel_score(spectrum, k):
    """PESEL score for rank ``k``; ``-inf`` when the spectrum is degenerate.

    A degenerate spectrum is one where a retained eigenvalue or the mean of
    the discarded ones is below ``EIGEN_FLOOR``. ``k`` equal to the full
    spectrum length is accepted and drops the (empty) tail term.
    """
    N, P = _dims(spectrum)
    if k < 1 or k > P:
        raise ValueError(f"k must lie in 1..{P}, got {k}")
    return float(_kernels.pesel_profile(spectrum.eigenvalues, N, P, k, EIGEN_FLOOR)[k - 1])


def search_cap(n, p, d_max):
    return max(1, min(d_max, n - 1, p - 1))


def argmax_lowest(scores):
    """Index of the maximum, smallest index on ties (all ``-inf`` gives 0)."""
    scores = np.asarray(scores)
    best = scores.max()
    return int(np.flatnonzero(scores == best)[0])


def pesel_rank(X_sub, d_max):
    """Profile PESEL over k = 1..cap and choose the smallest maximizing k.

    The cap is ``min(d_max, n - 1, p - 1)`` but at least 1. A single column
    is forced to k = 1 and scored from its variance alone.
    """
    A = as_array(X_sub)
    n, p = A.shape
    regime = "tall" if n > p else "wide"
    if p == 1:
        var = float(np.mean((A[:, 0] - A[:, 0].mean()) ** 2))
        spectrum = EigenSpectrum(np.array([var]), "variables", n, 1)
        return PeselProfile(np.array([pesel_score(spectrum, 1)]), 1, regime)
    spectrum = covariance_spectrum(A, side="variables" if regime == "tall" else "observations")
    cap = search_cap(n, p, d_max)
    N, P = _dims(spectrum)
    scores = _kernels.pesel_profile(spectrum.eigenvalues, N, P, cap, EIGEN_FLOOR)
    return PeselProfile(scores, argmax_lowest(scores) + 1, regime)
