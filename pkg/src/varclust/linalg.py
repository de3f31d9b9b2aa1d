"""Dense linear-algebra primitives shared by every other module.

Everything here is a pure function of its inputs. Functions accept either a
:class:`DataMatrix` or a plain 2-d array.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DecompositionFailure, InputError, RankDeficient, ZeroVarianceColumn

EIGEN_CLAMP = 1e-10


@dataclass(frozen=True)
class DataMatrix:
    """n observations (rows) by p variables (columns) with column labels."""

    values: np.ndarray
    column_names: tuple = field(default=None)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise InputError(f"data matrix must be 2-d, got shape {values.shape}")
        n, p = values.shape
        if n < 2 or p < 1:
            raise InputError(f"need n >= 2 observations and p >= 1 variables, got {n}x{p}")
        if not np.all(np.isfinite(values)):
            raise InputError("data matrix contains missing or non-finite entries")
        names = self.column_names
        if names is None:
            names = tuple(f"V{j + 1}" for j in range(p))
        names = tuple(str(c) for c in names)
        if len(names) != p:
            raise InputError(f"{len(names)} column names for {p} columns")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "column_names", names)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def p(self):
        return self.values.shape[1]

    def subset(self, columns):
        columns = np.asarray(columns, dtype=np.int64)
        return DataMatrix(self.values[:, columns], [self.column_names[j] for j in columns])

    def transpose(self):
        return DataMatrix(self.values.T, [f"R{i + 1}" for i in range(self.n)])


def as_array(X):
    return np.asarray(X.values if isinstance(X, DataMatrix) else X, dtype=np.float64)


@dataclass(frozen=True)
class EigenSpectrum:
    """Non-increasing eigenvalues of a sample covariance.

    ``side`` is ``"variables"`` for the p x p matrix of column-centered data
    divided by n, or ``"observations"`` for the n x n matrix of row-centered
    data divided by p.
    """

    eigenvalues: np.ndarray
    side: str
    n_used: int
    p_used: int


@dataclass(frozen=True)
class FactorBasis:
    """Orthonormal n x k principal-factor basis of a column-centered block.

    ``column_mean`` holds the per-variable means removed before the
    decomposition. ``requested_k`` differs from ``k`` when the block had
    lower rank than requested.
    """

    factors: np.ndarray
    k: int
    column_mean: np.ndarray
    requested_k: int

    @property
    def reduced(self):
        return self.k < self.requested_k


def standardize(X, center=True, scale=True):
    """Center and/or scale columns to zero mean and unit sample deviation.

    The sample standard deviation uses the n - 1 divisor.
    """
    dm = X if isinstance(X, DataMatrix) else DataMatrix(X)
    values = dm.values.copy()
    if center:
        values = values - values.mean(axis=0)
    if scale:
        sd = dm.values.std(axis=0, ddof=1)
        tiny = sd <= 1e-13 * np.abs(dm.values).max(axis=0)
        if np.any(tiny):
            raise ZeroVarianceColumn(dm.column_names[int(np.flatnonzero(tiny)[0])])
        values = values / sd
    return DataMatrix(values, dm.column_names)


def _eigvalsh(S):
    try:
        eig = np.linalg.eigvalsh(S)
    except np.linalg.LinAlgError as exc:
        raise DecompositionFailure(str(exc)) from exc
    eig = eig[::-1].copy()
    eig[eig < EIGEN_CLAMP] = 0.0
    return eig


def covariance_spectrum(X, side=None):
    """Eigen-spectrum of the sample covariance of ``X``.

    By default the variables side is used when p <= n and the observations
    side otherwise. The observations side centers rows, which makes the
    spectrum of ``X`` equal to the variables-side spectrum of ``X.T``.
    """
    A = as_array(X)
    n, p = A.shape
    if side is None:
        side = "variables" if p <= n else "observations"
    if side == "variables":
        Ac = A - A.mean(axis=0)
        S = Ac.T @ Ac / n
    elif side == "observations":
        Ac = A - A.mean(axis=1, keepdims=True)
        S = Ac @ Ac.T / p
    else:
        raise ValueError(f"unknown side {side!r}")
    return EigenSpectrum(_eigvalsh(S), side, n, p)


def _orient(U):
    rows = np.argmax(np.abs(U), axis=0)
    signs = np.sign(U[rows, np.arange(U.shape[1])])
    signs[signs == 0] = 1.0
    return U * signs


def principal_factors(X_sub, k, strict=False):
    """First ``k`` left singular vectors of the column-centered block.

    Each factor is oriented so its largest-magnitude entry is positive. When
    the centered block has rank below ``k`` the basis is truncated to the
    available rank (``basis.reduced`` is then true), or ``RankDeficient`` is
    raised if ``strict``.
    """
    A = as_array(X_sub)
    n, p = A.shape
    if k < 1 or k > min(n, p):
        raise ValueError(f"k must lie in 1..{min(n, p)}, got {k}")
    mean = A.mean(axis=0)
    Ac = A - mean
    try:
        U, s, _ = np.linalg.svd(Ac, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionFailure(str(exc)) from exc
    tol = s[0] * max(n, p) * np.finfo(float).eps if s.size else 0.0
    rank = int(np.count_nonzero(s > tol))
    if rank < k:
        if strict or rank == 0:
            raise RankDeficient(k, rank)
        kk = rank
    else:
        kk = k
    return FactorBasis(_orient(U[:, :kk]), kk, mean, k)


def design(basis, intercept=True):
    F = basis.factors if isinstance(basis, FactorBasis) else np.asarray(basis, dtype=np.float64)
    if intercept:
        return np.column_stack([np.ones(F.shape[0]), F])
    return F


def orthonormal_design(basis, intercept=True):
    """Orthonormal basis of span(factors [+ constant]) via reduced QR."""
    Q, _ = np.linalg.qr(design(basis, intercept))
    return Q


def project_rss(x, basis, intercept=True):
    """Residual sum of squares of ``x`` after least-squares projection."""
    x = np.asarray(x, dtype=np.float64)
    D = design(basis, intercept)
    coef, *_ = np.linalg.lstsq(D, x, rcond=None)
    r = x - D @ coef
    return float(r @ r)
