import numpy as np
import pytest

from varclust import _kernels


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=["numpy", "numba"])
def backend(request):
    previous = _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(previous)


def orthogonal_blocks(n, dims, sizes, rng, noise=0.0):
    """Columns lying in mutually orthogonal subspaces (plus optional noise)."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, sum(dims) + 1)))
    Q = Q[:, 1:] - Q[:, 1:].mean(axis=0)
    cols, labels, start = [], [], 0
    for i, (k, m) in enumerate(zip(dims, sizes)):
        F = Q[:, start:start + k]
        start += k
        cols.append(F @ rng.uniform(0.5, 1.5, size=(k, m)) * rng.choice([-1, 1], size=(1, m)))
        labels += [i] * m
    X = np.hstack(cols)
    X = X / X.std(axis=0, ddof=1)
    if noise:
        X = X + noise * rng.standard_normal(X.shape)
    return X, np.array(labels)


ACCEPTANCE = []


def record(criterion, passed, detail):
    """Log one acceptance verdict; printed together at the end of the session."""
    line = f"{'PASS' if passed else 'FAIL'} criterion {criterion}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
