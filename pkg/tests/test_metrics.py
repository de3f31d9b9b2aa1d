import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varclust.exceptions import DegenerateInput
from varclust.metrics import (
    acontamination,
    adjusted_rand_index,
    adjusted_rand_index_contingency,
    evaluate,
    integration,
    pair_counts,
)

labels = st.lists(st.integers(0, 4), min_size=2, max_size=60)


def brute_pairs(A, B):
    a = b = c = d = 0
    for i in range(len(A)):
        for j in range(i + 1, len(A)):
            sa, sb = A[i] == A[j], B[i] == B[j]
            a += sa and sb
            b += sa and not sb
            c += sb and not sa
            d += not sa and not sb
    return a, b, c, d


def test_worked_ari():
    assert adjusted_rand_index([0, 0, 1, 1], [0, 1, 0, 1]) == -0.5


def test_worked_integration_and_acontamination():
    A = [0, 0, 0, 1, 1]  # {1,2,3}, {4,5}
    B = [0, 0, 1, 0, 0]  # {1,2,4,5}, {3}
    per, int_mean, integrating = integration(A, B)
    assert list(per) == [2 / 3, 1.0] and int_mean == 5 / 6
    assert list(integrating) == [0, 0]
    aper, acont = acontamination(A, B)
    assert list(aper) == [0.5, 0.5] and acont == 0.5


def test_one_block_candidate():
    aper, acont = acontamination([0, 0, 1, 1], [0, 0, 0, 0])
    assert list(aper) == [0.5, 0.5] and acont == 0.5


def test_singleton_candidate():
    per, _, _ = integration([0, 0, 0, 1], [0, 1, 2, 3])
    assert list(per) == [1 / 3, 1.0]


def test_identical_and_relabelled():
    a = [0, 0, 1, 2, 2]
    assert adjusted_rand_index(a, a) == 1.0
    assert adjusted_rand_index(a, [7, 7, 3, 1, 1]) == 1.0
    assert evaluate(a, a) == {"ari": 1.0, "integration": 1.0, "acontamination": 1.0}


def test_single_cluster_both_sides():
    assert adjusted_rand_index([0, 0, 0], [0, 0, 0]) == 1.0


def test_too_few_elements():
    with pytest.raises(DegenerateInput):
        adjusted_rand_index([0], [0])


def test_integration_tie_takes_lowest():
    per, _, integrating = integration([0, 0, 0, 0], [1, 1, 2, 2])
    assert integrating[0] == 0 and per[0] == 0.5


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_pair_counts_brute_force(data):
    A = data.draw(labels)
    B = data.draw(st.lists(st.integers(0, 4), min_size=len(A), max_size=len(A)))
    assert pair_counts(A, B) == brute_pairs(A, B)


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_ari_properties(data):
    A = data.draw(labels)
    B = data.draw(st.lists(st.integers(0, 4), min_size=len(A), max_size=len(A)))
    ari = adjusted_rand_index(A, B)
    assert ari == pytest.approx(adjusted_rand_index(B, A), abs=1e-12)
    assert ari <= 1 + 1e-12
    assert ari == pytest.approx(adjusted_rand_index_contingency(A, B), abs=1e-12)
    perm = np.random.default_rng(len(A)).permutation(5)
    assert adjusted_rand_index(A, perm[B]) == pytest.approx(ari, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_integration_bounds(data):
    A = data.draw(labels)
    B = data.draw(st.lists(st.integers(0, 4), min_size=len(A), max_size=len(A)))
    per, mean, _ = integration(A, B)
    aper, amean = acontamination(A, B)
    assert np.all((per > 0) & (per <= 1)) and np.all((aper > 0) & (aper <= 1))
    assert integration(A, A)[1] == 1.0 and acontamination(A, A)[1] == 1.0
