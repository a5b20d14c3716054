import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dmdd.errors import DimensionMismatch, EmptyCollection
from dmdd.metrics import KL_EPS, PredictionPair, kl_divergence, mse, per_frame_errors, summarize


def test_identical_pairs_score_zero(rng):
    A = rng.standard_normal((3, 4))
    assert mse([(A, A)]) == 0
    assert kl_divergence([(A, A)]) == pytest.approx(0, abs=1e-15)


def test_unit_deviation():
    assert mse([([[0.0]], [[1.0]])]) == 1


def test_two_pairs_hand_value():
    pairs = [
        (np.zeros((2, 1)), np.array([[1.0], [1.0]])),
        (np.zeros((2, 1)), np.array([[3.0], [0.0]])),
    ]
    assert mse(pairs) == pytest.approx(2.75, abs=1e-15)
    np.testing.assert_allclose(per_frame_errors(pairs), [2.75])


def test_per_frame_hand_values():
    gt = np.zeros((2, 2))
    pr = np.array([[1.0, 2.0], [3.0, 0.0]])
    np.testing.assert_allclose(per_frame_errors([(gt, pr)]), [5.0, 2.0])
    assert per_frame_errors([(gt, gt)]).tolist() == [0.0, 0.0]


def test_kl_hand_value():
    p = [(1 + KL_EPS) / (1 + 2 * KL_EPS), KL_EPS / (1 + 2 * KL_EPS)]
    q = [(0.5 + KL_EPS) / (1 + 2 * KL_EPS)] * 2
    by_hand = sum(pi * math.log(pi / qi) for pi, qi in zip(p, q))
    value = kl_divergence([([[1.0, 0.0]], [[0.5, 0.5]])])
    assert value == pytest.approx(by_hand, abs=1e-12)
    assert round(value, 6) == 0.693147


def test_errors():
    with pytest.raises(EmptyCollection):
        mse([])
    with pytest.raises(DimensionMismatch):
        mse([(np.zeros((2, 2)), np.zeros((2, 3)))])
    with pytest.raises(DimensionMismatch):
        per_frame_errors([(np.zeros((1, 2)), np.zeros((1, 2))), (np.zeros((1, 3)), np.zeros((1, 3)))])


def brute_mse(pairs):
    total = 0.0
    for gt, pr in pairs:
        m, p = gt.shape
        s = 0.0
        for i in range(m):
            for j in range(p):
                s += (gt[i, j] - pr[i, j]) ** 2
        total += s / (m * p)
    return total / len(pairs)


@st.composite
def pair_sets(draw):
    m, p, K = draw(st.integers(1, 5)), draw(st.integers(1, 6)), draw(st.integers(1, 4))
    g = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    scale = draw(st.sampled_from([1e-3, 1.0, 1e3]))
    return [(scale * g.standard_normal((m, p)), scale * g.standard_normal((m, p))) for _ in range(K)]


@settings(max_examples=80, deadline=None)
@given(pair_sets())
def test_metric_properties(pairs):
    value = mse(pairs)
    assert value >= 0
    assert value == pytest.approx(brute_mse(pairs), rel=1e-12)
    assert abs(np.mean(per_frame_errors(pairs)) - value) <= 1e-12 * max(1, value)
    assert kl_divergence(pairs) >= -1e-12
    perm = np.random.default_rng(0).permutation(pairs[0][0].shape[0])
    assert mse([(g[perm], p[perm]) for g, p in pairs]) == pytest.approx(value, rel=1e-12)


def test_summary():
    s = summarize([PredictionPair(np.zeros((1, 2)), np.ones((1, 2)))])
    assert (s.mse, s.count, s.per_frame_mse) == (1.0, 1, (1.0, 1.0))
    assert set(s.to_dict()) == {"count_K", "kl", "mse", "per_frame_mse"}
