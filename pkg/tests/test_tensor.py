import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from slfac.tensor import as_tensor3, max_abs_diff, round_half_away, sum_squares, zeros


def test_zeros():
    assert np.array_equal(zeros(1, 2, 2), np.zeros((1, 2, 2)))
    assert zeros(3, 8, 8).size == 192
    with pytest.raises(ValueError, match="empty dimension"):
        zeros(0, 2, 2)


def test_sum_squares_examples():
    assert sum_squares(np.ones((1, 2, 2))) == 4.0
    assert sum_squares(zeros(2, 3, 3)) == 0.0
    assert sum_squares(np.array([[[3.0, 4.0]]])) == 25.0


def test_max_abs_diff_examples():
    a = np.array([[[1.0, 2.0]]])
    assert max_abs_diff(a, a) == 0.0
    assert max_abs_diff(a, np.array([[[1.0, 5.0]]])) == 3.0
    with pytest.raises(ValueError, match="shape mismatch"):
        max_abs_diff(np.zeros((1, 2, 2)), np.zeros((1, 2, 3)))


def test_rejects_non_finite_and_wrong_rank():
    with pytest.raises(ValueError):
        as_tensor3(np.array([[[np.nan]]]))
    with pytest.raises(ValueError):
        as_tensor3(np.zeros((2, 2)))


def test_round_half_away():
    assert list(round_half_away([0.5, 1.5, 2.5, -0.5, -2.5, 0.49])) == [1, 2, 3, -1, -3, 0]


# magnitudes whose squares stay normal floats
finite = st.one_of(st.just(0.0), st.floats(1e-6, 1e3), st.floats(-1e3, -1e-6))
tensors = arrays(np.float64, (2, 3, 3), elements=finite)


@given(tensors)
def test_sum_squares_nonnegative_zero_iff_zero(t):
    s = sum_squares(t)
    assert s >= 0
    assert (s == 0) == (not np.any(t))


@given(tensors, tensors, tensors)
def test_max_abs_diff_metric(a, b, c):
    assert max_abs_diff(a, b) == max_abs_diff(b, a)
    assert max_abs_diff(a, c) <= max_abs_diff(a, b) + max_abs_diff(b, c) + 1e-9
