import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from oracles import dct2_literal, zigzag_walk
from slfac.spectral import (
    dct2_forward,
    dct2_inverse,
    inverse_zigzag,
    norm_factors,
    spectral_energy,
    zigzag_order,
    zigzag_scan,
)

SQRT_HALF = math.sqrt(0.5)


class TestNormFactors:
    def test_examples(self):
        alpha, beta = norm_factors(1, 2)
        assert list(alpha) == [1.0]
        assert np.allclose(beta, [SQRT_HALF, 1.0])
        alpha, _ = norm_factors(4, 1)
        assert np.allclose(alpha, [0.5, SQRT_HALF, SQRT_HALF, SQRT_HALF])


class TestDct:
    def test_singleton(self):
        assert np.allclose(dct2_forward([[3.25]]), [[3.25]])

    def test_constant_2x2(self):
        X = dct2_forward(np.ones((2, 2)))
        assert X[0, 0] == pytest.approx(2.0)
        assert np.allclose(X.ravel()[1:], 0.0, atol=1e-15)

    def test_matches_literal_sum(self, rng):
        x = rng.standard_normal((4, 4))
        assert np.max(np.abs(dct2_forward(x) - dct2_literal(x))) <= 1e-5

    def test_rectangular_matches_literal(self, rng):
        for shape in [(1, 5), (3, 7), (8, 2)]:
            x = rng.standard_normal(shape)
            assert np.max(np.abs(dct2_forward(x) - dct2_literal(x))) <= 1e-5

    def test_inverse_examples(self, rng):
        X = np.zeros((2, 2))
        X[0, 0] = 2.0
        assert np.allclose(dct2_inverse(X), 1.0)
        assert np.array_equal(dct2_inverse(np.zeros((3, 3))), np.zeros((3, 3)))
        x = rng.standard_normal((8, 8))
        assert np.max(np.abs(dct2_inverse(dct2_forward(x)) - x)) <= 1e-4

    def test_batched_equals_per_channel(self, rng):
        t = rng.standard_normal((3, 5, 6))
        stacked = dct2_forward(t)
        for c in range(3):
            assert np.allclose(stacked[c], dct2_forward(t[c]))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            dct2_forward([[np.inf, 0.0]])
        with pytest.raises(ValueError):
            dct2_inverse([[np.nan]])


shapes = st.tuples(st.integers(1, 8), st.integers(1, 8))
channels = shapes.flatmap(lambda s: arrays(np.float64, s, elements=st.floats(-100, 100)))


@settings(max_examples=100)
@given(channels)
def test_round_trip_and_parseval(x):
    X = dct2_forward(x)
    assert np.max(np.abs(dct2_inverse(X) - x)) <= 1e-4 * (1 + np.max(np.abs(x)))
    energy = np.sum(x**2)
    assert abs(np.sum(spectral_energy(X)) - energy) <= 1e-4 * (1 + energy)


@settings(max_examples=50)
@given(channels, st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(x, a, b):
    y = np.roll(x, 1) * 0.5 - 1.0
    lhs = dct2_forward(a * x + b * y)
    rhs = a * dct2_forward(x) + b * dct2_forward(y)
    assert np.allclose(lhs, rhs, atol=1e-9 * (1 + np.abs(x).max()))


class TestZigZag:
    def test_examples(self):
        # 0-based here; (0, 0) is the DC cell
        assert zigzag_order(2, 2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert zigzag_order(1, 4) == [(0, 0), (0, 1), (0, 2), (0, 3)]
        assert zigzag_order(3, 3)[:5] == [(0, 0), (0, 1), (1, 0), (2, 0), (1, 1)]

    def test_jpeg_8x8_prefix(self):
        # standard JPEG scan positions (row-major index) for the first 16 entries
        jpeg = [0, 1, 8, 16, 9, 2, 3, 10, 17, 24, 32, 25, 18, 11, 4, 5]
        assert [u * 8 + v for u, v in zigzag_order(8, 8)[:16]] == jpeg

    @pytest.mark.parametrize("M,N", [(M, N) for M in range(1, 9) for N in range(1, 9)])
    def test_matches_bouncing_walk(self, M, N):
        order = zigzag_order(M, N)
        assert order == zigzag_walk(M, N)
        assert sorted(order) == [(u, v) for u in range(M) for v in range(N)]
        assert order[0] == (0, 0) and order[-1] == (M - 1, N - 1)

    def test_scan_inverse(self, rng):
        X = rng.standard_normal((2, 5, 3))
        assert np.array_equal(inverse_zigzag(zigzag_scan(X), 5, 3), X)

    def test_row_vector_is_identity(self):
        seq = np.arange(6.0)
        assert np.array_equal(inverse_zigzag(seq, 1, 6)[0], seq)


class TestEnergy:
    def test_examples(self):
        X = np.zeros((2, 2))
        X[0, 0] = 2.0
        X[1, 1] = -3.0
        E = spectral_energy(X)
        assert E[0, 0] == 4.0 and E[1, 1] == 9.0 and E[0, 1] == 0.0
