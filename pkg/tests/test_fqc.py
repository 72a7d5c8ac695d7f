import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import pack_bits_reference
from slfac.afd import AfdConfig, SpectrumChannel, afd_decompose
from slfac.fqc import (
    BandQuant,
    FqcConfig,
    allocate_bits,
    dequantize_band,
    dequantize_channel,
    fqc_compress_channel,
    log_energy,
    mean_energy,
    pack_codes,
    quantize_band,
    unpack_codes,
)

CFG = FqcConfig(2, 8)


class TestEnergyMaps:
    def test_mean_energy(self):
        assert mean_energy([4, 0, 0, 0]) == 1.0
        assert mean_energy([9]) == 9.0
        with pytest.raises(ValueError, match="empty band"):
            mean_energy([])

    def test_log_energy(self):
        assert log_energy(0.0) == 0.0
        assert log_energy(math.e - 1) == pytest.approx(1.0)
        assert log_energy(15.0) == pytest.approx(2.7725887, abs=1e-6)
        with pytest.raises(ValueError):
            log_energy(-1.0)


class TestAllocateBits:
    def test_examples(self):
        assert allocate_bits(0.0, 3.0, CFG) == 2
        # 2 + 6 * tanh(pi/2) = 7.5029 -> 8
        assert 2 + 6 * math.tanh(math.pi / 2) == pytest.approx(7.50291, abs=1e-5)
        assert allocate_bits(3.0, 3.0, CFG) == 8
        assert allocate_bits(0.0, 0.0, CFG) == 2

    def test_monotone_and_bounded(self):
        tau = 2.5
        grid = np.linspace(0, tau, 1000)
        bits = [allocate_bits(e, tau, CFG) for e in grid]
        assert all(a <= b for a, b in zip(bits, bits[1:]))
        assert bits[0] == 2 and bits[-1] == 8

    @pytest.mark.parametrize("b_min,b_max", [(1, 1), (1, 16), (4, 12), (2, 8)])
    def test_max_band_width(self, b_min, b_max):
        cfg = FqcConfig(b_min, b_max)
        expected = math.floor(b_min + (b_max - b_min) * math.tanh(math.pi / 2) + 0.5)
        assert allocate_bits(1.7, 1.7, cfg) == expected

    def test_config_bounds(self):
        for lo, hi in [(0, 8), (9, 8), (2, 17)]:
            with pytest.raises(ValueError):
                FqcConfig(lo, hi)


class TestQuantize:
    def test_examples(self):
        q = quantize_band([0, 0.5, 1], 2)
        assert (q.lo, q.hi, list(q.codes)) == (0.0, 1.0, [0, 2, 3])
        q = quantize_band([7.5, 7.5], 8)
        assert (q.lo, q.hi, list(q.codes)) == (7.5, 7.5, [0, 0])
        assert list(quantize_band([-1, 1], 1).codes) == [0, 1]
        with pytest.raises(ValueError, match="empty band"):
            quantize_band([], 4)

    def test_dequantize_examples(self):
        out = dequantize_band(BandQuant(2, 0.0, 1.0, np.array([0, 2, 3])))
        assert np.allclose(out, [0, 2 / 3, 1])
        assert list(dequantize_band(BandQuant(8, 7.5, 7.5, np.zeros(3, int)))) == [7.5] * 3

    def test_endpoints_exact(self, rng):
        for bits in range(1, 17):
            x = rng.standard_normal(20) * 10 ** rng.uniform(-6, 6)
            back = dequantize_band(quantize_band(x, bits))
            assert back[np.argmin(x)] == x.min()
            assert back[np.argmax(x)] == x.max()

    def test_error_bound(self, rng):
        for _ in range(300):
            bits = int(rng.integers(1, 17))
            x = rng.standard_normal(int(rng.integers(2, 50))) * 10 ** rng.uniform(-3, 3)
            q = quantize_band(x, bits)
            step_half = (q.hi - q.lo) / (2 * ((1 << bits) - 1))
            slack = 4 * np.spacing(np.max(np.abs(x)))
            assert np.all(np.abs(dequantize_band(q) - x) <= step_half + slack)
            assert q.codes.max() < (1 << bits)


class TestPacking:
    def test_examples(self):
        assert pack_codes([3], 2) == b"\x03"
        assert pack_codes([1, 1, 1, 1], 2) == b"\x55"
        assert pack_codes([5], 3) == b"\x05"
        assert list(unpack_codes(b"\x55", 4, 2)) == [1, 1, 1, 1]

    def test_errors(self):
        with pytest.raises(ValueError, match="overflow"):
            pack_codes([4], 2)
        with pytest.raises(ValueError, match="length mismatch"):
            unpack_codes(b"\x00\x00", 4, 2)

    def test_length(self):
        assert len(pack_codes(np.zeros(10, int), 3)) == 4
        assert pack_codes([], 5) == b""

    def test_matches_bitwise_reference(self, rng):
        for bits in range(1, 17):
            codes = rng.integers(0, 1 << bits, size=int(rng.integers(0, 40)))
            assert pack_codes(codes, bits) == pack_bits_reference(codes.tolist(), bits)


@settings(max_examples=1000)
@given(st.integers(1, 16).flatmap(lambda b: st.tuples(st.just(b), st.lists(st.integers(0, (1 << b) - 1), max_size=70))))
def test_pack_unpack_bijective(case):
    bits, codes = case
    data = pack_codes(codes, bits)
    assert len(data) == (len(codes) * bits + 7) // 8
    assert list(unpack_codes(data, len(codes), bits)) == codes


class TestChannel:
    def test_dc_only_channel(self):
        (sc,) = afd_decompose(np.ones((1, 2, 2)), AfdConfig(0.9))
        cq = fqc_compress_channel(sc, CFG)
        # low band E* = ln(4+1) = tau -> b_max; high band E* = 0 -> b_min
        assert cq.k_star == 1
        assert cq.low.bits == 8 and cq.high.bits == 2
        assert np.allclose(dequantize_channel(cq), [2, 0, 0, 0], atol=1e-7)

    def test_full_low_band(self):
        sc = SpectrumChannel(2, 2, np.array([1.0, 2, 3, 4]), np.array([1.0, 4, 9, 16]), 4)
        cq = fqc_compress_channel(sc, CFG)
        assert cq.high is None and len(cq.low) == 4

    def test_zero_channel(self):
        (sc,) = afd_decompose(np.zeros((1, 4, 4)), AfdConfig(0.9))
        cq = fqc_compress_channel(sc, CFG)
        assert cq.low.bits == 2 and cq.high.bits == 2
        assert not cq.low.codes.any() and not cq.high.codes.any()
        assert np.array_equal(dequantize_channel(cq), np.zeros(16))

    def test_hand_trace(self):
        # low = [3, -1] (mean E 5, E* ln 6), high = [0.5, 0] (mean E 0.125, E* ln 1.125)
        sc = SpectrumChannel(2, 2, np.array([3.0, -1.0, 0.5, 0.0]), np.array([9.0, 1.0, 0.25, 0.0]), 2)
        cq = fqc_compress_channel(sc, CFG)
        ratio = math.log(1.125) / math.log(6)
        assert cq.low.bits == 8
        assert cq.high.bits == math.floor(2 + 6 * math.tanh(math.pi / 2 * ratio) + 0.5) == 3
        assert list(cq.low.codes) == [255, 0]
        assert list(cq.high.codes) == [7, 0]
