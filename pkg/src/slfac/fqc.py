"""Frequency-based quantization: energy-driven bit allocation, min-max
quantization of each band, and LSB-first variable-width bit packing."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from slfac.afd import SpectrumChannel
from slfac.tensor import round_half_away

MAX_BITS = 16


@dataclass(frozen=True)
class FqcConfig:
    b_min: int = 2
    b_max: int = 8
    theta: float = 0.9

    def __post_init__(self):
        if not 1 <= self.b_min <= self.b_max <= MAX_BITS:
            raise ValueError(f"bit bounds must satisfy 1 <= b_min <= b_max <= {MAX_BITS}")
        if not 0.0 < self.theta <= 1.0:
            raise ValueError("theta out of range (0, 1]")


@dataclass(frozen=True, eq=False)
class BandQuant:
    bits: int
    lo: float
    hi: float
    codes: np.ndarray

    def __len__(self):
        return len(self.codes)

    def __eq__(self, other):
        if not isinstance(other, BandQuant):
            return NotImplemented
        return (
            self.bits == other.bits
            and self.lo == other.lo
            and self.hi == other.hi
            and np.array_equal(self.codes, other.codes)
        )


@dataclass(frozen=True)
class ChannelQuant:
    k_star: int
    low: BandQuant
    high: Optional[BandQuant] = None


def mean_energy(band_energies) -> float:
    e = np.asarray(band_energies, dtype=np.float64)
    if e.size == 0:
        raise ValueError("empty band")
    return float(e.mean())


def log_energy(mean: float) -> float:
    if mean < 0:
        raise ValueError("mean energy must be non-negative")
    return math.log1p(mean)


def allocate_bits(e_star: float, tau: float, cfg: FqcConfig) -> int:
    """Map a band's log energy to a bit width in [b_min, b_max] via tanh scaling."""
    if tau <= 0.0:
        return cfg.b_min
    scaled = math.tanh(0.5 * math.pi * (e_star / tau))
    b = int(round_half_away(cfg.b_min + (cfg.b_max - cfg.b_min) * scaled))
    return min(max(b, cfg.b_min), cfg.b_max)


def quantize_band(values, bits: int) -> BandQuant:
    x = np.asarray(values, dtype=np.float64)
    if x.size == 0:
        raise ValueError("empty band")
    if not 1 <= bits <= MAX_BITS:
        raise ValueError(f"bits must be in [1, {MAX_BITS}]")
    lo, hi = float(x.min()), float(x.max())
    levels = (1 << bits) - 1
    if hi > lo:
        codes = round_half_away((x - lo) / (hi - lo) * levels)
        codes = np.clip(codes, 0, levels).astype(np.int64)
    else:
        codes = np.zeros(x.size, dtype=np.int64)
    return BandQuant(bits, lo, hi, codes)


def dequantize_band(b: BandQuant) -> np.ndarray:
    codes = np.asarray(b.codes, dtype=np.int64)
    levels = (1 << b.bits) - 1
    if b.hi == b.lo or levels == 0:
        return np.full(codes.size, b.lo, dtype=np.float64)
    out = codes / levels * (b.hi - b.lo) + b.lo
    # pin the endpoints; (hi - lo) + lo need not round back to hi
    out[codes == 0] = b.lo
    out[codes == levels] = b.hi
    return out


def pack_codes(codes, bits: int) -> bytes:
    """Pack codes LSB-first into a contiguous little-endian bit stream."""
    c = np.asarray(codes, dtype=np.int64)
    if not 1 <= bits <= MAX_BITS:
        raise ValueError(f"bits must be in [1, {MAX_BITS}]")
    if c.size and (c.min() < 0 or c.max() >= (1 << bits)):
        raise ValueError(f"code overflow for {bits}-bit width")
    bit_matrix = (c[:, None] >> np.arange(bits)) & 1
    return np.packbits(bit_matrix.astype(np.uint8).ravel(), bitorder="little").tobytes()


def packed_size(n: int, bits: int) -> int:
    return (n * bits + 7) // 8


def unpack_codes(data: bytes, n: int, bits: int) -> np.ndarray:
    if not 1 <= bits <= MAX_BITS:
        raise ValueError(f"bits must be in [1, {MAX_BITS}]")
    if len(data) != packed_size(n, bits):
        raise ValueError(f"length mismatch: expected {packed_size(n, bits)} bytes, got {len(data)}")
    stream = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    bit_matrix = stream[: n * bits].reshape(n, bits).astype(np.int64)
    return bit_matrix @ (np.int64(1) << np.arange(bits, dtype=np.int64))


def fqc_compress_channel(sc: SpectrumChannel, cfg: FqcConfig = FqcConfig()) -> ChannelQuant:
    """Allocate bits to the low/high bands of one channel and quantize them.

    Band values are rounded to float32 first, so the min/max that travel on
    the wire are exactly the ones used to quantize.
    """
    bands = [sc.low, sc.high] if sc.k_star < sc.zz_coeffs.size else [sc.low]
    energies = [sc.low_energies, sc.high_energies][: len(bands)]
    e_star = [log_energy(mean_energy(e)) for e in energies]
    tau = max(e_star)
    quants = [
        quantize_band(band.astype(np.float32), allocate_bits(e, tau, cfg))
        for band, e in zip(bands, e_star)
    ]
    return ChannelQuant(sc.k_star, quants[0], quants[1] if len(quants) > 1 else None)


def dequantize_channel(cq: ChannelQuant) -> np.ndarray:
    """Zig-zag ordered coefficients reconstructed from both bands."""
    parts = [dequantize_band(cq.low)]
    if cq.high is not None:
        parts.append(dequantize_band(cq.high))
    return np.concatenate(parts)
