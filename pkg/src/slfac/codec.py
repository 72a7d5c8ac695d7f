"""End-to-end compression of (C, M, N) tensors, the SLFC wire format, and
baseline codecs used for comparison.

SLFC layout (little-endian)::

    header  : magic "SLFC" | version u8 | reserved u8 | C u32 | M u32 | N u32
              | theta f32 | b_min u8 | b_max u8                     (24 bytes)
    channel : k_star u32
              | low  band: bits u8 | lo f32 | hi f32 | ceil(k*.bits/8) bytes
              | high band (only if k* < M.N): same fields over M.N - k* codes

Baseline layout ("SLFB")::

    header  : magic "SLFB" | version u8 | kind u8 | reserved u16 | C, M, N u32  (20 bytes)
    identity: C.M.N float32 values
    uniform : bits u8 | lo f32 | hi f32 | ceil(C.M.N.bits/8) bytes
    topk    : count u32 | bits u8 | lo f32 | hi f32 | count u32 indices
              | ceil(count.bits/8) bytes
"""

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from slfac.afd import AfdConfig, afd_decompose
from slfac.errors import FormatError
from slfac.fqc import (
    MAX_BITS,
    BandQuant,
    ChannelQuant,
    FqcConfig,
    dequantize_band,
    dequantize_channel,
    fqc_compress_channel,
    pack_codes,
    packed_size,
    quantize_band,
    unpack_codes,
)
from slfac.spectral import dct2_forward, dct2_inverse, inverse_zigzag
from slfac.tensor import as_tensor3

MAGIC = b"SLFC"
VERSION = 1
_HEADER = struct.Struct("<4sBBIIIfBB")
_BAND = struct.Struct("<Bff")
_U32 = struct.Struct("<I")
HEADER_SIZE = _HEADER.size

BASELINE_MAGIC = b"SLFB"
_BASE_HEADER = struct.Struct("<4sBBxxIII")
BASELINE_HEADER_SIZE = _BASE_HEADER.size
_KIND_CODES = {"identity": 0, "uniform": 1, "topk": 2}


@dataclass(frozen=True)
class CompressedTensor:
    C: int
    M: int
    N: int
    theta: float
    b_min: int
    b_max: int
    channels: list = field(default_factory=list)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.C, self.M, self.N)


def _f32(x: float) -> float:
    return float(np.float32(x))


def compress(t, cfg: FqcConfig = FqcConfig()) -> CompressedTensor:
    x = as_tensor3(t)
    C, M, N = x.shape
    spectra = afd_decompose(x, AfdConfig(cfg.theta))
    channels = [fqc_compress_channel(sc, cfg) for sc in spectra]
    return CompressedTensor(C, M, N, _f32(cfg.theta), cfg.b_min, cfg.b_max, channels)


def decompress(c: CompressedTensor) -> np.ndarray:
    MN = c.M * c.N
    if len(c.channels) != c.C:
        raise FormatError(f"expected {c.C} channel records, got {len(c.channels)}")
    zz = np.empty((c.C, MN), dtype=np.float64)
    for i, cq in enumerate(c.channels):
        coeffs = dequantize_channel(cq)
        if coeffs.size != MN:
            raise FormatError(f"channel {i} carries {coeffs.size} coefficients, expected {MN}")
        zz[i] = coeffs
    return dct2_inverse(inverse_zigzag(zz, c.M, c.N)).astype(np.float32)


def wire_size(c: CompressedTensor) -> int:
    """Serialized length computed from the header and per-channel metadata alone."""
    MN = c.M * c.N
    total = HEADER_SIZE
    for cq in c.channels:
        total += _U32.size + _BAND.size + packed_size(cq.k_star, cq.low.bits)
        if cq.k_star < MN:
            total += _BAND.size + packed_size(MN - cq.k_star, cq.high.bits)
    return total


def _band_bytes(b: BandQuant) -> bytes:
    return _BAND.pack(b.bits, b.lo, b.hi) + pack_codes(b.codes, b.bits)


def serialize(c: CompressedTensor) -> bytes:
    MN = c.M * c.N
    out = [_HEADER.pack(MAGIC, VERSION, 0, c.C, c.M, c.N, c.theta, c.b_min, c.b_max)]
    for cq in c.channels:
        if (cq.high is None) != (cq.k_star == MN):
            raise ValueError("high band must be present iff k_star < M*N")
        out.append(_U32.pack(cq.k_star))
        out.append(_band_bytes(cq.low))
        if cq.high is not None:
            out.append(_band_bytes(cq.high))
    return b"".join(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError("truncated input")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, st: struct.Struct) -> tuple:
        return st.unpack(self.take(st.size))


def _read_band(r: _Reader, n: int) -> BandQuant:
    bits, lo, hi = r.unpack(_BAND)
    if not 1 <= bits <= MAX_BITS:
        raise FormatError(f"bits {bits} outside [1, {MAX_BITS}]")
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise FormatError("invalid band range")
    codes = unpack_codes(r.take(packed_size(n, bits)), n, bits)
    return BandQuant(bits, lo, hi, codes)


def deserialize(data: bytes) -> CompressedTensor:
    r = _Reader(bytes(data))
    magic, version, _, C, M, N, theta, b_min, b_max = r.unpack(_HEADER)
    if magic != MAGIC:
        raise FormatError("bad magic")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if min(C, M, N) < 1:
        raise FormatError("empty dimension")
    MN = M * N
    channels = []
    for _ in range(C):
        (k_star,) = r.unpack(_U32)
        if not 1 <= k_star <= MN:
            raise FormatError(f"k_star {k_star} outside [1, {MN}]")
        low = _read_band(r, k_star)
        high = _read_band(r, MN - k_star) if k_star < MN else None
        channels.append(ChannelQuant(k_star, low, high))
    if r.pos != len(r.data):
        raise FormatError(f"{len(r.data) - r.pos} trailing bytes")
    return CompressedTensor(C, M, N, float(theta), b_min, b_max, channels)


@dataclass(frozen=True)
class CodecKind:
    """A codec and its parameters: slfac, uniform, topk or identity."""

    name: str
    theta: float = 0.9
    b_min: int = 2
    b_max: int = 8
    bits: int = 8
    keep_fraction: float = 0.25

    def __post_init__(self):
        if self.name == "slfac":
            FqcConfig(self.b_min, self.b_max, self.theta)
        elif self.name == "uniform":
            _check_bits(self.bits)
        elif self.name == "topk":
            _check_bits(self.bits)
            if not 0.0 < self.keep_fraction <= 1.0:
                raise ValueError("keep fraction must be in (0, 1]")
        elif self.name != "identity":
            raise ValueError(f"unknown codec {self.name!r}")

    @classmethod
    def slfac(cls, theta=0.9, b_min=2, b_max=8):
        return cls("slfac", theta=theta, b_min=b_min, b_max=b_max)

    @classmethod
    def uniform(cls, bits):
        return cls("uniform", bits=bits)

    @classmethod
    def topk(cls, keep_fraction, bits):
        return cls("topk", keep_fraction=keep_fraction, bits=bits)

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def parse(cls, text: str) -> "CodecKind":
        """Parse ``slfac[:theta,bmin,bmax]``, ``uniform:<b>``, ``topk:<rho>,<b>`` or ``identity``."""
        name, _, args = text.partition(":")
        parts = [p for p in args.split(",") if p] if args else []
        try:
            if name == "slfac" and not parts:
                return cls.slfac()
            if name == "slfac" and len(parts) == 3:
                return cls.slfac(float(parts[0]), int(parts[1]), int(parts[2]))
            if name == "uniform" and len(parts) == 1:
                return cls.uniform(int(parts[0]))
            if name == "topk" and len(parts) == 2:
                return cls.topk(float(parts[0]), int(parts[1]))
            if name == "identity" and not parts:
                return cls.identity()
        except ValueError as exc:
            raise ValueError(f"invalid codec {text!r}: {exc}") from None
        raise ValueError(f"unknown codec {text!r}")

    def __str__(self):
        if self.name == "slfac":
            return f"slfac:{self.theta:g},{self.b_min},{self.b_max}"
        if self.name == "uniform":
            return f"uniform:{self.bits}"
        if self.name == "topk":
            return f"topk:{self.keep_fraction:g},{self.bits}"
        return "identity"

    @property
    def fqc_config(self) -> FqcConfig:
        return FqcConfig(self.b_min, self.b_max, self.theta)


def _check_bits(bits: int) -> None:
    if not 1 <= bits <= MAX_BITS:
        raise ValueError(f"bits must be in [1, {MAX_BITS}]")


@dataclass(frozen=True)
class CodecStats:
    raw_bytes: int
    wire_bytes: int
    ratio: float
    freq_mse: float
    spatial_mse: float
    max_abs_err: float


def encode(t, kind: CodecKind) -> bytes:
    """Encode a tensor with any codec; the output is self-describing."""
    if kind.name == "slfac":
        return serialize(compress(t, kind.fqc_config))
    x = as_tensor3(t).astype(np.float32)
    C, M, N = x.shape
    head = _BASE_HEADER.pack(BASELINE_MAGIC, VERSION, _KIND_CODES[kind.name], C, M, N)
    flat = x.ravel()
    if kind.name == "identity":
        return head + flat.astype("<f4").tobytes()
    if kind.name == "uniform":
        q = quantize_band(flat, kind.bits)
        return head + _band_bytes(q)
    count = math.ceil(kind.keep_fraction * flat.size)
    order = np.argsort(-np.abs(flat), kind="stable")
    idx = np.sort(order[:count])
    q = quantize_band(flat[idx], kind.bits)
    return head + _U32.pack(count) + _BAND.pack(q.bits, q.lo, q.hi) + idx.astype("<u4").tobytes() + pack_codes(q.codes, q.bits)


def decode(data: bytes) -> np.ndarray:
    """Inverse of :func:`encode` for every codec kind, dispatching on the magic."""
    data = bytes(data)
    if data[:4] == MAGIC:
        return decompress(deserialize(data))
    r = _Reader(data)
    magic, version, kind, C, M, N = r.unpack(_BASE_HEADER)
    if magic != BASELINE_MAGIC:
        raise FormatError("bad magic")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if min(C, M, N) < 1:
        raise FormatError("empty dimension")
    n = C * M * N
    if kind == _KIND_CODES["identity"]:
        flat = np.frombuffer(r.take(4 * n), dtype="<f4").astype(np.float32)
    elif kind == _KIND_CODES["uniform"]:
        flat = dequantize_band(_read_band(r, n)).astype(np.float32)
    elif kind == _KIND_CODES["topk"]:
        (count,) = r.unpack(_U32)
        if count > n:
            raise FormatError(f"top-k count {count} exceeds {n} elements")
        bits, lo, hi = r.unpack(_BAND)
        if not 1 <= bits <= MAX_BITS:
            raise FormatError(f"bits {bits} outside [1, {MAX_BITS}]")
        idx = np.frombuffer(r.take(4 * count), dtype="<u4").astype(np.intp)
        if count and idx.max() >= n:
            raise FormatError("top-k index out of range")
        codes = unpack_codes(r.take(packed_size(count, bits)), count, bits)
        flat = np.zeros(n, dtype=np.float32)
        if count:
            flat[idx] = dequantize_band(BandQuant(bits, lo, hi, codes))
    else:
        raise FormatError(f"unknown baseline kind {kind}")
    if r.pos != len(data):
        raise FormatError(f"{len(data) - r.pos} trailing bytes")
    return flat.reshape(C, M, N)


def codec_stats(original, restored, wire_bytes: int) -> CodecStats:
    x = np.asarray(original, dtype=np.float64)
    y = np.asarray(restored, dtype=np.float64)
    err = y - x
    freq_err = dct2_forward(y) - dct2_forward(x)
    raw = 4 * x.size
    return CodecStats(
        raw_bytes=raw,
        wire_bytes=wire_bytes,
        ratio=raw / wire_bytes,
        freq_mse=float(np.mean(freq_err**2)),
        spatial_mse=float(np.mean(err**2)),
        max_abs_err=float(np.max(np.abs(err))),
    )


def baseline_compress(t, kind: CodecKind) -> tuple[bytes, np.ndarray, CodecStats]:
    x = as_tensor3(t).astype(np.float32)
    data = encode(x, kind)
    restored = decode(data)
    return data, restored, codec_stats(x, restored, len(data))


def measure(t, kind: CodecKind) -> CodecStats:
    return baseline_compress(t, kind)[2]
