"""Frequency-aware compression of split-learning smashed data."""

from slfac.afd import AfdConfig, SpectrumChannel, afd_decompose, cumulative_ratio, split_index
from slfac.codec import (
    CodecKind,
    CodecStats,
    CompressedTensor,
    baseline_compress,
    compress,
    decompress,
    deserialize,
    measure,
    serialize,
)
from slfac.errors import FormatError
from slfac.fqc import BandQuant, ChannelQuant, FqcConfig
from slfac.tensor import as_tensor3, max_abs_diff, sum_squares, zeros

__version__ = "0.1.0"

__all__ = [
    "AfdConfig",
    "BandQuant",
    "ChannelQuant",
    "CodecKind",
    "CodecStats",
    "CompressedTensor",
    "FormatError",
    "FqcConfig",
    "SpectrumChannel",
    "afd_decompose",
    "as_tensor3",
    "baseline_compress",
    "compress",
    "cumulative_ratio",
    "decompress",
    "deserialize",
    "max_abs_diff",
    "measure",
    "serialize",
    "split_index",
    "sum_squares",
    "zeros",
]
