"""Minimal NPY (v1.0, <f4, C-order, rank 3) reader/writer and IDX readers."""

import ast
import struct

import numpy as np

from slfac.errors import FormatError
from slfac.tensor import as_tensor3

NPY_MAGIC = b"\x93NUMPY"
_NPY_ALIGN = 64
IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801


def write_npy_f32_3d(t) -> bytes:
    arr = np.ascontiguousarray(as_tensor3(t), dtype="<f4")
    header = "{'descr': '<f4', 'fortran_order': False, 'shape': %r, }" % (arr.shape,)
    # magic(6) + version(2) + header_len(2) + header + '\n' must be a multiple of 64
    prefix_len = len(NPY_MAGIC) + 2 + 2
    total = prefix_len + len(header) + 1
    header += " " * (-total % _NPY_ALIGN) + "\n"
    return (
        NPY_MAGIC
        + b"\x01\x00"
        + struct.pack("<H", len(header))
        + header.encode("latin1")
        + arr.tobytes()
    )


def read_npy_f32_3d(data: bytes) -> np.ndarray:
    data = bytes(data)
    if data[:6] != NPY_MAGIC:
        raise FormatError("wrong magic")
    if len(data) < 10:
        raise FormatError("truncated header")
    if data[6:8] != b"\x01\x00":
        raise FormatError(f"unsupported NPY version {data[6]}.{data[7]}")
    (hlen,) = struct.unpack_from("<H", data, 8)
    if len(data) < 10 + hlen:
        raise FormatError("truncated header")
    try:
        header = ast.literal_eval(data[10 : 10 + hlen].decode("latin1"))
    except (ValueError, SyntaxError) as exc:
        raise FormatError(f"malformed header: {exc}") from None
    if not isinstance(header, dict) or set(header) != {"descr", "fortran_order", "shape"}:
        raise FormatError("malformed header")
    if header["descr"] != "<f4":
        raise FormatError(f"unsupported dtype {header['descr']!r}")
    if header["fortran_order"]:
        raise FormatError("unsupported order: fortran")
    shape = header["shape"]
    if not isinstance(shape, tuple) or len(shape) != 3:
        raise FormatError(f"unsupported rank: shape {shape!r}")
    payload = data[10 + hlen :]
    expected = 4 * shape[0] * shape[1] * shape[2]
    if len(payload) != expected:
        raise FormatError(f"payload length mismatch: expected {expected}, got {len(payload)}")
    return np.frombuffer(payload, dtype="<f4").reshape(shape).astype(np.float32)


def _idx_header(data: bytes, magic: int, ndims: int) -> tuple:
    need = 4 * (1 + ndims)
    if len(data) < need:
        raise FormatError("truncated IDX header")
    fields = struct.unpack_from(">%dI" % (1 + ndims), data, 0)
    if fields[0] != magic:
        kind = "image" if magic == IDX_IMAGES_MAGIC else "label"
        raise FormatError(f"not an {kind} file (magic 0x{fields[0]:08x})")
    return fields[1:], data[need:]


def read_idx_images(data: bytes) -> np.ndarray:
    """Return an (n, rows*cols) float array with pixels scaled into [0, 1]."""
    (n, rows, cols), payload = _idx_header(bytes(data), IDX_IMAGES_MAGIC, 3)
    if len(payload) != n * rows * cols:
        raise FormatError(f"length mismatch: expected {n * rows * cols} pixel bytes, got {len(payload)}")
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(n, rows * cols)
    return pixels.astype(np.float64) / 255.0


def read_idx_labels(data: bytes) -> np.ndarray:
    (n,), payload = _idx_header(bytes(data), IDX_LABELS_MAGIC, 1)
    if len(payload) != n:
        raise FormatError(f"length mismatch: expected {n} labels, got {len(payload)}")
    return np.frombuffer(payload, dtype=np.uint8).astype(np.int64)


def downscale_2x(image, rows: int, cols: int) -> np.ndarray:
    """Average-pool a flattened rows x cols image (or a stack of them) by 2 in each axis."""
    if rows % 2 or cols % 2:
        raise ValueError("odd dimension")
    img = np.asarray(image, dtype=np.float64)
    lead = img.shape[:-1]
    blocks = img.reshape(*lead, rows // 2, 2, cols // 2, 2)
    return blocks.mean(axis=(-3, -1)).reshape(*lead, (rows // 2) * (cols // 2))
