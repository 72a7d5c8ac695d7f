"""Dense (C, M, N) tensors and the small numeric helpers shared across modules.

A Tensor3 is a plain numpy array of shape (C, M, N); a batch is (B, C, M, N).
"""

import numpy as np


def as_tensor3(t) -> np.ndarray:
    """Validate ``t`` as a finite 3-D tensor with no empty dimension."""
    arr = np.asarray(t)
    if arr.ndim != 3:
        raise ValueError(f"expected a 3-D tensor, got shape {arr.shape}")
    if min(arr.shape) == 0:
        raise ValueError("empty dimension")
    if not np.issubdtype(arr.dtype, np.floating):
        arr = arr.astype(np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("tensor contains non-finite values")
    return arr


def zeros(C: int, M: int, N: int) -> np.ndarray:
    if min(C, M, N) < 1:
        raise ValueError("empty dimension")
    return np.zeros((C, M, N), dtype=np.float64)


def sum_squares(t) -> float:
    arr = as_tensor3(t).astype(np.float64)
    return float(np.sum(arr * arr))


def max_abs_diff(a, b) -> float:
    a = as_tensor3(a)
    b = as_tensor3(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a.astype(np.float64) - b.astype(np.float64))))


def round_half_away(x):
    """Nearest-integer rounding with ties away from zero (numpy's round is half-even)."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)
