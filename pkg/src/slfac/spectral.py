"""Orthonormal 2-D DCT per channel, zig-zag ordering and spectral energy.

Indices are 0-based here: frequency ``u`` in code is ``u + 1`` in 1-based notation.
"""

from functools import lru_cache

import numpy as np


def norm_factors(M: int, N: int) -> tuple[np.ndarray, np.ndarray]:
    if M < 1 or N < 1:
        raise ValueError("dimensions must be >= 1")
    alpha = np.full(M, np.sqrt(2.0 / M))
    alpha[0] = np.sqrt(1.0 / M)
    beta = np.full(N, np.sqrt(2.0 / N))
    beta[0] = np.sqrt(1.0 / N)
    return alpha, beta


@lru_cache(maxsize=None)
def dct_basis(M: int) -> np.ndarray:
    """Orthonormal DCT-II matrix D with D[u, m] = alpha(u) cos(pi (m + 1/2) u / M)."""
    alpha, _ = norm_factors(M, 1)
    u = np.arange(M)[:, None]
    m = np.arange(M)[None, :]
    basis = alpha[:, None] * np.cos(np.pi * (m + 0.5) * u / M)
    basis.setflags(write=False)
    return basis


def _check_finite(x: np.ndarray) -> None:
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite input")


def dct2_forward(x) -> np.ndarray:
    """Forward DCT over the last two axes (rows then columns).

    Accepts a single M x N channel or any stack of them, e.g. (C, M, N).
    """
    x = np.asarray(x, dtype=np.float64)
    _check_finite(x)
    M, N = x.shape[-2:]
    return dct_basis(M) @ x @ dct_basis(N).T


def dct2_inverse(coeffs) -> np.ndarray:
    X = np.asarray(coeffs, dtype=np.float64)
    _check_finite(X)
    M, N = X.shape[-2:]
    return dct_basis(M).T @ X @ dct_basis(N)


@lru_cache(maxsize=None)
def _zigzag(M: int, N: int) -> tuple[tuple[int, int], ...]:
    order = []
    # d is the 0-based diagonal u + v; 1-based diagonal is d + 2, so parity flips
    for d in range(M + N - 1):
        u_lo, u_hi = max(0, d - N + 1), min(d, M - 1)
        us = range(u_lo, u_hi + 1) if d % 2 else range(u_hi, u_lo - 1, -1)
        order.extend((u, d - u) for u in us)
    return tuple(order)


def zigzag_order(M: int, N: int) -> list[tuple[int, int]]:
    """JPEG zig-zag traversal of an M x N grid as 0-based (u, v) pairs."""
    if M < 1 or N < 1:
        raise ValueError("dimensions must be >= 1")
    return list(_zigzag(M, N))


@lru_cache(maxsize=None)
def zigzag_indices(M: int, N: int) -> np.ndarray:
    """Flat row-major indices visited in zig-zag order (a permutation of range(M*N))."""
    idx = np.array([u * N + v for u, v in _zigzag(M, N)], dtype=np.intp)
    idx.setflags(write=False)
    return idx


def zigzag_scan(matrix) -> np.ndarray:
    """Flatten the last two axes in zig-zag order."""
    m = np.asarray(matrix)
    M, N = m.shape[-2:]
    return m.reshape(*m.shape[:-2], M * N)[..., zigzag_indices(M, N)]


def inverse_zigzag(seq, M: int, N: int) -> np.ndarray:
    seq = np.asarray(seq)
    out = np.empty(seq.shape[:-1] + (M * N,), dtype=seq.dtype)
    out[..., zigzag_indices(M, N)] = seq
    return out.reshape(*seq.shape[:-1], M, N)


def spectral_energy(coeffs) -> np.ndarray:
    X = np.asarray(coeffs, dtype=np.float64)
    return X * X
