"""Adaptive frequency decomposition: zig-zag energy accumulation and band split."""

from dataclasses import dataclass

import numpy as np

from slfac.spectral import dct2_forward, spectral_energy, zigzag_scan
from slfac.tensor import as_tensor3


@dataclass(frozen=True)
class AfdConfig:
    theta: float = 0.9

    def __post_init__(self):
        if not 0.0 < self.theta <= 1.0:
            raise ValueError("theta out of range (0, 1]")


@dataclass(frozen=True, eq=False)
class SpectrumChannel:
    """One channel's zig-zag ordered spectrum and its low/high split point."""

    M: int
    N: int
    zz_coeffs: np.ndarray
    zz_energies: np.ndarray
    k_star: int

    @property
    def low(self) -> np.ndarray:
        return self.zz_coeffs[: self.k_star]

    @property
    def high(self) -> np.ndarray:
        return self.zz_coeffs[self.k_star :]

    @property
    def low_energies(self) -> np.ndarray:
        return self.zz_energies[: self.k_star]

    @property
    def high_energies(self) -> np.ndarray:
        return self.zz_energies[self.k_star :]


def _cumulative_ratios(zz_energies: np.ndarray) -> np.ndarray:
    cum = np.cumsum(zz_energies, dtype=np.float64)
    total = cum[-1]
    if total <= 0.0:
        return np.ones_like(cum)
    return cum / total


def cumulative_ratio(zz_energies, k: int) -> float:
    """Fraction of total energy held by the first ``k`` entries (1-based k)."""
    e = np.asarray(zz_energies, dtype=np.float64)
    if not 1 <= k <= e.size:
        raise ValueError(f"k={k} out of range [1, {e.size}]")
    return float(_cumulative_ratios(e)[k - 1])


def split_index(zz_energies, theta: float) -> int:
    """Smallest k (1-based) whose cumulative energy ratio reaches ``theta``."""
    if not 0.0 < theta <= 1.0:
        raise ValueError("theta out of range (0, 1]")
    ratios = _cumulative_ratios(np.asarray(zz_energies, dtype=np.float64))
    return int(np.argmax(ratios >= theta)) + 1


def afd_decompose(t, cfg: AfdConfig = AfdConfig()) -> list[SpectrumChannel]:
    x = as_tensor3(t)
    _, M, N = x.shape
    zz_coeffs = zigzag_scan(dct2_forward(x))
    zz_energies = spectral_energy(zz_coeffs)
    return [
        SpectrumChannel(M, N, zc, ze, split_index(ze, cfg.theta))
        for zc, ze in zip(zz_coeffs, zz_energies)
    ]
