"""Datasets for the simulator: MNIST via IDX files, a synthetic fallback, and
low-pass test tensors."""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from slfac.formats import downscale_2x, read_idx_images, read_idx_labels
from slfac.spectral import dct2_inverse, inverse_zigzag


@dataclass(frozen=True, eq=False)
class DatasetSplit:
    images: np.ndarray  # (n, D) floats in [0, 1]
    labels: np.ndarray  # (n,) ints in [0, K)
    K: int

    def __post_init__(self):
        if len(self.images) != len(self.labels):
            raise ValueError("images and labels differ in length")
        if len(self.labels) and (self.labels.min() < 0 or self.labels.max() >= self.K):
            raise ValueError("label out of range")

    def __len__(self):
        return len(self.labels)

    def subset(self, n: int) -> "DatasetSplit":
        return DatasetSplit(self.images[:n], self.labels[:n], self.K)


def load_mnist(directory, n_train=5000, n_test=1000, downscale=True) -> tuple[DatasetSplit, DatasetSplit]:
    """Read the four standard MNIST IDX files (optionally .gz) from ``directory``."""
    import gzip

    def read(stem):
        for name in (stem, stem + ".gz"):
            path = Path(directory) / name
            if path.exists():
                raw = path.read_bytes()
                return gzip.decompress(raw) if name.endswith(".gz") else raw
        raise FileNotFoundError(Path(directory) / stem)

    splits = []
    for prefix, n in (("train", n_train), ("t10k", n_test)):
        images = read_idx_images(read(f"{prefix}-images-idx3-ubyte"))[:n]
        labels = read_idx_labels(read(f"{prefix}-labels-idx1-ubyte"))[:n]
        if downscale:
            images = downscale_2x(images, 28, 28)
        splits.append(DatasetSplit(images, labels, 10))
    return splits[0], splits[1]


def _blob_prototypes(rng, K, side):
    yy, xx = np.mgrid[0:side, 0:side] / (side - 1)
    protos = np.zeros((K, side, side))
    for k in range(K):
        for _ in range(4):
            cy, cx = rng.uniform(0.15, 0.85, size=2)
            width = rng.uniform(0.08, 0.2)
            protos[k] += np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * width**2))
        protos[k] /= protos[k].max()
    return protos


def synth_classification(n_train, n_test, seed, K=10, side=14, noise=0.3, shift=1) -> tuple[DatasetSplit, DatasetSplit]:
    """MNIST-shaped stand-in: each class is a random blob pattern, each sample a
    jittered, rescaled, noisy copy of it.  Pixels are clipped to [0, 1]."""
    rng = np.random.default_rng(seed)
    protos = _blob_prototypes(rng, K, side)

    def draw(n):
        labels = rng.integers(0, K, size=n)
        shifts = rng.integers(-shift, shift + 1, size=(n, 2))
        scale = rng.uniform(0.6, 1.0, size=(n, 1, 1))
        imgs = np.stack([np.roll(protos[k], tuple(s), axis=(0, 1)) for k, s in zip(labels, shifts)])
        imgs = scale * imgs + noise * rng.standard_normal(imgs.shape)
        return DatasetSplit(np.clip(imgs, 0.0, 1.0).reshape(n, side * side), labels, K)

    return draw(n_train), draw(n_test)


def synth_lowpass(C, M, N, cutoff, seed) -> np.ndarray:
    """Gaussian field whose spectrum is zero past the first ceil(cutoff*M*N)
    zig-zag positions of every channel."""
    if not 0.0 < cutoff <= 1.0:
        raise ValueError("cutoff must be in (0, 1]")
    rng = np.random.default_rng(seed)
    zz = rng.standard_normal((C, M * N))
    zz[:, math.ceil(cutoff * M * N) :] = 0.0
    return dct2_inverse(inverse_zigzag(zz, M, N))
