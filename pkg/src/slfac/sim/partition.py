"""IID and Dirichlet non-IID sharding of sample indices across devices."""

import numpy as np


def iid_partition(n: int, devices: int, seed) -> list[np.ndarray]:
    """Shuffle ``range(n)`` and cut it into contiguous near-equal shards.

    The first ``n % devices`` shards get one extra sample.
    """
    if devices < 1:
        raise ValueError("devices must be >= 1")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    base, extra = divmod(n, devices)
    sizes = [base + (1 if d < extra else 0) for d in range(devices)]
    return np.split(perm, np.cumsum(sizes)[:-1])


def dirichlet_partition(labels, devices: int, beta: float, seed) -> list[np.ndarray]:
    """Per class, split that class's samples by proportions drawn from Dir(beta)."""
    labels = np.asarray(labels)
    if labels.size == 0:
        raise ValueError("empty dataset")
    if devices < 1:
        raise ValueError("devices must be >= 1")
    if beta <= 0:
        raise ValueError("beta must be > 0")
    rng = np.random.default_rng(seed)
    shards = [[] for _ in range(devices)]
    for k in np.unique(labels):
        idx = rng.permutation(np.flatnonzero(labels == k))
        props = rng.dirichlet(np.full(devices, beta))
        cuts = (np.cumsum(props)[:-1] * idx.size).astype(int)
        for d, part in enumerate(np.split(idx, cuts)):
            shards[d].extend(part.tolist())
    # repair empty shards so every device can train
    while True:
        empty = [d for d in range(devices) if not shards[d]]
        if not empty:
            break
        largest = max(range(devices), key=lambda d: len(shards[d]))
        if len(shards[largest]) < 2:
            raise ValueError("not enough samples to give every device one")
        shards[empty[0]].append(shards[largest].pop())
    return [np.sort(np.array(s, dtype=np.int64)) for s in shards]
