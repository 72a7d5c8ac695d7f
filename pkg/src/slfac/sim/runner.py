"""Round loop of the split-learning simulation and its CSV output.

Randomness: one root ``np.random.SeedSequence(seed)`` is spawned into four
PCG64 streams, in this order: data generation, partitioning, model init,
batch sampling.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from slfac.codec import CodecKind, decode, encode
from slfac.sim.data import DatasetSplit, synth_classification
from slfac.sim.model import (
    SplitModel,
    client_step,
    cross_entropy,
    evaluate,
    forward_client,
    init_model,
    predict_logits,
    server_step,
)
from slfac.sim.partition import dirichlet_partition, iid_partition

CSV_COLUMNS = ["round", "bytes_up", "bytes_down", "bytes_cum", "train_loss", "test_acc", "ratio"]


def parse_partition(text: str) -> tuple[str, float]:
    """``iid`` or ``dirichlet:<beta>`` (bare ``dirichlet`` means beta 0.5)."""
    name, _, arg = text.partition(":")
    if name == "iid" and not arg:
        return "iid", 0.0
    if name == "dirichlet":
        beta = float(arg) if arg else 0.5
        if beta <= 0:
            raise ValueError("beta must be > 0")
        return "dirichlet", beta
    raise ValueError(f"unknown partition {text!r}")


@dataclass(frozen=True)
class SimConfig:
    devices: int = 5
    rounds: int = 30
    batch_size: int = 128
    learning_rate: float = 0.3
    seed: int = 0
    partition: str = "dirichlet:0.5"
    codec: CodecKind = field(default_factory=CodecKind.slfac)
    local_batches_per_round: int = 2
    average_clients: bool = True
    n_train: int = 5000
    n_test: int = 1000
    cut_shape: tuple = (4, 8, 8)
    hidden: int = 64

    def __post_init__(self):
        if self.devices < 1:
            raise ValueError("devices must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.rounds < 0 or self.local_batches_per_round < 1:
            raise ValueError("rounds must be >= 0 and local_batches_per_round >= 1")
        parse_partition(self.partition)


@dataclass(frozen=True)
class RoundMetrics:
    round: int
    bytes_up: int
    bytes_down: int
    bytes_cum: int
    train_loss: float
    test_acc: float
    ratio: float


def transmit(batch: np.ndarray, kind: CodecKind) -> tuple[int, np.ndarray]:
    """Send each sample of a (B, C, M, N) batch through the codec.

    Returns the summed serialized length and the receiver-side batch.
    """
    restored = np.empty(batch.shape, dtype=np.float64)
    nbytes = 0
    for i, sample in enumerate(batch):
        data = encode(sample, kind)
        nbytes += len(data)
        restored[i] = decode(data)
    return nbytes, restored


def sample_batch(rng, shard: np.ndarray, batch_size: int) -> np.ndarray:
    if len(shard) <= batch_size:
        return rng.permutation(shard)
    return rng.choice(shard, size=batch_size, replace=False)


def make_shards(cfg: SimConfig, labels, seed) -> list[np.ndarray]:
    kind, beta = parse_partition(cfg.partition)
    if kind == "iid":
        return iid_partition(len(labels), cfg.devices, seed)
    return dirichlet_partition(labels, cfg.devices, beta, seed)


def _average(clients):
    W1 = np.mean([c.W1 for c in clients], axis=0)
    b1 = np.mean([c.b1 for c in clients], axis=0)
    return type(clients[0])(W1, b1)


@dataclass
class SimState:
    model: SplitModel
    train: DatasetSplit
    test: DatasetSplit
    shards: list
    batch_rng: np.random.Generator
    round: int = 0
    bytes_cum: int = 0


def init_state(cfg: SimConfig, data: tuple[DatasetSplit, DatasetSplit] | None = None) -> SimState:
    data_ss, part_ss, init_ss, batch_ss = np.random.SeedSequence(cfg.seed).spawn(4)
    train, test = data if data is not None else synth_classification(cfg.n_train, cfg.n_test, data_ss)
    model = init_model(init_ss, train.images.shape[1], cfg.cut_shape, cfg.hidden, train.K)
    return SimState(model, train, test, make_shards(cfg, train.labels, part_ss), np.random.default_rng(batch_ss))


def initial_metrics(state: SimState) -> RoundMetrics:
    """Round-0 row: the untrained model, before any bytes are exchanged."""
    loss = cross_entropy(predict_logits(state.model, state.train.images), state.train.labels)
    return RoundMetrics(0, 0, 0, 0, loss, evaluate(state.model, state.test), math.nan)


def run_round(state: SimState, cfg: SimConfig) -> RoundMetrics:
    """One round: every device in index order trains its local batches through
    the codec, then the client halves are averaged (or relayed)."""
    model, train = state.model, state.train
    up = down = samples = 0
    losses = []
    trained = []
    for shard in state.shards:
        local = SplitModel(model.client.copy(), model.server, model.cut_shape)
        for _ in range(cfg.local_batches_per_round):
            idx = sample_batch(state.batch_rng, shard, cfg.batch_size)
            acts, cache = forward_client(local, train.images[idx])
            sent, acts_rx = transmit(acts, cfg.codec)
            loss, grad = server_step(local, acts_rx, train.labels[idx], cfg.learning_rate)
            returned, grad_rx = transmit(grad, cfg.codec)
            client_step(local, cache, grad_rx, cfg.learning_rate)
            up += sent
            down += returned
            samples += len(idx)
            losses.append(loss)
        trained.append(local.client)
        if not cfg.average_clients:
            # relay: the next device continues from this device's client half
            model.client = local.client
    if cfg.average_clients:
        model.client = _average(trained)
    state.round += 1
    state.bytes_cum += up + down
    raw = 2 * samples * 4 * int(np.prod(model.cut_shape))
    return RoundMetrics(
        state.round, up, down, state.bytes_cum, float(np.mean(losses)), evaluate(model, state.test), raw / (up + down)
    )


def simulate(cfg: SimConfig, data: tuple[DatasetSplit, DatasetSplit] | None = None, progress=None) -> list[RoundMetrics]:
    """Run ``cfg.rounds`` rounds and return the round-0 row followed by one row per round."""
    state = init_state(cfg, data)
    history = [initial_metrics(state)]
    for _ in range(cfg.rounds):
        history.append(run_round(state, cfg))
        if progress:
            progress(history[-1])
    return history


def _fmt(x) -> str:
    return str(x) if isinstance(x, (int, np.integer)) else f"{x:.6g}"


def write_metrics_csv(rows, stream=None) -> str:
    """Write rows as CSV (6 significant digits for floats); returns the text."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for m in rows:
        writer.writerow([_fmt(getattr(m, col)) for col in CSV_COLUMNS])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text
