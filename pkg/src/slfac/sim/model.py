"""Dense split model with hand-written backprop.

Client: x -> tanh(x W1^T + b1), reshaped to (C, M, N) at the cut.
Server: a -> tanh(a W2^T + b2) -> logits = h W3^T + b3, softmax cross-entropy.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class ClientParams:
    W1: np.ndarray
    b1: np.ndarray

    def copy(self) -> "ClientParams":
        return ClientParams(self.W1.copy(), self.b1.copy())


@dataclass
class ServerParams:
    W2: np.ndarray
    b2: np.ndarray
    W3: np.ndarray
    b3: np.ndarray

    def copy(self) -> "ServerParams":
        return ServerParams(self.W2.copy(), self.b2.copy(), self.W3.copy(), self.b3.copy())


@dataclass
class SplitModel:
    client: ClientParams
    server: ServerParams
    cut_shape: tuple[int, int, int]

    def copy(self) -> "SplitModel":
        return SplitModel(self.client.copy(), self.server.copy(), self.cut_shape)


@dataclass
class ClientCache:
    inputs: np.ndarray
    acts: np.ndarray  # (B, H) post-tanh


def init_model(rng, d_in=196, cut_shape=(4, 8, 8), hidden=64, classes=10) -> SplitModel:
    """Uniform fan-in scaled init: U(-1/sqrt(fan_in), 1/sqrt(fan_in)); biases zero."""
    rng = np.random.default_rng(rng)
    H = int(np.prod(cut_shape))

    def dense(fan_out, fan_in):
        bound = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-bound, bound, size=(fan_out, fan_in))

    client = ClientParams(dense(H, d_in), np.zeros(H))
    server = ServerParams(dense(hidden, H), np.zeros(hidden), dense(classes, hidden), np.zeros(classes))
    return SplitModel(client, server, tuple(cut_shape))


def forward_client(model: SplitModel, inputs) -> tuple[np.ndarray, ClientCache]:
    x = np.asarray(inputs, dtype=np.float64)
    p = model.client
    if x.ndim != 2 or x.shape[1] != p.W1.shape[1]:
        raise ValueError(f"expected inputs of width {p.W1.shape[1]}, got shape {x.shape}")
    a = np.tanh(x @ p.W1.T + p.b1)
    return a.reshape(len(x), *model.cut_shape), ClientCache(x, a)


def _server_forward(s: ServerParams, a: np.ndarray):
    h = np.tanh(a @ s.W2.T + s.b2)
    logits = h @ s.W3.T + s.b3
    return h, logits


def _log_softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def cross_entropy(logits, labels) -> float:
    return float(-_log_softmax(logits)[np.arange(len(labels)), labels].mean())


def server_step(model: SplitModel, acts, labels, lr: float) -> tuple[float, np.ndarray]:
    """Finish the forward pass, take one SGD step on the server half and return
    the mean-loss gradient with respect to the cut activations."""
    s = model.server
    B = len(labels)
    a = np.asarray(acts, dtype=np.float64).reshape(B, -1)
    labels = np.asarray(labels)
    h, logits = _server_forward(s, a)
    logp = _log_softmax(logits)
    loss = float(-logp[np.arange(B), labels].mean())

    d_logits = np.exp(logp)
    d_logits[np.arange(B), labels] -= 1.0
    d_logits /= B
    dW3 = d_logits.T @ h
    db3 = d_logits.sum(axis=0)
    dz2 = (d_logits @ s.W3) * (1.0 - h * h)
    dW2 = dz2.T @ a
    db2 = dz2.sum(axis=0)
    d_acts = dz2 @ s.W2

    s.W3 -= lr * dW3
    s.b3 -= lr * db3
    s.W2 -= lr * dW2
    s.b2 -= lr * db2
    return loss, d_acts.reshape(B, *model.cut_shape)


def client_step(model: SplitModel, cache: ClientCache, grad_acts, lr: float) -> None:
    g = np.asarray(grad_acts, dtype=np.float64).reshape(cache.acts.shape)
    dz1 = g * (1.0 - cache.acts * cache.acts)
    model.client.W1 -= lr * (dz1.T @ cache.inputs)
    model.client.b1 -= lr * dz1.sum(axis=0)


def predict_logits(model: SplitModel, inputs) -> np.ndarray:
    acts, _ = forward_client(model, inputs)
    return _server_forward(model.server, acts.reshape(len(acts), -1))[1]


def evaluate(model: SplitModel, split) -> float:
    if len(split) == 0:
        raise ValueError("empty test set")
    pred = predict_logits(model, split.images).argmax(axis=1)
    return float(np.mean(pred == split.labels))
