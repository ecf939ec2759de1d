"""LSTM sequence classifier with hand-rolled backpropagation through time.

Architecture: embedding -> spatial dropout over embedding channels (training
only) -> single LSTM layer (last hidden state) -> dense softmax over the 7
roles.  Gate layout inside the fused matrices is [input | forget | candidate
| output], each hidden_units wide.  The embedding's padding row (index 0)
stays frozen at zero.
"""
from __future__ import annotations

import numpy as np

from ..corpus import N_ROLES
from ..errors import DimensionMismatch
from ..seeding import derive_seed
from ..textprep import EmbeddingMatrix
from .base import Hyperparameters, TrainingBatch
from .losses import mean_cross_entropy, softmax
from .neural import glorot_uniform, train_network


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _gates(x: np.ndarray, h_prev: np.ndarray, c_prev: np.ndarray,
           Wx: np.ndarray, Wh: np.ndarray, b: np.ndarray):
    """One batched cell step; returns (h, c) plus the backward cache."""
    H = Wh.shape[0]
    z = x @ Wx + h_prev @ Wh + b
    i = _sigmoid(z[:, 0 * H:1 * H])
    f = _sigmoid(z[:, 1 * H:2 * H])
    g = np.tanh(z[:, 2 * H:3 * H])
    o = _sigmoid(z[:, 3 * H:4 * H])
    c = f * c_prev + i * g
    tc = np.tanh(c)
    h = o * tc
    return h, c, (x, h_prev, c_prev, i, f, g, o, c, tc)


def lstm_cell_step(x_t: np.ndarray, h_prev: np.ndarray, c_prev: np.ndarray,
                   params: dict[str, np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Single-sample LSTM cell update: standard sigmoid/tanh gating."""
    Wx, Wh, b = params["Wx"], params["Wh"], params["b"]
    H = Wh.shape[0]
    if x_t.shape != (Wx.shape[0],):
        raise DimensionMismatch(f"x_t shape {x_t.shape} incompatible with Wx {Wx.shape}")
    if h_prev.shape != (H,) or c_prev.shape != (H,):
        raise DimensionMismatch(f"state shapes {h_prev.shape}/{c_prev.shape}, expected ({H},)")
    if Wx.shape[1] != 4 * H or b.shape != (4 * H,):
        raise DimensionMismatch("fused gate matrices must be 4*hidden_units wide")
    h, c, _ = _gates(x_t[None, :], h_prev[None, :], c_prev[None, :], Wx, Wh, b)
    return h[0], c[0]


class LstmNetwork:
    def __init__(self, params: dict[str, np.ndarray], dropout_rate: float):
        self.params = params
        self.dropout_rate = dropout_rate

    @classmethod
    def init(cls, vocab_size: int, hp: Hyperparameters, rng: np.random.Generator,
             pretrained: EmbeddingMatrix | None = None) -> "LstmNetwork":
        rows = vocab_size + 2  # padding + tokens + OOV
        if pretrained is not None:
            if pretrained.rows.shape[0] != rows:
                raise DimensionMismatch(
                    f"pretrained matrix has {pretrained.rows.shape[0]} rows, vocabulary needs {rows}"
                )
            E = pretrained.rows.copy()
            D = pretrained.dim
        else:
            D = hp.embedding_dim
            E = rng.uniform(-0.05, 0.05, size=(rows, D))
            E[0] = 0.0
        H = hp.hidden_units
        b = np.zeros(4 * H)
        b[H:2 * H] = 1.0  # forget-gate bias starts open
        params = {
            "E": E,
            "Wx": glorot_uniform(rng, D, 4 * H, (D, 4 * H)),
            "Wh": glorot_uniform(rng, H, 4 * H, (H, 4 * H)),
            "b": b,
            "Wo": glorot_uniform(rng, H, N_ROLES, (H, N_ROLES)),
            "bo": np.zeros(N_ROLES),
        }
        return cls(params, hp.dropout_rate)

    def _forward(self, seqs: np.ndarray, dropout_mask: np.ndarray | None):
        E, Wx, Wh, b = (self.params[k] for k in ("E", "Wx", "Wh", "b"))
        B, T = seqs.shape
        H = Wh.shape[0]
        X = E[seqs]  # (B, T, D)
        if dropout_mask is not None:
            X = X * dropout_mask
        h = np.zeros((B, H))
        c = np.zeros((B, H))
        caches = []
        for t in range(T):
            h, c, cache = _gates(X[:, t, :], h, c, Wx, Wh, b)
            caches.append(cache)
        logits = h @ self.params["Wo"] + self.params["bo"]
        return X, caches, h, logits

    def loss_and_grads(self, seqs: np.ndarray, Y: np.ndarray,
                       rng: np.random.Generator | None = None,
                       train: bool = False):
        """Mean cross-entropy and analytic gradients for every parameter."""
        B, T = seqs.shape
        D = self.params["E"].shape[1]
        mask = None
        if train and self.dropout_rate > 0.0:
            keep = 1.0 - self.dropout_rate
            mask = (rng.random((B, 1, D)) < keep) / keep
        X, caches, h_last, logits = self._forward(seqs, mask)
        probs = softmax(logits)
        loss = mean_cross_entropy(Y, probs)

        Wx, Wh = self.params["Wx"], self.params["Wh"]
        dlogits = (probs - Y) / B
        grads = {
            "Wo": h_last.T @ dlogits,
            "bo": dlogits.sum(axis=0),
            "Wx": np.zeros_like(Wx),
            "Wh": np.zeros_like(Wh),
            "b": np.zeros_like(self.params["b"]),
            "E": np.zeros_like(self.params["E"]),
        }
        dX = np.zeros_like(X)
        dh = dlogits @ self.params["Wo"].T
        dc = np.zeros_like(dh)
        for t in range(T - 1, -1, -1):
            x_t, h_prev, c_prev, i, f, g, o, c, tc = caches[t]
            do = dh * tc
            dc = dc + dh * o * (1.0 - tc * tc)
            di = dc * g
            dg = dc * i
            df = dc * c_prev
            dz = np.concatenate(
                [
                    di * i * (1.0 - i),
                    df * f * (1.0 - f),
                    dg * (1.0 - g * g),
                    do * o * (1.0 - o),
                ],
                axis=1,
            )
            grads["Wx"] += x_t.T @ dz
            grads["Wh"] += h_prev.T @ dz
            grads["b"] += dz.sum(axis=0)
            dX[:, t, :] = dz @ Wx.T
            dh = dz @ Wh.T
            dc = dc * f
        if mask is not None:
            dX = dX * mask
        np.add.at(grads["E"], seqs, dX)
        return loss, grads

    def postprocess_grads(self, grads: dict[str, np.ndarray]) -> None:
        grads["E"][0] = 0.0  # padding row stays zero

    def predict_proba(self, seqs: np.ndarray) -> np.ndarray:
        _, _, _, logits = self._forward(np.asarray(seqs), None)
        return softmax(logits)

    def param_count(self) -> int:
        return sum(v.size for v in self.params.values())

    def state(self) -> tuple[dict, dict[str, np.ndarray]]:
        return {"dropout_rate": self.dropout_rate}, dict(self.params)

    @classmethod
    def from_state(cls, meta: dict, tensors: dict[str, np.ndarray]) -> "LstmNetwork":
        return cls(dict(tensors), float(meta["dropout_rate"]))


def fit_lstm(batch: TrainingBatch, hp: Hyperparameters, vocab_size: int,
             pretrained: EmbeddingMatrix | None = None
             ) -> tuple[LstmNetwork, list[tuple[float, float]]]:
    rng = np.random.default_rng(derive_seed(hp.seed, "lstm"))
    net = LstmNetwork.init(vocab_size, hp, rng, pretrained)
    seqs = np.asarray(batch.features, dtype=np.int64)
    history = train_network(net, seqs, batch.labels, hp, rng, "lstm")
    return net, history
