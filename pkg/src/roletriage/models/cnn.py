"""1-D convolutional sequence classifier.

Architecture: embedding -> valid 1-D convolution (ReLU) -> global max
pooling over positions -> dense softmax.  Shares the training loop, loss,
and early stopping with the LSTM.
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


class ConvNetwork:
    def __init__(self, params: dict[str, np.ndarray], width: int):
        self.params = params
        self.width = width

    @classmethod
    def init(cls, vocab_size: int, hp: Hyperparameters, rng: np.random.Generator,
             pretrained: EmbeddingMatrix | None = None) -> "ConvNetwork":
        rows = vocab_size + 2
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
        w, F = hp.cnn_width, hp.cnn_filters
        params = {
            "E": E,
            "Wc": glorot_uniform(rng, w * D, F, (w * D, F)),
            "bc": np.zeros(F),
            "Wo": glorot_uniform(rng, F, N_ROLES, (F, N_ROLES)),
            "bo": np.zeros(N_ROLES),
        }
        return cls(params, w)

    def _windows(self, X: np.ndarray) -> np.ndarray:
        """(B, T, D) -> (B, P, w*D) sliding windows, P = T - w + 1."""
        B, T, D = X.shape
        if T < self.width:
            raise DimensionMismatch(
                f"sequence length {T} shorter than filter width {self.width}"
            )
        P = T - self.width + 1
        return np.stack(
            [X[:, p:p + self.width, :].reshape(B, self.width * D) for p in range(P)],
            axis=1,
        )

    def _forward(self, seqs: np.ndarray):
        E = self.params["E"]
        X = E[seqs]  # (B, T, D)
        Xw = self._windows(X)  # (B, P, wD)
        pre = Xw @ self.params["Wc"] + self.params["bc"]  # (B, P, F)
        act = np.maximum(pre, 0.0)
        pool_idx = act.argmax(axis=1)  # (B, F)
        B = len(seqs)
        pooled = act[np.arange(B)[:, None], pool_idx, np.arange(act.shape[2])[None, :]]
        logits = pooled @ self.params["Wo"] + self.params["bo"]
        return X, Xw, pre, pool_idx, pooled, logits

    def loss_and_grads(self, seqs: np.ndarray, Y: np.ndarray,
                       rng: np.random.Generator | None = None,
                       train: bool = False):
        B, T = seqs.shape
        X, Xw, pre, pool_idx, pooled, logits = self._forward(seqs)
        probs = softmax(logits)
        loss = mean_cross_entropy(Y, probs)

        dlogits = (probs - Y) / B
        dpooled = dlogits @ self.params["Wo"].T  # (B, F)
        F = dpooled.shape[1]
        dact = np.zeros_like(pre)
        dact[np.arange(B)[:, None], pool_idx, np.arange(F)[None, :]] = dpooled
        dpre = dact * (pre > 0.0)
        dXw = dpre @ self.params["Wc"].T  # (B, P, wD)
        D = X.shape[2]
        dX = np.zeros_like(X)
        for p in range(dXw.shape[1]):
            dX[:, p:p + self.width, :] += dXw[:, p, :].reshape(B, self.width, D)
        grads = {
            "Wo": pooled.T @ dlogits,
            "bo": dlogits.sum(axis=0),
            "Wc": np.einsum("bpi,bpf->if", Xw, dpre),
            "bc": dpre.sum(axis=(0, 1)),
            "E": np.zeros_like(self.params["E"]),
        }
        np.add.at(grads["E"], seqs, dX)
        return loss, grads

    def postprocess_grads(self, grads: dict[str, np.ndarray]) -> None:
        grads["E"][0] = 0.0

    def predict_proba(self, seqs: np.ndarray) -> np.ndarray:
        _, _, _, _, _, logits = self._forward(np.asarray(seqs))
        return softmax(logits)

    def param_count(self) -> int:
        return sum(v.size for v in self.params.values())

    def state(self) -> tuple[dict, dict[str, np.ndarray]]:
        return {"width": self.width}, dict(self.params)

    @classmethod
    def from_state(cls, meta: dict, tensors: dict[str, np.ndarray]) -> "ConvNetwork":
        return cls(dict(tensors), int(meta["width"]))


def fit_cnn1d(batch: TrainingBatch, hp: Hyperparameters, vocab_size: int,
              pretrained: EmbeddingMatrix | None = None
              ) -> tuple[ConvNetwork, list[tuple[float, float]]]:
    rng = np.random.default_rng(derive_seed(hp.seed, "cnn"))
    net = ConvNetwork.init(vocab_size, hp, rng, pretrained)
    seqs = np.asarray(batch.features, dtype=np.int64)
    history = train_network(net, seqs, batch.labels, hp, rng, "cnn")
    return net, history
