"""Edge representations from node-vector pairs, and the scoring classifier.

Five binary operators turn two node vectors into one edge vector; a small
[input, 64, 1] feed-forward network with rectifier hidden units and a
logistic output turns edge vectors into link probabilities. Training is
plain mini-batch gradient descent on binary cross-entropy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, NumericError

EDGE_OPS = ("concatenation", "mean", "l1", "l2", "hadamard")
DEFAULT_EDGE_OP = "concatenation"


def edge_embed(z_u: np.ndarray, z_v: np.ndarray, op: str) -> np.ndarray:
    """Combine two equal-dimension node vectors into one edge vector.

    concatenation doubles the dimension and is the only asymmetric
    operator; mean, l1 (|a-b|), l2 ((a-b)^2) and hadamard (a*b) keep it.
    """
    z_u = np.asarray(z_u, dtype=np.float64)
    z_v = np.asarray(z_v, dtype=np.float64)
    if z_u.shape != z_v.shape:
        raise ValueError(f"dimension mismatch: {z_u.shape} vs {z_v.shape}")
    if op == "concatenation":
        return np.concatenate([z_u, z_v], axis=-1)
    if op == "mean":
        return (z_u + z_v) / 2.0
    if op == "l1":
        return np.abs(z_u - z_v)
    if op == "l2":
        return (z_u - z_v) ** 2
    if op == "hadamard":
        return z_u * z_v
    raise ConfigError(f"edge_op: unknown operator {op!r}, expected one of {EDGE_OPS}")


def edge_feature_dim(embedding_dim: int, op: str) -> int:
    return 2 * embedding_dim if op == "concatenation" else embedding_dim


def edge_features(vectors: np.ndarray, pairs, op: str) -> np.ndarray:
    """Edge vectors for a list of node pairs, stacked into a matrix."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return edge_embed(vectors[pairs[:, 0]], vectors[pairs[:, 1]], op)


@dataclass(frozen=True)
class ClassifierConfig:
    hidden: int = 64
    epochs: int = 100
    learning_rate: float = 0.01
    batch_size: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.hidden < 1 or self.batch_size < 1:
            raise ConfigError("hidden and batch_size must be >= 1")
        if self.epochs < 0:
            raise ConfigError(f"epochs: must be >= 0, got {self.epochs}")
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate: must be positive, got {self.learning_rate}")


class Classifier:
    """[input_dim, hidden, 1] rectifier network with a logistic output.

    The output layer starts at zero, so an untrained model scores 0.5
    everywhere. All parameters are float64; scoring is pure.
    """

    def __init__(self, input_dim: int, hidden: int = 64, seed: int = 0):
        rng = np.random.default_rng(seed)
        bound = 1.0 / np.sqrt(input_dim)
        self.w1 = rng.uniform(-bound, bound, size=(input_dim, hidden))
        self.b1 = np.zeros(hidden)
        self.w2 = np.zeros((hidden, 1))
        self.b2 = np.zeros(1)
        self.initial_loss: float | None = None
        self.final_loss: float | None = None

    @property
    def input_dim(self) -> int:
        return int(self.w1.shape[0])

    def _logits(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        h = np.maximum(X @ self.w1 + self.b1, 0.0)
        return (h @ self.w2 + self.b2).ravel(), h

    def predict_scores(self, X) -> np.ndarray:
        """Logistic link probabilities, one per feature row."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.input_dim:
            raise ValueError(f"feature dim {X.shape[1]} != model input dim {self.input_dim}")
        z, _ = self._logits(X)
        return _sigmoid(z)

    # -- persistence -------------------------------------------------------

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"mlp {self.w1.shape[0]} {self.w1.shape[1]} 1\n")
            for row in self.w1:
                fh.write(" ".join(f"{x:.17g}" for x in row) + "\n")
            fh.write(" ".join(f"{x:.17g}" for x in self.b1) + "\n")
            fh.write(" ".join(f"{x:.17g}" for x in self.w2.ravel()) + "\n")
            fh.write(f"{self.b2[0]:.17g}\n")

    @classmethod
    def load(cls, path) -> "Classifier":
        with open(path, "r", encoding="utf-8") as fh:
            tag, d_in, hidden, d_out = fh.readline().split()
            if tag != "mlp" or int(d_out) != 1:
                raise DataError(f"{path}: not a classifier parameter file")
            d_in, hidden = int(d_in), int(hidden)
            model = cls(d_in, hidden)
            model.w1 = np.array(
                [[float(x) for x in fh.readline().split()] for _ in range(d_in)]
            )
            model.b1 = np.array([float(x) for x in fh.readline().split()])
            model.w2 = np.array([float(x) for x in fh.readline().split()]).reshape(hidden, 1)
            model.b2 = np.array([float(fh.readline())])
        return model


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    e = np.exp(z[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def bce_loss(model: Classifier, X: np.ndarray, y: np.ndarray) -> float:
    """Mean binary cross-entropy, computed from logits for stability."""
    z, _ = model._logits(X)
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def loss_and_grads(model: Classifier, X: np.ndarray, y: np.ndarray):
    """Loss plus analytic gradients for every parameter (backprop)."""
    z, h = model._logits(X)
    n = X.shape[0]
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    dz = ((_sigmoid(z) - y) / n)[:, None]
    grads = {
        "w2": h.T @ dz,
        "b2": dz.sum(axis=0),
    }
    dh = dz @ model.w2.T
    dh[h <= 0.0] = 0.0
    grads["w1"] = X.T @ dh
    grads["b1"] = dh.sum(axis=0)
    return loss, grads


def predict_scores(model: Classifier, features) -> np.ndarray:
    """Functional alias for Classifier.predict_scores."""
    return model.predict_scores(features)


def train_classifier(features, labels, cfg: ClassifierConfig = ClassifierConfig()) -> Classifier:
    """Fit the scoring network by mini-batch gradient descent.

    Requires at least one example of each class. Records the full
    training-set loss before and after training on the returned model.
    """
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64).ravel()
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ValueError("features must be 2-D with one label per row")
    if np.unique(y).size < 2:
        raise DataError("training set contains a single class")
    model = Classifier(X.shape[1], cfg.hidden, cfg.seed)
    model.initial_loss = bce_loss(model, X, y)
    rng = np.random.default_rng(cfg.seed)
    for epoch in range(cfg.epochs):
        order = rng.permutation(X.shape[0])
        for lo in range(0, order.size, cfg.batch_size):
            idx = order[lo:lo + cfg.batch_size]
            loss, grads = loss_and_grads(model, X[idx], y[idx])
            if not np.isfinite(loss):
                raise NumericError(f"classifier loss became non-finite in epoch {epoch + 1}")
            model.w1 -= cfg.learning_rate * grads["w1"]
            model.b1 -= cfg.learning_rate * grads["b1"]
            model.w2 -= cfg.learning_rate * grads["w2"]
            model.b2 -= cfg.learning_rate * grads["b2"]
    model.final_loss = bce_loss(model, X, y)
    return model
