"""L2-regularized logistic regression trained by full-batch gradient descent.

Absent feature cells enter as two inputs: the zero sentinel value and a 0/1
presence flag, so the linear model can distinguish "absent" from "present and
zero". Weights start at zero, making training deterministic; the seed is
recorded for provenance only.
"""
from __future__ import annotations

import numpy as np

from .base import PairModel, check_training_inputs

DEFAULTS = {"l2": 1e-4, "learning_rate": 0.5, "epochs": 500}


def expand_inputs(values: np.ndarray, present: np.ndarray) -> np.ndarray:
    values = np.where(present, values, 0.0)
    return np.hstack([values, present.astype(float)])


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def loss_and_gradient(
    weights: np.ndarray, bias: float, x: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray, float]:
    """Mean cross-entropy plus 0.5 * l2 * ||w||^2 (bias unregularized), with
    its exact gradient."""
    z = x @ weights + bias
    p = sigmoid(z)
    eps = 1e-12
    loss = float(-np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps)))
    loss += 0.5 * l2 * float(weights @ weights)
    residual = p - y
    grad_w = x.T @ residual / x.shape[0] + l2 * weights
    grad_b = float(np.mean(residual))
    return loss, grad_w, grad_b


class LogisticModel(PairModel):
    kind = "linear-logistic"

    def __init__(self, feature_names, weights, bias, hyperparams, seed, feature_scale=None):
        self.feature_names = tuple(feature_names)
        self.weights = np.asarray(weights, dtype=float)
        self.bias = float(bias)
        self.hyperparams = dict(hyperparams)
        self.seed = int(seed)
        f = len(self.feature_names)
        if self.weights.shape != (2 * f,):
            raise ValueError(f"expected {2 * f} weights for {f} features, got {self.weights.shape}")
        self.feature_scale = (
            np.ones(2 * f) if feature_scale is None else np.asarray(feature_scale, dtype=float)
        )

    def predict_proba(self, values: np.ndarray, present: np.ndarray) -> np.ndarray:
        x = expand_inputs(np.asarray(values, dtype=float), np.asarray(present, dtype=bool))
        return sigmoid(x @ self.weights + self.bias)

    def feature_importance(self) -> dict[str, float]:
        """|coefficient| * input std, summed over a feature's two inputs."""
        f = len(self.feature_names)
        raw = np.abs(self.weights) * self.feature_scale
        per_feature = raw[:f] + raw[f:]
        total = per_feature.sum()
        if total > 0:
            per_feature = per_feature / total
        return {name: float(v) for name, v in zip(self.feature_names, per_feature)}

    def params_to_json(self) -> dict:
        return {
            "weights": [float(w) for w in self.weights],
            "bias": self.bias,
            "feature_scale": [float(s) for s in self.feature_scale],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LogisticModel":
        params = obj["params"]
        return cls(
            feature_names=obj["features"],
            weights=params["weights"],
            bias=params["bias"],
            hyperparams=obj.get("hyperparams", {}),
            seed=obj.get("seed", 0),
            feature_scale=params.get("feature_scale"),
        )


def train_logistic(
    feature_names,
    values: np.ndarray,
    present: np.ndarray,
    labels,
    hyperparams: dict | None = None,
    seed: int = 0,
) -> LogisticModel:
    labels = check_training_inputs(values, present, np.asarray(labels))
    hp = {**DEFAULTS, **(hyperparams or {})}
    x = expand_inputs(np.asarray(values, dtype=float), np.asarray(present, dtype=bool))
    weights = np.zeros(x.shape[1])
    bias = 0.0
    lr, l2 = float(hp["learning_rate"]), float(hp["l2"])
    for _ in range(int(hp["epochs"])):
        _, grad_w, grad_b = loss_and_gradient(weights, bias, x, labels, l2)
        weights = weights - lr * grad_w
        bias = bias - lr * grad_b
    scale = x.std(axis=0)
    return LogisticModel(
        feature_names=feature_names,
        weights=weights,
        bias=bias,
        hyperparams=hp,
        seed=seed,
        feature_scale=scale,
    )
