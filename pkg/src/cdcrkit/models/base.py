"""Shared mention-pair model interface and serialization."""
from __future__ import annotations

import hashlib
import json
from typing import Sequence

import numpy as np

FORMAT_VERSION = 1


class PairModel:
    """A trained scorer of mention pairs: feature matrix in, P(coreferent) out."""

    kind: str
    feature_names: tuple[str, ...]
    seed: int
    hyperparams: dict

    def predict_proba(self, values: np.ndarray, present: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def params_to_json(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "kind": self.kind,
            "features": list(self.feature_names),
            "seed": self.seed,
            "hyperparams": self.hyperparams,
            "params": self.params_to_json(),
        }


def model_hash(model: PairModel) -> str:
    blob = json.dumps(model.to_json(), sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def save_model(model: PairModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_json(), fh, indent=1)
        fh.write("\n")


def load_model(path) -> PairModel:
    from .logistic import LogisticModel
    from .trees import GradientBoostedTreesModel

    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported model format version {version!r}")
    kind = obj.get("kind")
    if kind == LogisticModel.kind:
        return LogisticModel.from_json(obj)
    if kind == GradientBoostedTreesModel.kind:
        return GradientBoostedTreesModel.from_json(obj)
    raise ValueError(f"{path}: unknown model kind {kind!r}")


def check_training_inputs(values: np.ndarray, present: np.ndarray, labels: np.ndarray) -> np.ndarray:
    labels = np.asarray(labels, dtype=float)
    if values.ndim != 2 or present.shape != values.shape:
        raise ValueError("values and present must be matching 2-d arrays")
    if labels.shape != (values.shape[0],):
        raise ValueError("labels must align with matrix rows")
    if not set(np.unique(labels)) <= {0.0, 1.0}:
        raise ValueError("labels must be binary")
    if len(np.unique(labels)) < 2:
        raise ValueError("training needs both classes present")
    return labels
