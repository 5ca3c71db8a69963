"""Model introspection and evaluation: importances, feature elimination,
per-link-type scores."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..corpus import LINK_TYPE_ORDER, LinkType
from .base import PairModel
from .logistic import train_logistic
from .trees import train_gbt

LEARNER_KINDS = ("linear-logistic", "gradient-boosted-trees")


def train_model(
    kind: str,
    feature_names,
    values: np.ndarray,
    present: np.ndarray,
    labels,
    hyperparams: dict | None = None,
    seed: int = 0,
) -> PairModel:
    if kind == "linear-logistic":
        return train_logistic(feature_names, values, present, labels, hyperparams, seed)
    if kind == "gradient-boosted-trees":
        return train_gbt(feature_names, values, present, labels, hyperparams, seed)
    raise ValueError(f"unknown learner kind {kind!r}, expected one of {LEARNER_KINDS}")


def binary_prf(labels: np.ndarray, predicted: np.ndarray) -> tuple[float, float, float]:
    """Precision/recall/F1 with the coreferring class as positive; empty
    denominators score 0."""
    labels = np.asarray(labels, dtype=bool)
    predicted = np.asarray(predicted, dtype=bool)
    tp = float((labels & predicted).sum())
    fp = float((~labels & predicted).sum())
    fn = float((labels & ~predicted).sum())
    p = tp / (tp + fp) if tp + fp > 0 else 0.0
    r = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return p, r, f1


def pair_f1(labels: np.ndarray, probabilities: np.ndarray, threshold: float = 0.5) -> float:
    return binary_prf(labels, np.asarray(probabilities) >= threshold)[2]


@dataclass
class LinkTypeReport:
    """Per-link-type pair classification scores; types without gold positives
    carry None instead of scores."""

    threshold: float
    entries: dict[LinkType, dict | None]
    overall: dict

    def to_json(self) -> dict:
        return {
            "threshold": self.threshold,
            "overall": self.overall,
            "by_link_type": {
                lt.value: self.entries.get(lt) for lt in LINK_TYPE_ORDER
            },
        }

    def to_tsv(self) -> str:
        rows = ["link_type\tpairs\tpositives\tprecision\trecall\tf1"]
        for lt in LINK_TYPE_ORDER:
            e = self.entries.get(lt)
            if e is None:
                rows.append(f"{lt.value}\t0\t0\tn/a\tn/a\tn/a")
            elif e["positives"] == 0:
                rows.append(f"{lt.value}\t{e['pairs']}\t0\tn/a\tn/a\tn/a")
            else:
                rows.append(
                    f"{lt.value}\t{e['pairs']}\t{e['positives']}"
                    f"\t{e['precision']:.6f}\t{e['recall']:.6f}\t{e['f1']:.6f}"
                )
        o = self.overall
        rows.append(
            f"overall\t{o['pairs']}\t{o['positives']}"
            f"\t{o['precision']:.6f}\t{o['recall']:.6f}\t{o['f1']:.6f}"
        )
        return "\n".join(rows) + "\n"


def evaluate_by_link_type(
    probabilities: np.ndarray,
    labels: np.ndarray,
    link_types: Sequence[LinkType],
    threshold: float = 0.5,
) -> LinkTypeReport:
    probabilities = np.asarray(probabilities, dtype=float)
    labels = np.asarray(labels, dtype=int)
    types = np.asarray([lt.value for lt in link_types])
    predicted = probabilities >= threshold
    entries: dict[LinkType, dict | None] = {}
    for lt in LINK_TYPE_ORDER:
        mask = types == lt.value
        n = int(mask.sum())
        if n == 0:
            entries[lt] = None
            continue
        positives = int(labels[mask].sum())
        p, r, f1 = binary_prf(labels[mask], predicted[mask])
        entry = {"pairs": n, "positives": positives}
        if positives > 0:
            entry.update({"precision": p, "recall": r, "f1": f1})
        entries[lt] = entry
    p, r, f1 = binary_prf(labels, predicted)
    overall = {
        "pairs": int(labels.size),
        "positives": int(labels.sum()),
        "precision": p,
        "recall": r,
        "f1": f1,
    }
    return LinkTypeReport(threshold=threshold, entries=entries, overall=overall)


def gain_importance(model: PairModel) -> dict[str, float]:
    """Model-internal importance, normalized to sum to 1 when any is positive."""
    fn = getattr(model, "feature_importance", None)
    if fn is None:
        raise ValueError(f"model kind {model.kind!r} exposes no internal importance")
    return fn()


def permutation_importance(
    model: PairModel,
    values: np.ndarray,
    present: np.ndarray,
    labels: np.ndarray,
    metric: Callable[[np.ndarray, np.ndarray], float] = pair_f1,
    seed: int = 0,
    repeats: int = 3,
) -> dict[str, float]:
    """Mean drop of the metric when one feature's column (value and presence
    together) is shuffled."""
    values = np.asarray(values, dtype=float)
    present = np.asarray(present, dtype=bool)
    labels = np.asarray(labels)
    baseline = metric(labels, model.predict_proba(values, present))
    rng = np.random.default_rng(seed)
    out = {}
    for j, name in enumerate(model.feature_names):
        drops = []
        for _ in range(repeats):
            perm = rng.permutation(values.shape[0])
            v = values.copy()
            p = present.copy()
            v[:, j] = values[perm, j]
            p[:, j] = present[perm, j]
            drops.append(baseline - metric(labels, model.predict_proba(v, p)))
        out[name] = float(np.mean(drops))
    return out


@dataclass
class RfeResult:
    selected: tuple[str, ...]
    history: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"selected": list(self.selected), "history": self.history}


def save_rfe_result(result: RfeResult, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(result.to_json(), fh, indent=1)
        fh.write("\n")


def load_selected_features(path) -> tuple[str, ...]:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    return tuple(obj["selected"])


def recursive_feature_elimination(
    feature_names: Sequence[str],
    train_values: np.ndarray,
    train_present: np.ndarray,
    train_labels,
    dev_values: np.ndarray,
    dev_present: np.ndarray,
    dev_labels,
    learner_kind: str,
    hyperparams: dict | None = None,
    step: int = 1,
    threshold: float = 0.5,
    seed: int = 0,
) -> RfeResult:
    """Iteratively drop the lowest-importance features, retraining each round;
    the subset with the best dev F1 wins, ties going to the smaller subset."""
    if step < 1:
        raise ValueError("step must be >= 1")
    names = list(feature_names)
    index = {n: i for i, n in enumerate(names)}
    current = list(names)
    history = []
    best: tuple[float, int, tuple[str, ...]] | None = None
    dev_labels = np.asarray(dev_labels)
    while current:
        cols = [index[n] for n in current]
        model = train_model(
            learner_kind,
            current,
            train_values[:, cols],
            train_present[:, cols],
            train_labels,
            hyperparams,
            seed,
        )
        probs = model.predict_proba(dev_values[:, cols], dev_present[:, cols])
        f1 = pair_f1(dev_labels, probs, threshold)
        history.append({"features": list(current), "dev_f1": f1})
        # Strictly better F1 wins; at equal F1 prefer fewer features.
        key = (f1, -len(current))
        if best is None or key > (best[0], -best[1]):
            best = (f1, len(current), tuple(current))
        if len(current) == 1:
            break
        importance = gain_importance(model)
        ranked = sorted(current, key=lambda n: (importance.get(n, 0.0), current.index(n)))
        drop = set(ranked[: min(step, len(current) - 1)])
        current = [n for n in current if n not in drop]
    return RfeResult(selected=best[2], history=history)
