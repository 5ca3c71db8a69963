"""Gradient-boosted decision trees with logistic loss.

Second-order boosting: each round fits one depth-limited regression tree to
the loss gradients/curvatures, with exact greedy splits found by scanning
every boundary between distinct present values of every feature. Rows with an
absent feature follow the split's default direction, chosen by trying both
sides during search. The ensemble starts from the log-odds of the base rate,
so zero trees predict the training prior. No row or feature subsampling is
used; training is deterministic and the seed is recorded for provenance.
"""
from __future__ import annotations

import numpy as np

from .base import PairModel, check_training_inputs
from .logistic import sigmoid

DEFAULTS = {"trees": 100, "max_depth": 4, "learning_rate": 0.1, "min_child_weight": 1.0}

_EPS = 1e-16
_GAIN_TOL = 1e-12


class TreeNode:
    __slots__ = ("feature", "threshold", "missing_left", "left", "right", "value", "gain")

    def __init__(self, feature=None, threshold=0.0, missing_left=True, left=None, right=None,
                 value=0.0, gain=0.0):
        self.feature = feature
        self.threshold = threshold
        self.missing_left = missing_left
        self.left = left
        self.right = right
        self.value = value
        self.gain = gain

    def is_leaf(self) -> bool:
        return self.feature is None

    def to_json(self) -> dict:
        if self.is_leaf():
            return {"leaf": self.value}
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "missing_left": self.missing_left,
            "gain": self.gain,
            "left": self.left.to_json(),
            "right": self.right.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TreeNode":
        if "leaf" in obj:
            return cls(value=float(obj["leaf"]))
        return cls(
            feature=int(obj["feature"]),
            threshold=float(obj["threshold"]),
            missing_left=bool(obj["missing_left"]),
            gain=float(obj.get("gain", 0.0)),
            left=cls.from_json(obj["left"]),
            right=cls.from_json(obj["right"]),
        )


def _best_split(values, present, g, h, rows, min_child_weight):
    """Scan all features for the split maximizing the loss reduction
    0.5 * (GL^2/HL + GR^2/HR - G^2/H). Returns None when nothing beats zero."""
    g_node, h_node = g[rows], h[rows]
    g_total, h_total = float(g_node.sum()), float(h_node.sum())
    parent = g_total * g_total / max(h_total, _EPS)
    best = None  # (gain, feature, threshold, missing_left)
    for j in range(values.shape[1]):
        pres = present[rows, j]
        if not pres.any():
            continue
        v = values[rows, j][pres]
        gp, hp = g_node[pres], h_node[pres]
        g_miss = g_total - float(gp.sum())
        h_miss = h_total - float(hp.sum())
        has_missing = bool((~pres).any())
        order = np.argsort(v, kind="stable")
        sv = v[order]
        cg = np.cumsum(gp[order])
        ch = np.cumsum(hp[order])
        cuts = np.nonzero(sv[:-1] < sv[1:])[0]
        if cuts.size == 0:
            continue
        gl_p, hl_p = cg[cuts], ch[cuts]
        thresholds = (sv[cuts] + sv[cuts + 1]) / 2.0
        arms = ((True, gl_p + g_miss, hl_p + h_miss), (False, gl_p, hl_p)) if has_missing else (
            (True, gl_p, hl_p),
        )
        for missing_left, gl, hl in arms:
            gr = g_total - gl
            hr = h_total - hl
            ok = (hl >= min_child_weight) & (hr >= min_child_weight) & (hl > 0) & (hr > 0)
            if not ok.any():
                continue
            gains = 0.5 * (
                gl**2 / np.maximum(hl, _EPS) + gr**2 / np.maximum(hr, _EPS) - parent
            )
            gains = np.where(ok, gains, -np.inf)
            k = int(np.argmax(gains))
            if gains[k] > _GAIN_TOL and (best is None or gains[k] > best[0] + _GAIN_TOL):
                best = (float(gains[k]), j, float(thresholds[k]), missing_left)
    return best


def _build_tree(values, present, g, h, rows, depth, max_depth, min_child_weight, gain_sink):
    g_sum, h_sum = float(g[rows].sum()), float(h[rows].sum())
    if depth >= max_depth or rows.size < 2:
        return TreeNode(value=-g_sum / max(h_sum, _EPS))
    split = _best_split(values, present, g, h, rows, min_child_weight)
    if split is None:
        return TreeNode(value=-g_sum / max(h_sum, _EPS))
    gain, j, threshold, missing_left = split
    gain_sink[j] = gain_sink.get(j, 0.0) + gain
    pres = present[rows, j]
    goes_left = np.where(pres, values[rows, j] <= threshold, missing_left)
    left_rows, right_rows = rows[goes_left], rows[~goes_left]
    node = TreeNode(feature=j, threshold=threshold, missing_left=missing_left, gain=gain)
    node.left = _build_tree(values, present, g, h, left_rows, depth + 1, max_depth, min_child_weight, gain_sink)
    node.right = _build_tree(values, present, g, h, right_rows, depth + 1, max_depth, min_child_weight, gain_sink)
    return node


def _tree_scores(node: TreeNode, values, present, rows, out):
    if node.is_leaf():
        out[rows] = node.value
        return
    pres = present[rows, node.feature]
    goes_left = np.where(pres, values[rows, node.feature] <= node.threshold, node.missing_left)
    _tree_scores(node.left, values, present, rows[goes_left], out)
    _tree_scores(node.right, values, present, rows[~goes_left], out)


class GradientBoostedTreesModel(PairModel):
    kind = "gradient-boosted-trees"

    def __init__(self, feature_names, base_score, trees, hyperparams, seed, split_gains=None):
        self.feature_names = tuple(feature_names)
        self.base_score = float(base_score)
        self.trees: list[TreeNode] = list(trees)
        self.hyperparams = dict(hyperparams)
        self.seed = int(seed)
        self.split_gains = dict(split_gains or {})

    def decision(self, values: np.ndarray, present: np.ndarray, n_trees: int | None = None) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        present = np.asarray(present, dtype=bool)
        score = np.full(values.shape[0], self.base_score)
        lr = float(self.hyperparams["learning_rate"])
        use = self.trees if n_trees is None else self.trees[:n_trees]
        rows = np.arange(values.shape[0])
        buf = np.zeros(values.shape[0])
        for tree in use:
            _tree_scores(tree, values, present, rows, buf)
            score += lr * buf
        return score

    def predict_proba(self, values: np.ndarray, present: np.ndarray, n_trees: int | None = None) -> np.ndarray:
        return sigmoid(self.decision(values, present, n_trees=n_trees))

    def feature_importance(self) -> dict[str, float]:
        """Total split gain per feature, normalized to sum to 1."""
        total = sum(self.split_gains.values())
        out = {}
        for i, name in enumerate(self.feature_names):
            v = self.split_gains.get(i, 0.0)
            out[name] = float(v / total) if total > 0 else 0.0
        return out

    def params_to_json(self) -> dict:
        return {
            "base_score": self.base_score,
            "split_gains": {str(k): float(v) for k, v in sorted(self.split_gains.items())},
            "trees": [t.to_json() for t in self.trees],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GradientBoostedTreesModel":
        params = obj["params"]
        return cls(
            feature_names=obj["features"],
            base_score=params["base_score"],
            trees=[TreeNode.from_json(t) for t in params["trees"]],
            hyperparams=obj.get("hyperparams", {}),
            seed=obj.get("seed", 0),
            split_gains={int(k): float(v) for k, v in params.get("split_gains", {}).items()},
        )


def train_gbt(
    feature_names,
    values: np.ndarray,
    present: np.ndarray,
    labels,
    hyperparams: dict | None = None,
    seed: int = 0,
) -> GradientBoostedTreesModel:
    labels = check_training_inputs(np.asarray(values, dtype=float), np.asarray(present, dtype=bool),
                                   np.asarray(labels))
    values = np.asarray(values, dtype=float)
    present = np.asarray(present, dtype=bool)
    hp = {**DEFAULTS, **(hyperparams or {})}
    lr = float(hp["learning_rate"])
    mcw = float(hp["min_child_weight"])
    max_depth = int(hp["max_depth"])
    base_rate = float(labels.mean())
    base_score = float(np.log(base_rate / (1.0 - base_rate)))
    score = np.full(values.shape[0], base_score)
    trees: list[TreeNode] = []
    gains: dict[int, float] = {}
    rows = np.arange(values.shape[0])
    buf = np.zeros(values.shape[0])
    for _ in range(int(hp["trees"])):
        p = sigmoid(score)
        g = p - labels
        h = p * (1.0 - p)
        tree = _build_tree(values, present, g, h, rows, 0, max_depth, mcw, gains)
        trees.append(tree)
        _tree_scores(tree, values, present, rows, buf)
        score = score + lr * buf
    return GradientBoostedTreesModel(
        feature_names=feature_names,
        base_score=base_score,
        trees=trees,
        hyperparams=hp,
        seed=seed,
        split_gains=gains,
    )
