"""Pair classifiers: gradient checks, split-search oracle, importances, RFE."""
import math

import numpy as np
import pytest

from cdcrkit.corpus import LinkType
from cdcrkit.models import (
    GradientBoostedTreesModel,
    LogisticModel,
    binary_prf,
    evaluate_by_link_type,
    gain_importance,
    load_model,
    load_selected_features,
    loss_and_gradient,
    model_hash,
    pair_f1,
    permutation_importance,
    recursive_feature_elimination,
    save_model,
    save_rfe_result,
    sigmoid,
    train_gbt,
    train_logistic,
    train_model,
)
from cdcrkit.models.base import check_training_inputs
from cdcrkit.models.logistic import expand_inputs


def planted_data(rng, n=200, informative=2, noise=3, flip=0.0):
    """Labels leak into the informative columns; noise columns are pure noise."""
    y = np.array([0, 1] * (n // 2))
    rng.shuffle(y)
    cols = [y + rng.normal(0, 0.15, size=n) for _ in range(informative)]
    cols += [rng.normal(size=n) for _ in range(noise)]
    values = np.column_stack(cols)
    present = np.ones_like(values, dtype=bool)
    if flip > 0:
        flips = rng.random(n) < flip
        y = np.where(flips, 1 - y, y)
    return values, present, y.astype(float)


# ---------------------------------------------------------------------------
# Logistic regression.

def test_gradient_matches_central_finite_differences():
    rng = np.random.default_rng(12)
    eps = 1e-6
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(5, 40))
        d = int(rng.integers(2, 8))
        x = rng.normal(size=(n, d))
        y = rng.integers(0, 2, size=n).astype(float)
        w = rng.normal(size=d)
        b = float(rng.normal())
        l2 = float(rng.choice([0.0, 1e-3, 1e-1]))
        _, grad_w, grad_b = loss_and_gradient(w, b, x, y, l2)
        for j in range(d):
            bump = np.zeros(d)
            bump[j] = eps
            lp, _, _ = loss_and_gradient(w + bump, b, x, y, l2)
            lm, _, _ = loss_and_gradient(w - bump, b, x, y, l2)
            fd = (lp - lm) / (2 * eps)
            worst = max(worst, abs(grad_w[j] - fd) / max(1.0, abs(grad_w[j]), abs(fd)))
        lp, _, _ = loss_and_gradient(w, b + eps, x, y, l2)
        lm, _, _ = loss_and_gradient(w, b - eps, x, y, l2)
        fd = (lp - lm) / (2 * eps)
        worst = max(worst, abs(grad_b - fd) / max(1.0, abs(grad_b), abs(fd)))
    assert worst <= 1e-5


def test_sigmoid_is_stable_at_extremes():
    z = np.array([-1000.0, -10.0, 0.0, 10.0, 1000.0])
    p = sigmoid(z)
    assert np.all(np.isfinite(p))
    assert p[0] == 0.0 or p[0] < 1e-300
    assert p[2] == 0.5
    assert p[-1] == pytest.approx(1.0)


def test_logistic_training_reduces_loss_and_separates():
    rng = np.random.default_rng(3)
    values, present, y = planted_data(rng)
    model = train_logistic(["f0", "f1", "n0", "n1", "n2"], values, present, y)
    x = expand_inputs(values, present)
    trained_loss, _, _ = loss_and_gradient(model.weights, model.bias, x, y, 0.0)
    init_loss, _, _ = loss_and_gradient(np.zeros(x.shape[1]), 0.0, x, y, 0.0)
    assert trained_loss < init_loss
    probs = model.predict_proba(values, present)
    assert pair_f1(y, probs) > 0.95


def test_logistic_distinguishes_absent_from_present_zero():
    # Value columns are all zero; only the presence flag carries the label.
    n = 100
    y = np.array([0.0, 1.0] * (n // 2))
    values = np.zeros((n, 1))
    present = y.astype(bool).reshape(-1, 1)
    model = train_logistic(["only"], values, present, y)
    probs = model.predict_proba(np.zeros((2, 1)), np.array([[False], [True]]))
    assert probs[0] < 0.2 and probs[1] > 0.8


def test_logistic_training_is_deterministic():
    rng = np.random.default_rng(5)
    values, present, y = planted_data(rng, n=60)
    names = ["f0", "f1", "n0", "n1", "n2"]
    a = train_logistic(names, values, present, y)
    b = train_logistic(names, values, present, y)
    assert np.array_equal(a.weights, b.weights)
    assert a.bias == b.bias
    assert model_hash(a) == model_hash(b)


def test_logistic_importance_favors_informative_features():
    rng = np.random.default_rng(7)
    values, present, y = planted_data(rng)
    model = train_logistic(["f0", "f1", "n0", "n1", "n2"], values, present, y)
    imp = model.feature_importance()
    assert sum(imp.values()) == pytest.approx(1.0)
    assert min(imp["f0"], imp["f1"]) > max(imp["n0"], imp["n1"], imp["n2"])


def test_training_input_validation():
    values = np.zeros((4, 2))
    present = np.ones((4, 2), dtype=bool)
    with pytest.raises(ValueError, match="binary"):
        check_training_inputs(values, present, np.array([0, 1, 2, 0]))
    with pytest.raises(ValueError, match="both classes"):
        check_training_inputs(values, present, np.array([1, 1, 1, 1]))
    with pytest.raises(ValueError, match="align"):
        check_training_inputs(values, present, np.array([0, 1]))
    with pytest.raises(ValueError, match="2-d"):
        check_training_inputs(np.zeros(4), np.ones(4, dtype=bool), np.array([0, 1, 0, 1]))


# ---------------------------------------------------------------------------
# Gradient-boosted trees. Oracle: exhaustive scan of every split candidate
# for a depth-1, single-tree model with all features present.

def oracle_stump(values: np.ndarray, labels: np.ndarray, min_child_weight: float):
    y = labels.astype(float)
    p = np.full(len(y), y.mean())
    g = p - y
    h = p * (1.0 - p)
    g_total, h_total = float(g.sum()), float(h.sum())
    parent = g_total * g_total / h_total
    best = None
    for j in range(values.shape[1]):
        order = np.argsort(values[:, j], kind="stable")
        sv = values[order, j]
        cg = np.cumsum(g[order])
        ch = np.cumsum(h[order])
        for i in np.nonzero(sv[:-1] < sv[1:])[0]:
            gl, hl = float(cg[i]), float(ch[i])
            gr, hr = g_total - gl, h_total - hl
            if hl < min_child_weight or hr < min_child_weight:
                continue
            gain = 0.5 * (gl * gl / hl + gr * gr / hr - parent)
            if gain > 1e-12 and (best is None or gain > best[0] + 1e-12):
                best = (gain, j, (sv[i] + sv[i + 1]) / 2.0)
    return best


def test_single_stump_matches_exhaustive_split_search():
    rng = np.random.default_rng(41)
    hp = {"trees": 1, "max_depth": 1, "min_child_weight": 1.0}
    for trial in range(15):
        n = int(rng.integers(12, 40))
        f = int(rng.integers(2, 5))
        values = rng.normal(size=(n, f))
        y = np.zeros(n)
        y[: n // 2] = 1.0
        rng.shuffle(y)
        # Correlate one random column with the labels so a split usually exists.
        values[:, trial % f] += 1.5 * y
        present = np.ones_like(values, dtype=bool)
        model = train_gbt([f"c{j}" for j in range(f)], values, present, y, hp)
        root = model.trees[0]
        want = oracle_stump(values, y, 1.0)
        if want is None:
            assert root.is_leaf()
            continue
        gain, j, threshold = want
        assert not root.is_leaf()
        assert root.feature == j
        assert root.threshold == pytest.approx(threshold, abs=1e-12)
        assert root.gain == pytest.approx(gain, rel=1e-9)


def test_constant_features_yield_a_leaf():
    values = np.ones((10, 2))
    present = np.ones_like(values, dtype=bool)
    y = np.array([0.0, 1.0] * 5)
    model = train_gbt(["a", "b"], values, present, y, {"trees": 1, "max_depth": 3})
    assert model.trees[0].is_leaf()
    # With no usable split everything predicts the base rate.
    assert model.predict_proba(values, present) == pytest.approx(np.full(10, 0.5))


def test_row_duplication_leaves_predictions_unchanged():
    rng = np.random.default_rng(11)
    values, present, y = planted_data(rng, n=80, flip=0.1)
    names = ["f0", "f1", "n0", "n1", "n2"]
    hp = {"trees": 10, "max_depth": 3, "min_child_weight": 0.0}
    single = train_gbt(names, values, present, y, hp)
    double = train_gbt(
        names,
        np.vstack([values, values]),
        np.vstack([present, present]),
        np.concatenate([y, y]),
        hp,
    )
    probe_v, probe_p, _ = planted_data(rng, n=30)
    assert np.allclose(
        single.predict_proba(probe_v, probe_p),
        double.predict_proba(probe_v, probe_p),
        atol=1e-10,
    )


def test_missing_values_follow_learned_default_direction():
    # Rows missing the feature are all positive; the split should route them
    # with the high-value (positive) side.
    values = np.array([[0.0], [0.0], [0.0], [1.0], [1.0], [1.0], [0.0], [0.0]])
    present = np.array([[True]] * 6 + [[False]] * 2)
    y = np.array([0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0])
    model = train_gbt(["x"], values, present, y, {"trees": 40, "max_depth": 1, "min_child_weight": 0.0})
    root = model.trees[0]
    assert not root.is_leaf() and root.missing_left is False
    probs = model.predict_proba(np.zeros((2, 1)), np.array([[True], [False]]))
    assert probs[0] < 0.3 < 0.7 < probs[1]


def test_zero_trees_predict_the_training_prior():
    rng = np.random.default_rng(13)
    values, present, y = planted_data(rng, n=50)
    model = train_gbt(["f0", "f1", "n0", "n1", "n2"], values, present, y, {"trees": 8})
    probs = model.predict_proba(values, present, n_trees=0)
    assert probs == pytest.approx(np.full(len(y), y.mean()))
    staged = model.predict_proba(values, present, n_trees=len(model.trees))
    assert np.array_equal(staged, model.predict_proba(values, present))


def test_gbt_learns_separable_data_and_is_deterministic():
    rng = np.random.default_rng(17)
    values, present, y = planted_data(rng)
    names = ["f0", "f1", "n0", "n1", "n2"]
    a = train_gbt(names, values, present, y, {"trees": 20, "max_depth": 3})
    assert pair_f1(y, a.predict_proba(values, present)) > 0.95
    b = train_gbt(names, values, present, y, {"trees": 20, "max_depth": 3})
    assert a.to_json() == b.to_json()
    assert model_hash(a) == model_hash(b)
    imp = a.feature_importance()
    assert sum(imp.values()) == pytest.approx(1.0)
    # f0 and f1 carry the same signal, so the greedy learner may use only one.
    assert imp["f0"] + imp["f1"] > 0.9
    assert max(imp["n0"], imp["n1"], imp["n2"]) < 0.1


@pytest.mark.parametrize("kind", ["linear-logistic", "gradient-boosted-trees"])
def test_model_file_round_trip(tmp_path, kind):
    rng = np.random.default_rng(19)
    values, present, y = planted_data(rng, n=60)
    names = ["f0", "f1", "n0", "n1", "n2"]
    model = train_model(kind, names, values, present, y, {"trees": 5} if "trees" in kind else None, seed=4)
    path = tmp_path / "model.json"
    save_model(model, path)
    again = load_model(path)
    assert type(again) is type(model)
    assert again.feature_names == model.feature_names
    assert again.seed == 4
    assert np.allclose(again.predict_proba(values, present), model.predict_proba(values, present))
    assert model_hash(again) == model_hash(model)


def test_load_model_rejects_unknown_payloads(tmp_path):
    path = tmp_path / "m.json"
    path.write_text('{"format_version": 99}')
    with pytest.raises(ValueError, match="format version"):
        load_model(path)
    path.write_text('{"format_version": 1, "kind": "perceptron"}')
    with pytest.raises(ValueError, match="unknown model kind"):
        load_model(path)
    with pytest.raises(ValueError, match="unknown learner kind"):
        train_model("svm", ["f"], np.zeros((2, 1)), np.ones((2, 1), dtype=bool), [0, 1])


# ---------------------------------------------------------------------------
# Evaluation helpers.

def test_binary_prf_hand_values():
    p, r, f1 = binary_prf(np.array([1, 1, 0, 0]), np.array([1, 0, 1, 0]))
    assert (p, r, f1) == (0.5, 0.5, 0.5)
    assert binary_prf(np.array([0, 0]), np.array([0, 0])) == (0.0, 0.0, 0.0)
    assert binary_prf(np.array([1, 1]), np.array([1, 1])) == (1.0, 1.0, 1.0)


def test_pair_f1_threshold():
    labels = np.array([1, 0, 1, 0])
    probs = np.array([0.9, 0.6, 0.4, 0.1])
    assert pair_f1(labels, probs, threshold=0.5) == pytest.approx(0.5)
    assert pair_f1(labels, probs, threshold=0.35) == pytest.approx(0.8)


def test_evaluate_by_link_type():
    probs = np.array([0.9, 0.2, 0.8, 0.3, 0.9])
    labels = np.array([1, 1, 0, 0, 0])
    types = [
        LinkType.WITHIN_DOCUMENT,
        LinkType.WITHIN_DOCUMENT,
        LinkType.WITHIN_DOCUMENT,
        LinkType.CROSS_SUBTOPIC,
        LinkType.CROSS_SUBTOPIC,
    ]
    report = evaluate_by_link_type(probs, labels, types, threshold=0.5)
    wd = report.entries[LinkType.WITHIN_DOCUMENT]
    assert wd["pairs"] == 3 and wd["positives"] == 2
    assert wd["precision"] == pytest.approx(0.5)
    assert wd["recall"] == pytest.approx(0.5)
    cs = report.entries[LinkType.CROSS_SUBTOPIC]
    assert cs["positives"] == 0 and "precision" not in cs
    assert report.entries[LinkType.CROSS_TOPIC] is None
    assert report.overall["pairs"] == 5
    tsv = report.to_tsv()
    assert "cross-subtopic\t2\t0\tn/a" in tsv
    assert report.to_json()["by_link_type"]["cross-topic"] is None


def test_permutation_importance_finds_planted_signal():
    rng = np.random.default_rng(23)
    values, present, y = planted_data(rng, informative=1, noise=2)
    names = ["signal", "noise0", "noise1"]
    model = train_gbt(names, values, present, y, {"trees": 15, "max_depth": 2})
    imp = permutation_importance(model, values, present, y, seed=0)
    assert imp["signal"] > max(abs(imp["noise0"]), abs(imp["noise1"])) + 0.1


def test_gain_importance_requires_capable_model():
    class Opaque:
        kind = "opaque"

    with pytest.raises(ValueError, match="no internal importance"):
        gain_importance(Opaque())


def test_rfe_drops_noise_and_keeps_signal(tmp_path):
    rng = np.random.default_rng(29)
    train_v, train_p, train_y = planted_data(rng, n=160, informative=2, noise=4)
    dev_v, dev_p, dev_y = planted_data(rng, n=80, informative=2, noise=4)
    names = ["f0", "f1", "n0", "n1", "n2", "n3"]
    result = recursive_feature_elimination(
        names, train_v, train_p, train_y, dev_v, dev_p, dev_y,
        learner_kind="gradient-boosted-trees",
        hyperparams={"trees": 10, "max_depth": 2},
        step=1,
    )
    assert {"f0", "f1"} & set(result.selected)
    assert len(result.selected) < len(names)
    assert len(result.history) == len(names)  # one round per size with step=1
    best_f1 = max(h["dev_f1"] for h in result.history)
    selected_rounds = [h for h in result.history if set(h["features"]) == set(result.selected)]
    assert selected_rounds and selected_rounds[0]["dev_f1"] == best_f1
    path = tmp_path / "rfe.json"
    save_rfe_result(result, path)
    assert load_selected_features(path) == result.selected
    with pytest.raises(ValueError):
        recursive_feature_elimination(
            names, train_v, train_p, train_y, dev_v, dev_p, dev_y,
            learner_kind="gradient-boosted-trees", step=0,
        )
