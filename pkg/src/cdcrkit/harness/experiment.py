"""End-to-end experiment runs: split, sample, featurize, select, tune, train,
precluster, cluster, score.

An in-dataset run consumes one corpus plus a split assignment and reports test
scores averaged over model seeds. A cross-dataset run trains on one or more
whole corpora (merged when several) and evaluates on whole held-out corpora
with the same trained models, so the transfer comparison is attributable to
the data and not to pipeline differences.
"""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Sequence

import numpy as np

from ..cluster import (
    Clustering,
    ClusterConfig,
    DistanceMatrix,
    agglomerative,
    gold_document_preclusters,
    kmeans_document_preclusters,
)
from ..corpus import (
    Corpus,
    LINK_TYPE_ORDER,
    SplitSpec,
    drop_superimposed_actions,
    link_type,
    merge_corpora,
    split_corpus,
)
from ..features import FAMILIES, PairFeatureExtractor, TfIdfModel, VectorStore
from ..models import (
    LinkTypeReport,
    PairModel,
    evaluate_by_link_type,
    gain_importance,
    model_hash,
    pair_f1,
    permutation_importance,
    recursive_feature_elimination,
    save_model,
    train_model,
)
from ..sampling import PairSet, SamplerConfig, sample_pairs
from ..scoring import MetricReport, cross_document_score, harmonic_report, mean_report
from .masking import MaskSpec, mask_corpus, mask_store
from .tuning import TuneResult, make_folds, tune

PRECLUSTER_MODES = ("none", "kmeans", "gold")

# Merge thresholds swept when the config leaves the threshold open.
THRESHOLD_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))


@dataclass
class ExperimentConfig:
    """Everything a run needs besides the corpora and the split assignment."""

    name: str = "run"
    learner: str = "gradient-boosted-trees"
    families: tuple[str, ...] = FAMILIES
    exclude: tuple[str, ...] = ()
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    mask: MaskSpec | None = None
    precluster: str = "none"
    linkage: str = "average"
    threshold: float | None = None
    decision_threshold: float = 0.5
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    hyperparams: dict = field(default_factory=dict)
    selected_features: tuple[str, ...] | None = None
    select_features: bool = False
    rfe_step: int = 1
    tune_space: dict | None = None
    tune_budget: int = 200
    cv_folds: int = 6
    cv_repeats: int = 3
    max_precluster_k: int | None = None

    def __post_init__(self):
        if self.precluster not in PRECLUSTER_MODES:
            raise ValueError(f"precluster {self.precluster!r} not one of {PRECLUSTER_MODES}")
        if not self.seeds:
            raise ValueError("at least one model seed is required")
        if self.select_features and self.selected_features is not None:
            raise ValueError("select_features and selected_features are mutually exclusive")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "learner": self.learner,
            "families": list(self.families),
            "exclude": list(self.exclude),
            "sampler": {
                "largest_cluster_factor": self.sampler.largest_cluster_factor,
                "negatives_per_positive": self.sampler.negatives_per_positive,
                "seed": self.sampler.seed,
            },
            "mask": self.mask.to_json() if self.mask else None,
            "precluster": self.precluster,
            "linkage": self.linkage,
            "threshold": self.threshold,
            "decision_threshold": self.decision_threshold,
            "seeds": list(self.seeds),
            "hyperparams": self.hyperparams,
            "selected_features": list(self.selected_features) if self.selected_features else None,
            "select_features": self.select_features,
            "rfe_step": self.rfe_step,
            "tune_space": self.tune_space,
            "tune_budget": self.tune_budget,
            "cv_folds": self.cv_folds,
            "cv_repeats": self.cv_repeats,
            "max_precluster_k": self.max_precluster_k,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        known = {
            "name", "learner", "families", "exclude", "sampler", "mask", "precluster",
            "linkage", "threshold", "decision_threshold", "seeds", "hyperparams",
            "selected_features", "select_features", "rfe_step", "tune_space",
            "tune_budget", "cv_folds", "cv_repeats", "max_precluster_k",
        }
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown experiment config keys: {sorted(unknown)}")
        kwargs = dict(obj)
        if "families" in kwargs:
            kwargs["families"] = tuple(kwargs["families"])
        if "exclude" in kwargs:
            kwargs["exclude"] = tuple(kwargs["exclude"])
        if "sampler" in kwargs:
            kwargs["sampler"] = SamplerConfig(**kwargs["sampler"])
        if kwargs.get("mask") is not None:
            kwargs["mask"] = MaskSpec.from_json(kwargs["mask"])
        if "seeds" in kwargs:
            kwargs["seeds"] = tuple(kwargs["seeds"])
        if kwargs.get("selected_features") is not None:
            kwargs["selected_features"] = tuple(kwargs["selected_features"])
        return cls(**kwargs)


def config_digest(config: ExperimentConfig) -> str:
    blob = json.dumps(config.to_json(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def load_experiment_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return ExperimentConfig.from_json(json.load(fh))


def gold_pair_labels(corpus: Corpus, pairs: Sequence[tuple[str, str]]) -> np.ndarray:
    """1 where both mentions carry the same explicit cluster id."""
    labels = np.zeros(len(pairs), dtype=int)
    for i, (a, b) in enumerate(pairs):
        ma = corpus.resolve(a)[1]
        mb = corpus.resolve(b)[1]
        if ma.cluster_id is not None and ma.cluster_id == mb.cluster_id:
            labels[i] = 1
    return labels


def pair_set_arrays(pair_set: PairSet) -> tuple[list[tuple[str, str]], np.ndarray]:
    pairs = [(p.a, p.b) for p in pair_set.pairs]
    labels = np.array([p.label for p in pair_set.pairs], dtype=int)
    return pairs, labels


def document_vectors(corpus: Corpus, model: TfIdfModel) -> tuple[list[str], np.ndarray]:
    """Dense tf-idf document vectors over the model's vocabulary, in the
    corpus' document order."""
    vocab = {term: i for i, term in enumerate(sorted(model.df))}
    doc_ids = [d.doc_id for d in corpus.documents]
    x = np.zeros((len(doc_ids), len(vocab)))
    for i, doc in enumerate(corpus.documents):
        sparse = model.vectorize(t for s in doc.sentences for t in s)
        for term, weight in sparse.items():
            j = vocab.get(term)
            if j is not None:
                x[i, j] = weight
    return doc_ids, x


def precluster_documents(
    corpus: Corpus, mode: str, tfidf: TfIdfModel, seed: int, max_k: int | None = None
) -> Clustering:
    if mode == "none":
        return Clustering([{d.doc_id for d in corpus.documents}])
    if mode == "gold":
        return gold_document_preclusters(corpus)
    if mode == "kmeans":
        doc_ids, x = document_vectors(corpus, tfidf)
        return kmeans_document_preclusters(doc_ids, x, seed=seed, max_k=max_k)
    raise ValueError(f"precluster {mode!r} not one of {PRECLUSTER_MODES}")


def cluster_with_probabilities(
    refs: Sequence[str],
    probabilities: np.ndarray,
    doc_of: dict[str, str],
    preclusters: Clustering,
    linkage: str,
    threshold: float,
) -> Clustering:
    """Agglomerate mention pairs at distance 1 - p inside each document
    precluster; mentions never merge across preclusters."""
    square = _probability_square(refs, probabilities)
    index = {r: i for i, r in enumerate(refs)}
    out: list[set[str]] = []
    config = ClusterConfig(linkage=linkage, criterion="distance", threshold=threshold)
    for group in preclusters.clusters:
        sub = [r for r in refs if doc_of[r] in group]
        if not sub:
            continue
        if len(sub) == 1:
            out.append({sub[0]})
            continue
        idx = [index[r] for r in sub]
        values = np.clip(1.0 - square[np.ix_(idx, idx)], 0.0, 1.0)
        np.fill_diagonal(values, 0.0)
        clustering = agglomerative(DistanceMatrix(tuple(sub), values), config)
        out.extend(set(c) for c in clustering.clusters)
    return Clustering(out)


def _probability_square(refs: Sequence[str], probabilities: np.ndarray) -> np.ndarray:
    """Expand probabilities given in combinations(refs, 2) order to a
    symmetric square with a unit diagonal."""
    n = len(refs)
    expected = n * (n - 1) // 2
    if len(probabilities) != expected:
        raise ValueError(f"expected {expected} probabilities, got {len(probabilities)}")
    square = np.eye(n)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            square[i, j] = square[j, i] = probabilities[k]
            k += 1
    return square


def tune_merge_threshold(
    corpus: Corpus,
    refs: Sequence[str],
    probabilities: np.ndarray,
    linkage: str,
    grid: Sequence[float] = THRESHOLD_GRID,
) -> tuple[float, float]:
    """Pick the merge distance that maximizes LEA F1 against the corpus gold,
    preferring the smaller threshold on ties. Preclustering is left out on
    purpose: the threshold should not compensate for it."""
    doc_of = {r: corpus.resolve(r)[0].doc_id for r in refs}
    everything = Clustering([{d.doc_id for d in corpus.documents}])
    best_tau, best_f1 = grid[0], -1.0
    for tau in grid:
        response = cluster_with_probabilities(refs, probabilities, doc_of, everything, linkage, tau)
        f1 = cross_document_score(corpus, response).lea.f1
        if f1 > best_f1 + 1e-12:
            best_tau, best_f1 = tau, f1
    return best_tau, best_f1


def mean_link_report(reports: Sequence[LinkTypeReport]) -> dict:
    """Average P/R/F1 per link type across seeds; pair counts are identical
    across seeds by construction."""
    first = reports[0]
    out = {"threshold": first.threshold, "link_types": {}, "overall": {}}
    for lt in LINK_TYPE_ORDER:
        entries = [r.entries[lt] for r in reports]
        if entries[0] is None:
            out["link_types"][lt.value] = None
            continue
        merged = {"pairs": entries[0]["pairs"], "positives": entries[0]["positives"]}
        if "f1" in entries[0]:
            for key in ("precision", "recall", "f1"):
                merged[key] = float(np.mean([e[key] for e in entries]))
        out["link_types"][lt.value] = merged
    overall = {"pairs": first.overall["pairs"], "positives": first.overall["positives"]}
    for key in ("precision", "recall", "f1"):
        overall[key] = float(np.mean([r.overall[key] for r in reports]))
    out["overall"] = overall
    return out


@dataclass
class TrainedStage:
    """Artifacts shared by every evaluation of one training corpus."""

    train_corpus: Corpus
    extractor: PairFeatureExtractor
    selected: tuple[str, ...]
    hyperparams: dict
    threshold: float
    models: list[PairModel]
    rfe_history: list[dict] = field(default_factory=list)
    tune_trials: list[dict] = field(default_factory=list)
    dev_pair_f1: float | None = None


@dataclass
class EvalResult:
    corpus_id: str
    mean: MetricReport
    per_seed: list[MetricReport]
    link_types: dict
    responses: list[Clustering]

    def to_json(self) -> dict:
        return {
            "corpus_id": self.corpus_id,
            "mean": self.mean.to_json(),
            "per_seed": [r.to_json() for r in self.per_seed],
            "link_types": self.link_types,
        }


@dataclass
class RunReport:
    config: dict
    digest: str
    train_corpus: str
    eval_results: list[EvalResult]
    selected_features: list[str]
    hyperparams: dict
    threshold: float
    model_hashes: list[str]
    importance: dict
    dev_pair_f1: float | None = None

    @property
    def primary(self) -> EvalResult:
        return self.eval_results[0]

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "digest": self.digest,
            "train_corpus": self.train_corpus,
            "selected_features": self.selected_features,
            "hyperparams": self.hyperparams,
            "threshold": self.threshold,
            "model_hashes": self.model_hashes,
            "dev_pair_f1": self.dev_pair_f1,
            "importance": self.importance,
            "eval": [r.to_json() for r in self.eval_results],
        }


def _sampled_matrix(
    corpus: Corpus,
    extractor: PairFeatureExtractor,
    sampler: SamplerConfig,
):
    pair_set = sample_pairs(corpus, sampler)
    pairs, labels = pair_set_arrays(pair_set)
    matrix = extractor.matrix(pairs)
    return pair_set, matrix, labels


def _select_features(
    config: ExperimentConfig,
    train_matrix,
    train_labels,
    dev_matrix,
    dev_labels,
) -> tuple[tuple[str, ...], list[dict]]:
    if config.selected_features is not None:
        return tuple(config.selected_features), []
    if not config.select_features:
        return tuple(train_matrix.names), []
    result = recursive_feature_elimination(
        train_matrix.names,
        train_matrix.values,
        train_matrix.present,
        train_labels,
        dev_matrix.values,
        dev_matrix.present,
        dev_labels,
        config.learner,
        config.hyperparams or None,
        step=config.rfe_step,
        threshold=config.decision_threshold,
        seed=config.seeds[0],
    )
    return tuple(result.selected), result.history


def tune_classifier(
    config: ExperimentConfig,
    train_corpus: Corpus,
    train_matrix,
    train_labels,
    selected: tuple[str, ...],
) -> tuple[dict, list[dict]]:
    """Budgeted search over the config's space, scored by mean pair F1 over
    repeated document folds of the training corpus. Sampled pairs whose
    documents straddle a fold boundary sit out that fold."""
    if not config.tune_space or config.tune_budget < 1:
        return dict(config.hyperparams), []
    folds = make_folds(train_corpus, config.cv_folds, config.cv_repeats, config.seeds[0])
    matrix = train_matrix.select(selected)
    doc_of = [
        (train_corpus.resolve(a)[0].doc_id, train_corpus.resolve(b)[0].doc_id)
        for a, b in matrix.pairs
    ]
    # Fold membership of a sampled pair: both endpoint documents on one side.
    fold_masks = []
    for train_ids, eval_ids in folds:
        tr = set(train_ids)
        ev = set(eval_ids)
        in_train = np.array([da in tr and db in tr for da, db in doc_of])
        in_eval = np.array([da in ev and db in ev for da, db in doc_of])
        if in_train.sum() and in_eval.sum() and len(set(train_labels[in_train])) == 2:
            fold_masks.append((in_train, in_eval))
    if not fold_masks:
        return dict(config.hyperparams), []

    def objective(params: dict) -> float:
        merged = {**config.hyperparams, **params}
        scores = []
        for k, (tr, ev) in enumerate(fold_masks):
            model = train_model(
                config.learner,
                selected,
                matrix.values[tr],
                matrix.present[tr],
                train_labels[tr],
                merged,
                seed=config.seeds[0] + k,
            )
            probs = model.predict_proba(matrix.values[ev], matrix.present[ev])
            scores.append(pair_f1(train_labels[ev], probs, config.decision_threshold))
        return float(np.mean(scores))

    result: TuneResult = tune(config.tune_space, objective, config.tune_budget, seed=config.seeds[0])
    return {**config.hyperparams, **result.best_params}, result.trials


def train_stage(
    config: ExperimentConfig,
    train_corpus: Corpus,
    dev_corpus: Corpus | None = None,
    store: VectorStore | None = None,
) -> TrainedStage:
    """Sample, featurize, select, tune and train on one corpus. The dev corpus
    drives feature selection and is required when the config asks for it."""
    extractor = PairFeatureExtractor(train_corpus, store, config.families, config.exclude)
    _, train_matrix, train_labels = _sampled_matrix(train_corpus, extractor, config.sampler)

    dev_matrix = dev_labels = None
    dev_f1 = None
    if dev_corpus is not None:
        dev_sampler = replace(config.sampler, seed=config.sampler.seed + 1)
        dev_extractor = PairFeatureExtractor(dev_corpus, store, config.families, config.exclude)
        _, dev_matrix, dev_labels = _sampled_matrix(dev_corpus, dev_extractor, dev_sampler)
    elif config.select_features:
        raise ValueError("feature selection needs a dev corpus")

    selected, rfe_history = _select_features(config, train_matrix, train_labels, dev_matrix, dev_labels)
    hyperparams, trials = tune_classifier(config, train_corpus, train_matrix, train_labels, selected)

    matrix = train_matrix.select(selected)
    models = [
        train_model(config.learner, selected, matrix.values, matrix.present, train_labels,
                    hyperparams or None, seed=s)
        for s in config.seeds
    ]

    if dev_matrix is not None:
        dev_sel = dev_matrix.select(selected)
        probs = models[0].predict_proba(dev_sel.values, dev_sel.present)
        dev_f1 = pair_f1(dev_labels, probs, config.decision_threshold)

    threshold = config.threshold
    if threshold is None:
        refs = train_corpus.action_refs
        all_pairs = list(combinations(refs, 2))
        full = extractor.matrix(all_pairs).select(selected)
        probs = models[0].predict_proba(full.values, full.present)
        threshold, _ = tune_merge_threshold(train_corpus, refs, probs, config.linkage)

    return TrainedStage(
        train_corpus=train_corpus,
        extractor=extractor,
        selected=selected,
        hyperparams=hyperparams,
        threshold=threshold,
        models=models,
        rfe_history=rfe_history,
        tune_trials=trials,
        dev_pair_f1=dev_f1,
    )


def evaluate_stage(
    config: ExperimentConfig,
    stage: TrainedStage,
    eval_corpus: Corpus,
    store: VectorStore | None = None,
) -> tuple[EvalResult, dict]:
    """Score every trained model on one whole corpus; also returns the seed-0
    importance tables computed on the evaluation pairs."""
    extractor = PairFeatureExtractor(eval_corpus, store, config.families, config.exclude)
    refs = eval_corpus.action_refs
    if len(refs) < 2:
        raise ValueError(f"corpus {eval_corpus.corpus_id!r} has fewer than two action mentions")
    pairs = list(combinations(refs, 2))
    matrix = extractor.matrix(pairs).select(stage.selected)
    labels = gold_pair_labels(eval_corpus, pairs)
    types = [link_type(eval_corpus, a, b) for a, b in pairs]
    doc_of = {r: eval_corpus.resolve(r)[0].doc_id for r in refs}
    preclusters = precluster_documents(
        eval_corpus, config.precluster, extractor.tfidf, config.seeds[0], config.max_precluster_k
    )

    per_seed: list[MetricReport] = []
    link_reports: list[LinkTypeReport] = []
    responses: list[Clustering] = []
    for model in stage.models:
        probs = model.predict_proba(matrix.values, matrix.present)
        response = cluster_with_probabilities(
            refs, probs, doc_of, preclusters, config.linkage, stage.threshold
        )
        responses.append(response)
        per_seed.append(cross_document_score(eval_corpus, response))
        link_reports.append(evaluate_by_link_type(probs, labels, types, config.decision_threshold))

    result = EvalResult(
        corpus_id=eval_corpus.corpus_id,
        mean=mean_report(per_seed),
        per_seed=per_seed,
        link_types=mean_link_report(link_reports),
        responses=responses,
    )
    importance = {
        "gain": gain_importance(stage.models[0]),
        "permutation": permutation_importance(
            stage.models[0], matrix.values, matrix.present, labels, seed=config.seeds[0]
        ),
    }
    return result, importance


def run_in_dataset(
    config: ExperimentConfig,
    corpus: Corpus,
    split: SplitSpec,
    store: VectorStore | None = None,
    out_dir=None,
) -> RunReport:
    corpus = drop_superimposed_actions(corpus)
    train, dev, test = split_corpus(corpus, split)
    test_store = store
    if config.mask is not None:
        test_store = mask_store(test, config.mask, store)
        test = mask_corpus(test, config.mask)
    stage = train_stage(config, train, dev if dev.documents else None, store)
    result, importance = evaluate_stage(config, stage, test, test_store)
    report = RunReport(
        config=config.to_json(),
        digest=config_digest(config),
        train_corpus=train.corpus_id,
        eval_results=[result],
        selected_features=list(stage.selected),
        hyperparams=stage.hyperparams,
        threshold=stage.threshold,
        model_hashes=[model_hash(m) for m in stage.models],
        importance=importance,
        dev_pair_f1=stage.dev_pair_f1,
    )
    if out_dir is not None:
        save_run_report(report, stage, out_dir)
    return report


def run_cross_dataset(
    config: ExperimentConfig,
    train_corpora: Sequence[Corpus],
    eval_corpora: Sequence[Corpus],
    train_stores: Sequence[VectorStore | None] | None = None,
    eval_stores: Sequence[VectorStore | None] | None = None,
    out_dir=None,
) -> RunReport:
    """Train once on the (merged) training corpora, evaluate the same models
    on each evaluation corpus, and aggregate with the harmonic mean so a
    collapse on any one dataset drags the summary down."""
    if not train_corpora or not eval_corpora:
        raise ValueError("need at least one training and one evaluation corpus")
    train_stores = list(train_stores) if train_stores is not None else [None] * len(train_corpora)
    eval_stores = list(eval_stores) if eval_stores is not None else [None] * len(eval_corpora)
    if len(train_stores) != len(train_corpora) or len(eval_stores) != len(eval_corpora):
        raise ValueError("stores must align one-to-one with corpora")

    cleaned = [drop_superimposed_actions(c) for c in train_corpora]
    if len(cleaned) == 1:
        train, train_store = cleaned[0], train_stores[0]
    else:
        train = merge_corpora(cleaned)
        train_store = merge_stores(cleaned, train_stores)
    stage = train_stage(config, train, None, train_store)

    eval_results = []
    importance = None
    for corpus, corpus_store in zip(eval_corpora, eval_stores):
        result, imp = evaluate_stage(config, stage, drop_superimposed_actions(corpus), corpus_store)
        eval_results.append(result)
        if importance is None:
            importance = imp

    report = RunReport(
        config=config.to_json(),
        digest=config_digest(config),
        train_corpus=train.corpus_id,
        eval_results=eval_results,
        selected_features=list(stage.selected),
        hyperparams=stage.hyperparams,
        threshold=stage.threshold,
        model_hashes=[model_hash(m) for m in stage.models],
        importance=importance,
        dev_pair_f1=stage.dev_pair_f1,
    )
    if out_dir is not None:
        save_run_report(report, stage, out_dir)
    return report


def cross_dataset_summary(report: RunReport) -> MetricReport:
    """Harmonic aggregate of the per-corpus mean reports."""
    return harmonic_report([r.mean for r in report.eval_results])


def merge_stores(
    corpora: Sequence[Corpus], stores: Sequence[VectorStore | None]
) -> VectorStore | None:
    """Combine sidecars for a merged corpus: document-scoped keys take the
    owning corpus id as prefix (matching merged document ids), knowledge-base
    keys stay shared, first store wins on collisions."""
    if all(s is None for s in stores):
        return None
    merged = VectorStore()
    for corpus, store in zip(corpora, stores):
        if store is None:
            continue
        for key, vec in store.vectors.items():
            if key.startswith("kb/"):
                if merged.get(key) is None:
                    merged.put(key, vec)
            else:
                merged.put(f"{corpus.corpus_id}/{key}", vec)
    return merged


def _tsv_metrics(results: Sequence[EvalResult]) -> str:
    lines = ["corpus\tmetric\tprecision\trecall\tf1"]
    for res in results:
        rep = res.mean
        for name in ("muc", "b3", "ceafe", "lea"):
            s = getattr(rep, name)
            lines.append(f"{res.corpus_id}\t{name}\t{s.precision:.6f}\t{s.recall:.6f}\t{s.f1:.6f}")
        lines.append(f"{res.corpus_id}\tconll\t\t\t{rep.conll_f1:.6f}")
    return "\n".join(lines) + "\n"


def _tsv_link_types(results: Sequence[EvalResult]) -> str:
    lines = ["corpus\tlink_type\tpairs\tpositives\tprecision\trecall\tf1"]
    for res in results:
        for lt_name, entry in res.link_types["link_types"].items():
            if entry is None:
                lines.append(f"{res.corpus_id}\t{lt_name}\t0\t0\tn/a\tn/a\tn/a")
                continue
            if "f1" in entry:
                scores = f"{entry['precision']:.6f}\t{entry['recall']:.6f}\t{entry['f1']:.6f}"
            else:
                scores = "n/a\tn/a\tn/a"
            lines.append(f"{res.corpus_id}\t{lt_name}\t{entry['pairs']}\t{entry['positives']}\t{scores}")
        o = res.link_types["overall"]
        lines.append(
            f"{res.corpus_id}\toverall\t{o['pairs']}\t{o['positives']}"
            f"\t{o['precision']:.6f}\t{o['recall']:.6f}\t{o['f1']:.6f}"
        )
    return "\n".join(lines) + "\n"


def save_run_report(report: RunReport, stage: TrainedStage, out_dir) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as fh:
        json.dump(report.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(out_dir, "metrics.tsv"), "w", encoding="utf-8") as fh:
        fh.write(_tsv_metrics(report.eval_results))
    with open(os.path.join(out_dir, "link_types.tsv"), "w", encoding="utf-8") as fh:
        fh.write(_tsv_link_types(report.eval_results))
    models_dir = os.path.join(out_dir, "models")
    os.makedirs(models_dir, exist_ok=True)
    for seed, model in zip(report.config["seeds"], stage.models):
        save_model(model, os.path.join(models_dir, f"seed{seed}.json"))
    responses_dir = os.path.join(out_dir, "responses")
    os.makedirs(responses_dir, exist_ok=True)
    for res in report.eval_results:
        tag = res.corpus_id.replace("/", "_").replace("+", "_")
        for seed, response in zip(report.config["seeds"], res.responses):
            path = os.path.join(responses_dir, f"{tag}.seed{seed}.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(response.to_json(), fh, indent=2, sort_keys=True)
                fh.write("\n")
