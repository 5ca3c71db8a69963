"""Command-line front end.

Every subcommand reads and writes the package's JSON artifacts so that runs
can be scripted stage by stage (sample, featurize, train, predict, cluster,
score) or driven end to end (experiment). File formats: corpora and reports
are JSON, pair sets are JSON-lines, feature matrices are JSON-lines or the
columnar binary (picked by a ``.bin`` suffix), probabilities are JSON-lines
with keys a/b/p.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from itertools import combinations

import numpy as np

from .cluster import Clustering, load_clustering, save_clustering
from .corpus import (
    corpus_stats,
    load_corpus,
    load_split_spec,
    save_corpus,
    split_corpus,
)
from .features import (
    PairFeatureExtractor,
    TfIdfModel,
    load_feature_matrix_binary,
    load_feature_matrix_jsonl,
    load_vector_store,
    save_feature_matrix_binary,
    save_feature_matrix_jsonl,
)
from .harness import (
    ExperimentConfig,
    MaskSpec,
    cluster_with_probabilities,
    cross_dataset_summary,
    lemma_baseline,
    lemma_delta_baseline,
    lemma_time_baseline,
    load_experiment_config,
    mask_corpus,
    precluster_documents,
    run_cross_dataset,
    run_in_dataset,
    tune_classifier,
    tune_lemma_delta,
    tune_lemma_time,
)
from .models import (
    load_model,
    load_selected_features,
    save_model,
    save_rfe_result,
    recursive_feature_elimination,
    train_model,
)
from .sampling import SamplerConfig, load_pair_set, sample_pairs, save_pair_set
from .scoring import (
    cross_document_score,
    read_conll,
    save_report,
    spans_to_clustering,
    within_document_score,
    write_conll,
)


def _load_store(path):
    return load_vector_store(path) if path else None


def _load_matrix(path):
    return load_feature_matrix_binary(path) if str(path).endswith(".bin") else load_feature_matrix_jsonl(path)


def _save_matrix(matrix, path):
    if str(path).endswith(".bin"):
        save_feature_matrix_binary(matrix, path)
    else:
        save_feature_matrix_jsonl(matrix, path)


def _write_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _parse_inline_or_file(value: str) -> dict:
    if value.lstrip().startswith("{"):
        return json.loads(value)
    return _read_json(value)


def _aligned_labels(pair_set, matrix) -> np.ndarray:
    refs = tuple((p.a, p.b) for p in pair_set.pairs)
    if refs != matrix.pairs:
        raise SystemExit("pair file and feature matrix rows do not line up")
    return np.array([p.label for p in pair_set.pairs], dtype=int)


def _cmd_stats(args) -> None:
    report = corpus_stats(load_corpus(args.corpus))
    if args.out:
        _write_json(report.to_json(), args.out)
    if args.tsv:
        with open(args.tsv, "w", encoding="utf-8") as fh:
            fh.write(report.to_tsv())
    if not args.out and not args.tsv:
        sys.stdout.write(report.to_tsv())


def _cmd_split(args) -> None:
    corpus = load_corpus(args.corpus)
    spec = load_split_spec(args.spec)
    os.makedirs(args.out_dir, exist_ok=True)
    for name, part in zip(("train", "dev", "test"), split_corpus(corpus, spec)):
        path = os.path.join(args.out_dir, f"{name}.json")
        save_corpus(part, path)
        print(f"{name}: {len(part.documents)} documents -> {path}")


def _cmd_sample(args) -> None:
    corpus = load_corpus(args.corpus)
    config = SamplerConfig(
        largest_cluster_factor=args.pair_factor,
        negatives_per_positive=args.neg_ratio,
        seed=args.seed,
    )
    pair_set = sample_pairs(corpus, config)
    save_pair_set(pair_set, args.out)
    print(f"{len(pair_set.positives())} positive / {len(pair_set.negatives())} negative pairs -> {args.out}")


def _cmd_featurize(args) -> None:
    corpus = load_corpus(args.corpus)
    extractor = PairFeatureExtractor(
        corpus,
        _load_store(args.store),
        families=args.families.split(",") if args.families else None,
        exclude=args.exclude.split(",") if args.exclude else (),
    )
    pair_set = load_pair_set(args.pairs)
    matrix = extractor.matrix([(p.a, p.b) for p in pair_set.pairs])
    _save_matrix(matrix, args.out)
    print(f"{matrix.values.shape[0]} pairs x {matrix.values.shape[1]} features -> {args.out}")


def _cmd_select_features(args) -> None:
    train_set = load_pair_set(args.train_pairs)
    train_matrix = _load_matrix(args.train_matrix)
    dev_set = load_pair_set(args.dev_pairs)
    dev_matrix = _load_matrix(args.dev_matrix)
    result = recursive_feature_elimination(
        train_matrix.names,
        train_matrix.values,
        train_matrix.present,
        _aligned_labels(train_set, train_matrix),
        dev_matrix.values,
        dev_matrix.present,
        _aligned_labels(dev_set, dev_matrix),
        args.learner,
        _parse_inline_or_file(args.hyperparams) if args.hyperparams else None,
        step=args.step,
        threshold=args.threshold,
        seed=args.seed,
    )
    save_rfe_result(result, args.out)
    print(f"kept {len(result.selected)} features -> {args.out}")


def _cmd_tune(args) -> None:
    corpus = load_corpus(args.corpus)
    pair_set = load_pair_set(args.pairs)
    matrix = _load_matrix(args.matrix)
    labels = _aligned_labels(pair_set, matrix)
    config = ExperimentConfig(
        learner=args.learner,
        seeds=(args.seed,),
        tune_space=_parse_inline_or_file(args.space),
        tune_budget=args.budget,
        cv_folds=args.folds,
        cv_repeats=args.repeats,
    )
    best, trials = tune_classifier(config, corpus, matrix, labels, matrix.names)
    _write_json({"best_params": best, "trials": trials}, args.out)
    print(f"{len(trials)} trials, best {best} -> {args.out}")


def _cmd_train(args) -> None:
    pair_set = load_pair_set(args.pairs)
    matrix = _load_matrix(args.matrix)
    labels = _aligned_labels(pair_set, matrix)
    if args.features:
        matrix = matrix.select(load_selected_features(args.features))
    model = train_model(
        args.learner,
        matrix.names,
        matrix.values,
        matrix.present,
        labels,
        _parse_inline_or_file(args.hyperparams) if args.hyperparams else None,
        seed=args.seed,
    )
    save_model(model, args.out)
    print(f"{args.learner} on {matrix.values.shape[0]} pairs -> {args.out}")


def _cmd_predict(args) -> None:
    corpus = load_corpus(args.corpus)
    model = load_model(args.model)
    extractor = PairFeatureExtractor(corpus, _load_store(args.store))
    pairs = list(combinations(corpus.action_refs, 2))
    matrix = extractor.matrix(pairs).select(model.feature_names)
    probs = model.predict_proba(matrix.values, matrix.present)
    with open(args.out, "w", encoding="utf-8") as fh:
        for (a, b), p in zip(pairs, probs):
            fh.write(json.dumps({"a": a, "b": b, "p": float(p)}) + "\n")
    print(f"{len(pairs)} pair probabilities -> {args.out}")


def _cmd_cluster(args) -> None:
    corpus = load_corpus(args.corpus)
    refs = corpus.action_refs
    index = {r: i for i, r in enumerate(refs)}
    square = np.eye(len(refs))
    with open(args.probs, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            i, j = index[obj["a"]], index[obj["b"]]
            square[i, j] = square[j, i] = obj["p"]
    probs = np.array([square[i, j] for i, j in combinations(range(len(refs)), 2)])
    tfidf = TfIdfModel([[t for s in d.sentences for t in s] for d in corpus.documents])
    preclusters = precluster_documents(corpus, args.precluster, tfidf, args.seed)
    doc_of = {r: corpus.resolve(r)[0].doc_id for r in refs}
    response = cluster_with_probabilities(
        refs, probs, doc_of, preclusters, args.linkage, args.threshold
    )
    save_clustering(response, args.out)
    print(f"{len(response.clusters)} clusters -> {args.out}")


def _load_response(args) -> Clustering:
    corpus = load_corpus(args.corpus)
    if args.response_conll:
        return spans_to_clustering(corpus, read_conll(args.response_conll))
    return load_clustering(args.response)


def _cmd_score(args) -> None:
    corpus = load_corpus(args.corpus)
    response = _load_response(args)
    scorer = within_document_score if args.within_doc else cross_document_score
    report = scorer(corpus, response)
    save_report(report, json_path=args.out, tsv_path=args.tsv)
    if args.conll_dir:
        os.makedirs(args.conll_dir, exist_ok=True)
        write_conll(corpus, corpus.gold_clusters(), os.path.join(args.conll_dir, "key.conll"))
        write_conll(corpus, response, os.path.join(args.conll_dir, "response.conll"))
    if not args.out and not args.tsv:
        sys.stdout.write(report.to_tsv())


def _cmd_baseline(args) -> None:
    corpus = load_corpus(args.corpus)
    if args.variant == "lemma":
        response = lemma_baseline(corpus)
        note = "lemma"
    elif args.variant == "lemma-delta":
        delta = args.delta
        if delta is None:
            delta, train_f1 = tune_lemma_delta(load_corpus(args.tune_on) if args.tune_on else corpus)
            print(f"tuned delta={delta} (train LEA F1 {train_f1:.4f})")
        response = lemma_delta_baseline(corpus, delta)
        note = f"lemma-delta@{delta}"
    else:
        hours = args.hours
        if hours is None:
            hours, train_f1 = tune_lemma_time(load_corpus(args.tune_on) if args.tune_on else corpus)
            print(f"tuned delta_hours={hours} (train LEA F1 {train_f1:.4f})")
        response = lemma_time_baseline(corpus, hours)
        note = f"lemma-time@{hours}h"
    save_clustering(response, args.out)
    report = cross_document_score(corpus, response)
    if args.score:
        save_report(report, json_path=args.score)
    print(f"{note}: LEA F1 {report.lea.f1:.4f}, CoNLL F1 {report.conll_f1:.4f} -> {args.out}")


def _cmd_mask(args) -> None:
    corpus = load_corpus(args.corpus)
    spec = MaskSpec(components=tuple(args.components.split(",")), seed=args.seed)
    save_corpus(mask_corpus(corpus, spec), args.out)
    print(f"masked {spec.components} -> {args.out}")


def _override_config(config: ExperimentConfig, args) -> ExperimentConfig:
    if args.seed is not None:
        config = replace(
            config,
            sampler=replace(config.sampler, seed=args.seed),
            seeds=tuple(args.seed + i for i in range(len(config.seeds))),
        )
    if args.precluster is not None:
        config = replace(config, precluster=args.precluster)
    return config


def _cmd_experiment(args) -> None:
    config = _override_config(load_experiment_config(args.config), args)
    if args.mode == "in-dataset":
        report = run_in_dataset(
            config,
            load_corpus(args.corpus),
            load_split_spec(args.split),
            _load_store(args.store),
            out_dir=args.out_dir,
        )
        mean = report.primary.mean
    else:
        stores = args.train_store or []
        eval_stores = args.eval_store or []
        report = run_cross_dataset(
            config,
            [load_corpus(p) for p in args.train],
            [load_corpus(p) for p in args.eval],
            [_load_store(p if p != "-" else None) for p in stores] if stores else None,
            [_load_store(p if p != "-" else None) for p in eval_stores] if eval_stores else None,
            out_dir=args.out_dir,
        )
        mean = cross_dataset_summary(report)
        for res in report.eval_results:
            print(f"{res.corpus_id}: LEA F1 {res.mean.lea.f1:.4f}, CoNLL F1 {res.mean.conll_f1:.4f}")
    print(f"LEA F1 {mean.lea.f1:.4f}, CoNLL F1 {mean.conll_f1:.4f} ({len(config.seeds)} seeds) -> {args.out_dir}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cdcrkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="corpus composition and link-type counts")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out")
    p.add_argument("--tsv")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("split", help="materialize train/dev/test corpora")
    p.add_argument("--corpus", required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("sample", help="draw balanced training pairs")
    p.add_argument("--corpus", required=True)
    p.add_argument("--pair-factor", type=float, default=8.0,
                   help="coreference pair quota factor for the largest cluster")
    p.add_argument("--neg-ratio", type=int, default=8,
                   help="negatives per positive within each link type")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("featurize", help="extract pair features for a pair set")
    p.add_argument("--corpus", required=True)
    p.add_argument("--pairs", required=True)
    p.add_argument("--store", help="embedding sidecar (JSON-lines)")
    p.add_argument("--families", help="comma list; default all")
    p.add_argument("--exclude", help="comma list of feature names to drop")
    p.add_argument("--out", required=True, help=".bin for columnar binary, else JSON-lines")
    p.set_defaults(func=_cmd_featurize)

    p = sub.add_parser("select-features", help="recursive feature elimination")
    p.add_argument("--train-pairs", required=True)
    p.add_argument("--train-matrix", required=True)
    p.add_argument("--dev-pairs", required=True)
    p.add_argument("--dev-matrix", required=True)
    p.add_argument("--learner", default="gradient-boosted-trees")
    p.add_argument("--hyperparams", help="inline JSON or a path")
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_select_features)

    p = sub.add_parser("tune", help="budgeted classifier hyperparameter search")
    p.add_argument("--corpus", required=True, help="training corpus, used for fold construction")
    p.add_argument("--pairs", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--space", required=True, help="inline JSON or a path")
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--folds", type=int, default=6)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--learner", default="gradient-boosted-trees")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_tune)

    p = sub.add_parser("train", help="fit a pair classifier")
    p.add_argument("--pairs", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--learner", default="gradient-boosted-trees")
    p.add_argument("--hyperparams", help="inline JSON or a path")
    p.add_argument("--features", help="selection file from select-features")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="probabilities for every action pair of a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--store")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("cluster", help="agglomerate predicted probabilities")
    p.add_argument("--corpus", required=True)
    p.add_argument("--probs", required=True)
    p.add_argument("--linkage", default="average", choices=("single", "complete", "average"))
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--precluster", default="none", choices=("none", "gold", "kmeans"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("score", help="coreference metrics for a response clustering")
    p.add_argument("--corpus", required=True)
    p.add_argument("--response", help="clustering JSON")
    p.add_argument("--response-conll", help="read the response from a CoNLL file instead")
    p.add_argument("--within-doc", action="store_true")
    p.add_argument("--out")
    p.add_argument("--tsv")
    p.add_argument("--conll-dir", help="also write key/response CoNLL files here")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("baseline", help="lemma-family baselines")
    p.add_argument("variant", choices=("lemma", "lemma-delta", "lemma-time"))
    p.add_argument("--corpus", required=True)
    p.add_argument("--delta", type=float, help="document distance threshold (lemma-delta)")
    p.add_argument("--hours", type=float, help="document distance threshold (lemma-time)")
    p.add_argument("--tune-on", help="training corpus for threshold tuning")
    p.add_argument("--out", required=True)
    p.add_argument("--score", help="write the metric report here")
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("mask", help="replace event components with dummy tokens")
    p.add_argument("--corpus", required=True)
    p.add_argument("--components", required=True,
                   help="comma list of action,participants,time,location,publish_date")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_mask)

    p = sub.add_parser("experiment", help="end-to-end runs")
    p.add_argument("mode", choices=("in-dataset", "cross-dataset"))
    p.add_argument("--config", required=True)
    p.add_argument("--corpus", help="in-dataset corpus")
    p.add_argument("--split", help="in-dataset split spec")
    p.add_argument("--store", help="in-dataset embedding sidecar")
    p.add_argument("--train", nargs="+", help="cross-dataset training corpora")
    p.add_argument("--eval", nargs="+", help="cross-dataset evaluation corpora")
    p.add_argument("--train-store", nargs="+", help="sidecars aligned with --train ('-' for none)")
    p.add_argument("--eval-store", nargs="+", help="sidecars aligned with --eval ('-' for none)")
    p.add_argument("--seed", type=int, help="override the config's sampler seed and model seeds")
    p.add_argument("--precluster", choices=("none", "gold", "kmeans"))
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "experiment":
        if args.mode == "in-dataset" and not (args.corpus and args.split):
            raise SystemExit("experiment in-dataset needs --corpus and --split")
        if args.mode == "cross-dataset" and not (args.train and args.eval):
            raise SystemExit("experiment cross-dataset needs --train and --eval")
    if args.command == "score" and not args.response and not args.response_conll:
        raise SystemExit("score needs --response or --response-conll")
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
