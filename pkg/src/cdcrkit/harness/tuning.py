"""Budgeted random search and cross-validation fold construction.

Search spaces map parameter names to either a list of candidate values or a
{"low": .., "high": .., "log": bool, "int": bool} range. Fully categorical
spaces whose grid fits in the budget are swept exhaustively, which makes small
grids deterministic regardless of sampling luck; otherwise trials are sampled
with a seeded generator. Ties keep the earliest trial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable

import numpy as np

from ..corpus import Corpus


@dataclass
class TuneResult:
    best_params: dict
    best_score: float
    trials: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"best_params": self.best_params, "best_score": self.best_score, "trials": self.trials}


def _is_range(spec) -> bool:
    return isinstance(spec, dict) and "low" in spec and "high" in spec


def grid_size(space: dict) -> int | None:
    """Number of grid points, or None when any dimension is continuous."""
    total = 1
    for spec in space.values():
        if _is_range(spec):
            return None
        total *= len(spec)
    return total


def enumerate_grid(space: dict) -> Iterable[dict]:
    keys = list(space)
    for combo in product(*(space[k] for k in keys)):
        yield dict(zip(keys, combo))


def _sample(space: dict, rng: np.random.Generator) -> dict:
    params = {}
    for key, spec in space.items():
        if _is_range(spec):
            lo, hi = float(spec["low"]), float(spec["high"])
            if spec.get("log"):
                value = math.exp(rng.uniform(math.log(lo), math.log(hi)))
            else:
                value = rng.uniform(lo, hi)
            params[key] = int(round(value)) if spec.get("int") else float(value)
        else:
            params[key] = spec[int(rng.integers(len(spec)))]
    return params


def tune(
    space: dict,
    objective: Callable[[dict], float],
    budget: int,
    seed: int = 0,
) -> TuneResult:
    """Maximize the objective over the space within a trial budget."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if not space:
        score = float(objective({}))
        return TuneResult(best_params={}, best_score=score, trials=[{"params": {}, "score": score}])
    size = grid_size(space)
    if size is not None and size <= budget:
        candidates = list(enumerate_grid(space))
    else:
        rng = np.random.default_rng(seed)
        candidates = [_sample(space, rng) for _ in range(budget)]
    best_params, best_score = None, -np.inf
    trials = []
    for params in candidates:
        score = float(objective(params))
        trials.append({"params": params, "score": score})
        if score > best_score:
            best_params, best_score = params, score
    return TuneResult(best_params=best_params, best_score=best_score, trials=trials)


def fold_grouping(corpus: Corpus) -> str:
    """Topic-level folds when the corpus has several topics, else subtopic-level."""
    topics = {d.topic for d in corpus.documents}
    if len(topics) > 1:
        return "topic"
    subtopics = {(d.topic, d.subtopic) for d in corpus.documents}
    return "subtopic" if len(subtopics) > 1 else "document"


def make_folds(
    corpus: Corpus, folds: int, repeats: int, seed: int
) -> list[tuple[list[str], list[str]]]:
    """Repeated k-fold assignments of documents, partitioned by topic or
    subtopic group so one group never spans folds. Returns (train_doc_ids,
    eval_doc_ids) per fold and repetition."""
    if folds < 2:
        raise ValueError("folds must be >= 2")
    level = fold_grouping(corpus)
    groups: dict[object, list[str]] = {}
    for d in corpus.documents:
        if level == "topic":
            key = d.topic
        elif level == "subtopic":
            key = (d.topic, d.subtopic)
        else:
            key = d.doc_id
        groups.setdefault(key, []).append(d.doc_id)
    keys = sorted(groups)
    k = min(folds, len(keys))
    if k < 2:
        raise ValueError("need at least two groups to build folds")
    out = []
    for rep in range(repeats):
        rng = np.random.default_rng([seed, rep])
        order = [keys[i] for i in rng.permutation(len(keys))]
        buckets: list[list[str]] = [[] for _ in range(k)]
        for i, key in enumerate(order):
            buckets[i % k].extend(groups[key])
        for i in range(k):
            eval_ids = sorted(buckets[i])
            train_ids = sorted(d for j, b in enumerate(buckets) if j != i for d in b)
            out.append((train_ids, eval_ids))
    return out
