"""Mention-pair sampling for classifier training.

Coreferring pairs are undersampled per cluster: large clusters contribute far
fewer than their quadratic pair count, controlled by a factor that interpolates
through the corpus' cluster-size distribution. Non-coreferring pairs are drawn
per link type, capped at a fixed multiple of that type's positives.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .corpus import Corpus, LinkType, LINK_TYPE_ORDER, link_type


@dataclass(frozen=True)
class SamplerConfig:
    largest_cluster_factor: float = 8.0
    negatives_per_positive: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.largest_cluster_factor <= 0:
            raise ValueError("largest_cluster_factor must be positive")
        if self.negatives_per_positive < 1:
            raise ValueError("negatives_per_positive must be a positive integer")


@dataclass(frozen=True)
class MentionPair:
    a: str
    b: str
    link_type: LinkType
    label: int


@dataclass
class PairSet:
    corpus_id: str
    config: SamplerConfig
    pairs: tuple[MentionPair, ...]
    achieved: dict[LinkType, dict[str, int]] = field(default_factory=dict)

    def positives(self) -> tuple[MentionPair, ...]:
        return tuple(p for p in self.pairs if p.label == 1)

    def negatives(self) -> tuple[MentionPair, ...]:
        return tuple(p for p in self.pairs if p.label == 0)


def cluster_size_cdf(sizes) -> dict[int, float]:
    """For each distinct cluster size, the fraction of all mentions that live in
    clusters of that size or smaller."""
    sizes = list(sizes)
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError("cluster sizes must be positive integers")
    total = sum(sizes)
    out = {}
    acc = 0
    for s in sorted(set(sizes)):
        acc += sum(x for x in sizes if x == s)
        out[s] = acc / total
    return out


def undersample_factor(size: int, largest_cluster_factor: float, cdf_value: float) -> float:
    """Per-cluster multiplier on (size - 1); equals the configured factor for the
    largest cluster (cdf 1) and grows toward smaller clusters."""
    if size < 1:
        raise ValueError("cluster size must be >= 1")
    if not 0.0 < cdf_value <= 1.0:
        raise ValueError("cdf value must lie in (0, 1]")
    return largest_cluster_factor + size ** (1.0 - cdf_value) - 1.0


def coref_pair_quota(size: int, largest_cluster_factor: float, cdf_value: float) -> int:
    """Number of coreferring pairs to draw from a cluster of the given size."""
    if size < 2:
        return 0
    factor = min(undersample_factor(size, largest_cluster_factor, cdf_value), size / 2.0)
    return math.ceil((size - 1) * factor)


def _draw_pairs(refs: list[str], count: int, rng: np.random.Generator) -> list[tuple[str, str]]:
    """Uniform sample without replacement from the unordered pairs over refs."""
    all_pairs = list(combinations(refs, 2))
    if count >= len(all_pairs):
        return all_pairs
    idx = rng.choice(len(all_pairs), size=count, replace=False)
    return [all_pairs[i] for i in sorted(idx)]


def sample_pairs(corpus: Corpus, config: SamplerConfig) -> PairSet:
    """Draw training pairs from gold clusters.

    Positives: per explicit cluster of size m, ``coref_pair_quota`` pairs drawn
    uniformly without replacement. Negatives: per link type, up to
    ``negatives_per_positive`` times that type's positive count, drawn uniformly
    from the non-coreferring pairs of that type. Deterministic given the seed.
    """
    rng = np.random.default_rng(config.seed)
    clusters = corpus.explicit_clusters
    sizes = [len(refs) for refs in clusters.values()]
    positives: list[MentionPair] = []
    pos_by_type = {lt: 0 for lt in LINK_TYPE_ORDER}
    if any(s >= 2 for s in sizes):
        cdf = cluster_size_cdf(sizes)
        for cid in sorted(clusters):
            refs = list(clusters[cid])
            quota = coref_pair_quota(len(refs), config.largest_cluster_factor, cdf[len(refs)])
            for a, b in _draw_pairs(refs, quota, rng):
                lt = link_type(corpus, a, b)
                positives.append(MentionPair(a=a, b=b, link_type=lt, label=1))
                pos_by_type[lt] += 1

    # Negative pools: all non-coreferring action pairs, bucketed by link type.
    # cluster_id None never corefers with anything, including another None.
    pools: dict[LinkType, list[tuple[str, str]]] = {lt: [] for lt in LINK_TYPE_ORDER}
    refs = corpus.action_refs
    cluster_of = {}
    for ref in refs:
        _, m = corpus.resolve(ref)
        cluster_of[ref] = m.cluster_id
    for a, b in combinations(refs, 2):
        ca, cb = cluster_of[a], cluster_of[b]
        if ca is not None and ca == cb:
            continue
        pools[link_type(corpus, a, b)].append((a, b))

    negatives: list[MentionPair] = []
    achieved: dict[LinkType, dict[str, int]] = {}
    for lt in LINK_TYPE_ORDER:
        cap = config.negatives_per_positive * pos_by_type[lt]
        pool = pools[lt]
        # Targets sit at the per-type cap, which already raises each type to at
        # least the previous type's count whenever positives are nondecreasing
        # and the pool allows. The cap is never exceeded.
        target = min(cap, len(pool))
        take = pool if target >= len(pool) else [
            pool[i] for i in sorted(rng.choice(len(pool), size=target, replace=False))
        ]
        for a, b in take:
            negatives.append(MentionPair(a=a, b=b, link_type=lt, label=0))
        achieved[lt] = {"positives": pos_by_type[lt], "negatives": len(take), "pool": len(pool)}

    return PairSet(
        corpus_id=corpus.corpus_id,
        config=config,
        pairs=tuple(positives + negatives),
        achieved=achieved,
    )


def save_pair_set(pair_set: PairSet, path) -> None:
    """JSON-lines: one header record, then one record per pair."""
    header = {
        "corpus_id": pair_set.corpus_id,
        "config": {
            "largest_cluster_factor": pair_set.config.largest_cluster_factor,
            "negatives_per_positive": pair_set.config.negatives_per_positive,
            "seed": pair_set.config.seed,
        },
        "achieved": {
            lt.value: pair_set.achieved.get(lt, {}) for lt in LINK_TYPE_ORDER
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header) + "\n")
        for p in pair_set.pairs:
            fh.write(json.dumps({"a": p.a, "b": p.b, "link_type": p.link_type.value, "label": p.label}) + "\n")


def load_pair_set(path) -> PairSet:
    with open(path, encoding="utf-8") as fh:
        lines = [line for line in fh if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty pair file")
    header = json.loads(lines[0])
    cfg = header.get("config", {})
    config = SamplerConfig(
        largest_cluster_factor=cfg.get("largest_cluster_factor", 8.0),
        negatives_per_positive=cfg.get("negatives_per_positive", 8),
        seed=cfg.get("seed", 0),
    )
    by_value = {lt.value: lt for lt in LinkType}
    pairs = []
    for line in lines[1:]:
        obj = json.loads(line)
        pairs.append(MentionPair(a=obj["a"], b=obj["b"], link_type=by_value[obj["link_type"]], label=int(obj["label"])))
    achieved = {
        by_value[k]: v for k, v in header.get("achieved", {}).items() if k in by_value
    }
    return PairSet(corpus_id=header.get("corpus_id", ""), config=config, pairs=tuple(pairs), achieved=achieved)
