"""Clustering: distance matrices, agglomerative merging, closures, preclusters.

A Clustering is a partition of string ids (mentions or documents) into disjoint
clusters. Agglomerative merging works on an explicit distance matrix with
single/complete/average linkage via the Lance-Williams updates; mention-pair
probabilities become distances as 1 - p.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .corpus import Corpus

LINKAGES = ("single", "complete", "average")
CRITERIA = ("distance", "maxclust")


class Clustering:
    """Immutable partition of ids into disjoint, non-empty clusters."""

    def __init__(self, clusters: Iterable[Iterable[str]]):
        sets = tuple(frozenset(c) for c in clusters)
        if any(not c for c in sets):
            raise ValueError("clusters must be non-empty")
        total = sum(len(c) for c in sets)
        self._elements = frozenset().union(*sets) if sets else frozenset()
        if total != len(self._elements):
            raise ValueError("clusters must be disjoint")
        # Canonical order keeps serialization and iteration deterministic.
        self.clusters = tuple(sorted(sets, key=lambda c: min(c)))

    def __iter__(self):
        return iter(self.clusters)

    def __len__(self):
        return len(self.clusters)

    def __eq__(self, other):
        return isinstance(other, Clustering) and set(self.clusters) == set(other.clusters)

    def __hash__(self):
        return hash(frozenset(self.clusters))

    def __repr__(self):
        return f"Clustering({len(self.clusters)} clusters, {len(self._elements)} elements)"

    @property
    def elements(self) -> frozenset[str]:
        return self._elements

    def assignment(self) -> dict[str, int]:
        return {e: i for i, c in enumerate(self.clusters) for e in c}

    @classmethod
    def from_assignment(cls, labels: dict[str, int] | Sequence[int], ids: Sequence[str] | None = None) -> "Clustering":
        if ids is not None:
            labels = {i: l for i, l in zip(ids, labels)}
        groups: dict[int, set[str]] = {}
        for e, l in labels.items():
            groups.setdefault(l, set()).add(e)
        return cls(groups.values())

    def to_json(self) -> dict:
        return {f"c{i}": sorted(c) for i, c in enumerate(self.clusters)}

    @classmethod
    def from_json(cls, obj: dict) -> "Clustering":
        return cls(obj.values())


def save_clustering(clustering: Clustering, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(clustering.to_json(), fh, indent=1)
        fh.write("\n")


def load_clustering(path) -> Clustering:
    with open(path, encoding="utf-8") as fh:
        return Clustering.from_json(json.load(fh))


class UnionFind:
    def __init__(self, elements: Iterable[str]):
        self.parent = {e: e for e in elements}
        self.rank = {e: 0 for e in self.parent}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1

    def components(self) -> Clustering:
        groups: dict[str, set[str]] = {}
        for e in self.parent:
            groups.setdefault(self.find(e), set()).add(e)
        return Clustering(groups.values())


def transitive_closure(pairs: Iterable[tuple[str, str]], universe: Iterable[str]) -> Clustering:
    """Connected components of the pair graph over the given universe;
    untouched elements stay singletons."""
    uf = UnionFind(universe)
    for a, b in pairs:
        if a not in uf.parent or b not in uf.parent:
            raise KeyError(f"pair ({a!r}, {b!r}) references an element outside the universe")
        uf.union(a, b)
    return uf.components()


@dataclass
class DistanceMatrix:
    ids: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        n = len(self.ids)
        v = np.asarray(self.values, dtype=float)
        if v.shape != (n, n):
            raise ValueError(f"distance matrix shape {v.shape} does not match {n} ids")
        if not np.allclose(np.diag(v), 0.0, atol=1e-12):
            raise ValueError("distance matrix diagonal must be zero")
        if not np.allclose(v, v.T, atol=1e-9):
            raise ValueError("distance matrix must be symmetric")
        if (v < -1e-12).any():
            raise ValueError("distances must be non-negative")
        self.values = v

    def get(self, a: str, b: str) -> float:
        i, j = self.ids.index(a), self.ids.index(b)
        return float(self.values[i, j])


@dataclass(frozen=True)
class ClusterConfig:
    linkage: str = "average"
    criterion: str = "distance"
    threshold: float = 0.5
    maxclust: int | None = None

    def __post_init__(self):
        if self.linkage not in LINKAGES:
            raise ValueError(f"linkage {self.linkage!r} not one of {LINKAGES}")
        if self.criterion not in CRITERIA:
            raise ValueError(f"criterion {self.criterion!r} not one of {CRITERIA}")
        if self.criterion == "maxclust" and (self.maxclust is None or self.maxclust < 1):
            raise ValueError("maxclust criterion needs maxclust >= 1")


def agglomerative(matrix: DistanceMatrix, config: ClusterConfig) -> Clustering:
    """Bottom-up merging under Lance-Williams linkage updates.

    ``distance`` criterion merges while the closest pair of clusters sits at or
    below the threshold (inclusive); ``maxclust`` merges until that many
    clusters remain.
    """
    n = len(matrix.ids)
    if n == 0:
        raise ValueError("cannot cluster zero elements")
    if config.criterion == "maxclust" and config.maxclust > n:
        raise ValueError(f"maxclust {config.maxclust} exceeds element count {n}")
    target = config.maxclust if config.criterion == "maxclust" else 1
    work = matrix.values.astype(float).copy()
    np.fill_diagonal(work, np.inf)
    active = list(range(n))
    members: dict[int, set[str]] = {i: {matrix.ids[i]} for i in range(n)}
    sizes = {i: 1 for i in range(n)}
    while len(active) > max(target, 1):
        sub = work[np.ix_(active, active)]
        flat = int(np.argmin(sub))
        bi, bj = divmod(flat, len(active))
        if bi == bj:
            break
        best = sub[bi, bj]
        if config.criterion == "distance" and best > config.threshold:
            break
        i, j = active[bi], active[bj]
        if i > j:
            i, j = j, i
        # Lance-Williams update of d(i+j, k) for the three supported linkages.
        for k in active:
            if k in (i, j):
                continue
            dik, djk = work[i, k], work[j, k]
            if config.linkage == "single":
                d = min(dik, djk)
            elif config.linkage == "complete":
                d = max(dik, djk)
            else:
                d = (sizes[i] * dik + sizes[j] * djk) / (sizes[i] + sizes[j])
            work[i, k] = work[k, i] = d
        members[i] |= members[j]
        sizes[i] += sizes[j]
        del members[j], sizes[j]
        active.remove(j)
        work[j, :] = np.inf
        work[:, j] = np.inf
    return Clustering(members.values())


def probabilities_to_distances(prob: np.ndarray) -> np.ndarray:
    """Coreference probability -> distance (1 - p), clipped into [0, 1]."""
    return np.clip(1.0 - np.asarray(prob, dtype=float), 0.0, 1.0)


def gold_document_preclusters(corpus: Corpus) -> Clustering:
    """Documents connected whenever a gold cluster spans them; closure of that graph."""
    uf = UnionFind(d.doc_id for d in corpus.documents)
    for refs in corpus.explicit_clusters.values():
        docs = sorted({ref.rsplit("/", 1)[0] for ref in refs})
        for other in docs[1:]:
            uf.union(docs[0], other)
    return uf.components()


def _kmeans_pp_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]))
    first = int(rng.integers(n))
    centers[0] = x[first]
    d2 = ((x - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centers[c] = x[idx]
        d2 = np.minimum(d2, ((x - centers[c]) ** 2).sum(axis=1))
    return centers


def _lloyd(x: np.ndarray, centers: np.ndarray, max_iter: int, rng: np.random.Generator):
    k = centers.shape[0]
    labels = np.zeros(x.shape[0], dtype=int)
    for _ in range(max_iter):
        d2 = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = d2.argmin(axis=1)
        for c in range(k):
            mask = new_labels == c
            if mask.any():
                centers[c] = x[mask].mean(axis=0)
            else:
                # Re-seed an emptied cluster at the point farthest from its center.
                far = int(d2.min(axis=1).argmax())
                centers[c] = x[far]
                new_labels[far] = c
        if (new_labels == labels).all():
            labels = new_labels
            break
        labels = new_labels
    inertia = float(((x - centers[labels]) ** 2).sum())
    return labels, inertia


def kmeans(x: np.ndarray, k: int, seed: int, restarts: int = 10, max_iter: int = 100) -> np.ndarray:
    """k-means with k-means++ seeding; best inertia over restarts; deterministic."""
    best_labels, best_inertia = None, np.inf
    for r in range(restarts):
        rng = np.random.default_rng([seed, k, r])
        centers = _kmeans_pp_init(x, k, rng)
        labels, inertia = _lloyd(x, centers.copy(), max_iter, rng)
        if inertia < best_inertia - 1e-12:
            best_labels, best_inertia = labels, inertia
    return best_labels


def silhouette(clustering: Clustering, distance: Callable[[str, str], float]) -> float:
    """Mean silhouette over elements; members of singleton clusters score 0."""
    if len(clustering) < 2:
        raise ValueError("silhouette needs at least two clusters")
    clusters = [sorted(c) for c in clustering.clusters]
    scores = []
    for ci, cluster in enumerate(clusters):
        for e in cluster:
            if len(cluster) == 1:
                scores.append(0.0)
                continue
            a = float(np.mean([distance(e, o) for o in cluster if o != e]))
            b = min(
                float(np.mean([distance(e, o) for o in other]))
                for cj, other in enumerate(clusters)
                if cj != ci
            )
            denom = max(a, b)
            scores.append(0.0 if denom == 0 else (b - a) / denom)
    return float(np.mean(scores))


def kmeans_document_preclusters(
    doc_ids: Sequence[str],
    vectors: np.ndarray,
    seed: int,
    max_k: int | None = None,
) -> Clustering:
    """Pick k in [2, n-1] by cosine silhouette over L2-normalized vectors;
    smallest k wins ties; degenerate geometry falls back to a single cluster."""
    n = len(doc_ids)
    if n < 3:
        raise ValueError("k-means preclustering needs at least 3 documents")
    x = np.asarray(vectors, dtype=float)
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    x = x / norms
    cos_dist = np.clip(1.0 - x @ x.T, 0.0, None)
    idx = {d: i for i, d in enumerate(doc_ids)}

    def dist(a: str, b: str) -> float:
        return float(cos_dist[idx[a], idx[b]])

    upper = n - 1 if max_k is None else min(max_k, n - 1)
    best_k, best_score, best_labels = None, -np.inf, None
    for k in range(2, upper + 1):
        labels = kmeans(x, k, seed)
        if len(set(labels.tolist())) < 2:
            continue
        clustering = Clustering.from_assignment(labels.tolist(), ids=list(doc_ids))
        score = silhouette(clustering, dist)
        if score > best_score + 1e-12:
            best_k, best_score, best_labels = k, score, labels
    if best_labels is None or best_score <= 0.0:
        return Clustering([set(doc_ids)])
    return Clustering.from_assignment(best_labels.tolist(), ids=list(doc_ids))
