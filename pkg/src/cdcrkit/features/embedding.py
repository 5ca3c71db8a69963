"""Embedding-based similarities from a sidecar vector store.

The store maps string keys to vectors of one shared dimensionality:
``<doc_id>/<mention_id>`` for mention vectors, ``<doc_id>/sent/<i>`` for
sentence vectors, ``kb/<kb_id>`` for knowledge-base entities. Similarity is
cosine with negative values clamped to 0 so every feature stays in [0, 1].
Knowledge-base regions compare vector sets and emit mean/variance/min/max of
all pairwise similarities.
"""
from __future__ import annotations

import json
from typing import Sequence

import numpy as np

KB_REGIONS = (
    "linked-action",
    "semantic-role-args",
    "surrounding-sentence",
    "sentence-context",
    "doc-start",
)

KB_AGGREGATES = ("mean", "variance", "min", "max")


class VectorStoreError(Exception):
    pass


class VectorStore:
    """In-memory key -> vector map with a single enforced dimension."""

    def __init__(self, vectors: dict[str, np.ndarray] | None = None):
        self.vectors: dict[str, np.ndarray] = {}
        self.dim: int | None = None
        for key, vec in (vectors or {}).items():
            self.put(key, vec)

    def put(self, key: str, vector) -> None:
        vec = np.asarray(vector, dtype=np.float32)
        if vec.ndim != 1 or vec.size == 0:
            raise VectorStoreError(f"key {key!r}: vector must be a non-empty 1-d array")
        if self.dim is None:
            self.dim = int(vec.size)
        elif vec.size != self.dim:
            raise VectorStoreError(f"key {key!r}: dimension {vec.size} != store dimension {self.dim}")
        self.vectors[key] = vec

    def get(self, key: str) -> np.ndarray | None:
        return self.vectors.get(key)

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, key: str) -> bool:
        return key in self.vectors


def load_vector_store(path) -> VectorStore:
    """Read a JSON-lines sidecar of {"key": ..., "vector": [...]} records."""
    store = VectorStore()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise VectorStoreError(f"{path}:{lineno}: not valid JSON ({exc})") from None
            if not isinstance(obj, dict) or "key" not in obj or "vector" not in obj:
                raise VectorStoreError(f"{path}:{lineno}: record needs 'key' and 'vector'")
            try:
                store.put(obj["key"], obj["vector"])
            except VectorStoreError as exc:
                raise VectorStoreError(f"{path}:{lineno}: {exc}") from None
    return store


def save_vector_store(store: VectorStore, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key in sorted(store.vectors):
            vec = [float(x) for x in store.vectors[key]]
            fh.write(json.dumps({"key": key, "vector": vec}) + "\n")


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine clamped to [0, 1]; orthogonal vectors score exactly 0."""
    na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(min(max(float(np.dot(a, b)) / (na * nb), 0.0), 1.0))


def set_similarities(set_a: Sequence[np.ndarray], set_b: Sequence[np.ndarray]) -> dict[str, float] | None:
    """mean/variance/min/max of all pairwise similarities; None when a side is empty."""
    if not set_a or not set_b:
        return None
    sims = [cosine_similarity(a, b) for a in set_a for b in set_b]
    arr = np.asarray(sims)
    return {
        "mean": float(arr.mean()),
        "variance": float(arr.var()),
        "min": float(arr.min()),
        "max": float(arr.max()),
    }


def embedding_feature_names() -> list[str]:
    names = ["action-mention", "surrounding-sentence", "doc-start"]
    for region in KB_REGIONS:
        for agg in KB_AGGREGATES:
            names.append(f"{region}-{agg}")
    return names


def embedding_features(
    vec_a: np.ndarray | None,
    vec_b: np.ndarray | None,
    sent_a: np.ndarray | None,
    sent_b: np.ndarray | None,
    start_a: np.ndarray | None,
    start_b: np.ndarray | None,
    kb_a: dict[str, list[np.ndarray]],
    kb_b: dict[str, list[np.ndarray]],
) -> dict:
    out = {}

    def single(name, a, b):
        out[name] = (cosine_similarity(a, b), True) if a is not None and b is not None else (0.0, False)

    single("action-mention", vec_a, vec_b)
    single("surrounding-sentence", sent_a, sent_b)
    single("doc-start", start_a, start_b)
    for region in KB_REGIONS:
        stats = set_similarities(kb_a.get(region, []), kb_b.get(region, []))
        for agg in KB_AGGREGATES:
            name = f"{region}-{agg}"
            out[name] = (0.0, False) if stats is None else (stats[agg], True)
    return out
