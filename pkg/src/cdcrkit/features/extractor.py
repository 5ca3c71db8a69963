"""Pair feature extraction: the full catalog under one fixed name order.

Every pair in a run gets the identical feature set; a feature that cannot be
computed is carried as (0.0, present=False). All pair functions are symmetric
in their arguments. Matrices serialize to JSON-lines and to a columnar binary
with f32 values plus a presence bitmap.
"""
from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..corpus import Corpus
from .context import ContextResolver, MentionContext
from .embedding import VectorStore, embedding_feature_names, embedding_features
from .spatial import spatial_feature_names, spatial_features
from .strings import string_features
from .temporal import temporal_feature_names, temporal_features
from .tfidf import TfIdfModel, sparse_cosine

STRING_FEATURES = (
    "is-surface-form-identical",
    "is-lemma-identical",
    "surface-form-mlipns-distance",
    "surface-form-levenshtein-distance",
)

TFIDF_FEATURES = (
    "document-similarity",
    "surrounding-sentence-similarity",
    "sentence-context-similarity",
)

FAMILIES = ("strings", "tfidf", "temporal", "spatial", "embeddings")


def family_feature_names(family: str) -> tuple[str, ...]:
    if family == "strings":
        return STRING_FEATURES
    if family == "tfidf":
        return TFIDF_FEATURES
    if family == "temporal":
        return tuple(temporal_feature_names())
    if family == "spatial":
        return tuple(spatial_feature_names())
    if family == "embeddings":
        return tuple(embedding_feature_names())
    raise ValueError(f"unknown feature family {family!r}")


def all_feature_names() -> tuple[str, ...]:
    return tuple(n for fam in FAMILIES for n in family_feature_names(fam))


@dataclass
class FeatureMatrix:
    """Aligned pair refs, values (absent cells hold 0) and presence flags."""

    pairs: tuple[tuple[str, str], ...]
    names: tuple[str, ...]
    values: np.ndarray
    present: np.ndarray

    def __post_init__(self):
        n, f = len(self.pairs), len(self.names)
        if self.values.shape != (n, f) or self.present.shape != (n, f):
            raise ValueError("matrix shapes do not match pairs / names")

    def select(self, names: Sequence[str]) -> "FeatureMatrix":
        idx = [self.names.index(n) for n in names]
        return FeatureMatrix(
            pairs=self.pairs,
            names=tuple(names),
            values=self.values[:, idx],
            present=self.present[:, idx],
        )


def tfidf_pair_features(ctx_a: MentionContext, ctx_b: MentionContext) -> dict:
    return {
        "document-similarity": (sparse_cosine(ctx_a.tfidf_document, ctx_b.tfidf_document), True),
        "surrounding-sentence-similarity": (sparse_cosine(ctx_a.tfidf_sentence, ctx_b.tfidf_sentence), True),
        "sentence-context-similarity": (sparse_cosine(ctx_a.tfidf_context, ctx_b.tfidf_context), True),
    }


class PairFeatureExtractor:
    """Feature extraction over one corpus (plus optional embedding sidecar).

    The tf-idf model is fitted on the corpus' documents at construction; pass
    ``families``/``exclude`` to restrict the emitted catalog.
    """

    def __init__(
        self,
        corpus: Corpus,
        store: VectorStore | None = None,
        families: Sequence[str] | None = None,
        exclude: Iterable[str] = (),
    ):
        chosen = tuple(families) if families is not None else FAMILIES
        unknown = set(chosen) - set(FAMILIES)
        if unknown:
            raise ValueError(f"unknown feature families: {sorted(unknown)}")
        self.families = chosen
        excluded = set(exclude)
        names = [n for fam in chosen for n in family_feature_names(fam) if n not in excluded]
        leftovers = excluded - {n for fam in chosen for n in family_feature_names(fam)}
        if leftovers:
            raise ValueError(f"excluded names not in the catalog: {sorted(leftovers)}")
        self.names: tuple[str, ...] = tuple(names)
        docs_tokens = [[t for s in d.sentences for t in s] for d in corpus.documents]
        self.tfidf = TfIdfModel(docs_tokens)
        self.resolver = ContextResolver(corpus, self.tfidf, store)
        self._cache: dict[str, MentionContext] = {}

    def _context(self, ref: str) -> MentionContext:
        ctx = self._cache.get(ref)
        if ctx is None:
            ctx = self.resolver.context(ref)
            self._cache[ref] = ctx
        return ctx

    def extract(self, ref_a: str, ref_b: str) -> dict[str, tuple[float, bool]]:
        ctx_a, ctx_b = self._context(ref_a), self._context(ref_b)
        feats: dict[str, tuple[float, bool]] = {}
        if "strings" in self.families:
            feats.update(string_features(ctx_a.surface, ctx_b.surface, ctx_a.lemma, ctx_b.lemma))
        if "tfidf" in self.families:
            feats.update(tfidf_pair_features(ctx_a, ctx_b))
        if "temporal" in self.families:
            feats.update(temporal_features(ctx_a.times, ctx_b.times))
        if "spatial" in self.families:
            feats.update(spatial_features(ctx_a.locations, ctx_b.locations))
        if "embeddings" in self.families:
            feats.update(
                embedding_features(
                    ctx_a.vec_mention, ctx_b.vec_mention,
                    ctx_a.vec_sentence, ctx_b.vec_sentence,
                    ctx_a.vec_doc_start, ctx_b.vec_doc_start,
                    ctx_a.kb_sets, ctx_b.kb_sets,
                )
            )
        return {name: feats[name] for name in self.names}

    def matrix(self, pairs: Sequence[tuple[str, str]]) -> FeatureMatrix:
        n, f = len(pairs), len(self.names)
        values = np.zeros((n, f), dtype=float)
        present = np.zeros((n, f), dtype=bool)
        for i, (a, b) in enumerate(pairs):
            feats = self.extract(a, b)
            for j, name in enumerate(self.names):
                v, ok = feats[name]
                if ok:
                    values[i, j] = v
                    present[i, j] = True
        return FeatureMatrix(pairs=tuple(pairs), names=self.names, values=values, present=present)


def save_feature_matrix_jsonl(matrix: FeatureMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i, (a, b) in enumerate(matrix.pairs):
            feats = {
                name: (float(matrix.values[i, j]) if matrix.present[i, j] else None)
                for j, name in enumerate(matrix.names)
            }
            fh.write(json.dumps({"a": a, "b": b, "features": feats}) + "\n")


def load_feature_matrix_jsonl(path) -> FeatureMatrix:
    pairs, rows = [], []
    names: tuple[str, ...] | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            feats = obj["features"]
            if names is None:
                names = tuple(feats)
            elif tuple(feats) != names:
                raise ValueError(f"{path}:{lineno}: inconsistent feature names")
            pairs.append((obj["a"], obj["b"]))
            rows.append([feats[n] for n in names])
    if names is None:
        raise ValueError(f"{path}: empty feature file")
    values = np.zeros((len(rows), len(names)))
    present = np.zeros((len(rows), len(names)), dtype=bool)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v is not None:
                values[i, j] = float(v)
                present[i, j] = True
    return FeatureMatrix(pairs=tuple(pairs), names=names, values=values, present=present)


_MAGIC = b"CFMX"


def save_feature_matrix_binary(matrix: FeatureMatrix, path) -> None:
    header = json.dumps(
        {"features": list(matrix.names), "pairs": [list(p) for p in matrix.pairs]}
    ).encode("utf-8")
    f = len(matrix.names)
    bitmap_len = (f + 7) // 8
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<BI", 1, len(header)))
        fh.write(header)
        for i in range(len(matrix.pairs)):
            fh.write(np.packbits(matrix.present[i]).tobytes().ljust(bitmap_len, b"\0"))
            fh.write(matrix.values[i].astype("<f4").tobytes())


def load_feature_matrix_binary(path) -> FeatureMatrix:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != _MAGIC:
        raise ValueError(f"{path}: not a feature matrix file")
    version, header_len = struct.unpack_from("<BI", blob, 4)
    if version != 1:
        raise ValueError(f"{path}: unsupported version {version}")
    offset = 9
    header = json.loads(blob[offset : offset + header_len].decode("utf-8"))
    offset += header_len
    names = tuple(header["features"])
    pairs = tuple((a, b) for a, b in header["pairs"])
    f = len(names)
    bitmap_len = (f + 7) // 8
    row_len = bitmap_len + 4 * f
    values = np.zeros((len(pairs), f))
    present = np.zeros((len(pairs), f), dtype=bool)
    for i in range(len(pairs)):
        start = offset + i * row_len
        bits = np.unpackbits(np.frombuffer(blob, dtype=np.uint8, count=bitmap_len, offset=start))
        present[i] = bits[:f].astype(bool)
        values[i] = np.frombuffer(blob, dtype="<f4", count=f, offset=start + bitmap_len)
    values[~present] = 0.0
    return FeatureMatrix(pairs=pairs, names=names, values=values, present=present)
