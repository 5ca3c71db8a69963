"""Deterministic baselines: shared-lemma clustering, optionally gated by
document preclustering on tf-idf similarity or on temporal proximity."""
from __future__ import annotations

import numpy as np

from ..cluster import Clustering, ClusterConfig, DistanceMatrix, agglomerative
from ..corpus import Corpus
from ..features.tfidf import TfIdfModel, sparse_cosine
from ..scoring import cross_document_score

DELTA_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))
TIME_GRID_HOURS = (6.0, 12.0, 24.0, 48.0, 96.0, 168.0, 336.0, 672.0)


def _mention_lemma(corpus: Corpus, ref: str) -> str:
    doc, m = corpus.resolve(ref)
    if m.lemma is None:
        raise ValueError(f"mention {ref} has no lemma; lemma baselines need lemmatized actions")
    return m.lemma.casefold()


def _lemma_groups(corpus: Corpus, doc_cluster_of: dict[str, int] | None = None) -> Clustering:
    """Cluster actions by case-folded lemma, split further by document cluster
    when one is given."""
    groups: dict[tuple, set[str]] = {}
    for ref in corpus.action_refs:
        lemma = _mention_lemma(corpus, ref)
        doc_id = ref.rsplit("/", 1)[0]
        key = (lemma,) if doc_cluster_of is None else (lemma, doc_cluster_of[doc_id])
        groups.setdefault(key, set()).add(ref)
    return Clustering(groups.values())


def lemma_baseline(corpus: Corpus) -> Clustering:
    """Identical case-folded lemma means coreferent, corpus-wide."""
    return _lemma_groups(corpus)


def document_tfidf_distances(corpus: Corpus) -> DistanceMatrix:
    docs_tokens = [[t for s in d.sentences for t in s] for d in corpus.documents]
    tfidf = TfIdfModel(docs_tokens)
    vecs = [tfidf.vectorize(tokens) for tokens in docs_tokens]
    n = len(vecs)
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = 1.0 - sparse_cosine(vecs[i], vecs[j])
            dist[i, j] = dist[j, i] = d
    return DistanceMatrix(ids=tuple(d.doc_id for d in corpus.documents), values=dist)


def lemma_delta_baseline(corpus: Corpus, delta: float) -> Clustering:
    """Shared lemma within document clusters built by average-linkage
    agglomerative clustering of tf-idf document vectors at cosine distance
    threshold delta."""
    if len(corpus.documents) == 0:
        raise ValueError("empty corpus")
    doc_clusters = agglomerative(
        document_tfidf_distances(corpus),
        ClusterConfig(linkage="average", criterion="distance", threshold=delta),
    )
    doc_cluster_of = {d: i for i, c in enumerate(doc_clusters.clusters) for d in c}
    return _lemma_groups(corpus, doc_cluster_of)


def document_time_distances(corpus: Corpus) -> tuple[DistanceMatrix, list[str]]:
    """Hour distances between document dates (first time expression in document
    order, else the publish date). Documents with no date are left out and
    returned separately; they stay singleton document clusters."""
    dated, undated = [], []
    for d in corpus.documents:
        stamp = None
        timex = sorted(d.timex, key=lambda t: (t.sentence, t.token_span[0]))
        if timex:
            from ..corpus import parse_timestamp

            stamp = parse_timestamp(timex[0].value)
        elif d.publish_date is not None:
            stamp = d.publish_date
        if stamp is None:
            undated.append(d.doc_id)
        else:
            dated.append((d.doc_id, stamp))
    n = len(dated)
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            hours = abs((dated[i][1] - dated[j][1]).total_seconds()) / 3600.0
            dist[i, j] = dist[j, i] = hours
    return DistanceMatrix(ids=tuple(d for d, _ in dated), values=dist), undated


def lemma_time_baseline(corpus: Corpus, delta_hours: float) -> Clustering:
    """Shared lemma within document clusters built from temporal proximity,
    merging documents whose dates sit within delta_hours (average linkage)."""
    matrix, undated = document_time_distances(corpus)
    doc_cluster_of: dict[str, int] = {}
    if len(matrix.ids) > 0:
        doc_clusters = agglomerative(
            matrix, ClusterConfig(linkage="average", criterion="distance", threshold=delta_hours)
        )
        doc_cluster_of = {d: i for i, c in enumerate(doc_clusters.clusters) for d in c}
    offset = len(doc_cluster_of)
    for i, doc_id in enumerate(undated):
        doc_cluster_of[doc_id] = offset + i
    return _lemma_groups(corpus, doc_cluster_of)


def tune_lemma_delta(train: Corpus, grid=DELTA_GRID) -> tuple[float, float]:
    """Pick the tf-idf distance threshold maximizing LEA F1 on the training
    corpus; ties go to the smaller threshold."""
    best_delta, best_f1 = None, -1.0
    for delta in grid:
        report = cross_document_score(train, lemma_delta_baseline(train, delta))
        if report.lea.f1 > best_f1 + 1e-12:
            best_delta, best_f1 = delta, report.lea.f1
    return best_delta, best_f1


def tune_lemma_time(train: Corpus, grid=TIME_GRID_HOURS) -> tuple[float, float]:
    best_delta, best_f1 = None, -1.0
    for delta in grid:
        report = cross_document_score(train, lemma_time_baseline(train, delta))
        if report.lea.f1 > best_f1 + 1e-12:
            best_delta, best_f1 = delta, report.lea.f1
    return best_delta, best_f1
