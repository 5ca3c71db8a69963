"""Term-frequency / inverse-document-frequency vectors over given tokens.

Tokens are lowercased but never re-split. Raw term counts are weighted by
idf = ln((1 + N) / (1 + df)) + 1 and the vector is L2-normalized, so cosines
of non-negative vectors land in [0, 1].
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence


class TfIdfModel:
    def __init__(self, documents: Sequence[Iterable[str]]):
        """Fit document frequencies on the token streams of the given documents."""
        self.n_documents = len(documents)
        df: dict[str, int] = {}
        for tokens in documents:
            for term in {t.lower() for t in tokens}:
                df[term] = df.get(term, 0) + 1
        self.df = df
        self._idf = {
            term: math.log((1 + self.n_documents) / (1 + count)) + 1.0 for term, count in df.items()
        }

    def idf(self, term: str) -> float:
        """Unseen terms get the maximal idf, ln(1 + N) + 1."""
        return self._idf.get(term.lower(), math.log(1 + self.n_documents) + 1.0)

    def vectorize(self, tokens: Iterable[str]) -> dict[str, float]:
        counts: dict[str, int] = {}
        for t in tokens:
            term = t.lower()
            counts[term] = counts.get(term, 0) + 1
        vec = {term: count * self.idf(term) for term, count in counts.items()}
        norm = math.sqrt(sum(w * w for w in vec.values()))
        if norm > 0:
            vec = {term: w / norm for term, w in vec.items()}
        return vec


def sparse_cosine(a: dict[str, float], b: dict[str, float]) -> float:
    if len(b) < len(a):
        a, b = b, a
    dot = sum(w * b.get(term, 0.0) for term, w in a.items())
    # Vectors are already L2-normalized; clip away float fuzz.
    return min(max(dot, 0.0), 1.0)
