"""Per-mention context resolution, computed once and reused across pairs.

For every action mention this resolves: a timestamp per temporal strategy, a
location entity link per spatial strategy, tf-idf vectors for the document /
surrounding sentence / 5-sentence context regions, and embedding lookups
(mention vector, sentence vectors, knowledge-base entity sets per region).

Resolution conventions: "nearest in sentence" minimizes the token distance
between span starts with ties toward the earlier span; "closest preceding"
takes the last candidate in document order before the mention's sentence;
"closest overall" falls through srl -> sentence -> closest preceding.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

import numpy as np

from ..corpus import Corpus, Document, EntityLink, Mention, TimexSpan, parse_timestamp
from .embedding import VectorStore
from .tfidf import TfIdfModel

CONTEXT_WINDOW = 2  # sentences on each side
DOC_START_SENTENCES = 3


def spans_overlap(sent_a: int, span_a: tuple[int, int], sent_b: int, span_b: tuple[int, int]) -> bool:
    return sent_a == sent_b and span_a[0] < span_b[1] and span_b[0] < span_a[1]


def _nearest_in_sentence(items, mention: Mention):
    """items: (sentence, span, payload); nearest span start in the mention's sentence."""
    best = None
    for sent, span, payload in items:
        if sent != mention.sentence:
            continue
        key = (abs(span[0] - mention.token_span[0]), span[0])
        if best is None or key < best[0]:
            best = (key, payload)
    return None if best is None else best[1]


def _closest_preceding(items, mention: Mention):
    best = None
    for sent, span, payload in items:
        if sent >= mention.sentence:
            continue
        key = (sent, span[0])
        if best is None or key > best[0]:
            best = (key, payload)
    return None if best is None else best[1]


def _argument_spans(doc: Document, mention: Mention, roles: tuple[str, ...]) -> list[tuple[int, tuple[int, int]]]:
    """Spans attached to the mention: anchored components of the given kinds,
    plus matching-role arguments of frames whose predicate overlaps it."""
    spans = []
    for comp in doc.components_by_anchor.get(mention.mention_id, ()):
        if comp.kind in roles:
            spans.append((comp.sentence, comp.token_span))
    for frame in doc.srl:
        if spans_overlap(frame.sentence, frame.token_span, mention.sentence, mention.token_span):
            for arg in frame.args:
                if arg.role in roles:
                    spans.append((arg.sentence, arg.token_span))
    spans.sort(key=lambda x: (x[0], x[1][0]))
    return spans


def _resolve_via_spans(spans, items) -> object | None:
    """First attachment span (document order) that overlaps an annotated item wins."""
    for sent, span in spans:
        hits = [
            (abs(i_span[0] - span[0]), i_span[0], payload)
            for i_sent, i_span, payload in items
            if spans_overlap(sent, span, i_sent, i_span)
        ]
        if hits:
            return min(hits, key=lambda h: (h[0], h[1]))[2]
    return None


def resolve_times(doc: Document, mention: Mention) -> dict[str, datetime | None]:
    items = [(t.sentence, t.token_span, parse_timestamp(t.value)) for t in doc.timex]
    items.sort(key=lambda x: (x[0], x[1][0]))
    out: dict[str, datetime | None] = {}
    out["document-publish"] = doc.publish_date
    out["document"] = items[0][2] if items else None
    out["srl"] = _resolve_via_spans(_argument_spans(doc, mention, ("time",)), items)
    out["sentence"] = _nearest_in_sentence(items, mention)
    out["closest-preceding-sentence"] = _closest_preceding(items, mention)
    out["closest-overall"] = out["srl"] or out["sentence"] or out["closest-preceding-sentence"]
    return out


def resolve_locations(doc: Document, mention: Mention) -> dict[str, EntityLink | None]:
    items = [
        (e.sentence, e.token_span, e) for e in doc.entity_links if e.is_location_like()
    ]
    items.sort(key=lambda x: (x[0], x[1][0]))
    out: dict[str, EntityLink | None] = {}
    out["document"] = items[0][2] if items else None
    out["srl"] = _resolve_via_spans(_argument_spans(doc, mention, ("location",)), items)
    out["sentence"] = _nearest_in_sentence(items, mention)
    out["closest-preceding-sentence"] = _closest_preceding(items, mention)
    out["closest-overall"] = out["srl"] or out["sentence"] or out["closest-preceding-sentence"]
    return out


def context_sentences(doc: Document, sentence: int, window: int = CONTEXT_WINDOW) -> range:
    return range(max(0, sentence - window), min(len(doc.sentences), sentence + window + 1))


@dataclass
class MentionContext:
    ref: str
    doc_id: str
    surface: str
    lemma: str | None
    times: dict[str, datetime | None]
    locations: dict[str, EntityLink | None]
    tfidf_document: dict[str, float]
    tfidf_sentence: dict[str, float]
    tfidf_context: dict[str, float]
    vec_mention: np.ndarray | None
    vec_sentence: np.ndarray | None
    vec_doc_start: np.ndarray | None
    kb_sets: dict[str, list[np.ndarray]]


def _kb_vectors(store: VectorStore, links: list[EntityLink]) -> list[np.ndarray]:
    seen = set()
    out = []
    for link in links:
        if link.kb_id in seen:
            continue
        seen.add(link.kb_id)
        vec = store.get(f"kb/{link.kb_id}")
        if vec is not None:
            out.append(vec)
    return out


class ContextResolver:
    """Builds MentionContext objects for one corpus, caching per-document work."""

    def __init__(self, corpus: Corpus, tfidf: TfIdfModel, store: VectorStore | None = None):
        self.corpus = corpus
        self.tfidf = tfidf
        self.store = store or VectorStore()
        self._doc_vecs: dict[str, dict[str, float]] = {}
        self._sent_vecs: dict[tuple[str, int], dict[str, float]] = {}
        self._ctx_vecs: dict[tuple[str, int], dict[str, float]] = {}

    def _doc_vector(self, doc: Document) -> dict[str, float]:
        if doc.doc_id not in self._doc_vecs:
            tokens = [t for s in doc.sentences for t in s]
            self._doc_vecs[doc.doc_id] = self.tfidf.vectorize(tokens)
        return self._doc_vecs[doc.doc_id]

    def _sentence_vector(self, doc: Document, sentence: int) -> dict[str, float]:
        key = (doc.doc_id, sentence)
        if key not in self._sent_vecs:
            self._sent_vecs[key] = self.tfidf.vectorize(doc.sentences[sentence])
        return self._sent_vecs[key]

    def _context_vector(self, doc: Document, sentence: int) -> dict[str, float]:
        key = (doc.doc_id, sentence)
        if key not in self._ctx_vecs:
            tokens = [t for i in context_sentences(doc, sentence) for t in doc.sentences[i]]
            self._ctx_vecs[key] = self.tfidf.vectorize(tokens)
        return self._ctx_vecs[key]

    def context(self, ref: str) -> MentionContext:
        doc, mention = self.corpus.resolve(ref)
        if mention.kind != "action":
            raise ValueError(f"pair features are defined on action mentions, {ref} is a {mention.kind}")
        sent = mention.sentence
        window = set(context_sentences(doc, sent))
        start_range = set(range(min(DOC_START_SENTENCES, len(doc.sentences))))
        overlapping = [
            e for e in doc.entity_links
            if spans_overlap(e.sentence, e.token_span, sent, mention.token_span)
        ]
        arg_spans = _argument_spans(doc, mention, ("participant", "time", "location"))
        arg_links = [
            e for e in doc.entity_links
            if any(spans_overlap(e.sentence, e.token_span, a_sent, a_span) for a_sent, a_span in arg_spans)
        ]
        kb_sets = {
            "linked-action": _kb_vectors(self.store, overlapping),
            "semantic-role-args": _kb_vectors(self.store, arg_links),
            "surrounding-sentence": _kb_vectors(self.store, [e for e in doc.entity_links if e.sentence == sent]),
            "sentence-context": _kb_vectors(self.store, [e for e in doc.entity_links if e.sentence in window]),
            "doc-start": _kb_vectors(self.store, [e for e in doc.entity_links if e.sentence in start_range]),
        }
        return MentionContext(
            ref=ref,
            doc_id=doc.doc_id,
            surface=doc.surface(mention),
            lemma=mention.lemma,
            times=resolve_times(doc, mention),
            locations=resolve_locations(doc, mention),
            tfidf_document=self._doc_vector(doc),
            tfidf_sentence=self._sentence_vector(doc, sent),
            tfidf_context=self._context_vector(doc, sent),
            vec_mention=self.store.get(ref),
            vec_sentence=self.store.get(f"{doc.doc_id}/sent/{sent}"),
            vec_doc_start=self.store.get(f"{doc.doc_id}/sent/0"),
            kb_sets=kb_sets,
        )
