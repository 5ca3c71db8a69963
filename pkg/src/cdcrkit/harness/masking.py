"""Information-masking ablations.

Selected annotation components are hidden from the system by replacing every
token of every affected span with a fresh random five-letter token, unique
corpus-wide (also under case folding) and distinct from all original tokens.
Affected spans are then removed from the time-expression, entity-link and
semantic-role layers; masking the publish date nulls it. Document, sentence
and mention structure (ids, spans, cluster ids) is preserved, so masked
corpora remain comparable to their originals.

``mask_store`` is the sidecar counterpart: vectors that were computed from
now-masked text (the masked mentions' own vectors and every vector of a
sentence containing a masked span) are dropped, since an encoder run on the
masked text could not have produced them.
"""
from __future__ import annotations

import string
from dataclasses import dataclass, replace

import numpy as np

from ..corpus import Corpus, Document
from ..features import VectorStore

MASKABLE_COMPONENTS = ("action", "participants", "time", "location", "publish_date")

_COMPONENT_KIND = {"action": "action", "participants": "participant", "time": "time", "location": "location"}

_ALPHABET = string.ascii_lowercase + string.ascii_uppercase


@dataclass(frozen=True)
class MaskSpec:
    components: tuple[str, ...]
    seed: int = 0

    def __post_init__(self):
        unknown = set(self.components) - set(MASKABLE_COMPONENTS)
        if unknown:
            raise ValueError(f"unknown mask components: {sorted(unknown)}")
        if len(set(self.components)) != len(self.components):
            raise ValueError("mask components listed twice")

    @classmethod
    def from_json(cls, obj: dict) -> "MaskSpec":
        return cls(components=tuple(obj["components"]), seed=int(obj.get("seed", 0)))

    def to_json(self) -> dict:
        return {"components": list(self.components), "seed": self.seed}


class _TokenMint:
    """Draws fresh five-letter tokens that collide with nothing seen before."""

    def __init__(self, seed: int, reserved_casefold: set[str]):
        self.rng = np.random.default_rng(seed)
        self.reserved = set(reserved_casefold)

    def fresh(self) -> str:
        while True:
            idx = self.rng.integers(0, len(_ALPHABET), size=5)
            token = "".join(_ALPHABET[i] for i in idx)
            if token.casefold() not in self.reserved:
                self.reserved.add(token.casefold())
                return token


def _spans_overlap(sent_a, span_a, sent_b, span_b) -> bool:
    return sent_a == sent_b and span_a[0] < span_b[1] and span_b[0] < span_a[1]


def _collect_spans(doc: Document, components) -> list[tuple[int, tuple[int, int]]]:
    spans = []
    kinds = {_COMPONENT_KIND[c] for c in components if c in _COMPONENT_KIND}
    for m in doc.mentions:
        if m.kind in kinds:
            spans.append((m.sentence, m.token_span))
    if "time" in components:
        for t in doc.timex:
            spans.append((t.sentence, t.token_span))
    if "location" in components:
        for e in doc.entity_links:
            if e.is_location_like():
                spans.append((e.sentence, e.token_span))
    if "participants" in components:
        for e in doc.entity_links:
            if not e.is_location_like():
                spans.append((e.sentence, e.token_span))
    spans.sort(key=lambda x: (x[0], x[1][0], x[1][1]))
    return spans


def mask_corpus(corpus: Corpus, spec: MaskSpec) -> Corpus:
    reserved = {
        t.casefold() for d in corpus.documents for s in d.sentences for t in s
    }
    mint = _TokenMint(spec.seed, reserved)
    docs = []
    for doc in corpus.documents:
        spans = _collect_spans(doc, spec.components)
        if not spans and "publish_date" not in spec.components:
            docs.append(doc)
            continue
        sentences = [list(s) for s in doc.sentences]
        replaced: dict[tuple[int, int], str] = {}
        for sent, (start, end) in spans:
            for ti in range(start, end):
                if (sent, ti) not in replaced:
                    token = mint.fresh()
                    replaced[(sent, ti)] = token
                    sentences[sent][ti] = token
        masked = set()
        for sent, span in spans:
            masked.add((sent, span))

        def hits_mask(sent, span) -> bool:
            return any(_spans_overlap(sent, span, ms, msp) for ms, msp in masked)

        mentions = []
        for m in doc.mentions:
            if m.kind == "action" and "action" in spec.components and m.lemma is not None:
                head = replaced.get((m.sentence, m.token_span[0]))
                if head is not None:
                    m = replace(m, lemma=head.casefold())
            mentions.append(m)
        timex = tuple(t for t in doc.timex if not hits_mask(t.sentence, t.token_span))
        links = tuple(e for e in doc.entity_links if not hits_mask(e.sentence, e.token_span))
        frames = []
        for f in doc.srl:
            if hits_mask(f.sentence, f.token_span):
                continue
            args = tuple(a for a in f.args if not hits_mask(a.sentence, a.token_span))
            frames.append(replace(f, args=args))
        publish_date = None if "publish_date" in spec.components else doc.publish_date
        docs.append(
            replace(
                doc,
                publish_date=publish_date,
                sentences=tuple(tuple(s) for s in sentences),
                mentions=tuple(mentions),
                timex=timex,
                entity_links=links,
                srl=tuple(frames),
            )
        )
    return Corpus(corpus_id=corpus.corpus_id, documents=tuple(docs))


def mask_store(corpus: Corpus, spec: MaskSpec, store: VectorStore | None) -> VectorStore | None:
    """Drop sidecar vectors invalidated by masking the given (pre-mask)
    corpus: masked mentions' own keys and the per-sentence keys of every
    sentence containing a masked span. Knowledge-base vectors stay."""
    if store is None:
        return None
    dropped: set[str] = set()
    for doc in corpus.documents:
        spans = _collect_spans(doc, spec.components)
        if not spans:
            continue
        for sent in {s for s, _ in spans}:
            dropped.add(f"{doc.doc_id}/sent/{sent}")
        for m in doc.mentions:
            if any(_spans_overlap(m.sentence, m.token_span, s, sp) for s, sp in spans):
                dropped.add(f"{doc.doc_id}/{m.mention_id}")
    return VectorStore({k: v for k, v in store.vectors.items() if k not in dropped})
