"""Corpus data model: a corpus-neutral JSON interchange format for event coreference.

A corpus is a list of documents grouped into topics and subtopics. Each document
carries tokenized sentences plus stand-off annotation layers: event mentions
(actions and their participant/time/location components), normalized time
expressions, knowledge-base entity links, and semantic-role frames. Gold
coreference lives on action mentions as ``cluster_id``; an action without a
cluster id is an implicit singleton.

Mentions are addressed globally as ``"<doc_id>/<mention_id>"``. Mention ids may
not contain ``/`` so the reference splits unambiguously on its last separator.
All model objects are treated as immutable after construction; derived indexes
are cached and every transformation returns a new corpus.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

MENTION_KINDS = ("action", "participant", "time", "location")
SRL_ROLES = ("participant", "time", "location")

PUBLISH_DATE_FORMAT = "%Y-%m-%dT%H:%M"


class CorpusError(Exception):
    """Malformed corpus file or violated format invariant."""


class LinkType(Enum):
    WITHIN_DOCUMENT = "within-document"
    WITHIN_SUBTOPIC = "within-subtopic"
    CROSS_SUBTOPIC = "cross-subtopic"
    CROSS_TOPIC = "cross-topic"

    def __str__(self) -> str:
        return self.value


LINK_TYPE_ORDER = (
    LinkType.WITHIN_DOCUMENT,
    LinkType.WITHIN_SUBTOPIC,
    LinkType.CROSS_SUBTOPIC,
    LinkType.CROSS_TOPIC,
)


@dataclass(frozen=True)
class Mention:
    mention_id: str
    kind: str
    sentence: int
    token_span: tuple[int, int]
    cluster_id: str | None = None
    anchor: str | None = None
    subtype: str | None = None
    lemma: str | None = None


@dataclass(frozen=True)
class TimexSpan:
    sentence: int
    token_span: tuple[int, int]
    value: str


@dataclass(frozen=True)
class EntityLink:
    sentence: int
    token_span: tuple[int, int]
    kb_id: str
    lat: float | None = None
    lon: float | None = None
    hierarchy: tuple[str, ...] = ()

    def has_coordinates(self) -> bool:
        return self.lat is not None

    def is_location_like(self) -> bool:
        return self.lat is not None or bool(self.hierarchy)


@dataclass(frozen=True)
class SrlArg:
    role: str
    sentence: int
    token_span: tuple[int, int]


@dataclass(frozen=True)
class SrlFrame:
    sentence: int
    token_span: tuple[int, int]
    args: tuple[SrlArg, ...] = ()


@dataclass
class Document:
    doc_id: str
    topic: str
    subtopic: str
    publish_date: datetime | None
    sentences: tuple[tuple[str, ...], ...]
    mentions: tuple[Mention, ...] = ()
    timex: tuple[TimexSpan, ...] = ()
    entity_links: tuple[EntityLink, ...] = ()
    srl: tuple[SrlFrame, ...] = ()

    @cached_property
    def mention_by_id(self) -> dict[str, Mention]:
        return {m.mention_id: m for m in self.mentions}

    @cached_property
    def actions(self) -> tuple[Mention, ...]:
        return tuple(m for m in self.mentions if m.kind == "action")

    @cached_property
    def components_by_anchor(self) -> dict[str, tuple[Mention, ...]]:
        out: dict[str, list[Mention]] = {}
        for m in self.mentions:
            if m.anchor is not None:
                out.setdefault(m.anchor, []).append(m)
        return {k: tuple(v) for k, v in out.items()}

    def mention_tokens(self, mention: Mention) -> tuple[str, ...]:
        s, e = mention.token_span
        return self.sentences[mention.sentence][s:e]

    def surface(self, mention: Mention) -> str:
        return " ".join(self.mention_tokens(mention))


@dataclass
class Corpus:
    corpus_id: str
    documents: tuple[Document, ...]

    @cached_property
    def doc_by_id(self) -> dict[str, Document]:
        return {d.doc_id: d for d in self.documents}

    @cached_property
    def mention_index(self) -> dict[str, tuple[Document, Mention]]:
        out = {}
        for doc in self.documents:
            for m in doc.mentions:
                out[f"{doc.doc_id}/{m.mention_id}"] = (doc, m)
        return out

    @cached_property
    def action_refs(self) -> tuple[str, ...]:
        """All action mention references in canonical (document, position) order."""
        refs = []
        for di, doc in enumerate(self.documents):
            for m in doc.actions:
                key = (di, m.sentence, m.token_span[0], m.token_span[1], m.mention_id)
                refs.append((key, f"{doc.doc_id}/{m.mention_id}"))
        refs.sort()
        return tuple(r for _, r in refs)

    @cached_property
    def mention_order(self) -> dict[str, int]:
        return {ref: i for i, ref in enumerate(self.action_refs)}

    @cached_property
    def explicit_clusters(self) -> dict[str, tuple[str, ...]]:
        """Gold clusters keyed by cluster id, members in canonical order."""
        by_id: dict[str, list[str]] = {}
        for ref in self.action_refs:
            _, m = self.mention_index[ref]
            if m.cluster_id is not None:
                by_id.setdefault(m.cluster_id, []).append(ref)
        return {cid: tuple(refs) for cid, refs in sorted(by_id.items())}

    def gold_clusters(self) -> tuple[frozenset[str], ...]:
        """Gold partition over all action mentions; unclustered actions become singletons."""
        clusters = [frozenset(refs) for refs in self.explicit_clusters.values()]
        clustered = set().union(*clusters) if clusters else set()
        for ref in self.action_refs:
            if ref not in clustered:
                clusters.append(frozenset([ref]))
        return tuple(clusters)

    def resolve(self, ref: str) -> tuple[Document, Mention]:
        try:
            return self.mention_index[ref]
        except KeyError:
            raise KeyError(f"unknown mention reference {ref!r}") from None


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO timestamp or date; date-only values resolve to midnight."""
    try:
        return datetime.fromisoformat(value)
    except ValueError:
        raise CorpusError(f"unparseable timestamp {value!r}") from None


def _err(location: str, problem: str) -> CorpusError:
    return CorpusError(f"{location}: {problem}")


def _check_span(span, sentences, sent_idx, location) -> tuple[int, int]:
    if not isinstance(span, (list, tuple)) or len(span) != 2:
        raise _err(location, f"token_span must be a [start, end) pair, got {span!r}")
    s, e = span
    if not (isinstance(s, int) and isinstance(e, int)):
        raise _err(location, f"token_span must hold integers, got {span!r}")
    if not isinstance(sent_idx, int) or not 0 <= sent_idx < len(sentences):
        raise _err(location, f"sentence index {sent_idx!r} out of range")
    if not 0 <= s < e <= len(sentences[sent_idx]):
        raise _err(location, f"token_span {span!r} outside sentence of length {len(sentences[sent_idx])}")
    return (s, e)


def _mention_from_json(obj: dict, sentences, location: str) -> Mention:
    mid = obj.get("mention_id")
    if not isinstance(mid, str) or not mid:
        raise _err(location, "mention_id must be a non-empty string")
    if "/" in mid:
        raise _err(location, f"mention_id {mid!r} may not contain '/'")
    kind = obj.get("kind")
    if kind not in MENTION_KINDS:
        raise _err(location, f"kind {kind!r} not one of {MENTION_KINDS}")
    span = _check_span(obj.get("token_span"), sentences, obj.get("sentence"), f"{location}, mention {mid}")
    cluster_id = obj.get("cluster_id")
    anchor = obj.get("anchor")
    if kind == "action" and anchor is not None:
        raise _err(location, f"action mention {mid} may not carry an anchor")
    if kind != "action" and cluster_id is not None:
        raise _err(location, f"{kind} mention {mid} may not carry a cluster_id")
    return Mention(
        mention_id=mid,
        kind=kind,
        sentence=obj["sentence"],
        token_span=span,
        cluster_id=cluster_id,
        anchor=anchor,
        subtype=obj.get("subtype"),
        lemma=obj.get("lemma"),
    )


def _document_from_json(obj: dict) -> Document:
    doc_id = obj.get("doc_id")
    if not isinstance(doc_id, str) or not doc_id:
        raise CorpusError("document with missing or empty doc_id")
    loc = f"document {doc_id}"
    for key in ("topic", "subtopic"):
        if not isinstance(obj.get(key), str) or not obj[key]:
            raise _err(loc, f"{key} must be a non-empty string")
    raw_date = obj.get("publish_date")
    if raw_date is None:
        publish_date = None
    else:
        try:
            publish_date = datetime.strptime(raw_date, PUBLISH_DATE_FORMAT)
        except (TypeError, ValueError):
            raise _err(loc, f"publish_date {raw_date!r} not in YYYY-MM-DDTHH:MM form")
    sentences_raw = obj.get("sentences")
    if not isinstance(sentences_raw, list):
        raise _err(loc, "sentences must be a list of token lists")
    sentences = []
    for i, sent in enumerate(sentences_raw):
        if not isinstance(sent, list) or not all(isinstance(t, str) for t in sent):
            raise _err(loc, f"sentence {i} must be a list of strings")
        sentences.append(tuple(sent))
    sentences = tuple(sentences)

    mentions = []
    seen_ids = set()
    for m_obj in obj.get("mentions", []):
        m = _mention_from_json(m_obj, sentences, loc)
        if m.mention_id in seen_ids:
            raise _err(loc, f"duplicate mention_id {m.mention_id!r}")
        seen_ids.add(m.mention_id)
        mentions.append(m)
    by_id = {m.mention_id: m for m in mentions}
    for m in mentions:
        if m.anchor is not None:
            target = by_id.get(m.anchor)
            if target is None or target.kind != "action":
                raise _err(loc, f"mention {m.mention_id} anchor {m.anchor!r} does not name an action in this document")

    timex = []
    for i, t in enumerate(obj.get("timex", [])):
        span = _check_span(t.get("token_span"), sentences, t.get("sentence"), f"{loc}, timex {i}")
        value = t.get("value")
        if not isinstance(value, str):
            raise _err(loc, f"timex {i} value must be a string")
        parse_timestamp(value)
        timex.append(TimexSpan(sentence=t["sentence"], token_span=span, value=value))

    links = []
    for i, e in enumerate(obj.get("entity_links", [])):
        span = _check_span(e.get("token_span"), sentences, e.get("sentence"), f"{loc}, entity link {i}")
        kb_id = e.get("kb_id")
        if not isinstance(kb_id, str) or not kb_id:
            raise _err(loc, f"entity link {i} kb_id must be a non-empty string")
        lat, lon = e.get("lat"), e.get("lon")
        if (lat is None) != (lon is None):
            raise _err(loc, f"entity link {i} must carry both lat and lon or neither")
        if lat is not None and not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
            raise _err(loc, f"entity link {i} coordinates ({lat}, {lon}) out of range")
        hierarchy = tuple(e.get("hierarchy", []))
        if not all(isinstance(h, str) for h in hierarchy):
            raise _err(loc, f"entity link {i} hierarchy must be a list of kb ids")
        links.append(EntityLink(sentence=e["sentence"], token_span=span, kb_id=kb_id,
                                lat=lat, lon=lon, hierarchy=hierarchy))

    frames = []
    for i, f in enumerate(obj.get("srl", [])):
        pred = f.get("predicate", {})
        span = _check_span(pred.get("token_span"), sentences, pred.get("sentence"), f"{loc}, srl frame {i}")
        args = []
        for j, a in enumerate(f.get("args", [])):
            if a.get("role") not in SRL_ROLES:
                raise _err(loc, f"srl frame {i} arg {j} role {a.get('role')!r} not one of {SRL_ROLES}")
            a_span = _check_span(a.get("token_span"), sentences, a.get("sentence"), f"{loc}, srl frame {i} arg {j}")
            args.append(SrlArg(role=a["role"], sentence=a["sentence"], token_span=a_span))
        frames.append(SrlFrame(sentence=pred["sentence"], token_span=span, args=tuple(args)))

    return Document(
        doc_id=doc_id,
        topic=obj["topic"],
        subtopic=obj["subtopic"],
        publish_date=publish_date,
        sentences=sentences,
        mentions=tuple(mentions),
        timex=tuple(timex),
        entity_links=tuple(links),
        srl=tuple(frames),
    )


def corpus_from_json(obj: dict) -> Corpus:
    if not isinstance(obj, dict):
        raise CorpusError("corpus must be a JSON object")
    corpus_id = obj.get("corpus_id")
    if not isinstance(corpus_id, str) or not corpus_id:
        raise CorpusError("corpus_id must be a non-empty string")
    docs_raw = obj.get("documents")
    if not isinstance(docs_raw, list):
        raise CorpusError("documents must be a list")
    documents = []
    seen = set()
    for d in docs_raw:
        doc = _document_from_json(d)
        if doc.doc_id in seen:
            raise CorpusError(f"duplicate doc_id {doc.doc_id!r}")
        seen.add(doc.doc_id)
        documents.append(doc)
    return Corpus(corpus_id=corpus_id, documents=tuple(documents))


def load_corpus(path) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{path}: not valid JSON ({exc})") from None
    return corpus_from_json(raw)


def _mention_to_json(m: Mention) -> dict:
    out = {
        "mention_id": m.mention_id,
        "kind": m.kind,
        "sentence": m.sentence,
        "token_span": list(m.token_span),
    }
    if m.cluster_id is not None:
        out["cluster_id"] = m.cluster_id
    if m.anchor is not None:
        out["anchor"] = m.anchor
    if m.subtype is not None:
        out["subtype"] = m.subtype
    if m.lemma is not None:
        out["lemma"] = m.lemma
    return out


def corpus_to_json(corpus: Corpus) -> dict:
    docs = []
    for d in corpus.documents:
        obj = {
            "doc_id": d.doc_id,
            "topic": d.topic,
            "subtopic": d.subtopic,
            "publish_date": d.publish_date.strftime(PUBLISH_DATE_FORMAT) if d.publish_date else None,
            "sentences": [list(s) for s in d.sentences],
            "mentions": [_mention_to_json(m) for m in d.mentions],
        }
        if d.timex:
            obj["timex"] = [
                {"sentence": t.sentence, "token_span": list(t.token_span), "value": t.value} for t in d.timex
            ]
        if d.entity_links:
            obj["entity_links"] = [
                {
                    "sentence": e.sentence,
                    "token_span": list(e.token_span),
                    "kb_id": e.kb_id,
                    **({"lat": e.lat, "lon": e.lon} if e.lat is not None else {}),
                    **({"hierarchy": list(e.hierarchy)} if e.hierarchy else {}),
                }
                for e in d.entity_links
            ]
        if d.srl:
            obj["srl"] = [
                {
                    "predicate": {"sentence": f.sentence, "token_span": list(f.token_span)},
                    "args": [
                        {"role": a.role, "sentence": a.sentence, "token_span": list(a.token_span)} for a in f.args
                    ],
                }
                for f in d.srl
            ]
        docs.append(obj)
    return {"corpus_id": corpus.corpus_id, "documents": docs}


def save_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(corpus_to_json(corpus), fh, ensure_ascii=False, indent=1)
        fh.write("\n")


def link_type(corpus: Corpus, ref_a: str, ref_b: str) -> LinkType:
    """Classify the mention pair by how far apart the corpus hierarchy places it."""
    doc_a, m_a = corpus.resolve(ref_a)
    doc_b, m_b = corpus.resolve(ref_b)
    for ref, m in ((ref_a, m_a), (ref_b, m_b)):
        if m.kind != "action":
            raise ValueError(f"link_type is defined on action mentions, {ref} is a {m.kind}")
    if doc_a.doc_id == doc_b.doc_id:
        return LinkType.WITHIN_DOCUMENT
    if doc_a.topic == doc_b.topic:
        if doc_a.subtopic == doc_b.subtopic:
            return LinkType.WITHIN_SUBTOPIC
        return LinkType.CROSS_SUBTOPIC
    return LinkType.CROSS_TOPIC


@dataclass
class StatsReport:
    corpus_id: str
    topics: int
    subtopics: int
    documents: int
    sentences: int
    event_mentions: int
    clusters: int
    singletons: int
    links: dict[LinkType, int]

    @property
    def total_links(self) -> int:
        return sum(self.links.values())

    def to_json(self) -> dict:
        return {
            "corpus_id": self.corpus_id,
            "topics": self.topics,
            "subtopics": self.subtopics,
            "documents": self.documents,
            "sentences": self.sentences,
            "event_mentions": self.event_mentions,
            "clusters": self.clusters,
            "singletons": self.singletons,
            "links": {lt.value: self.links[lt] for lt in LINK_TYPE_ORDER},
            "total_links": self.total_links,
        }

    def to_tsv(self) -> str:
        rows = [("corpus_id", self.corpus_id)]
        for key in ("topics", "subtopics", "documents", "sentences", "event_mentions", "clusters", "singletons"):
            rows.append((key, getattr(self, key)))
        for lt in LINK_TYPE_ORDER:
            rows.append((f"links[{lt.value}]", self.links[lt]))
        rows.append(("total_links", self.total_links))
        return "\n".join(f"{k}\t{v}" for k, v in rows) + "\n"


def corpus_stats(corpus: Corpus) -> StatsReport:
    """Corpus-level counts plus gold coreference link counts by link type."""
    topics = {d.topic for d in corpus.documents}
    subtopics = {(d.topic, d.subtopic) for d in corpus.documents}
    n_sentences = sum(len(d.sentences) for d in corpus.documents)
    n_actions = len(corpus.action_refs)
    explicit = corpus.explicit_clusters
    implicit = n_actions - sum(len(refs) for refs in explicit.values())
    n_clusters = len(explicit) + implicit
    n_singletons = sum(1 for refs in explicit.values() if len(refs) == 1) + implicit
    links = {lt: 0 for lt in LINK_TYPE_ORDER}
    for refs in explicit.values():
        for a, b in combinations(refs, 2):
            links[link_type(corpus, a, b)] += 1
    return StatsReport(
        corpus_id=corpus.corpus_id,
        topics=len(topics),
        subtopics=len(subtopics),
        documents=len(corpus.documents),
        sentences=n_sentences,
        event_mentions=n_actions,
        clusters=n_clusters,
        singletons=n_singletons,
        links=links,
    )


@dataclass
class SplitSpec:
    """Assignment of every document to exactly one of train/dev/test.

    Modes: ``explicit`` lists document ids, ``by_topic`` lists topic labels,
    ``percent`` shuffles subtopics with a seed and fills splits to document
    fractions.
    """

    mode: str
    train: list
    dev: list
    test: list
    seed: int | None = None

    @classmethod
    def from_json(cls, obj: dict) -> "SplitSpec":
        mode = obj.get("mode")
        if mode not in ("explicit", "by_topic", "percent"):
            raise CorpusError(f"split mode {mode!r} not one of explicit/by_topic/percent")
        if mode == "percent":
            fractions = [obj.get(k) for k in ("train", "dev", "test")]
            if not all(isinstance(f, (int, float)) and f >= 0 for f in fractions):
                raise CorpusError("percent split needs numeric train/dev/test fractions")
            if abs(sum(fractions) - 1.0) > 1e-9:
                raise CorpusError(f"percent split fractions must sum to 1, got {sum(fractions)}")
            if not isinstance(obj.get("seed"), int):
                raise CorpusError("percent split needs an integer seed")
            return cls(mode=mode, train=[fractions[0]], dev=[fractions[1]], test=[fractions[2]], seed=obj["seed"])
        parts = []
        for key in ("train", "dev", "test"):
            val = obj.get(key)
            if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
                raise CorpusError(f"{mode} split needs a list of strings under {key!r}")
            parts.append(val)
        return cls(mode=mode, train=parts[0], dev=parts[1], test=parts[2], seed=obj.get("seed"))

    def to_json(self) -> dict:
        if self.mode == "percent":
            return {"mode": self.mode, "train": self.train[0], "dev": self.dev[0],
                    "test": self.test[0], "seed": self.seed}
        out = {"mode": self.mode, "train": self.train, "dev": self.dev, "test": self.test}
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def load_split_spec(path) -> SplitSpec:
    with open(path, encoding="utf-8") as fh:
        return SplitSpec.from_json(json.load(fh))


def _subset(corpus: Corpus, doc_ids: Iterable[str], suffix: str) -> Corpus:
    wanted = set(doc_ids)
    docs = tuple(d for d in corpus.documents if d.doc_id in wanted)
    return Corpus(corpus_id=f"{corpus.corpus_id}/{suffix}", documents=docs)


def split_corpus(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus, Corpus]:
    """Partition documents into train/dev/test corpora.

    Gold clusters that span splits are silently truncated to each split's
    documents; names are preserved.
    """
    all_ids = [d.doc_id for d in corpus.documents]
    if spec.mode == "explicit":
        groups = (spec.train, spec.dev, spec.test)
        listed = [i for g in groups for i in g]
        if len(listed) != len(set(listed)):
            raise CorpusError("explicit split lists a document more than once")
        unknown = set(listed) - set(all_ids)
        if unknown:
            raise CorpusError(f"explicit split names unknown documents: {sorted(unknown)}")
        missing = set(all_ids) - set(listed)
        if missing:
            raise CorpusError(f"explicit split leaves documents unassigned: {sorted(missing)}")
        assigned = [set(g) for g in groups]
    elif spec.mode == "by_topic":
        groups = (spec.train, spec.dev, spec.test)
        listed = [t for g in groups for t in g]
        if len(listed) != len(set(listed)):
            raise CorpusError("by_topic split lists a topic more than once")
        topics = {d.topic for d in corpus.documents}
        unknown = set(listed) - topics
        if unknown:
            raise CorpusError(f"by_topic split names unknown topics: {sorted(unknown)}")
        missing = topics - set(listed)
        if missing:
            raise CorpusError(f"by_topic split leaves topics unassigned: {sorted(missing)}")
        assigned = [
            {d.doc_id for d in corpus.documents if d.topic in set(g)} for g in groups
        ]
    else:  # percent
        import numpy as np

        by_subtopic: dict[tuple[str, str], list[str]] = {}
        for d in corpus.documents:
            by_subtopic.setdefault((d.topic, d.subtopic), []).append(d.doc_id)
        keys = sorted(by_subtopic)
        rng = np.random.default_rng(spec.seed)
        order = rng.permutation(len(keys))
        total = len(all_ids)
        want_train = spec.train[0] * total
        want_dev = (spec.train[0] + spec.dev[0]) * total
        assigned = [set(), set(), set()]
        placed = 0
        for idx in order:
            ids = by_subtopic[keys[idx]]
            if placed < want_train:
                assigned[0].update(ids)
            elif placed < want_dev:
                assigned[1].update(ids)
            else:
                assigned[2].update(ids)
            placed += len(ids)
    train = _subset(corpus, assigned[0], "train")
    dev = _subset(corpus, assigned[1], "dev")
    test = _subset(corpus, assigned[2], "test")
    return train, dev, test


def merge_corpora(corpora: Sequence[Corpus]) -> Corpus:
    """Concatenate corpora under a namespace: doc ids, topics and cluster ids
    are prefixed with their corpus id, so equal names stay distinct and every
    cross-corpus pair is cross-topic."""
    if not corpora:
        raise CorpusError("merge_corpora needs at least one corpus")
    ids = [c.corpus_id for c in corpora]
    if len(ids) != len(set(ids)):
        raise CorpusError("merge_corpora needs distinct corpus ids")
    docs = []
    seen = set()
    for c in corpora:
        for d in c.documents:
            new_id = f"{c.corpus_id}/{d.doc_id}"
            if new_id in seen:
                raise CorpusError(f"doc id collision after prefixing: {new_id!r}")
            seen.add(new_id)
            mentions = tuple(
                replace(m, cluster_id=f"{c.corpus_id}/{m.cluster_id}" if m.cluster_id else None)
                for m in d.mentions
            )
            docs.append(replace(d, doc_id=new_id, topic=f"{c.corpus_id}/{d.topic}", mentions=mentions))
    return Corpus(corpus_id="+".join(ids), documents=tuple(docs))


def find_superimposed_actions(corpus: Corpus) -> list[tuple[str, ...]]:
    """Groups of action mentions sharing one token span inside one document."""
    groups: dict[tuple[str, int, int, int], list[str]] = {}
    for doc in corpus.documents:
        for m in doc.actions:
            key = (doc.doc_id, m.sentence, m.token_span[0], m.token_span[1])
            groups.setdefault(key, []).append(f"{doc.doc_id}/{m.mention_id}")
    return [tuple(refs) for key, refs in sorted(groups.items()) if len(refs) > 1]


def drop_superimposed_actions(corpus: Corpus) -> Corpus:
    """Remove every member of a superimposed group, plus components anchored to them."""
    doomed = {ref for group in find_superimposed_actions(corpus) for ref in group}
    if not doomed:
        return corpus
    docs = []
    for doc in corpus.documents:
        gone = {r.split("/")[-1] for r in doomed if r.rsplit("/", 1)[0] == doc.doc_id}
        if not gone:
            docs.append(doc)
            continue
        kept = tuple(m for m in doc.mentions if m.mention_id not in gone and m.anchor not in gone)
        docs.append(replace(doc, mentions=kept))
    return Corpus(corpus_id=corpus.corpus_id, documents=tuple(docs))
