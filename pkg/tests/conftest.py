import json
import os

import pytest

from cdcrkit.corpus import Corpus, corpus_from_json

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def load_fixture_json(name: str):
    with open(fixture_path(name), encoding="utf-8") as fh:
        return json.load(fh)


def make_doc(
    doc_id: str,
    topic: str = "t0",
    subtopic: str = "t0.0",
    publish_date: str | None = "2024-01-05T09:00",
    sentences=None,
    mentions=(),
    timex=(),
    entity_links=(),
    srl=(),
) -> dict:
    return {
        "doc_id": doc_id,
        "topic": topic,
        "subtopic": subtopic,
        "publish_date": publish_date,
        "sentences": sentences if sentences is not None else [["a", "b", "c"]],
        "mentions": list(mentions),
        "timex": list(timex),
        "entity_links": list(entity_links),
        "srl": list(srl),
    }


def make_corpus(docs, corpus_id: str = "fix") -> Corpus:
    return corpus_from_json({"corpus_id": corpus_id, "documents": list(docs)})


def action(mid: str, sentence: int, span, cluster=None, lemma=None) -> dict:
    return {
        "mention_id": mid,
        "kind": "action",
        "sentence": sentence,
        "token_span": list(span),
        "cluster_id": cluster,
        "lemma": lemma,
    }


def component(mid: str, kind: str, sentence: int, span, anchor=None) -> dict:
    return {
        "mention_id": mid,
        "kind": kind,
        "sentence": sentence,
        "token_span": list(span),
        "anchor": anchor,
    }


@pytest.fixture
def tiny_corpus() -> Corpus:
    return corpus_from_json(load_fixture_json("tiny_corpus.json"))
