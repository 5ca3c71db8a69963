"""Corpus model: parsing, validation, stats, splits, merging."""
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdcrkit.corpus import (
    CorpusError,
    LinkType,
    SplitSpec,
    corpus_from_json,
    corpus_stats,
    corpus_to_json,
    drop_superimposed_actions,
    find_superimposed_actions,
    link_type,
    load_corpus,
    merge_corpora,
    parse_timestamp,
    save_corpus,
    split_corpus,
)
from conftest import action, component, load_fixture_json, make_corpus, make_doc


def test_round_trip_through_json(tiny_corpus):
    again = corpus_from_json(corpus_to_json(tiny_corpus))
    assert corpus_to_json(again) == corpus_to_json(tiny_corpus)


def test_save_load_round_trip(tiny_corpus, tmp_path):
    path = tmp_path / "c.json"
    save_corpus(tiny_corpus, path)
    assert corpus_to_json(load_corpus(path)) == corpus_to_json(tiny_corpus)


def test_action_refs_in_document_position_order(tiny_corpus):
    assert tiny_corpus.action_refs == (
        "docA/a1", "docA/a2", "docA/a3", "docB/b1",
        "docC/c1", "docC/c2", "docD/d1", "docD/d2",
    )


def test_resolve_returns_document_and_mention(tiny_corpus):
    doc, m = tiny_corpus.resolve("docB/b1")
    assert doc.doc_id == "docB"
    assert m.lemma == "clear"
    with pytest.raises(KeyError):
        tiny_corpus.resolve("docB/nope")


def test_mention_tokens_and_surface(tiny_corpus):
    doc, m = tiny_corpus.resolve("docA/p1")
    assert doc.mention_tokens(m) == ("Riot", "police")
    assert doc.surface(m) == "Riot police"


def test_gold_clusters_add_singletons_for_unclustered(tiny_corpus):
    clusters = tiny_corpus.gold_clusters()
    assert frozenset({"docD/d2"}) in clusters
    assert sorted(len(c) for c in clusters) == [1, 2, 2, 3]


def test_components_by_anchor(tiny_corpus):
    doc = tiny_corpus.doc_by_id["docA"]
    kinds = sorted(m.kind for m in doc.components_by_anchor["a1"])
    assert kinds == ["location", "participant", "time"]


def test_link_type_all_four_distances(tiny_corpus):
    assert link_type(tiny_corpus, "docA/a2", "docA/a3") is LinkType.WITHIN_DOCUMENT
    assert link_type(tiny_corpus, "docA/a1", "docB/b1") is LinkType.WITHIN_SUBTOPIC
    assert link_type(tiny_corpus, "docA/a1", "docC/c1") is LinkType.CROSS_SUBTOPIC
    assert link_type(tiny_corpus, "docC/c2", "docD/d1") is LinkType.CROSS_TOPIC


def test_link_type_rejects_component_mentions(tiny_corpus):
    with pytest.raises(ValueError):
        link_type(tiny_corpus, "docA/p1", "docB/b1")


def test_stats_match_hand_counts(tiny_corpus):
    # Enumerated by hand from the fixture file.
    stats = corpus_stats(tiny_corpus)
    assert stats.topics == 2
    assert stats.subtopics == 3
    assert stats.documents == 4
    assert stats.sentences == 8
    assert stats.event_mentions == 8
    assert stats.clusters == 4
    assert stats.singletons == 1
    assert stats.links == {
        LinkType.WITHIN_DOCUMENT: 1,
        LinkType.WITHIN_SUBTOPIC: 1,
        LinkType.CROSS_SUBTOPIC: 2,
        LinkType.CROSS_TOPIC: 1,
    }
    assert stats.total_links == 5
    assert "links[cross-subtopic]\t2" in stats.to_tsv()
    assert stats.to_json()["links"]["cross-topic"] == 1


def test_parse_timestamp_date_only_is_midnight():
    ts = parse_timestamp("2024-01-01")
    assert (ts.hour, ts.minute) == (0, 0)
    with pytest.raises(CorpusError):
        parse_timestamp("not-a-date")


@pytest.mark.parametrize(
    "mutate, fragment",
    [
        (lambda d: d["mentions"].append(action("a1", 0, (0, 1))), "duplicate mention_id"),
        (lambda d: d["mentions"].append(action("x/y", 0, (0, 1))), "may not contain"),
        (lambda d: d["mentions"].append(action("bad", 0, (0, 9))), "outside sentence"),
        (lambda d: d["mentions"].append(action("bad", 5, (0, 1))), "out of range"),
        (lambda d: d["mentions"].append(action("bad", 0, (1, 1))), "outside sentence"),
        (lambda d: d["mentions"].append({**action("bad", 0, (0, 1)), "kind": "verb"}), "not one of"),
        (lambda d: d["mentions"].append({**action("bad", 0, (0, 1)), "anchor": "a1"}), "may not carry an anchor"),
        (lambda d: d["mentions"].append({**component("bad", "time", 0, (0, 1)), "cluster_id": "X"}), "may not carry a cluster_id"),
        (lambda d: d["mentions"].append(component("bad", "time", 0, (0, 1), anchor="ghost")), "does not name an action"),
        (lambda d: d["mentions"].append(component("bad", "time", 0, (0, 1), anchor="p1")), "does not name an action"),
        (lambda d: d["timex"].append({"sentence": 0, "token_span": [0, 1], "value": "noon-ish"}), "unparseable"),
        (lambda d: d["entity_links"].append({"sentence": 0, "token_span": [0, 1], "kb_id": "Q1", "lat": 1.0}), "both lat and lon"),
        (lambda d: d["entity_links"].append({"sentence": 0, "token_span": [0, 1], "kb_id": "Q1", "lat": 95.0, "lon": 0.0}), "out of range"),
        (lambda d: d["srl"].append({"predicate": {"sentence": 0, "token_span": [0, 1]}, "args": [{"role": "agent", "sentence": 0, "token_span": [0, 1]}]}), "not one of"),
        (lambda d: d.update(publish_date="05/01/2024"), "publish_date"),
        (lambda d: d.update(topic=""), "topic"),
    ],
)
def test_validation_rejects_malformed_documents(mutate, fragment):
    doc = make_doc(
        "d",
        sentences=[["w0", "w1", "w2"]],
        mentions=[action("a1", 0, (0, 1)), component("p1", "participant", 0, (1, 2), anchor="a1")],
        timex=[],
        entity_links=[],
        srl=[],
    )
    mutate(doc)
    with pytest.raises(CorpusError, match=fragment):
        corpus_from_json({"corpus_id": "c", "documents": [doc]})


def test_duplicate_doc_id_rejected():
    with pytest.raises(CorpusError, match="duplicate doc_id"):
        make_corpus([make_doc("d"), make_doc("d")])


def test_explicit_split_partitions_documents(tiny_corpus):
    spec = SplitSpec.from_json(
        {"mode": "explicit", "train": ["docA", "docB"], "dev": ["docC"], "test": ["docD"]}
    )
    train, dev, test = split_corpus(tiny_corpus, spec)
    assert [d.doc_id for d in train.documents] == ["docA", "docB"]
    assert [d.doc_id for d in dev.documents] == ["docC"]
    assert [d.doc_id for d in test.documents] == ["docD"]
    assert train.corpus_id == "tiny/train"
    # Cluster names survive; members outside the split are gone.
    assert train.explicit_clusters["CLEAR"] == ("docA/a1", "docB/b1")


@pytest.mark.parametrize(
    "spec_obj, fragment",
    [
        ({"mode": "explicit", "train": ["docA"], "dev": ["docA"], "test": []}, "more than once"),
        ({"mode": "explicit", "train": ["docA", "ghost"], "dev": [], "test": []}, "unknown documents"),
        ({"mode": "explicit", "train": ["docA"], "dev": [], "test": []}, "unassigned"),
        ({"mode": "by_topic", "train": ["t1"], "dev": [], "test": []}, "unassigned"),
        ({"mode": "by_topic", "train": ["t1", "t9"], "dev": [], "test": ["t2"]}, "unknown topics"),
    ],
)
def test_split_validation(tiny_corpus, spec_obj, fragment):
    with pytest.raises(CorpusError, match=fragment):
        split_corpus(tiny_corpus, SplitSpec.from_json(spec_obj))


def test_bad_split_specs_rejected():
    with pytest.raises(CorpusError, match="not one of"):
        SplitSpec.from_json({"mode": "random", "train": [], "dev": [], "test": []})
    with pytest.raises(CorpusError, match="sum to 1"):
        SplitSpec.from_json({"mode": "percent", "train": 0.5, "dev": 0.2, "test": 0.2, "seed": 0})
    with pytest.raises(CorpusError, match="seed"):
        SplitSpec.from_json({"mode": "percent", "train": 0.6, "dev": 0.2, "test": 0.2})


def test_by_topic_split(tiny_corpus):
    spec = SplitSpec.from_json({"mode": "by_topic", "train": ["t1"], "dev": [], "test": ["t2"]})
    train, dev, test = split_corpus(tiny_corpus, spec)
    assert {d.doc_id for d in train.documents} == {"docA", "docB", "docC"}
    assert dev.documents == ()
    assert {d.doc_id for d in test.documents} == {"docD"}


def test_split_spec_json_round_trip():
    for obj in (
        {"mode": "explicit", "train": ["a"], "dev": [], "test": ["b"]},
        {"mode": "percent", "train": 0.6, "dev": 0.2, "test": 0.2, "seed": 3},
    ):
        assert SplitSpec.from_json(SplitSpec.from_json(obj).to_json()).to_json() == SplitSpec.from_json(obj).to_json()


def _grid_corpus(n_topics=4, n_subtopics=3, n_docs=4):
    docs = []
    for t in range(n_topics):
        for s in range(n_subtopics):
            for d in range(n_docs):
                docs.append(make_doc(f"t{t}s{s}d{d}", topic=f"t{t}", subtopic=f"t{t}.{s}"))
    return make_corpus(docs)


@given(seed=st.integers(0, 2**31 - 1))
@settings(max_examples=25, deadline=None)
def test_percent_split_partitions_and_keeps_subtopics_whole(seed):
    corpus = _grid_corpus()
    spec = SplitSpec.from_json({"mode": "percent", "train": 0.5, "dev": 0.25, "test": 0.25, "seed": seed})
    parts = split_corpus(corpus, spec)
    ids = [d.doc_id for p in parts for d in p.documents]
    assert sorted(ids) == sorted(d.doc_id for d in corpus.documents)
    for part in parts:
        for doc in part.documents:
            mates = [d for d in corpus.documents if (d.topic, d.subtopic) == (doc.topic, doc.subtopic)]
            assert {m.doc_id for m in mates} <= {d.doc_id for d in part.documents}
    # Same seed, same assignment.
    again = split_corpus(corpus, spec)
    assert [d.doc_id for d in again[0].documents] == [d.doc_id for d in parts[0].documents]


def test_percent_split_fractions_roughly_respected():
    corpus = _grid_corpus(n_topics=6, n_subtopics=4, n_docs=2)
    spec = SplitSpec.from_json({"mode": "percent", "train": 0.5, "dev": 0.25, "test": 0.25, "seed": 11})
    train, dev, test = split_corpus(corpus, spec)
    total = len(corpus.documents)
    assert abs(len(train.documents) / total - 0.5) < 0.15
    assert len(dev.documents) > 0 and len(test.documents) > 0


def test_merge_prefixes_ids_and_separates_topics(tiny_corpus):
    other = make_corpus(
        [make_doc("docA", topic="t1", subtopic="t1.a",
                  mentions=[action("a1", 0, (0, 1), cluster="CLEAR", lemma="clear")])],
        corpus_id="other",
    )
    merged = merge_corpora([tiny_corpus, other])
    assert merged.corpus_id == "tiny+other"
    assert "tiny/docA" in merged.doc_by_id and "other/docA" in merged.doc_by_id
    # Equal cluster names from different corpora stay distinct.
    assert "tiny/CLEAR" in merged.explicit_clusters
    assert "other/CLEAR" in merged.explicit_clusters
    assert link_type(merged, "tiny/docA/a1", "other/docA/a1") is LinkType.CROSS_TOPIC
    # resolve() handles doc ids containing '/'.
    doc, m = merged.resolve("tiny/docA/a1")
    assert doc.doc_id == "tiny/docA" and m.mention_id == "a1"


def test_merge_rejects_duplicate_corpus_ids(tiny_corpus):
    with pytest.raises(CorpusError):
        merge_corpora([tiny_corpus, tiny_corpus])
    with pytest.raises(CorpusError):
        merge_corpora([])


def test_superimposed_actions_found_and_dropped():
    doc = make_doc(
        "d",
        sentences=[["one", "two", "three"]],
        mentions=[
            action("a1", 0, (1, 2), cluster="X", lemma="two"),
            action("a2", 0, (1, 2), cluster="Y", lemma="two"),
            action("a3", 0, (0, 1), cluster="X", lemma="one"),
            component("p1", "participant", 0, (2, 3), anchor="a2"),
        ],
    )
    corpus = make_corpus([doc])
    assert find_superimposed_actions(corpus) == [("d/a1", "d/a2")]
    cleaned = drop_superimposed_actions(corpus)
    assert [m.mention_id for m in cleaned.documents[0].mentions] == ["a3"]
    # No superimposed spans: corpus returned unchanged.
    assert drop_superimposed_actions(cleaned) is cleaned


def test_fixture_matches_format_documentation():
    raw = load_fixture_json("tiny_corpus.json")
    assert set(raw) == {"corpus_id", "documents"}
    assert json.dumps(corpus_to_json(corpus_from_json(raw)), sort_keys=True) == json.dumps(
        corpus_to_json(corpus_from_json(corpus_to_json(corpus_from_json(raw)))), sort_keys=True
    )
