"""Feature functions: string metrics vs brute force, tf-idf by hand, worked
temporal/spatial examples, embedding aggregates."""
import math
from datetime import datetime
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdcrkit.corpus import EntityLink
from cdcrkit.features import (
    TfIdfModel,
    VectorStore,
    VectorStoreError,
    cosine_similarity,
    embedding_features,
    levenshtein,
    load_vector_store,
    mlipns_distance,
    mlipns_match,
    save_vector_store,
    set_similarities,
    sparse_cosine,
    string_features,
    unit_distance,
)
from cdcrkit.features.spatial import (
    EARTH_RADIUS_KM,
    haversine_km,
    hierarchy_steps,
    spatial_features,
)
from cdcrkit.features.temporal import temporal_features


# ---------------------------------------------------------------------------
# String metrics vs independent brute-force implementations.

def brute_levenshtein(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def d(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            d(i - 1, j) + 1,
            d(i, j - 1) + 1,
            d(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return d(len(a), len(b))


def brute_mlipns(a: str, b: str, max_mismatches: int = 2, threshold: float = 0.25) -> bool:
    if a == b:
        return True
    length = max(len(a), len(b))
    if length == 0:
        return True
    ham = sum(x != y for x, y in zip(a, b)) + abs(len(a) - len(b))
    for k in range(max_mismatches + 1):
        if length - k == 0:
            return True
        if (ham - k) / (length - k) <= threshold:
            return True
    return False


def test_levenshtein_known_values():
    assert levenshtein("kitten", "sitting") == 3
    assert levenshtein("", "abc") == 3
    assert levenshtein("abc", "") == 3
    assert levenshtein("same", "same") == 0
    assert levenshtein("flaw", "lawn") == 2


@given(st.text(alphabet="abcd", max_size=8), st.text(alphabet="abcd", max_size=8))
@settings(max_examples=150, deadline=None)
def test_levenshtein_matches_brute_force(a, b):
    assert levenshtein(a, b) == brute_levenshtein(a, b)


@given(st.text(alphabet="abc", max_size=10), st.text(alphabet="abc", max_size=10))
@settings(max_examples=150, deadline=None)
def test_mlipns_matches_brute_force(a, b):
    assert mlipns_match(a, b) == brute_mlipns(a, b)


def test_mlipns_examples():
    assert mlipns_match("Tomato", "Tomato")
    assert mlipns_match("Tomato", "Tomacco")  # two forgiven mismatches suffice
    assert not mlipns_match("cat", "dog")
    assert mlipns_match("cat", "hat")
    assert mlipns_distance("cat", "dog") == 1.0
    assert mlipns_distance("Tomato", "Tomacco") == 0.0


def test_string_features_lemma_handling():
    feats = string_features("ran", "runs", "Run", "run")
    assert feats["is-lemma-identical"] == (1.0, True)
    assert feats["is-surface-form-identical"] == (0.0, True)
    assert feats["surface-form-levenshtein-distance"] == (float(levenshtein("ran", "runs")), True)
    feats = string_features("ran", "ran", None, "run")
    assert feats["is-lemma-identical"] == (0.0, False)
    assert feats["is-surface-form-identical"] == (1.0, True)


# ---------------------------------------------------------------------------
# tf-idf against hand computation on a three-document corpus.

DOCS = [["the", "cat", "sat"], ["the", "dog", "SAT"], ["a", "dog", "barked"]]


def test_tfidf_document_frequencies_and_idf():
    model = TfIdfModel(DOCS)
    assert model.n_documents == 3
    assert model.df == {"the": 2, "cat": 1, "sat": 2, "dog": 2, "a": 1, "barked": 1}
    assert model.idf("the") == pytest.approx(math.log(4 / 3) + 1.0)
    assert model.idf("CAT") == pytest.approx(math.log(4 / 2) + 1.0)
    # Unseen terms take the maximal idf.
    assert model.idf("zebra") == pytest.approx(math.log(4) + 1.0)


def test_tfidf_vectorize_by_hand():
    model = TfIdfModel(DOCS)
    vec = model.vectorize(["cat", "cat", "the"])
    w_cat = 2 * (math.log(4 / 2) + 1.0)
    w_the = 1 * (math.log(4 / 3) + 1.0)
    norm = math.hypot(w_cat, w_the)
    assert vec["cat"] == pytest.approx(w_cat / norm)
    assert vec["the"] == pytest.approx(w_the / norm)
    assert math.sqrt(sum(w * w for w in vec.values())) == pytest.approx(1.0)
    assert model.vectorize([]) == {}


@given(st.lists(st.sampled_from(["the", "cat", "dog", "sat", "a"]), min_size=1, max_size=12))
@settings(max_examples=50, deadline=None)
def test_tfidf_vectors_are_unit_norm(tokens):
    model = TfIdfModel(DOCS)
    vec = model.vectorize(tokens)
    assert math.sqrt(sum(w * w for w in vec.values())) == pytest.approx(1.0)


def test_sparse_cosine_range_and_identity():
    model = TfIdfModel(DOCS)
    a = model.vectorize(["cat", "sat"])
    assert sparse_cosine(a, a) == pytest.approx(1.0)
    b = model.vectorize(["dog", "barked"])
    assert sparse_cosine(a, b) == 0.0
    c = model.vectorize(["cat", "dog"])
    assert 0.0 < sparse_cosine(a, c) < 1.0


# ---------------------------------------------------------------------------
# Temporal distances.

def test_unit_distance_worked_example():
    a = datetime(2024, 1, 1, 0, 0)
    b = datetime(2024, 1, 5, 0, 0)
    assert unit_distance(a, b, "day") == 4.0
    assert unit_distance(a, b, "hour") == 96.0
    assert unit_distance(a, b, "week") == 0.0
    assert unit_distance(a, b, "month") == 0.0
    assert unit_distance(a, b, "year") == 0.0


def test_unit_distance_floors_and_is_symmetric():
    a = datetime(2024, 1, 1, 0, 0)
    b = datetime(2024, 1, 2, 23, 59)
    assert unit_distance(a, b, "day") == 1.0
    assert unit_distance(a, b, "hour") == 47.0
    assert unit_distance(b, a, "hour") == unit_distance(a, b, "hour")
    # Calendar units are fixed-length: 365 days make exactly one year.
    assert unit_distance(datetime(2023, 1, 1), datetime(2024, 1, 1), "year") == 1.0
    assert unit_distance(datetime(2024, 1, 1), datetime(2024, 1, 31), "month") == 1.0


def test_temporal_features_absent_when_unresolved():
    t = datetime(2024, 3, 1, 12, 0)
    feats = temporal_features({"document": t}, {"document": t, "sentence": t})
    assert feats["distance-document-level-day"] == (0.0, True)
    assert feats["distance-sentence-level-day"] == (0.0, False)
    assert feats["distance-srl-level-hour"] == (0.0, False)
    assert len(feats) == 30


# ---------------------------------------------------------------------------
# Spatial distances.

def test_haversine_worked_examples():
    # Quarter of the great circle along the equator.
    assert haversine_km(0.0, 0.0, 0.0, 90.0) == pytest.approx(math.pi * EARTH_RADIUS_KM / 2, abs=1e-6)
    assert haversine_km(0.0, 0.0, 0.0, 180.0) == pytest.approx(math.pi * EARTH_RADIUS_KM, abs=1e-6)
    assert haversine_km(52.52, 13.405, 52.52, 13.405) == 0.0
    assert haversine_km(10.0, 20.0, -30.0, 40.0) == pytest.approx(haversine_km(-30.0, 40.0, 10.0, 20.0))


def _link(kb_id, hierarchy=(), lat=None, lon=None):
    return EntityLink(sentence=0, token_span=(0, 1), kb_id=kb_id, lat=lat, lon=lon, hierarchy=tuple(hierarchy))


def test_hierarchy_steps():
    berlin = _link("QB", ["QDE", "QEU"])
    munich = _link("QM", ["QDE", "QEU"])
    tokyo = _link("QT", ["QJP", "QAS"])
    assert hierarchy_steps(berlin, berlin) == 0
    assert hierarchy_steps(berlin, munich) == 2  # one step up on each side
    assert hierarchy_steps(berlin, _link("QDE")) == 1
    assert hierarchy_steps(berlin, tokyo) is None
    deep_a = _link("a0", [f"a{i}" for i in range(1, 6)] + ["shared"])
    deep_b = _link("b0", [f"b{i}" for i in range(1, 6)] + ["shared"])
    assert hierarchy_steps(deep_a, deep_b) is None  # 6 + 6 exceeds the cap
    assert hierarchy_steps(deep_a, _link("shared")) == 6


def test_spatial_features_presence_rules():
    a = {"document": _link("QB", ["QDE"], lat=52.52, lon=13.405)}
    b = {"document": _link("QM", ["QDE"], lat=48.14, lon=11.58)}
    feats = spatial_features(a, b)
    assert feats["distance-document-level-geo-hierarchy-match"] == (2.0, True)
    got = feats["distance-document-level-geodesic-distance"]
    assert got[1] and got[0] == pytest.approx(haversine_km(52.52, 13.405, 48.14, 11.58))
    # Hierarchy without coordinates: geodesic absent, hierarchy present.
    feats = spatial_features({"document": _link("QB", ["QDE"])}, {"document": _link("QM", ["QDE"])})
    assert feats["distance-document-level-geodesic-distance"] == (0.0, False)
    assert feats["distance-document-level-geo-hierarchy-match"] == (2.0, True)
    # Missing side: everything absent.
    feats = spatial_features({}, b)
    assert feats["distance-document-level-geo-hierarchy-match"] == (0.0, False)
    assert len(feats) == 10


# ---------------------------------------------------------------------------
# Embedding similarities and the vector store.

def test_cosine_similarity_clamps():
    e1 = np.array([1.0, 0.0])
    assert cosine_similarity(e1, e1) == pytest.approx(1.0)
    assert cosine_similarity(e1, np.array([0.0, 1.0])) == 0.0
    assert cosine_similarity(e1, -e1) == 0.0  # negative cosine clamps to 0
    assert cosine_similarity(e1, np.zeros(2)) == 0.0


def test_set_similarities_by_hand():
    e1, e2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    stats = set_similarities([e1], [e1, e2])
    assert stats == {"mean": 0.5, "variance": 0.25, "min": 0.0, "max": 1.0}
    assert set_similarities([], [e1]) is None


def test_embedding_features_presence():
    e1, e2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    feats = embedding_features(e1, e2, e1, None, None, None, {"doc-start": [e1]}, {"doc-start": [e2]})
    assert feats["action-mention"] == (0.0, True)
    assert feats["surrounding-sentence"] == (0.0, False)
    assert feats["doc-start"] == (0.0, False)
    assert feats["doc-start-mean"] == (0.0, True)
    assert feats["linked-action-mean"] == (0.0, False)
    assert len(feats) == 23


def test_vector_store_dimension_enforcement():
    store = VectorStore()
    store.put("a", [1.0, 2.0])
    with pytest.raises(VectorStoreError, match="dimension"):
        store.put("b", [1.0, 2.0, 3.0])
    with pytest.raises(VectorStoreError):
        store.put("c", [[1.0], [2.0]])
    assert store.get("a") is not None and store.get("missing") is None
    assert "a" in store and len(store) == 1


def test_vector_store_round_trip(tmp_path):
    store = VectorStore({"kb/x": np.array([0.5, -0.25]), "d/m": np.array([1.0, 2.0])})
    path = tmp_path / "vecs.jsonl"
    save_vector_store(store, path)
    again = load_vector_store(path)
    assert sorted(again.vectors) == ["d/m", "kb/x"]
    assert np.array_equal(again.get("kb/x"), store.get("kb/x"))


def test_vector_store_load_errors(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"key": "a"}\n')
    with pytest.raises(VectorStoreError, match="needs 'key' and 'vector'"):
        load_vector_store(bad)
    bad.write_text("not json\n")
    with pytest.raises(VectorStoreError, match="not valid JSON"):
        load_vector_store(bad)
