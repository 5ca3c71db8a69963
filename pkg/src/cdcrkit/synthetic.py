"""Deterministic synthetic corpora with a recoverable coreference signal.

Documents narrate a small invented event inventory. Mentions of one event
share an action lemma, a day, a place, participants, and an embedding
neighborhood. Coreference requires lemma AND day together: each topic reuses
one lemma across distinct events on different days (defeating pure surface
matching), and each subtopic pairs that reused-lemma event with a same-day,
same-place twin (defeating date matching alone). A few events span every
topic so that document partitions have something to cut. With
``confine_to_subtopic`` no cluster leaves its subtopic and the documents of
each subtopic are linked by shared events.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta

import numpy as np

from .corpus import Corpus, PUBLISH_DATE_FORMAT, corpus_from_json
from .features import VectorStore

UNIQUE_LEMMAS = (
    "announce", "collapse", "acquit", "ratify", "unveil", "evacuate",
    "indict", "donate", "elect", "expand", "halt", "merge", "launch",
    "rescue", "settle", "convict", "depart", "arrive", "suspend", "negotiate",
)

SHARED_LEMMAS = ("strike", "rally", "summit", "verdict", "clash", "protest")

INFLECTIONS = ("", "s", "ed", "ing")

CITIES = (
    ("city0", 52.520, 13.405, ("country0", "continent0")),
    ("city1", 48.137, 11.575, ("country0", "continent0")),
    ("city2", 48.857, 2.352, ("country1", "continent0")),
    ("city3", 45.764, 4.836, ("country1", "continent0")),
    ("city4", 40.713, -74.006, ("country2", "continent1")),
    ("city5", 34.052, -118.244, ("country2", "continent1")),
    ("city6", 35.676, 139.650, ("country3", "continent2")),
    ("city7", 1.352, 103.820, ("country3", "continent2")),
)

PERSON_COUNT = 10


@dataclass(frozen=True)
class SyntheticConfig:
    corpus_id: str = "synthetic"
    seed: int = 0
    topics: int = 3
    subtopics_per_topic: int = 2
    docs_per_subtopic: int = 3
    events_per_subtopic: int = 3
    shared_events_per_subtopic: int = 1
    mentions_per_event: int = 2
    cross_topic_events: int = 2
    confine_to_subtopic: bool = False
    stray_action_every: int = 3
    embedding_dim: int = 16
    start_day: str = "2024-03-01"
    day_step: int = 2

    def __post_init__(self):
        if min(self.topics, self.subtopics_per_topic, self.docs_per_subtopic) < 1:
            raise ValueError("topics, subtopics and documents must all be >= 1")
        if not 0 <= self.shared_events_per_subtopic <= self.events_per_subtopic:
            raise ValueError("shared_events_per_subtopic out of range")
        if self.mentions_per_event < 1:
            raise ValueError("mentions_per_event must be >= 1")


@dataclass(frozen=True)
class _Event:
    event_id: str
    lemma: str
    when: datetime
    city: int
    participants: tuple[int, int]
    center: np.ndarray


def _unit(vec: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vec)
    return vec / norm if norm > 0 else vec


class _EventFactory:
    def __init__(self, config: SyntheticConfig, rng: np.random.Generator):
        self.config = config
        self.rng = rng
        self.count = 0
        self.unique_count = 0
        self.start = datetime.fromisoformat(config.start_day)

    def fresh_lemma(self) -> str:
        i = self.unique_count
        self.unique_count += 1
        base = UNIQUE_LEMMAS[i % len(UNIQUE_LEMMAS)]
        return base if i < len(UNIQUE_LEMMAS) else f"{base}{i // len(UNIQUE_LEMMAS)}"

    def build(self, lemma: str, like: "_Event | None" = None) -> _Event:
        """A fresh event; with ``like``, a same-day twin sharing its place and
        participants, so only the action distinguishes the two."""
        i = self.count
        self.count += 1
        if like is not None:
            when = like.when + timedelta(hours=4)
            city = like.city
            participants = like.participants
        else:
            when = self.start + timedelta(days=self.config.day_step * i, hours=9 + (3 * i) % 8)
            city = int(self.rng.integers(len(CITIES)))
            participants = tuple(int(p) for p in self.rng.choice(PERSON_COUNT, size=2, replace=False))
        return _Event(
            event_id=f"ev{i}",
            lemma=lemma,
            when=when,
            city=city,
            participants=participants,
            center=_unit(self.rng.normal(size=self.config.embedding_dim)),
        )


def _mention_sentence(event: _Event, occurrence: int, day_token: str, themes: tuple[str, str]) -> list[str]:
    pa, pb = event.participants
    action = event.lemma + INFLECTIONS[occurrence % len(INFLECTIONS)]
    city = CITIES[event.city][0]
    return [f"pers{pa}", f"pers{pb}", action, "in", city, "on", day_token, themes[0], themes[1]]


def synthetic_corpus(config: SyntheticConfig = SyntheticConfig()) -> tuple[Corpus, VectorStore]:
    rng = np.random.default_rng(config.seed)
    factory = _EventFactory(config, rng)
    dim = config.embedding_dim

    local_events: dict[tuple[int, int], list[_Event]] = {}
    for t in range(config.topics):
        shared_lemma = SHARED_LEMMAS[t % len(SHARED_LEMMAS)]
        for s in range(config.subtopics_per_topic):
            events: list[_Event] = []
            first_shared = config.events_per_subtopic - config.shared_events_per_subtopic
            for e in range(config.events_per_subtopic):
                if e < first_shared:
                    events.append(factory.build(factory.fresh_lemma()))
                else:
                    # The first shared-lemma event twins the subtopic's lead
                    # event: same day, place and participants, different verb.
                    like = events[0] if e == first_shared and events else None
                    events.append(factory.build(shared_lemma, like=like))
            local_events[(t, s)] = events
    # Global events share one lemma of their own (on different days), so pure
    # surface matching conflates them while date-aware features separate them.
    global_lemma = SHARED_LEMMAS[config.topics % len(SHARED_LEMMAS)]
    global_events = (
        []
        if config.confine_to_subtopic
        else [factory.build(global_lemma) for _ in range(config.cross_topic_events)]
    )

    entity_centers = {
        **{f"pers{i}": _unit(rng.normal(size=dim)) for i in range(PERSON_COUNT)},
        **{city[0]: _unit(rng.normal(size=dim)) for city in CITIES},
    }

    store = VectorStore()
    for kb_id, center in entity_centers.items():
        store.put(f"kb/{kb_id}", center)

    docs = []
    doc_index = 0
    stray_count = 0
    for t in range(config.topics):
        themes = (f"theme{t}a", f"theme{t}b")
        for s in range(config.subtopics_per_topic):
            events = local_events[(t, s)]
            topic_center = _unit(np.sum([e.center for e in events], axis=0))
            for d in range(config.docs_per_subtopic):
                doc_id = f"doc{doc_index}"
                slots: list[_Event | None] = []
                for event in events:
                    slots.extend([event] * config.mentions_per_event)
                slots.extend(global_events)
                if config.stray_action_every and doc_index % config.stray_action_every == 0:
                    slots.append(None)

                sentences = [[themes[0], themes[1], f"sub{t}x{s}", "report", "today"]]
                mentions, timex, entity_links, srl = [], [], [], []
                sentence_centers = [topic_center]
                occurrence_of: dict[str, int] = {}
                mid = 0
                for slot in slots:
                    if slot is None:
                        stray = factory.build(f"stray{stray_count}")
                        stray_count += 1
                        event, cluster_id = stray, None
                    else:
                        event, cluster_id = slot, slot.event_id
                    oi = occurrence_of.get(event.event_id, 0)
                    occurrence_of[event.event_id] = oi + 1
                    day_token = "day" + event.when.strftime("%Y%m%d")
                    si = len(sentences)
                    sentences.append(_mention_sentence(event, oi + doc_index, day_token, themes))
                    sentence_centers.append(event.center)

                    action_id = f"m{mid}"
                    mentions.append({
                        "mention_id": action_id, "kind": "action", "sentence": si,
                        "token_span": [2, 3], "cluster_id": cluster_id, "lemma": event.lemma,
                    })
                    mentions.append({
                        "mention_id": f"m{mid + 1}", "kind": "participant", "sentence": si,
                        "token_span": [0, 1], "anchor": action_id,
                    })
                    mentions.append({
                        "mention_id": f"m{mid + 2}", "kind": "location", "sentence": si,
                        "token_span": [4, 5], "anchor": action_id,
                    })
                    mentions.append({
                        "mention_id": f"m{mid + 3}", "kind": "time", "sentence": si,
                        "token_span": [6, 7], "anchor": action_id,
                    })
                    mid += 4

                    jitter = int(rng.integers(-3, 4))
                    when = event.when + timedelta(hours=jitter)
                    timex.append({
                        "sentence": si, "token_span": [6, 7],
                        "value": when.strftime(PUBLISH_DATE_FORMAT),
                    })
                    pa, pb = event.participants
                    city_id, lat, lon, hierarchy = CITIES[event.city]
                    entity_links.append({"sentence": si, "token_span": [0, 1], "kb_id": f"pers{pa}"})
                    entity_links.append({"sentence": si, "token_span": [1, 2], "kb_id": f"pers{pb}"})
                    entity_links.append({
                        "sentence": si, "token_span": [4, 5], "kb_id": city_id,
                        "lat": lat, "lon": lon, "hierarchy": list(hierarchy),
                    })
                    srl.append({
                        "predicate": {"sentence": si, "token_span": [2, 3]},
                        "args": [
                            {"role": "participant", "sentence": si, "token_span": [0, 1]},
                            {"role": "participant", "sentence": si, "token_span": [1, 2]},
                            {"role": "location", "sentence": si, "token_span": [4, 5]},
                            {"role": "time", "sentence": si, "token_span": [6, 7]},
                        ],
                    })
                    store.put(
                        f"{doc_id}/{action_id}",
                        _unit(event.center + 0.25 * rng.normal(size=dim)),
                    )

                publish = events[0].when + timedelta(days=1)
                publish = publish.replace(hour=8, minute=(7 * doc_index) % 60)
                docs.append({
                    "doc_id": doc_id,
                    "topic": f"topic{t}",
                    "subtopic": f"sub{t}.{s}",
                    "publish_date": publish.strftime(PUBLISH_DATE_FORMAT),
                    "sentences": sentences,
                    "mentions": mentions,
                    "timex": timex,
                    "entity_links": entity_links,
                    "srl": srl,
                })
                for si, center in enumerate(sentence_centers):
                    store.put(
                        f"{doc_id}/sent/{si}",
                        _unit(center + 0.2 * rng.normal(size=dim)),
                    )
                doc_index += 1

    corpus = corpus_from_json({"corpus_id": config.corpus_id, "documents": docs})
    return corpus, store
