"""Coreference evaluation: MUC, B-cubed, entity-aligned CEAF, LEA, CoNLL F1.

All metrics compare a key (gold) partition against a response partition over
the same mention universe. Each is built from (numerator, denominator) pairs
per side so that per-document micro-aggregation and cross-document scoring use
one code path. Degenerate denominators score 0 and raise a flag instead of
dividing by zero.

Cross-document scores treat the whole corpus as one meta-document: partitions
are evaluated globally, so missed cross-document links hurt recall.

LEA weights each entity by its size and scores it by the fraction of its links
resolved in the other partition; following the pinned convention, entities of
size 1 are excluded from the evaluated side and size-1 intersections carry no
links.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Collection, Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .cluster import Clustering
from .corpus import Corpus

Partition = Sequence[Collection[str]]


@dataclass(frozen=True)
class MetricScore:
    precision: float
    recall: float
    f1: float
    p_degenerate: bool = False
    r_degenerate: bool = False

    def to_json(self) -> dict:
        out = {"precision": self.precision, "recall": self.recall, "f1": self.f1}
        if self.p_degenerate or self.r_degenerate:
            out["degenerate"] = {"precision": self.p_degenerate, "recall": self.r_degenerate}
        return out


@dataclass(frozen=True)
class MetricReport:
    muc: MetricScore
    b3: MetricScore
    ceafe: MetricScore
    lea: MetricScore
    conll_f1: float

    def to_json(self) -> dict:
        return {
            "muc": self.muc.to_json(),
            "b3": self.b3.to_json(),
            "ceafe": self.ceafe.to_json(),
            "lea": self.lea.to_json(),
            "conll_f1": self.conll_f1,
        }

    def to_tsv(self) -> str:
        rows = ["metric\tprecision\trecall\tf1"]
        for name in ("muc", "b3", "ceafe", "lea"):
            s: MetricScore = getattr(self, name)
            rows.append(f"{name}\t{s.precision:.6f}\t{s.recall:.6f}\t{s.f1:.6f}")
        rows.append(f"conll\t\t\t{self.conll_f1:.6f}")
        return "\n".join(rows) + "\n"


def _normalize(partition: Partition) -> list[frozenset[str]]:
    sets = [frozenset(c) for c in partition]
    if any(not c for c in sets):
        raise ValueError("partitions may not contain empty clusters")
    return sets


def _check_universe(key: list[frozenset[str]], response: list[frozenset[str]]) -> None:
    uk = frozenset().union(*key) if key else frozenset()
    ur = frozenset().union(*response) if response else frozenset()
    if sum(len(c) for c in key) != len(uk) or sum(len(c) for c in response) != len(ur):
        raise ValueError("partitions must consist of disjoint clusters")
    if uk != ur:
        missing = sorted(uk ^ ur)[:5]
        raise ValueError(f"key and response cover different mentions (first differences: {missing})")


def _score(p_num: float, p_den: float, r_num: float, r_den: float) -> MetricScore:
    p_deg, r_deg = p_den == 0, r_den == 0
    p = 0.0 if p_deg else p_num / p_den
    r = 0.0 if r_deg else r_num / r_den
    f1 = 0.0 if p + r == 0 else 2 * p * r / (p + r)
    return MetricScore(precision=p, recall=r, f1=f1, p_degenerate=p_deg, r_degenerate=r_deg)


# Each *_components function returns (p_num, p_den, r_num, r_den).

def muc_components(key: Partition, response: Partition) -> tuple[float, float, float, float]:
    key, response = _normalize(key), _normalize(response)

    def side(evaluated, other):
        of = {m: i for i, c in enumerate(other) for m in c}
        num = den = 0.0
        for entity in evaluated:
            partitions = len({of[m] for m in entity})
            num += len(entity) - partitions
            den += len(entity) - 1
        return num, den

    r_num, r_den = side(key, response)
    p_num, p_den = side(response, key)
    return p_num, p_den, r_num, r_den


def b3_components(key: Partition, response: Partition) -> tuple[float, float, float, float]:
    key, response = _normalize(key), _normalize(response)
    k_of = {m: c for c in key for m in c}
    r_of = {m: c for c in response for m in c}
    r_num = sum(len(k_of[m] & r_of[m]) / len(k_of[m]) for m in k_of)
    p_num = sum(len(k_of[m] & r_of[m]) / len(r_of[m]) for m in r_of)
    return p_num, float(len(r_of)), r_num, float(len(k_of))


def ceafe_phi(entity_a: Collection[str], entity_b: Collection[str]) -> float:
    """Normalized entity overlap: 2|a & b| / (|a| + |b|)."""
    a, b = frozenset(entity_a), frozenset(entity_b)
    return 2.0 * len(a & b) / (len(a) + len(b))


def ceafe_components(key: Partition, response: Partition) -> tuple[float, float, float, float]:
    key, response = _normalize(key), _normalize(response)
    if not key or not response:
        return 0.0, float(len(response)), 0.0, float(len(key))
    phi = np.zeros((len(key), len(response)))
    for i, k in enumerate(key):
        for j, r in enumerate(response):
            phi[i, j] = ceafe_phi(k, r)
    rows, cols = linear_sum_assignment(phi, maximize=True)
    total = float(phi[rows, cols].sum())
    return total, float(len(response)), total, float(len(key))


def _lea_side(evaluated: list[frozenset[str]], other: list[frozenset[str]]) -> tuple[float, float]:
    num = den = 0.0
    for entity in evaluated:
        n = len(entity)
        if n < 2:
            continue
        links = n * (n - 1) / 2.0
        resolved = 0.0
        for o in other:
            common = len(entity & o)
            resolved += common * (common - 1) / 2.0
        num += n * resolved / links
        den += n
    return num, den


def lea_components(key: Partition, response: Partition) -> tuple[float, float, float, float]:
    key, response = _normalize(key), _normalize(response)
    r_num, r_den = _lea_side(key, response)
    p_num, p_den = _lea_side(response, key)
    return p_num, p_den, r_num, r_den


def muc(key: Partition, response: Partition) -> MetricScore:
    key, response = _normalize(key), _normalize(response)
    _check_universe(key, response)
    return _score(*muc_components(key, response))


def b_cubed(key: Partition, response: Partition) -> MetricScore:
    key, response = _normalize(key), _normalize(response)
    _check_universe(key, response)
    return _score(*b3_components(key, response))


def ceaf_e(key: Partition, response: Partition) -> MetricScore:
    key, response = _normalize(key), _normalize(response)
    _check_universe(key, response)
    return _score(*ceafe_components(key, response))


def lea(key: Partition, response: Partition) -> MetricScore:
    key, response = _normalize(key), _normalize(response)
    _check_universe(key, response)
    return _score(*lea_components(key, response))


def conll_f1(muc_score: MetricScore, b3_score: MetricScore, ceafe_score: MetricScore) -> float:
    return (muc_score.f1 + b3_score.f1 + ceafe_score.f1) / 3.0


def score_partitions(key: Partition, response: Partition) -> MetricReport:
    key, response = _normalize(key), _normalize(response)
    _check_universe(key, response)
    m = _score(*muc_components(key, response))
    b = _score(*b3_components(key, response))
    c = _score(*ceafe_components(key, response))
    l = _score(*lea_components(key, response))
    return MetricReport(muc=m, b3=b, ceafe=c, lea=l, conll_f1=conll_f1(m, b, c))


def cross_document_score(corpus: Corpus, response: Clustering | Partition) -> MetricReport:
    """Score a response partition against the corpus gold, corpus-wide."""
    key = corpus.gold_clusters()
    return score_partitions(key, list(response))


def within_document_score(corpus: Corpus, response: Clustering | Partition) -> MetricReport:
    """Score with each document as its own evaluation unit (micro-aggregated).

    Clusters are truncated at document boundaries first, so links the response
    misses across documents cost nothing here; the gap to cross_document_score
    is exactly the cross-document information.
    """
    key = corpus.gold_clusters()
    response = _normalize(list(response))
    _check_universe(_normalize(list(key)), response)
    totals = {name: [0.0, 0.0, 0.0, 0.0] for name in ("muc", "b3", "ceafe", "lea")}
    parts = {
        "muc": muc_components,
        "b3": b3_components,
        "ceafe": ceafe_components,
        "lea": lea_components,
    }
    for doc in corpus.documents:
        doc_mentions = {f"{doc.doc_id}/{m.mention_id}" for m in doc.actions}
        if not doc_mentions:
            continue
        doc_key = [c & doc_mentions for c in key if c & doc_mentions]
        doc_response = [c & doc_mentions for c in response if c & doc_mentions]
        for name, fn in parts.items():
            for i, v in enumerate(fn(doc_key, doc_response)):
                totals[name][i] += v
    m = _score(*totals["muc"])
    b = _score(*totals["b3"])
    c = _score(*totals["ceafe"])
    l = _score(*totals["lea"])
    return MetricReport(muc=m, b3=b, ceafe=c, lea=l, conll_f1=conll_f1(m, b, c))


def harmonic_aggregate(scores: Sequence[tuple[float, float, float]]) -> tuple[float, float, float]:
    """Componentwise harmonic mean of (precision, recall, f1) triples.

    Any zero component makes that component's mean 0.
    """
    if not scores:
        raise ValueError("harmonic_aggregate needs at least one triple")
    out = []
    for i in range(3):
        values = [s[i] for s in scores]
        if any(v < 0 for v in values):
            raise ValueError("harmonic mean is defined for non-negative values only")
        out.append(0.0 if any(v == 0 for v in values) else len(values) / sum(1.0 / v for v in values))
    return tuple(out)


def harmonic_report(reports: Sequence[MetricReport]) -> MetricReport:
    """Aggregate per-corpus reports into one by componentwise harmonic means."""
    def agg(name: str) -> MetricScore:
        triples = [(getattr(r, name).precision, getattr(r, name).recall, getattr(r, name).f1) for r in reports]
        p, r, f = harmonic_aggregate(triples)
        return MetricScore(precision=p, recall=r, f1=f)

    m, b, c, l = agg("muc"), agg("b3"), agg("ceafe"), agg("lea")
    conll = [r.conll_f1 for r in reports]
    conll_h = 0.0 if any(v == 0 for v in conll) else len(conll) / sum(1.0 / v for v in conll)
    return MetricReport(muc=m, b3=b, ceafe=c, lea=l, conll_f1=conll_h)


def mean_report(reports: Sequence[MetricReport]) -> MetricReport:
    """Arithmetic mean of reports, component by component."""
    def agg(name: str) -> MetricScore:
        return MetricScore(
            precision=float(np.mean([getattr(r, name).precision for r in reports])),
            recall=float(np.mean([getattr(r, name).recall for r in reports])),
            f1=float(np.mean([getattr(r, name).f1 for r in reports])),
        )

    return MetricReport(
        muc=agg("muc"), b3=agg("b3"), ceafe=agg("ceafe"), lea=agg("lea"),
        conll_f1=float(np.mean([r.conll_f1 for r in reports])),
    )


# CoNLL-style key/response files: one token line per document token, mention
# spans marked with bracketed cluster numbers in the last column.

def write_conll(corpus: Corpus, clustering: Clustering | Partition, path) -> None:
    clusters = _normalize(list(clustering))
    cluster_number = {id(c): i for i, c in enumerate(clusters)}
    by_doc: dict[str, dict[tuple[int, int], list[tuple[str, int]]]] = {}
    for c in clusters:
        for ref in c:
            doc_id, mention_id = ref.rsplit("/", 1)
            doc = corpus.doc_by_id.get(doc_id)
            if doc is None:
                raise KeyError(f"clustering references unknown document {doc_id!r}")
            m = doc.mention_by_id.get(mention_id)
            if m is None:
                raise KeyError(f"clustering references unknown mention {ref!r}")
            spans = by_doc.setdefault(doc_id, {})
            spans.setdefault((m.sentence, m.token_span[0]), []).append(("open", cluster_number[id(c)]))
            spans.setdefault((m.sentence, m.token_span[1] - 1), []).append(("close", cluster_number[id(c)]))
            if m.token_span[1] - m.token_span[0] == 1:
                spans[(m.sentence, m.token_span[0])] = [
                    x for x in spans[(m.sentence, m.token_span[0])] if x[1] != cluster_number[id(c)]
                ] + [("unit", cluster_number[id(c)])]
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            fh.write(f"#begin document ({doc.doc_id});\n")
            spans = by_doc.get(doc.doc_id, {})
            for si, sent in enumerate(doc.sentences):
                for ti, token in enumerate(sent):
                    marks = spans.get((si, ti), [])
                    parts = []
                    for op, num in marks:
                        if op == "open":
                            parts.append(f"({num}")
                        elif op == "close":
                            parts.append(f"{num})")
                        else:
                            parts.append(f"({num})")
                    coref = "|".join(parts) if parts else "-"
                    fh.write(f"{doc.doc_id}\t{si}\t{ti}\t{token}\t{coref}\n")
                fh.write("\n")
            fh.write("#end document\n")


def read_conll(path) -> dict[tuple[str, int, int, int], int]:
    """Read a CoNLL-style file back into span -> cluster number.

    Spans are (doc_id, sentence, start, end). Use ``spans_to_clustering`` to map
    them onto a corpus' mention ids.
    """
    spans: dict[tuple[str, int, int, int], int] = {}
    open_spans: dict[int, tuple[str, int, int]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            doc_id, si, ti, _token, coref = line.split("\t")
            si, ti = int(si), int(ti)
            if coref == "-":
                continue
            for part in coref.split("|"):
                m = re.fullmatch(r"\((\d+)\)", part)
                if m:
                    spans[(doc_id, si, ti, ti + 1)] = int(m.group(1))
                    continue
                m = re.fullmatch(r"\((\d+)", part)
                if m:
                    open_spans[int(m.group(1))] = (doc_id, si, ti)
                    continue
                m = re.fullmatch(r"(\d+)\)", part)
                if m:
                    num = int(m.group(1))
                    d, s, start = open_spans.pop(num)
                    spans[(d, s, start, ti + 1)] = num
    if open_spans:
        raise ValueError(f"unclosed mention spans for clusters {sorted(open_spans)}")
    return spans


def spans_to_clustering(corpus: Corpus, spans: dict[tuple[str, int, int, int], int]) -> Clustering:
    groups: dict[int, set[str]] = {}
    for (doc_id, si, start, end), num in spans.items():
        doc = corpus.doc_by_id[doc_id]
        match = [
            m for m in doc.actions if m.sentence == si and m.token_span == (start, end)
        ]
        if not match:
            raise KeyError(f"no action mention at {doc_id} sentence {si} span ({start}, {end})")
        groups.setdefault(num, set()).add(f"{doc_id}/{match[0].mention_id}")
    covered = {e for g in groups.values() for e in g}
    singles = [{ref} for ref in corpus.action_refs if ref not in covered]
    return Clustering(list(groups.values()) + singles)


def save_report(report: MetricReport, json_path=None, tsv_path=None) -> None:
    if json_path is not None:
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump(report.to_json(), fh, indent=1)
            fh.write("\n")
    if tsv_path is not None:
        with open(tsv_path, "w", encoding="utf-8") as fh:
            fh.write(report.to_tsv())
