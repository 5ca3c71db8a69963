"""Temporal distances between mention pairs.

Each mention resolves to at most one timestamp per strategy; a pair feature is
the absolute difference floored to whole units. Calendar units use fixed
lengths: hour 3600 s, day 86400 s, week 7 days, month 30 days, year 365 days.
Date-only values resolve to midnight. Unresolved timestamps on either side
leave the feature absent.
"""
from __future__ import annotations

from datetime import datetime

TEMPORAL_STRATEGIES = (
    "document-publish",
    "document",
    "srl",
    "sentence",
    "closest-preceding-sentence",
    "closest-overall",
)

UNIT_SECONDS = {
    "hour": 3600.0,
    "day": 86400.0,
    "week": 7 * 86400.0,
    "month": 30 * 86400.0,
    "year": 365 * 86400.0,
}

UNITS = ("year", "month", "week", "day", "hour")


def temporal_feature_names() -> list[str]:
    return [f"distance-{s}-level-{u}" for s in TEMPORAL_STRATEGIES for u in UNITS]


def unit_distance(a: datetime, b: datetime, unit: str) -> float:
    seconds = abs((a - b).total_seconds())
    return float(int(seconds // UNIT_SECONDS[unit]))


def temporal_features(times_a: dict[str, datetime | None], times_b: dict[str, datetime | None]) -> dict:
    """Name -> (value, present) for every strategy/unit combination."""
    out = {}
    for strategy in TEMPORAL_STRATEGIES:
        ta, tb = times_a.get(strategy), times_b.get(strategy)
        for unit in UNITS:
            name = f"distance-{strategy}-level-{unit}"
            if ta is None or tb is None:
                out[name] = (0.0, False)
            else:
                out[name] = (unit_distance(ta, tb, unit), True)
    return out
