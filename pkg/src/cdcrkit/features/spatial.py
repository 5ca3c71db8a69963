"""Geographic distances between mention pairs.

Each mention resolves to at most one location (a knowledge-base entity link)
per strategy. Two measures per strategy: great-circle distance in kilometres
(haversine on a sphere of radius 6371.0088 km) and the number of upward
hierarchy steps, summed over both sides, to the nearest shared ancestor
(capped at 6; absent beyond the cap or when a side lacks the needed data).
"""
from __future__ import annotations

import math

from ..corpus import EntityLink

SPATIAL_STRATEGIES = (
    "document",
    "srl",
    "sentence",
    "closest-preceding-sentence",
    "closest-overall",
)

MEASURES = ("geo-hierarchy-match", "geodesic-distance")

EARTH_RADIUS_KM = 6371.0088
HIERARCHY_CAP = 6


def spatial_feature_names() -> list[str]:
    return [f"distance-{s}-level-{m}" for s in SPATIAL_STRATEGIES for m in MEASURES]


def haversine_km(lat_a: float, lon_a: float, lat_b: float, lon_b: float) -> float:
    phi_a, phi_b = math.radians(lat_a), math.radians(lat_b)
    d_phi = phi_b - phi_a
    d_lam = math.radians(lon_b - lon_a)
    h = math.sin(d_phi / 2) ** 2 + math.cos(phi_a) * math.cos(phi_b) * math.sin(d_lam / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def hierarchy_steps(link_a: EntityLink, link_b: EntityLink, cap: int = HIERARCHY_CAP) -> int | None:
    """Minimal i + j with chain_a[i] == chain_b[j], where each chain starts at
    the entity itself and walks upward; None when no ancestor is shared within
    the cap."""
    chain_a = (link_a.kb_id,) + link_a.hierarchy
    chain_b = (link_b.kb_id,) + link_b.hierarchy
    best = None
    for i, a in enumerate(chain_a):
        for j, b in enumerate(chain_b):
            if a == b and i + j <= cap and (best is None or i + j < best):
                best = i + j
    return best


def spatial_features(locs_a: dict[str, EntityLink | None], locs_b: dict[str, EntityLink | None]) -> dict:
    out = {}
    for strategy in SPATIAL_STRATEGIES:
        la, lb = locs_a.get(strategy), locs_b.get(strategy)
        hier_name = f"distance-{strategy}-level-geo-hierarchy-match"
        geo_name = f"distance-{strategy}-level-geodesic-distance"
        if la is None or lb is None:
            out[hier_name] = (0.0, False)
            out[geo_name] = (0.0, False)
            continue
        steps = hierarchy_steps(la, lb)
        out[hier_name] = (0.0, False) if steps is None else (float(steps), True)
        if la.has_coordinates() and lb.has_coordinates():
            out[geo_name] = (haversine_km(la.lat, la.lon, lb.lat, lb.lon), True)
        else:
            out[geo_name] = (0.0, False)
    return out
