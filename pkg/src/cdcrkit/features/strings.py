"""Surface-form and lemma comparisons."""
from __future__ import annotations


def levenshtein(a: str, b: str) -> int:
    """Edit distance with unit costs for insert, delete, substitute."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def mlipns_match(a: str, b: str, max_mismatches: int = 2, threshold: float = 0.25) -> bool:
    """Product-name matching: strings match when, after discarding up to
    ``max_mismatches`` mismatching positions, the remaining mismatch ratio
    drops to ``threshold`` or below. Length differences count as mismatches."""
    if a == b:
        return True
    length = max(len(a), len(b))
    if length == 0:
        return True
    ham = sum(ca != cb for ca, cb in zip(a, b)) + abs(len(a) - len(b))
    mismatches = 0
    while mismatches <= max_mismatches:
        if length == 0:
            return True
        if 1.0 - (length - ham) / length <= threshold:
            return True
        ham -= 1
        length -= 1
        mismatches += 1
    return False


def mlipns_distance(a: str, b: str) -> float:
    """Binary distance: 0 when the strings match under the product-name rule."""
    return 0.0 if mlipns_match(a, b) else 1.0


def string_features(surface_a: str, surface_b: str, lemma_a: str | None, lemma_b: str | None) -> dict:
    """Name -> (value, present). Lemma identity is case-insensitive and absent
    when either lemma is missing; surface comparisons are literal."""
    out = {
        "is-surface-form-identical": (1.0 if surface_a == surface_b else 0.0, True),
        "surface-form-levenshtein-distance": (float(levenshtein(surface_a, surface_b)), True),
        "surface-form-mlipns-distance": (mlipns_distance(surface_a, surface_b), True),
    }
    if lemma_a is None or lemma_b is None:
        out["is-lemma-identical"] = (0.0, False)
    else:
        out["is-lemma-identical"] = (1.0 if lemma_a.casefold() == lemma_b.casefold() else 0.0, True)
    return out
