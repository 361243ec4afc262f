"""Shared enumeration and sampling helpers for the test suite."""

from __future__ import annotations

import itertools
import random

from sicps.icp import GapVector, canonical_rotation
from sicps.macc import iter_weak_compositions


def canonical_gap_vectors(max_nodes: int):
    """Every canonical gap vector whose virtual graph has at most max_nodes nodes.

    For i=1 the side-information structure does not depend on L, so only L=1
    is emitted for that degenerate family.
    """
    for i in range(1, max_nodes + 1):
        L_values = [1] if i == 1 else range(1, max_nodes + 1)
        for L in L_values:
            if i * ((i - 1) * L + 1) > max_nodes:
                break
            max_total = max_nodes // i - (i - 1) * L - 1
            for total in range(max_total + 1):
                for gaps in iter_weak_compositions(total, i):
                    if canonical_rotation(gaps)[0] == gaps:
                        yield GapVector(gaps, L)


def random_canonical_gap_vector(rng: random.Random, max_K: int = 30) -> GapVector:
    """One canonical gap vector with K <= max_K, sampled over mixed shapes."""
    while True:
        i = rng.randint(1, 6)
        L = rng.randint(1, 8)
        if (i - 1) * L + 1 > max_K:
            continue
        total = rng.randint(0, max_K - 1 - (i - 1) * L)
        cuts = sorted(rng.randint(0, total) for _ in range(i - 1))
        parts = tuple(b - a for a, b in zip([0] + cuts, cuts + [total]))
        return GapVector(canonical_rotation(parts)[0], L)


def brute_placement_sets(K: int, L: int, w: int) -> list[tuple[int, ...]]:
    """Placement family by direct filtering of all w-subsets (oracle route)."""
    out = []
    for s in itertools.combinations(range(1, K + 1), w):
        ok = all(
            abs(a - b) >= L and K - abs(a - b) >= L
            for a, b in itertools.combinations(s, 2)
        )
        if ok:
            out.append(s)
    return out
