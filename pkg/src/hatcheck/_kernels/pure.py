"""Pure-Python kernel lane: enumeration census and bulk sampling loops.

Mirrors the compiled extension ``hatcheck._kernels._fast``. The two lanes
must return identical values for identical arguments, including identical
RNG word consumption, so every fixture frozen against one lane holds for
the other. Validation of shapes, budgets, and rank-table sizes happens in
the callers; kernels assume in-range arguments.
"""

from __future__ import annotations

import math
from itertools import combinations, permutations
from operator import eq

from ..rng import Xoshiro256StarStar

__all__ = [
    "fixed_point_census",
    "sample_fixed_point_counts",
    "sample_matching_ranks",
    "raw_stream",
]

_MASK64 = (1 << 64) - 1


def fixed_point_census(n: int, m: int, l: int) -> list[int]:
    """Count matchings of shape (n, m, l) by number of diagonal pairs.

    Visits every matching: each l-subset of people 0..n-1 paired with each
    injective image tuple over hats 0..m-1. Deliberately exhaustive, no
    counting shortcuts.
    """
    census = [0] * (l + 1)
    for dom in combinations(range(n), l):
        for img in permutations(range(m), l):
            census[sum(map(eq, dom, img))] += 1
    return census


def sample_fixed_point_counts(
    n: int, m: int, l: int, seed: int, stream: int, trials: int
) -> list[int]:
    """Histogram of fixed-point counts over uniform matching draws.

    Each trial partially shuffles fresh identity arrays: l draws for the
    people prefix (bound n-i), then l draws for the hats prefix (bound
    m-i). Pairing is positional, so the fixed points are the positions
    where the two prefixes agree. The draw order is the contract shared
    with sample_matching and the compiled lane.
    """
    rng = Xoshiro256StarStar(seed & _MASK64, stream)
    bounded = rng.bounded
    counts = [0] * (l + 1)
    for _ in range(trials):
        people = list(range(n))
        hats = list(range(m))
        for i in range(l):
            j = i + bounded(n - i)
            people[i], people[j] = people[j], people[i]
        for i in range(l):
            j = i + bounded(m - i)
            hats[i], hats[j] = hats[j], hats[i]
        k = 0
        for p in range(l):
            if people[p] == hats[p]:
                k += 1
        counts[k] += 1
    return counts


def matching_rank(n: int, m: int, l: int, pairs: list[tuple[int, int]]) -> int:
    """Lexicographic rank of a matching among all of shape (n, m, l).

    Pairs must be sorted by person, 0-based. The order ranked is the
    enumeration order: domain subsets ascending, then image tuples
    ascending, i.e. rank = rank(domain) * perm(m, l) + rank(image).
    """
    dom_rank = 0
    prev = -1
    for i, (person, _) in enumerate(pairs):
        for c in range(prev + 1, person):
            dom_rank += math.comb(n - 1 - c, l - 1 - i)
        prev = person
    img_rank = 0
    for i, (_, hat) in enumerate(pairs):
        used_below = sum(1 for _, h in pairs[:i] if h < hat)
        img_rank += (hat - used_below) * math.perm(m - 1 - i, l - 1 - i)
    return dom_rank * math.perm(m, l) + img_rank


def sample_matching_ranks(
    n: int, m: int, l: int, seed: int, stream: int, trials: int
) -> list[int]:
    """Histogram over lexicographic matching ranks for uniform draws.

    Returns a list of length unified_count(n, m, l); callers cap that
    count before asking. Draws consume the RNG exactly as
    sample_fixed_point_counts does.
    """
    total = math.comb(n, l) * math.comb(m, l) * math.factorial(l)
    rng = Xoshiro256StarStar(seed & _MASK64, stream)
    bounded = rng.bounded
    hist = [0] * total
    for _ in range(trials):
        people = list(range(n))
        hats = list(range(m))
        for i in range(l):
            j = i + bounded(n - i)
            people[i], people[j] = people[j], people[i]
        for i in range(l):
            j = i + bounded(m - i)
            hats[i], hats[j] = hats[j], hats[i]
        pairs = sorted(zip(people[:l], hats[:l]))
        hist[matching_rank(n, m, l, pairs)] += 1
    return hist


def raw_stream(seed: int, stream: int, count: int) -> list[int]:
    """First ``count`` raw 64-bit words of one RNG substream."""
    rng = Xoshiro256StarStar(seed & _MASK64, stream)
    return [rng.next_word() for _ in range(count)]
