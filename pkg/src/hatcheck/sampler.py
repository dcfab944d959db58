"""Seeded uniform sampling of matchings and Monte Carlo estimation.

A sample is drawn by partially shuffling two identity arrays: l draws pick
the matched people, l more pick their hats, and the prefixes are paired
positionally. Every matching arises from exactly l! orderings of its pairs,
so the law is exactly uniform, with no rejection.

Bulk estimators split work into fixed 65536-trial blocks, block b drawn
from RNG substream b of the master seed. Blocks are independent of one
another, so merged counts do not depend on how blocks are distributed over
workers, and a run is reproducible from (shape, trials, seed) alone.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import _kernels
from .counting import MatchShape, unified_count, unified_derangements
from .errors import DomainError, ImpossibleEventError, RejectionLimitError
from .oracle import PartialInjection
from .rng import RNG_ALGORITHM, Xoshiro256StarStar

__all__ = [
    "BLOCK_TRIALS",
    "MAX_REJECTION_ITERATIONS",
    "MAX_FREQUENCY_SUPPORT",
    "SampleStats",
    "sample_matching",
    "count_fixed_points",
    "empirical_pmf",
    "sample_fixed_point_free",
    "conditional_sample_stats",
    "matching_frequencies",
]

BLOCK_TRIALS = 65536

MAX_REJECTION_ITERATIONS = 10**6

# matching_frequencies materializes one counter per matching; refuse shapes
# whose support would not fit comfortably in memory.
MAX_FREQUENCY_SUPPORT = 10**6


@dataclass(frozen=True)
class SampleStats:
    """Outcome of a sampling run: fixed-point frequencies plus provenance.

    counts[k] is the number of trials that produced exactly k fixed
    points; rejection_iterations is the total number of raw draws a
    conditional run consumed (0 for unconditional runs).
    """

    shape: MatchShape
    trials: int
    seed: int
    counts: tuple[int, ...]
    rejection_iterations: int = 0
    algorithm: str = field(default=RNG_ALGORITHM)

    def __post_init__(self) -> None:
        if not isinstance(self.trials, int) or self.trials < 1:
            raise DomainError(f"trials must be a positive integer, got {self.trials!r}")
        _check_seed(self.seed)
        if len(self.counts) != self.shape.l + 1:
            raise DomainError(
                f"need {self.shape.l + 1} counts for l={self.shape.l}, "
                f"got {len(self.counts)}"
            )
        if any(c < 0 for c in self.counts):
            raise DomainError("counts must be nonnegative")
        if sum(self.counts) != self.trials:
            raise DomainError("counts must sum to the number of trials")
        if self.rejection_iterations < 0:
            raise DomainError("rejection_iterations must be nonnegative")


def _check_seed(seed: int) -> None:
    if not isinstance(seed, int) or not 0 <= seed < 1 << 64:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed!r}")


def sample_matching(shape: MatchShape, rng: Xoshiro256StarStar) -> PartialInjection:
    """Draw one exactly uniform matching of the shape, advancing ``rng``.

    Consumes l bounded draws for the people prefix, then l for the hats
    prefix; the compiled bulk kernels replay this exact order.
    """
    n, m, l = shape.n, shape.m, shape.l
    people = list(range(n))
    hats = list(range(m))
    for i in range(l):
        j = i + rng.bounded(n - i)
        people[i], people[j] = people[j], people[i]
    for i in range(l):
        j = i + rng.bounded(m - i)
        hats[i], hats[j] = hats[j], hats[i]
    pairs = sorted((people[i] + 1, hats[i] + 1) for i in range(l))
    return PartialInjection(tuple(pairs))


def count_fixed_points(matching: PartialInjection) -> int:
    """Number of diagonal pairs (i, i) in the matching."""
    return sum(1 for person, hat in matching.pairs if person == hat)


def _blocks(trials: int) -> list[tuple[int, int]]:
    """Split a trial budget into (substream, trials) blocks."""
    out = []
    stream = 0
    remaining = trials
    while remaining > 0:
        size = min(remaining, BLOCK_TRIALS)
        out.append((stream, size))
        stream += 1
        remaining -= size
    return out


def empirical_pmf(
    shape: MatchShape, trials: int, seed: int, workers: int = 1
) -> SampleStats:
    """Fixed-point frequency counts over i.i.d. uniform matching draws.

    The result depends only on (shape, trials, seed): blocks are assigned
    to fixed substreams, so any worker count merges to identical counts.
    Worker threads run the compiled kernel outside the interpreter lock
    when the compiled lane is active.
    """
    if not isinstance(trials, int) or trials < 1:
        raise DomainError(f"trials must be a positive integer, got {trials!r}")
    _check_seed(seed)
    if not isinstance(workers, int) or workers < 1:
        raise DomainError(f"workers must be a positive integer, got {workers!r}")
    n, m, l = shape.n, shape.m, shape.l
    blocks = _blocks(trials)

    def run_block(block: tuple[int, int]) -> list[int]:
        stream, size = block
        return _kernels.sample_fixed_point_counts(n, m, l, seed, stream, size)

    counts = [0] * (l + 1)
    if workers == 1:
        results = map(run_block, blocks)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_block, blocks))
    for partial in results:
        for k, c in enumerate(partial):
            counts[k] += c
    return SampleStats(shape=shape, trials=trials, seed=seed, counts=tuple(counts))


def sample_fixed_point_free(
    shape: MatchShape, rng: Xoshiro256StarStar
) -> tuple[PartialInjection, int]:
    """Uniform fixed-point-free matching by rejection, with the draw count.

    Resamples until a draw has no diagonal pair and reports how many draws
    that took (expected value: 1 / probability of no fixed point). Shapes
    with no fixed-point-free matching are rejected up front.
    """
    if unified_derangements(shape) == 0:
        raise ImpossibleEventError(
            f"no fixed-point-free matching exists for shape "
            f"(n={shape.n}, m={shape.m}, l={shape.l})"
        )
    for iteration in range(1, MAX_REJECTION_ITERATIONS + 1):
        matching = sample_matching(shape, rng)
        if count_fixed_points(matching) == 0:
            return matching, iteration
    raise RejectionLimitError(
        f"no fixed-point-free draw within {MAX_REJECTION_ITERATIONS} iterations"
    )


def conditional_sample_stats(shape: MatchShape, draws: int, seed: int) -> SampleStats:
    """Stats for ``draws`` fixed-point-free samples obtained by rejection.

    counts records the fixed points of the accepted samples (all zero by
    construction, so all mass sits at k = 0); rejection_iterations is the
    total number of raw draws consumed, so the mean iterations per
    accepted sample is rejection_iterations / draws.
    """
    if not isinstance(draws, int) or draws < 1:
        raise DomainError(f"draws must be a positive integer, got {draws!r}")
    _check_seed(seed)
    rng = Xoshiro256StarStar(seed, stream=0)
    iterations = 0
    for _ in range(draws):
        _, used = sample_fixed_point_free(shape, rng)
        iterations += used
    counts = [0] * (shape.l + 1)
    counts[0] = draws
    return SampleStats(
        shape=shape,
        trials=draws,
        seed=seed,
        counts=tuple(counts),
        rejection_iterations=iterations,
    )


def matching_frequencies(shape: MatchShape, trials: int, seed: int) -> list[int]:
    """Observed frequency of every individual matching over uniform draws.

    Index order is the enumeration order (rank 0 is the first matching
    enumerate_matchings yields). Uses the same block/substream layout as
    empirical_pmf, so the same seed describes the same sample sequence.
    """
    if not isinstance(trials, int) or trials < 1:
        raise DomainError(f"trials must be a positive integer, got {trials!r}")
    _check_seed(seed)
    total = unified_count(shape)
    if total > MAX_FREQUENCY_SUPPORT:
        raise DomainError(
            f"shape has {total} matchings; per-matching frequencies are "
            f"capped at {MAX_FREQUENCY_SUPPORT}"
        )
    n, m, l = shape.n, shape.m, shape.l
    frequencies = [0] * total
    for stream, size in _blocks(trials):
        for rank, c in enumerate(
            _kernels.sample_matching_ranks(n, m, l, seed, stream, size)
        ):
            frequencies[rank] += c
    return frequencies
