"""Brute-force ground truth: full enumeration and the inclusion-exclusion sieve.

Everything here is deliberately naive. The enumerator visits every matching
of a shape one by one, the census tallies diagonal pairs per matching, and
the sieve evaluates the alternating subset sum term by term. The counting
formulas are validated against this module, never the other way around.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterator

from . import _kernels
from .counting import MatchShape, unified_count
from .errors import DomainError, EnumerationBudgetError, TooManyEventsError

__all__ = [
    "DEFAULT_ENUMERATION_BUDGET",
    "MAX_SIEVE_EVENTS",
    "PartialInjection",
    "EventFamily",
    "enumerate_matchings",
    "fixed_point_census",
    "sieve_union_count",
    "union_size",
    "hat_event_family",
]

DEFAULT_ENUMERATION_BUDGET = 10**7

# 2^20 subset terms is the largest sieve evaluated exhaustively.
MAX_SIEVE_EVENTS = 20


@dataclass(frozen=True)
class PartialInjection:
    """An l-matching: pairs (person, hat), 1-based, sorted by person.

    Person indices are strictly increasing (the domain is a set) and hat
    indices are pairwise distinct (the map is injective). A fixed point is
    a pair (i, i).
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prev_person = 0
        hats = set()
        for pair in self.pairs:
            if len(pair) != 2:
                raise DomainError(f"pairs must be (person, hat), got {pair!r}")
            person, hat = pair
            if person <= prev_person:
                raise DomainError(
                    f"person indices must be strictly increasing and >= 1, got {self.pairs!r}"
                )
            if hat < 1 or hat in hats:
                raise DomainError(
                    f"hat indices must be distinct and >= 1, got {self.pairs!r}"
                )
            prev_person = person
            hats.add(hat)

    @property
    def domain(self) -> tuple[int, ...]:
        """Matched person indices, ascending."""
        return tuple(person for person, _ in self.pairs)

    @property
    def image(self) -> tuple[int, ...]:
        """Hat indices in person order (not necessarily sorted)."""
        return tuple(hat for _, hat in self.pairs)


@dataclass(frozen=True)
class EventFamily:
    """Explicit events over a finite universe {0, ..., universe_size - 1}.

    Events are concrete member sets rather than predicates so the sieve can
    be exercised on arbitrary families, not only the hat events.
    """

    universe_size: int
    events: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.universe_size, int) or self.universe_size < 1:
            raise DomainError(
                f"universe_size must be a positive integer, got {self.universe_size!r}"
            )
        for index, event in enumerate(self.events):
            for member in event:
                if not 0 <= member < self.universe_size:
                    raise DomainError(
                        f"event {index} member {member!r} outside universe of size "
                        f"{self.universe_size}"
                    )


def enumerate_matchings(
    shape: MatchShape, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> Iterator[PartialInjection]:
    """Yield every matching of the shape once, in lexicographic order.

    Order is by (domain subset, hat tuple in person order), both ascending.
    The total count is checked against the budget before any work; the
    generator is only constructed for affordable shapes.
    """
    total = unified_count(shape)
    if total > budget:
        raise EnumerationBudgetError(total, budget)

    def generate() -> Iterator[PartialInjection]:
        people = range(1, shape.n + 1)
        hats = range(1, shape.m + 1)
        for domain in combinations(people, shape.l):
            for image in permutations(hats, shape.l):
                yield PartialInjection(tuple(zip(domain, image)))

    return generate()


def fixed_point_census(
    shape: MatchShape, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> list[int]:
    """Tally all matchings of the shape by their number of fixed points.

    census[k] counts enumerated matchings with exactly k diagonal pairs,
    for k = 0..l; the entries sum to unified_count(shape). Counting is by
    visiting every matching, independent of any closed-form formula.
    """
    total = unified_count(shape)
    if total > budget:
        raise EnumerationBudgetError(total, budget)
    return _kernels.fixed_point_census(shape.n, shape.m, shape.l)


def sieve_union_count(family: EventFamily) -> int:
    """Union size via the alternating sum over all nonempty event subsets.

    Adds (-1)^(|S|+1) |intersection of S| for every nonempty subset S of
    the events, exactly as the inclusion-exclusion identity is written.
    Events are held as bitmasks; each subset's intersection extends the
    subset without its lowest event, so the term count is still 2^len - 1.
    """
    k = len(family.events)
    if k > MAX_SIEVE_EVENTS:
        raise TooManyEventsError(
            f"sieve over {k} events needs 2^{k} subset terms; the cap is "
            f"{MAX_SIEVE_EVENTS} events"
        )
    masks = []
    for event in family.events:
        mask = 0
        for member in event:
            mask |= 1 << member
        masks.append(mask)

    full = (1 << family.universe_size) - 1
    intersections = [full] * (1 << k)
    total = 0
    for subset in range(1, 1 << k):
        low = (subset & -subset).bit_length() - 1
        inter = intersections[subset ^ (1 << low)] & masks[low]
        intersections[subset] = inter
        term = inter.bit_count()
        total += -term if subset.bit_count() % 2 == 0 else term
    return total


def union_size(family: EventFamily) -> int:
    """Direct union cardinality, the sieve's independent comparator."""
    members: set[int] = set()
    for event in family.events:
        members |= event
    return len(members)


def hat_event_family(n: int) -> EventFamily:
    """The events "person i gets their own hat" over all n! permutations.

    Permutations of {1..n} are indexed 0..n!-1 in lexicographic order;
    event i collects the indices of permutations fixing person i+1. The
    union of all n events is the complement of the derangements.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    events: list[set[int]] = [set() for _ in range(n)]
    universe = 0
    for index, perm in enumerate(permutations(range(1, n + 1))):
        universe += 1
        for position, value in enumerate(perm):
            if value == position + 1:
                events[position].add(index)
    return EventFamily(universe, tuple(frozenset(e) for e in events))
