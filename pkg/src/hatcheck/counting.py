"""Exact counts for matching families and their fixed-point refinements.

Every count is a plain Python ``int`` (arbitrary precision, never floating
point). The general object is a rectangular l-matching: an injection from an
l-element subset of the people {1..n} into the hats {1..m}. Setting m = n
gives partial matchings of a square problem, l = n gives injections of all
people, and both together give ordinary permutations. A fixed point is a
person i matched to hat i.

Alternating inclusion-exclusion sums are accumulated in signed integers
(partial sums may dip below zero) and are nonnegative once complete.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError

__all__ = [
    "MatchShape",
    "factorial",
    "binomial",
    "derangements",
    "derangements_via_pair_recurrence",
    "derangements_via_sign_recurrence",
    "rencontres",
    "arrangements_count",
    "rect_derangements",
    "rect_rencontres",
    "partial_count",
    "partial_derangements",
    "partial_rencontres",
    "unified_count",
    "unified_derangements",
    "unified_rencontres",
]


def _check_nonneg(value: int, name: str) -> None:
    if not isinstance(value, int) or value < 0:
        raise DomainError(f"{name} must be a nonnegative integer, got {value!r}")


@dataclass(frozen=True)
class MatchShape:
    """Problem shape (n, m, l): n people, m hats, l matched pairs.

    Requires 0 <= l <= n <= m. m = n and l = n are allowed; they select the
    square and the full-injection special cases.
    """

    n: int
    m: int
    l: int

    def __post_init__(self) -> None:
        _check_nonneg(self.n, "n")
        _check_nonneg(self.m, "m")
        _check_nonneg(self.l, "l")
        if not self.l <= self.n <= self.m:
            raise DomainError(
                f"shape requires l <= n <= m, got (n={self.n}, m={self.m}, l={self.l})"
            )

    @classmethod
    def permutation(cls, n: int) -> "MatchShape":
        """Shape of the classical problem: everybody matched, square."""
        return cls(n, n, n)

    @classmethod
    def rectangular(cls, n: int, m: int) -> "MatchShape":
        """All n people matched into m >= n hats."""
        return cls(n, m, n)

    @classmethod
    def partial(cls, n: int, l: int) -> "MatchShape":
        """l of n people matched into n hats."""
        return cls(n, n, l)


def factorial(n: int) -> int:
    """n! as an exact integer; factorial(0) == 1."""
    _check_nonneg(n, "n")
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """C(n, k), with the convention that out-of-range k gives 0."""
    _check_nonneg(n, "n")
    if not isinstance(k, int):
        raise DomainError(f"k must be an integer, got {k!r}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


@lru_cache(maxsize=None)
def derangements(n: int) -> int:
    """Permutations of n with no fixed point (the subfactorial).

    Evaluates n! * sum_{k=0}^{n} (-1)^k / k! exactly, as the alternating sum
    of the integers n!/k!. Each n!/k! is built as a falling factorial so no
    factorial quotient of two huge integers is ever formed.
    """
    _check_nonneg(n, "n")
    term = 1  # n!/k!, walked from k = n down to k = 0
    total = -term if n % 2 else term
    for k in range(n, 0, -1):
        term *= k
        total += -term if (k - 1) % 2 else term
    assert total >= 0
    return total


def derangements_via_pair_recurrence(n: int) -> int:
    """Subfactorial via d(n) = (n-1) * (d(n-1) + d(n-2)), d(0)=1, d(1)=0."""
    _check_nonneg(n, "n")
    if n == 0:
        return 1
    prev2, prev1 = 1, 0
    for i in range(2, n + 1):
        prev2, prev1 = prev1, (i - 1) * (prev1 + prev2)
    return prev1


def derangements_via_sign_recurrence(n: int) -> int:
    """Subfactorial via d(n) = n * d(n-1) + (-1)^n, d(0)=1."""
    _check_nonneg(n, "n")
    value = 1
    for i in range(1, n + 1):
        value = i * value + (1 if i % 2 == 0 else -1)
    return value


def rencontres(n: int, k: int) -> int:
    """Permutations of n with exactly k fixed points: C(n,k) * d(n-k)."""
    _check_nonneg(n, "n")
    if not isinstance(k, int) or k < 0 or k > n:
        raise DomainError(f"need 0 <= k <= n, got k={k!r}, n={n}")
    return math.comb(n, k) * derangements(n - k)


def arrangements_count(n: int, m: int) -> int:
    """Injections of {1..n} into {1..m}: the falling factorial m!/(m-n)!."""
    _check_nonneg(n, "n")
    _check_nonneg(m, "m")
    if n > m:
        raise DomainError(f"need n <= m, got n={n}, m={m}")
    return math.perm(m, n)


def rect_derangements(n: int, m: int) -> int:
    """Fixed-point-free injections of {1..n} into {1..m}.

    sum_{k=0}^{n} (-1)^k C(n,k) (m-k)!/(m-n)!, with each quotient taken as
    the falling factorial perm(m-k, n-k).
    """
    _check_nonneg(n, "n")
    _check_nonneg(m, "m")
    if n > m:
        raise DomainError(f"need n <= m, got n={n}, m={m}")
    total = 0
    for k in range(n + 1):
        t = math.comb(n, k) * math.perm(m - k, n - k)
        total += -t if k % 2 else t
    assert total >= 0
    return total


def rect_rencontres(n: int, m: int, k: int) -> int:
    """Injections of {1..n} into {1..m} with exactly k fixed points."""
    _check_nonneg(n, "n")
    _check_nonneg(m, "m")
    if n > m:
        raise DomainError(f"need n <= m, got n={n}, m={m}")
    if not isinstance(k, int) or k < 0 or k > n:
        raise DomainError(f"need 0 <= k <= n, got k={k!r}, n={n}")
    return math.comb(n, k) * rect_derangements(n - k, m - k)


def partial_count(n: int, l: int) -> int:
    """l-matchings of {1..n} with itself: C(n,l)^2 * l!."""
    _check_nonneg(n, "n")
    _check_nonneg(l, "l")
    if l > n:
        raise DomainError(f"need l <= n, got l={l}, n={n}")
    return math.comb(n, l) ** 2 * math.factorial(l)


def partial_derangements(n: int, l: int) -> int:
    """Fixed-point-free l-matchings of {1..n} with itself.

    sum_{j=0}^{l} (-1)^j C(n,j) C(n-j, l-j)^2 (l-j)!.
    """
    _check_nonneg(n, "n")
    _check_nonneg(l, "l")
    if l > n:
        raise DomainError(f"need l <= n, got l={l}, n={n}")
    total = 0
    for j in range(l + 1):
        t = math.comb(n, j) * math.comb(n - j, l - j) ** 2 * math.factorial(l - j)
        total += -t if j % 2 else t
    assert total >= 0
    return total


def partial_rencontres(n: int, l: int, k: int) -> int:
    """l-matchings of {1..n} with exactly k fixed points."""
    _check_nonneg(n, "n")
    _check_nonneg(l, "l")
    if l > n:
        raise DomainError(f"need l <= n, got l={l}, n={n}")
    if not isinstance(k, int) or k < 0 or k > l:
        raise DomainError(f"need 0 <= k <= l, got k={k!r}, l={l}")
    return math.comb(n, k) * partial_derangements(n - k, l - k)


def unified_count(shape: MatchShape) -> int:
    """All rectangular l-matchings of the shape: C(n,l) C(m,l) l!."""
    return (
        math.comb(shape.n, shape.l)
        * math.comb(shape.m, shape.l)
        * math.factorial(shape.l)
    )


def unified_derangements(shape: MatchShape) -> int:
    """Fixed-point-free rectangular l-matchings.

    sum_{j=0}^{l} (-1)^j C(n,j) C(n-j, l-j) C(m-j, l-j) (l-j)!.
    """
    n, m, l = shape.n, shape.m, shape.l
    total = 0
    for j in range(l + 1):
        t = (
            math.comb(n, j)
            * math.comb(n - j, l - j)
            * math.comb(m - j, l - j)
            * math.factorial(l - j)
        )
        total += -t if j % 2 else t
    assert total >= 0
    return total


def unified_rencontres(shape: MatchShape, k: int) -> int:
    """Rectangular l-matchings with exactly k fixed points.

    Pins the k diagonal pairs (C(n,k) ways) and requires the remaining
    (n-k, m-k, l-k) shape to be fixed-point free. Validated against full
    enumeration in the test suite; summing over k = 0..l recovers
    unified_count(shape).
    """
    if not isinstance(k, int) or k < 0 or k > shape.l:
        raise DomainError(f"need 0 <= k <= l, got k={k!r}, l={shape.l}")
    reduced = MatchShape(shape.n - k, shape.m - k, shape.l - k)
    return math.comb(shape.n, k) * unified_derangements(reduced)
