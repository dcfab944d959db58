"""Exact fixed-point laws, the n!/e rounding identity, and Poisson diagnostics.

Probabilities are ``fractions.Fraction`` values (exact, lowest terms); only
the Poisson comparisons leave rational arithmetic, and those run in mpmath
with 160 bits of mantissa so total-variation distances near 1e-3 carry far
more precision than a double.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .counting import (
    MatchShape,
    derangements,
    factorial,
    unified_count,
    unified_derangements,
    unified_rencontres,
)
from .errors import DomainError

__all__ = [
    "ExactProb",
    "WORK_PRECISION_BITS",
    "FixedPointPMF",
    "PoissonLimit",
    "NearestIntegerWitness",
    "prob_no_fixed_point",
    "fixed_point_pmf",
    "pmf_closed_form",
    "e_enclosure",
    "nearest_integer_identity",
    "poisson_rate",
    "poisson_pmf",
    "tv_distance_to_poisson",
]

# Exact probabilities are plain Fractions: lowest terms for free, and the
# in-range [0, 1] checks happen where values are constructed.
ExactProb = Fraction

# 53 bits of double precision plus a >= 64-bit guard band.
WORK_PRECISION_BITS = 160


@dataclass(frozen=True)
class FixedPointPMF:
    """Exact law of the fixed-point count K for one shape.

    probs[k] is the probability of exactly k fixed points, k = 0..l. On
    construction the entries must sum to 1 and each entry times the
    matching total must reproduce the exact-k count.
    """

    shape: MatchShape
    probs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.probs) != self.shape.l + 1:
            raise DomainError(
                f"need {self.shape.l + 1} entries for l={self.shape.l}, "
                f"got {len(self.probs)}"
            )
        total = unified_count(self.shape)
        for k, prob in enumerate(self.probs):
            if prob < 0 or prob > 1:
                raise DomainError(f"probs[{k}] = {prob} outside [0, 1]")
            if prob * total != unified_rencontres(self.shape, k):
                raise DomainError(
                    f"probs[{k}] * total is not the exact-{k} matching count"
                )
        if sum(self.probs) != 1:
            raise DomainError("PMF entries must sum to exactly 1")

    def mean(self) -> Fraction:
        """Exact expected number of fixed points (equals l/m for m > 0)."""
        return sum((Fraction(k) * p for k, p in enumerate(self.probs)), Fraction(0))


@dataclass(frozen=True)
class PoissonLimit:
    """Limit law Poisson(rate) with an exact rational rate in [0, 1]."""

    rate: Fraction

    def __post_init__(self) -> None:
        if self.rate < 0 or self.rate > 1:
            raise DomainError(f"rate must lie in [0, 1], got {self.rate}")

    def pmf(self, k: int) -> mpmath.mpf:
        """Poisson probability of k at this rate."""
        return poisson_pmf(self.rate, k)


@dataclass(frozen=True)
class NearestIntegerWitness:
    """Certified verdict that n!/e rounds to the derangement count.

    lower and upper are rationals with lower < n!/e < upper; the identity
    is certified when both lie strictly inside the rounding window
    (count - 1/2, count + 1/2). Truthiness reports the verdict.
    """

    n: int
    derangement_count: int
    lower: Fraction
    upper: Fraction
    holds: bool

    def __bool__(self) -> bool:
        return self.holds


def prob_no_fixed_point(shape: MatchShape) -> Fraction:
    """Probability that a uniform matching of the shape has no fixed point."""
    return Fraction(unified_derangements(shape), unified_count(shape))


def fixed_point_pmf(shape: MatchShape) -> FixedPointPMF:
    """Exact PMF of the fixed-point count: probs[k] = exact-k count / total."""
    total = unified_count(shape)
    probs = tuple(
        Fraction(unified_rencontres(shape, k), total) for k in range(shape.l + 1)
    )
    return FixedPointPMF(shape, probs)


def pmf_closed_form(family: str, shape: MatchShape, k: int) -> Fraction:
    """Simplified fixed-point probability for one of the special families.

    Evaluates the alternating closed forms directly in rational arithmetic:

      permutation: (1/k!) sum_{j=0}^{n-k} (-1)^j / j!
      rectangular: (n!/m!) (1/k!) sum_{j=0}^{n-k} ((-1)^j/j!) (m-k-j)!/(n-k-j)!
      partial:     (l!/n!) (1/k!) sum_{j=0}^{l-k} ((-1)^j/j!) (n-k-j)!/(l-k-j)!

    Each is an algebraic rewrite of the ratio exact-k count / family total;
    the test suite pins that identity, and the ratio stays authoritative.
    """
    n, m, l = shape.n, shape.m, shape.l
    if not isinstance(k, int) or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    if family == "permutation":
        if not n == m == l:
            raise DomainError(f"permutation family needs n = m = l, got {shape}")
        if k > n:
            raise DomainError(f"need k <= n, got k={k}, n={n}")
        tail = sum(Fraction((-1) ** j, factorial(j)) for j in range(n - k + 1))
        return Fraction(1, factorial(k)) * tail
    if family == "rectangular":
        if l != n:
            raise DomainError(f"rectangular family needs l = n, got {shape}")
        if k > n:
            raise DomainError(f"need k <= n, got k={k}, n={n}")
        tail = sum(
            Fraction((-1) ** j * _falling(m - k - j, m - n), factorial(j))
            for j in range(n - k + 1)
        )
        return Fraction(factorial(n), factorial(m)) * Fraction(1, factorial(k)) * tail
    if family == "partial":
        if m != n:
            raise DomainError(f"partial family needs m = n, got {shape}")
        if k > l:
            raise DomainError(f"need k <= l, got k={k}, l={l}")
        tail = sum(
            Fraction((-1) ** j * _falling(n - k - j, n - l), factorial(j))
            for j in range(l - k + 1)
        )
        return Fraction(factorial(l), factorial(n)) * Fraction(1, factorial(k)) * tail
    raise DomainError(
        f"family must be 'permutation', 'rectangular' or 'partial', got {family!r}"
    )


def _falling(a: int, depth: int) -> int:
    """Falling factorial a (a-1) ... over ``depth`` factors: a!/(a-depth)!."""
    out = 1
    for i in range(depth):
        out *= a - i
    return out


def e_enclosure(terms: int) -> tuple[Fraction, Fraction]:
    """Rational interval (lo, hi) with lo < e < hi from ``terms`` series terms.

    lo is the partial sum sum_{j=0}^{terms} 1/j!, assembled over the common
    denominator terms! via a(j) = j a(j-1) + 1; the remainder is below
    2/(terms+1)!, which gives hi. Width shrinks factorially.
    """
    if not isinstance(terms, int) or terms < 0:
        raise DomainError(f"terms must be a nonnegative integer, got {terms!r}")
    numerator = 1
    for j in range(1, terms + 1):
        numerator = j * numerator + 1
    lo = Fraction(numerator, factorial(terms))
    hi = lo + Fraction(2, factorial(terms + 1))
    return lo, hi


def nearest_integer_identity(n: int) -> NearestIntegerWitness:
    """Certify that rounding n!/e to the nearest integer gives derangements(n).

    Brackets n!/e between n!/hi and n!/lo using an e-enclosure, widening
    the series until the bracket falls strictly inside (or strictly
    outside) the half-unit rounding window. n = 0 is rejected: 0!/e rounds
    to 0, not to the actual count 1.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(
            f"need n >= 1 (0!/e rounds to 0, not derangements(0) = 1), got {n!r}"
        )
    count = derangements(n)
    n_factorial = factorial(n)
    half = Fraction(1, 2)
    terms = n + 8
    while True:
        lo, hi = e_enclosure(terms)
        lower = Fraction(n_factorial) / hi
        upper = Fraction(n_factorial) / lo
        if count - half < lower and upper < count + half:
            holds = True
            break
        if upper <= count - half or lower >= count + half:
            holds = False
            break
        terms *= 2
    return NearestIntegerWitness(n, count, lower, upper, holds)


def poisson_rate(shape: MatchShape) -> PoissonLimit:
    """Poisson rate l/m for the shape's fixed-point law.

    l/m equals the exact mean fixed-point count, and it reduces to 1 on
    the square full shape (n, n, n), to n/m when all people are matched,
    and to l/n on square partial shapes.
    """
    if shape.m == 0:
        raise DomainError("Poisson rate is undefined for m = 0")
    return PoissonLimit(Fraction(shape.l, shape.m))


def _to_mpf(value) -> mpmath.mpf:
    # Convert under the caller's active precision.
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def poisson_pmf(rate, k: int) -> mpmath.mpf:
    """Poisson probability e^-rate rate^k / k! at 160-bit working precision."""
    if not isinstance(k, int) or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    with mpmath.workprec(WORK_PRECISION_BITS):
        lam = _to_mpf(rate)
        if lam < 0:
            raise DomainError(f"rate must be nonnegative, got {rate!r}")
        return mpmath.exp(-lam) * mpmath.power(lam, k) / mpmath.factorial(k)


def tv_distance_to_poisson(shape: MatchShape) -> mpmath.mpf:
    """Total variation distance between the exact PMF and Poisson(l/m).

    Half the sum of |p_k - poisson_k| over k = 0..l plus the whole Poisson
    tail mass above l, where the exact PMF is zero. The degenerate m = 0
    shape is compared against Poisson(0) and gives 0.
    """
    exact = fixed_point_pmf(shape)
    rate = Fraction(0) if shape.m == 0 else Fraction(shape.l, shape.m)
    with mpmath.workprec(WORK_PRECISION_BITS):
        lam = _to_mpf(rate)
        gap = mpmath.mpf(0)
        covered = mpmath.mpf(0)
        for k, prob in enumerate(exact.probs):
            q = mpmath.exp(-lam) * mpmath.power(lam, k) / mpmath.factorial(k)
            gap += abs(_to_mpf(prob) - q)
            covered += q
        tail = 1 - covered
        if tail < 0:
            tail = mpmath.mpf(0)
        return (gap + tail) / 2
