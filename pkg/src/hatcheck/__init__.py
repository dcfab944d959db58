"""Exact counting, fixed-point laws, and sampling for hat-check matchings.

The package answers questions about rectangular l-matchings (l of n people
matched injectively into m hats, l <= n <= m) and their classical special
cases: how many matchings exist, how many avoid every fixed point, the
exact distribution of the fixed-point count, its Poisson limit, and seeded
Monte Carlo experiments, all cross-checked against brute-force enumeration.
"""

__version__ = "0.1.0"

from .counting import (
    MatchShape,
    arrangements_count,
    binomial,
    derangements,
    derangements_via_pair_recurrence,
    derangements_via_sign_recurrence,
    factorial,
    partial_count,
    partial_derangements,
    partial_rencontres,
    rect_derangements,
    rect_rencontres,
    rencontres,
    unified_count,
    unified_derangements,
    unified_rencontres,
)
from .distributions import (
    ExactProb,
    FixedPointPMF,
    NearestIntegerWitness,
    PoissonLimit,
    e_enclosure,
    fixed_point_pmf,
    nearest_integer_identity,
    pmf_closed_form,
    poisson_pmf,
    poisson_rate,
    prob_no_fixed_point,
    tv_distance_to_poisson,
)
from .errors import (
    BFileFormatError,
    DomainError,
    EnumerationBudgetError,
    HatcheckError,
    ImpossibleEventError,
    OeisFetchError,
    RejectionLimitError,
    SnapshotMissingError,
    TooManyEventsError,
)
from .oeis import (
    SeqCheckReport,
    SequenceSpec,
    check_sequence,
    fetch_bfile,
    load_registry,
    parse_bfile,
    serialize_bfile,
)
from .oracle import (
    DEFAULT_ENUMERATION_BUDGET,
    EventFamily,
    PartialInjection,
    enumerate_matchings,
    fixed_point_census,
    hat_event_family,
    sieve_union_count,
    union_size,
)
from .rng import RNG_ALGORITHM, Xoshiro256StarStar, derive_stream_state
from .sampler import (
    SampleStats,
    conditional_sample_stats,
    count_fixed_points,
    empirical_pmf,
    matching_frequencies,
    sample_fixed_point_free,
    sample_matching,
)

__all__ = [
    "__version__",
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
    "ExactProb",
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
    "PartialInjection",
    "EventFamily",
    "DEFAULT_ENUMERATION_BUDGET",
    "enumerate_matchings",
    "fixed_point_census",
    "sieve_union_count",
    "union_size",
    "hat_event_family",
    "RNG_ALGORITHM",
    "Xoshiro256StarStar",
    "derive_stream_state",
    "SampleStats",
    "sample_matching",
    "count_fixed_points",
    "empirical_pmf",
    "sample_fixed_point_free",
    "conditional_sample_stats",
    "matching_frequencies",
    "SequenceSpec",
    "SeqCheckReport",
    "parse_bfile",
    "serialize_bfile",
    "fetch_bfile",
    "check_sequence",
    "load_registry",
    "HatcheckError",
    "DomainError",
    "EnumerationBudgetError",
    "TooManyEventsError",
    "ImpossibleEventError",
    "RejectionLimitError",
    "BFileFormatError",
    "SnapshotMissingError",
    "OeisFetchError",
]
