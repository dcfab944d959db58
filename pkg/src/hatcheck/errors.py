"""Exception hierarchy shared by all hatcheck modules."""


class HatcheckError(Exception):
    """Base class for every error raised by this package."""


class DomainError(HatcheckError, ValueError):
    """A parameter lies outside the mathematical domain of an operation."""


class EnumerationBudgetError(HatcheckError):
    """Enumeration refused: the family is larger than the configured budget."""

    def __init__(self, count: int, budget: int):
        self.count = count
        self.budget = budget
        super().__init__(
            f"enumeration of {count} matchings exceeds the budget of {budget}"
        )


class TooManyEventsError(HatcheckError):
    """The sieve evaluates 2^k - 1 subset terms; k is capped to keep that finite in practice."""


class ImpossibleEventError(HatcheckError):
    """Conditional sampling was requested for an event of probability zero."""


class RejectionLimitError(HatcheckError):
    """Rejection sampling gave up after the configured iteration cap."""


class BFileFormatError(HatcheckError, ValueError):
    """A b-file line does not parse as '<index> <value>'."""

    def __init__(self, line_number: int, line: str):
        self.line_number = line_number
        self.line = line
        super().__init__(f"malformed b-file line {line_number}: {line!r}")


class SnapshotMissingError(HatcheckError, OSError):
    """Offline lookup found neither a cached nor a vendored copy of the sequence."""


class OeisFetchError(HatcheckError, OSError):
    """An HTTP fetch from OEIS failed."""
