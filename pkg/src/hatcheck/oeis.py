"""OEIS b-file fetching, caching, parsing, and term-by-term regression checks.

Snapshots of the checked sequences ship with the package so the whole suite
runs offline; live fetching is opt-in. Which sequence maps to which counting
call (including the row-major read order for triangles) lives in a versioned
registry file next to the snapshots. Sequences whose index mapping has not
been pinned down against published data are carried with status "open" and
are never force-fitted.
"""

from __future__ import annotations

import json
import math
import os
import re
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable

import requests

from .counting import derangements, factorial, rect_derangements
from .errors import BFileFormatError, DomainError, OeisFetchError, SnapshotMissingError

__all__ = [
    "CACHE_ENV_VAR",
    "OEIS_URL_TEMPLATE",
    "SequenceSpec",
    "SeqCheckReport",
    "parse_bfile",
    "serialize_bfile",
    "fetch_bfile",
    "check_sequence",
    "load_registry",
]

CACHE_ENV_VAR = "HATCHECK_OEIS_CACHE"

OEIS_URL_TEMPLATE = "https://oeis.org/{id}/b{digits}.txt"

FETCH_TIMEOUT_SECONDS = 30

_USER_AGENT = "hatcheck/0.1.0 (b-file regression checks)"

_ID_PATTERN = re.compile(r"\AA\d{6}\Z")


def _triangle_row_major(index: int, cell: Callable[[int, int], int]) -> int:
    """Value at linear position ``index`` of a row-major triangle.

    Position index lands in row n = floor((sqrt(8 index + 1) - 1) / 2) at
    column k = index - n(n+1)/2, with 0 <= k <= n.
    """
    n = (math.isqrt(8 * index + 1) - 1) // 2
    k = index - n * (n + 1) // 2
    return cell(n, k)


def _prefix_derangement_cell(n: int, k: int) -> int:
    # Permutations of n with no fixed point among the first k positions:
    # a fixed-point-free injection of the k prefix positions into all n
    # targets, times free placement of the remaining n-k.
    return rect_derangements(k, n) * factorial(n - k)


# Rules map a 0-based b-file index to the computed value.
_RULES: dict[str, Callable[[int], int]] = {
    "derangements": derangements,
    "prefix_derangement_triangle": lambda index: _triangle_row_major(
        index, _prefix_derangement_cell
    ),
}


@dataclass(frozen=True)
class SequenceSpec:
    """Binding of an OEIS id to a computed sequence.

    rule names an entry in the rule table (None while the index mapping is
    still open); offset is the first b-file index. status is "verified"
    once the mapping has been pinned against published terms, else "open".
    """

    oeis_id: str
    rule: str | None
    offset: int | None
    status: str = "verified"
    note: str = ""

    def __post_init__(self) -> None:
        if not _ID_PATTERN.match(self.oeis_id):
            raise DomainError(
                f"OEIS id must be 'A' plus six digits, got {self.oeis_id!r}"
            )
        if self.rule is not None and self.rule not in _RULES:
            raise DomainError(f"unknown mapping rule {self.rule!r}")
        if self.status not in ("verified", "open"):
            raise DomainError(f"status must be 'verified' or 'open', got {self.status!r}")


@dataclass(frozen=True)
class SeqCheckReport:
    """Term-by-term comparison outcome for one sequence.

    mismatches holds (index, expected from the b-file, computed) triples;
    source records where the b-file text came from.
    """

    oeis_id: str
    terms_checked: int
    mismatches: tuple[tuple[int, int, int], ...]
    source: str

    @property
    def status(self) -> str:
        return "pass" if not self.mismatches else "fail"


def parse_bfile(text: str) -> list[tuple[int, int]]:
    """Parse b-file text into (index, value) pairs, preserving order.

    Blank lines and '#' comment lines are skipped; anything else must be
    exactly two integer tokens.
    """
    pairs = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise BFileFormatError(line_number, line)
        try:
            index, value = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise BFileFormatError(line_number, line) from None
        pairs.append((index, value))
    return pairs


def serialize_bfile(pairs: list[tuple[int, int]]) -> str:
    """Render (index, value) pairs in b-file format, one pair per line."""
    return "".join(f"{index} {value}\n" for index, value in pairs)


def _cache_path(cache_dir: str | Path, oeis_id: str) -> Path:
    return Path(cache_dir) / f"{oeis_id}.txt"


def _vendored_text(oeis_id: str) -> str | None:
    resource = resources.files("hatcheck").joinpath(f"data/oeis/{oeis_id}.txt")
    if not resource.is_file():
        return None
    return resource.read_text(encoding="ascii")


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="ascii") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def fetch_bfile(
    oeis_id: str, cache_dir: str | Path | None = None, offline: bool = True
) -> tuple[str, str]:
    """Return (b-file text, source) for a sequence id.

    Lookup order is cache, then vendored snapshot, then (online only) an
    HTTP GET of the canonical b-file URL with write-through caching. The
    cache directory is the argument if given, else the HATCHECK_OEIS_CACHE
    environment variable; sources are "cached", "vendored" and
    "fetched-live".
    """
    if not _ID_PATTERN.match(oeis_id):
        raise DomainError(f"OEIS id must be 'A' plus six digits, got {oeis_id!r}")
    if cache_dir is None:
        env_dir = os.environ.get(CACHE_ENV_VAR)
        cache_dir = env_dir if env_dir else None

    if cache_dir is not None:
        path = _cache_path(cache_dir, oeis_id)
        if path.is_file():
            return path.read_text(encoding="ascii"), "cached"

    vendored = _vendored_text(oeis_id)
    if vendored is not None:
        return vendored, "vendored"

    if offline:
        raise SnapshotMissingError(
            f"no cached or vendored b-file for {oeis_id} in offline mode"
        )

    url = OEIS_URL_TEMPLATE.format(id=oeis_id, digits=oeis_id[1:])
    try:
        response = requests.get(
            url,
            timeout=FETCH_TIMEOUT_SECONDS,
            headers={"User-Agent": _USER_AGENT},
        )
        response.raise_for_status()
    except requests.RequestException as exc:
        raise OeisFetchError(f"fetching {url} failed: {exc}") from exc
    text = response.text
    if cache_dir is not None:
        _write_atomic(_cache_path(cache_dir, oeis_id), text)
    return text, "fetched-live"


def check_sequence(
    spec: SequenceSpec,
    terms: int,
    cache_dir: str | Path | None = None,
    offline: bool = True,
) -> SeqCheckReport:
    """Compare the first ``terms`` b-file entries against computed values.

    Only runs for specs with an established mapping; open specs are a
    domain error here and are surfaced as open findings by the CLI.
    """
    if spec.rule is None or spec.status == "open":
        raise DomainError(
            f"index mapping for {spec.oeis_id} is open; nothing to check"
        )
    if not isinstance(terms, int) or terms < 0:
        raise DomainError(f"terms must be a nonnegative integer, got {terms!r}")
    text, source = fetch_bfile(spec.oeis_id, cache_dir=cache_dir, offline=offline)
    pairs = parse_bfile(text)
    checked = pairs[:terms]
    if checked and checked[0][0] != spec.offset:
        raise DomainError(
            f"{spec.oeis_id} b-file starts at index {checked[0][0]}, "
            f"registry says offset {spec.offset}"
        )
    rule = _RULES[spec.rule]
    mismatches = []
    for index, expected in checked:
        computed = rule(index)
        if computed != expected:
            mismatches.append((index, expected, computed))
    return SeqCheckReport(
        oeis_id=spec.oeis_id,
        terms_checked=len(checked),
        mismatches=tuple(mismatches),
        source=source,
    )


def load_registry() -> dict[str, SequenceSpec]:
    """Sequence bindings shipped with the package, keyed by OEIS id."""
    raw = json.loads(
        resources.files("hatcheck")
        .joinpath("data/oeis/registry.json")
        .read_text(encoding="ascii")
    )
    registry = {}
    for oeis_id, entry in raw["sequences"].items():
        registry[oeis_id] = SequenceSpec(
            oeis_id=oeis_id,
            rule=entry["rule"],
            offset=entry["offset"],
            status=entry["status"],
            note=entry.get("note", ""),
        )
    return registry
