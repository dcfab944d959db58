"""Command-line interface: counts, probabilities, PMF tables, sampling runs,
oracle verification, and OEIS checks, with text, JSON, and CSV output.

Every emitted value is either an exact decimal integer string, a fraction
string "numerator/denominator", or a 12-significant-digit decimal string;
floating point never touches a count. JSON records are rendered with sorted
keys and fixed indentation so identical requests produce identical bytes.

Exit codes: 0 success, 1 domain or usage error, 2 verification mismatch,
3 I/O or network failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

import mpmath

from . import __version__, oracle
from .counting import (
    MatchShape,
    arrangements_count,
    factorial,
    partial_count,
    partial_rencontres,
    rect_rencontres,
    rencontres,
    unified_count,
    unified_derangements,
    unified_rencontres,
)
from .distributions import (
    fixed_point_pmf,
    poisson_pmf,
    poisson_rate,
    prob_no_fixed_point,
    tv_distance_to_poisson,
)
from .errors import DomainError, HatcheckError, OeisFetchError, SnapshotMissingError
from .oeis import check_sequence, load_registry
from .rng import RNG_ALGORITHM
from .sampler import conditional_sample_stats, empirical_pmf

__all__ = ["OutputRecord", "run", "main"]

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_MISMATCH = 2
EXIT_IO = 3

DECIMAL_DIGITS = 12


@dataclass
class OutputRecord:
    """One subcommand's answer: request echo, results, optional table."""

    request: dict[str, str]
    results: dict[str, str]
    table_columns: list[str] = field(default_factory=list)
    table_rows: list[list[str]] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)

    def to_json(self) -> str:
        payload: dict[str, object] = {
            "request": self.request,
            "results": self.results,
            "metadata": self.metadata,
        }
        if self.table_columns:
            payload["table"] = {"columns": self.table_columns, "rows": self.table_rows}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        request = " ".join(
            f"{key}={value}" for key, value in self.request.items() if key != "subcommand"
        )
        lines = [f"{self.request['subcommand']} {request}".rstrip()]
        for key, value in self.results.items():
            lines.append(f"{key} = {value}")
        if self.table_columns:
            lines.append("")
            lines.append(" ".join(self.table_columns))
            for row in self.table_rows:
                lines.append(" ".join(row))
        for key, value in self.metadata.items():
            lines.append(f"# {key} {value}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        # Tables render as-is; scalar results render as field,value rows.
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if self.table_columns:
            writer.writerow(self.table_columns)
            writer.writerows(self.table_rows)
        else:
            writer.writerow(["field", "value"])
            writer.writerows(self.results.items())
        return buffer.getvalue()

    def render(self, output_format: str) -> str:
        if output_format == "json":
            return self.to_json()
        if output_format == "csv":
            return self.to_csv()
        return self.to_text()


def _fraction_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _decimal_str(value: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def _mpf_str(value) -> str:
    return mpmath.nstr(value, DECIMAL_DIGITS)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse parser that reports usage problems as exit code 1."""

    def error(self, message):
        raise _UsageError(message)


def _add_shape_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, required=True, help="number of people")
    parser.add_argument(
        "--m", type=int, default=None, help="number of hats (default: same as --n)"
    )
    parser.add_argument(
        "--l", type=int, default=None, help="matched pairs (default: same as --n)"
    )


def _shape_from(args: argparse.Namespace) -> MatchShape:
    m = args.n if args.m is None else args.m
    l = args.n if args.l is None else args.l
    return MatchShape(args.n, m, l)


def _shape_request(shape: MatchShape, subcommand: str) -> dict[str, str]:
    return {
        "subcommand": subcommand,
        "n": str(shape.n),
        "m": str(shape.m),
        "l": str(shape.l),
    }


def build_parser() -> _Parser:
    parser = _Parser(
        prog="hatcheck",
        description="Exact counting, fixed-point laws, and sampling for "
        "hat-check style matching problems.",
    )
    parser.add_argument("--version", action="version", version=f"hatcheck {__version__}")
    shared = _Parser(add_help=False)
    shared.add_argument(
        "--format",
        choices=("json", "csv", "text"),
        default="text",
        help="output format (default: text)",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p_count = sub.add_parser(
        "count", parents=[shared], help="matching counts for one shape"
    )
    _add_shape_arguments(p_count)
    p_count.add_argument(
        "--fixed-points",
        type=int,
        default=None,
        metavar="K",
        help="also report the count with exactly K fixed points",
    )

    p_prob = sub.add_parser(
        "prob", parents=[shared], help="probability of no fixed point"
    )
    _add_shape_arguments(p_prob)

    p_pmf = sub.add_parser(
        "pmf",
        parents=[shared],
        help="exact fixed-point PMF with Poisson comparison",
    )
    _add_shape_arguments(p_pmf)

    p_table = sub.add_parser(
        "table", parents=[shared], help="rencontres tables over parameter grids"
    )
    p_table.add_argument(
        "--family",
        choices=("perm", "rect", "partial", "unified"),
        required=True,
        help="matching family",
    )
    p_table.add_argument(
        "--ranges",
        required=True,
        help="comma-separated inclusive ranges 'lo..hi' (or single values), "
        "one per family parameter: perm takes n; rect takes n,m; partial "
        "takes n,l; unified takes n,m,l. Out-of-domain combinations are "
        "skipped.",
    )

    p_sample = sub.add_parser(
        "sample", parents=[shared], help="seeded Monte Carlo sampling run"
    )
    _add_shape_arguments(p_sample)
    p_sample.add_argument("--trials", type=int, required=True, help="number of draws")
    p_sample.add_argument("--seed", type=int, required=True, help="64-bit RNG seed")
    p_sample.add_argument(
        "--fpf",
        action="store_true",
        help="draw fixed-point-free matchings by rejection and report the "
        "iteration counts instead of the unconditional frequencies",
    )
    p_sample.add_argument(
        "--workers",
        type=int,
        default=1,
        help="worker threads for unconditional runs (results do not depend "
        "on this)",
    )

    p_verify = sub.add_parser(
        "verify",
        parents=[shared],
        help="check every formula against brute-force enumeration",
    )
    p_verify.add_argument(
        "--max-m",
        type=int,
        default=8,
        help="verify all shapes with m up to this bound (default: 8)",
    )

    p_oeis = sub.add_parser(
        "oeis-check", parents=[shared], help="compare a computed sequence to OEIS data"
    )
    p_oeis.add_argument("--id", required=True, help="OEIS id, e.g. A000166")
    p_oeis.add_argument(
        "--terms", type=int, default=100, help="terms to compare (default: 100)"
    )
    p_oeis.add_argument(
        "--offline",
        action="store_true",
        help="never touch the network (this is already the default)",
    )
    p_oeis.add_argument(
        "--live",
        action="store_true",
        help="allow fetching from oeis.org when no snapshot or cache entry exists",
    )
    p_oeis.add_argument(
        "--data-dir",
        default=None,
        metavar="PATH",
        help="b-file cache directory (overrides HATCHECK_OEIS_CACHE)",
    )
    return parser


def _cmd_count(args: argparse.Namespace) -> tuple[OutputRecord, int]:
    shape = _shape_from(args)
    request = _shape_request(shape, "count")
    results = {
        "total": str(unified_count(shape)),
        "fixed_point_free": str(unified_derangements(shape)),
    }
    if args.fixed_points is not None:
        request["fixed_points"] = str(args.fixed_points)
        results["exactly_k"] = str(unified_rencontres(shape, args.fixed_points))
    return OutputRecord(request, results, metadata=_base_metadata()), EXIT_OK


def _cmd_prob(args: argparse.Namespace) -> tuple[OutputRecord, int]:
    shape = _shape_from(args)
    prob = prob_no_fixed_point(shape)
    results = {
        "prob_no_fixed_point": _fraction_str(prob),
        "decimal": _decimal_str(prob),
    }
    record = OutputRecord(
        _shape_request(shape, "prob"), results, metadata=_base_metadata()
    )
    return record, EXIT_OK


def _cmd_pmf(args: argparse.Namespace) -> tuple[OutputRecord, int]:
    shape = _shape_from(args)
    pmf = fixed_point_pmf(shape)
    total = unified_count(shape)
    rate = poisson_rate(shape).rate
    columns = ["k", "count", "probability", "decimal", "poisson"]
    rows = []
    for k, prob in enumerate(pmf.probs):
        rows.append(
            [
                str(k),
                str(unified_rencontres(shape, k)),
                _fraction_str(prob),
                _decimal_str(prob),
                _mpf_str(poisson_pmf(rate, k)),
            ]
        )
    results = {
        "total": str(total),
        "poisson_rate": _fraction_str(rate),
        "tv_distance": _mpf_str(tv_distance_to_poisson(shape)),
    }
    record = OutputRecord(
        _shape_request(shape, "pmf"),
        results,
        table_columns=columns,
        table_rows=rows,
        metadata=_base_metadata(),
    )
    return record, EXIT_OK


def _parse_ranges(text: str, arity: int) -> list[range]:
    parts = text.split(",")
    if len(parts) != arity:
        raise DomainError(
            f"--ranges needs {arity} comma-separated ranges for this family, "
            f"got {len(parts)}"
        )
    out = []
    for part in parts:
        part = part.strip()
        try:
            if ".." in part:
                lo_text, hi_text = part.split("..", 1)
                lo, hi = int(lo_text), int(hi_text)
            else:
                lo = hi = int(part)
        except ValueError:
            raise DomainError(f"bad range {part!r}; use 'lo..hi' or a single integer")
        if lo < 0 or hi < lo:
            raise DomainError(f"bad range {part!r}; need 0 <= lo <= hi")
        out.append(range(lo, hi + 1))
    return out


def _table_cells(family: str, grids: list[range]):
    """Yield (n, m, l) for each in-domain grid combination."""
    if family == "perm":
        for n in grids[0]:
            yield n, n, n
    elif family == "rect":
        for n in grids[0]:
            for m in grids[1]:
                if n <= m:
                    yield n, m, n
    elif family == "partial":
        for n in grids[0]:
            for l in grids[1]:
                if l <= n:
                    yield n, n, l
    else:
        for n in grids[0]:
            for m in grids[1]:
                for l in grids[2]:
                    if l <= n <= m:
                        yield n, m, l


_FAMILY_ARITY = {"perm": 1, "rect": 2, "partial": 2, "unified": 3}


def _family_cell_counts(family: str, n: int, m: int, l: int) -> tuple[int, list[int]]:
    """Family total and per-k exact counts for one parameter cell."""
    if family == "perm":
        return factorial(n), [rencontres(n, k) for k in range(l + 1)]
    if family == "rect":
        return arrangements_count(n, m), [
            rect_rencontres(n, m, k) for k in range(l + 1)
        ]
    if family == "partial":
        return partial_count(n, l), [
            partial_rencontres(n, l, k) for k in range(l + 1)
        ]
    shape = MatchShape(n, m, l)
    return unified_count(shape), [
        unified_rencontres(shape, k) for k in range(l + 1)
    ]


def _cmd_table(args: argparse.Namespace) -> tuple[OutputRecord, int]:
    family = args.family
    grids = _parse_ranges(args.ranges, _FAMILY_ARITY[family])
    columns = ["n", "m", "l", "k", "count", "probability", "decimal"]
    rows = []
    for n, m, l in _table_cells(family, grids):
        total, counts = _family_cell_counts(family, n, m, l)
        for k, count in enumerate(counts):
            prob = Fraction(count, total)
            rows.append(
                [
                    str(n),
                    str(m),
                    str(l),
                    str(k),
                    str(count),
                    _fraction_str(prob),
                    _decimal_str(prob),
                ]
            )
    request = {"subcommand": "table", "family": family, "ranges": args.ranges}
    results = {"rows": str(len(rows))}
    record = OutputRecord(
        request,
        results,
        table_columns=columns,
        table_rows=rows,
        metadata=_base_metadata(),
    )
    return record, EXIT_OK


def _cmd_sample(args: argparse.Namespace) -> tuple[OutputRecord, int]:
    shape = _shape_from(args)
    request = _shape_request(shape, "sample")
    request["trials"] = str(args.trials)
    request["seed"] = str(args.seed)
    metadata = _base_metadata()
    metadata["seed"] = str(args.seed)
    metadata["rng"] = RNG_ALGORITHM
    if args.fpf:
        request["fpf"] = "true"
        stats = conditional_sample_stats(shape, args.trials, args.seed)
        expected = Fraction(1) / prob_no_fixed_point(shape)
        mean_iterations = Fraction(stats.rejection_iterations, stats.trials)
        results = {
            "draws": str(stats.trials),
            "total_iterations": str(stats.rejection_iterations),
            "mean_iterations": _decimal_str(mean_iterations),
            "expected_iterations": _decimal_str(expected),
        }
        record = OutputRecord(request, results, metadata=metadata)
        return record, EXIT_OK
    stats = empirical_pmf(shape, args.trials, args.seed, workers=args.workers)
    exact = fixed_point_pmf(shape)
    columns = ["k", "observed", "frequency", "exact_probability", "exact_decimal"]
    rows = []
    for k, observed in enumerate(stats.counts):
        frequency = Fraction(observed, stats.trials)
        rows.append(
            [
                str(k),
                str(observed),
                _decimal_str(frequency),
                _fraction_str(exact.probs[k]),
                _decimal_str(exact.probs[k]),
            ]
        )
    results = {"trials": str(stats.trials)}
    record = OutputRecord(
        request, results, table_columns=columns, table_rows=rows, metadata=metadata
    )
    return record, EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> tuple[OutputRecord, int]:
    if args.max_m < 0:
        raise DomainError(f"--max-m must be nonnegative, got {args.max_m}")
    columns = ["check", "n", "m", "l", "k", "oracle", "formula"]
    rows = []
    shapes_checked = 0
    cells_checked = 0
    for m in range(args.max_m + 1):
        for n in range(m + 1):
            for l in range(n + 1):
                shape = MatchShape(n, m, l)
                census = oracle.fixed_point_census(shape)
                shapes_checked += 1
                if sum(census) != unified_count(shape):
                    rows.append(
                        [
                            "total",
                            str(n),
                            str(m),
                            str(l),
                            "",
                            str(sum(census)),
                            str(unified_count(shape)),
                        ]
                    )
                for k, observed in enumerate(census):
                    cells_checked += 1
                    formula = unified_rencontres(shape, k)
                    if formula != observed:
                        rows.append(
                            [
                                "rencontres",
                                str(n),
                                str(m),
                                str(l),
                                str(k),
                                str(observed),
                                str(formula),
                            ]
                        )
    sieve_checked = 0
    for n in range(1, min(args.max_m, 7) + 1):
        family = oracle.hat_event_family(n)
        sieve = oracle.sieve_union_count(family)
        direct = oracle.union_size(family)
        expected = factorial(n) - unified_derangements(MatchShape.permutation(n))
        sieve_checked += 1
        if not sieve == direct == expected:
            rows.append(
                ["sieve", str(n), str(n), str(n), "", str(direct), str(sieve)]
            )
    request = {"subcommand": "verify", "max_m": str(args.max_m)}
    results = {
        "shapes_checked": str(shapes_checked),
        "rencontres_cells_checked": str(cells_checked),
        "sieve_families_checked": str(sieve_checked),
        "mismatches": str(len(rows)),
    }
    record = OutputRecord(
        request,
        results,
        table_columns=columns if rows else [],
        table_rows=rows,
        metadata=_base_metadata(),
    )
    return record, EXIT_OK if not rows else EXIT_MISMATCH


def _cmd_oeis_check(args: argparse.Namespace) -> tuple[OutputRecord, int]:
    if args.offline and args.live:
        raise DomainError("--offline and --live are mutually exclusive")
    registry = load_registry()
    request = {
        "subcommand": "oeis-check",
        "id": args.id,
        "terms": str(args.terms),
    }
    metadata = _base_metadata()
    if args.id not in registry:
        raise DomainError(
            f"no mapping registered for {args.id}; known ids: "
            + ", ".join(sorted(registry))
        )
    spec = registry[args.id]
    if spec.status == "open":
        results = {
            "status": "open",
            "note": spec.note,
        }
        record = OutputRecord(request, results, metadata=metadata)
        return record, EXIT_MISMATCH
    report = check_sequence(
        spec, args.terms, cache_dir=args.data_dir, offline=not args.live
    )
    results = {
        "status": report.status,
        "terms_checked": str(report.terms_checked),
        "source": report.source,
        "mismatches": str(len(report.mismatches)),
    }
    columns = ["index", "expected", "computed"]
    rows = [
        [str(index), str(expected), str(computed)]
        for index, expected, computed in report.mismatches
    ]
    record = OutputRecord(
        request, results, table_columns=columns if rows else [], table_rows=rows,
        metadata=metadata,
    )
    return record, EXIT_OK if report.status == "pass" else EXIT_MISMATCH


def _base_metadata() -> dict[str, str]:
    return {"version": __version__}


_COMMANDS = {
    "count": _cmd_count,
    "prob": _cmd_prob,
    "pmf": _cmd_pmf,
    "table": _cmd_table,
    "sample": _cmd_sample,
    "verify": _cmd_verify,
    "oeis-check": _cmd_oeis_check,
}


def run(argv: list[str] | None = None) -> int:
    """Execute one CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SystemExit as exc:
        # argparse exits itself only for --help/--version.
        return 0 if exc.code in (0, None) else EXIT_DOMAIN
    try:
        record, exit_code = _COMMANDS[args.subcommand](args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (SnapshotMissingError, OeisFetchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except HatcheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    sys.stdout.write(record.render(args.format))
    return exit_code


def main() -> None:
    sys.exit(run())
