"""B-file parsing, snapshot/cache resolution, and sequence regression checks."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hatcheck.counting import derangements, factorial
from hatcheck.errors import BFileFormatError, DomainError, SnapshotMissingError
from hatcheck.oeis import (
    CACHE_ENV_VAR,
    SeqCheckReport,
    SequenceSpec,
    check_sequence,
    fetch_bfile,
    load_registry,
    parse_bfile,
    serialize_bfile,
)

# Published openers, from memory, asserted literally: any regeneration of the
# vendored snapshots that drifts from the real sequences fails here.
DERANGEMENT_PREFIX = [1, 0, 1, 2, 9, 44, 265, 1854, 14833, 133496, 1334961,
                      14684570, 176214841, 2290792932, 32071101049]
PREFIX_TRIANGLE_ROWS = [
    [1],
    [1, 0],
    [2, 1, 1],
    [6, 4, 3, 2],
    [24, 18, 14, 11, 9],
    [120, 96, 78, 64, 53, 44],
    [720, 600, 504, 426, 362, 309, 265],
]


class TestParse:
    def test_basic_line(self):
        assert parse_bfile("5 44\n") == [(5, 44)]

    def test_comments_and_blanks(self):
        text = "# header comment\n\n0 1\n1 0\n   \n# tail\n2 1\n"
        assert parse_bfile(text) == [(0, 1), (1, 0), (2, 1)]

    def test_negative_values(self):
        assert parse_bfile("0 -3\n-1 7\n") == [(0, -3), (-1, 7)]

    def test_malformed_token_count(self):
        with pytest.raises(BFileFormatError) as exc_info:
            parse_bfile("0 1\n1 2 3\n")
        assert exc_info.value.line_number == 2
        assert "1 2 3" in str(exc_info.value)

    def test_malformed_non_integer(self):
        with pytest.raises(BFileFormatError) as exc_info:
            parse_bfile("0 1\n\nx y\n")
        assert exc_info.value.line_number == 3

    def test_serialize(self):
        assert serialize_bfile([(0, 1), (1, 0)]) == "0 1\n1 0\n"

    @given(
        st.lists(
            st.tuples(st.integers(-10**6, 10**6), st.integers(-10**30, 10**30)),
            max_size=50,
        )
    )
    def test_round_trip(self, pairs):
        assert parse_bfile(serialize_bfile(pairs)) == pairs


class TestSequenceSpec:
    def test_rejects_bad_id(self):
        for bad in ("A123", "B000166", "A0001666", "000166", "a000166"):
            with pytest.raises(DomainError):
                SequenceSpec(bad, "derangements", 0)

    def test_rejects_unknown_rule(self):
        with pytest.raises(DomainError):
            SequenceSpec("A000166", "no_such_rule", 0)

    def test_rejects_bad_status(self):
        with pytest.raises(DomainError):
            SequenceSpec("A000166", "derangements", 0, status="maybe")

    def test_open_spec(self):
        spec = SequenceSpec("A076731", None, None, status="open", note="why")
        assert spec.status == "open"


class TestRegistry:
    def test_contents(self):
        registry = load_registry()
        assert set(registry) == {"A000166", "A047920", "A076731", "A002467"}
        assert registry["A000166"].rule == "derangements"
        assert registry["A000166"].offset == 0
        assert registry["A000166"].status == "verified"
        assert registry["A047920"].status == "verified"
        assert registry["A076731"].status == "open"
        assert registry["A002467"].status == "open"
        assert registry["A076731"].note
        assert registry["A002467"].note


class TestVendoredSnapshots:
    def test_derangement_snapshot_prefix_matches_published_terms(self):
        text, source = fetch_bfile("A000166")
        assert source == "vendored"
        pairs = parse_bfile(text)
        assert len(pairs) >= 26
        assert [v for _, v in pairs[:15]] == DERANGEMENT_PREFIX
        assert [i for i, _ in pairs[:15]] == list(range(15))

    def test_triangle_snapshot_prefix_matches_published_rows(self):
        text, source = fetch_bfile("A047920")
        assert source == "vendored"
        pairs = parse_bfile(text)
        flat = [value for row in PREFIX_TRIANGLE_ROWS for value in row]
        assert [v for _, v in pairs[: len(flat)]] == flat
        assert [i for i, _ in pairs[: len(flat)]] == list(range(len(flat)))

    def test_derangement_check_passes(self):
        report = check_sequence(load_registry()["A000166"], terms=101)
        assert report.status == "pass"
        assert report.terms_checked == 101
        assert report.mismatches == ()
        assert report.source == "vendored"

    def test_triangle_check_passes(self):
        report = check_sequence(load_registry()["A047920"], terms=91)
        assert report.status == "pass"
        assert report.terms_checked == 91

    def test_triangle_structure(self):
        # Column 0 of row n counts all permutations; the diagonal counts
        # the fixed-point-free ones.
        pairs = parse_bfile(fetch_bfile("A047920")[0])
        values = dict(pairs)
        for n in range(13):
            row_start = n * (n + 1) // 2
            assert values[row_start] == factorial(n)
            assert values[row_start + n] == derangements(n)

    def test_negative_control_detects_wrong_rule(self):
        # Checking the derangement b-file against the triangle rule must
        # produce mismatches: a silent pass here would mean the comparison
        # is vacuous.
        wrong = SequenceSpec("A000166", "prefix_derangement_triangle", 0)
        report = check_sequence(wrong, terms=10)
        assert report.status == "fail"
        assert len(report.mismatches) == 8  # indices 0,1 coincide by accident
        index, expected, computed = report.mismatches[0]
        assert expected != computed

    def test_terms_zero(self):
        report = check_sequence(load_registry()["A000166"], terms=0)
        assert report.terms_checked == 0
        assert report.status == "pass"


class TestCacheResolution:
    def test_unknown_id_offline(self):
        with pytest.raises(SnapshotMissingError):
            fetch_bfile("A999999")

    def test_invalid_id(self):
        with pytest.raises(DomainError):
            fetch_bfile("nope")

    def test_cache_hit_beats_vendored(self, tmp_path):
        (tmp_path / "A000166.txt").write_text("0 1\n1 0\n", encoding="ascii")
        text, source = fetch_bfile("A000166", cache_dir=tmp_path)
        assert source == "cached"
        assert text == "0 1\n1 0\n"

    def test_cache_miss_falls_back_to_vendored(self, tmp_path):
        text, source = fetch_bfile("A000166", cache_dir=tmp_path)
        assert source == "vendored"
        assert parse_bfile(text)[1] == (1, 0)

    def test_env_var_cache(self, tmp_path, monkeypatch):
        (tmp_path / "A000166.txt").write_text("0 1\n", encoding="ascii")
        monkeypatch.setenv(CACHE_ENV_VAR, str(tmp_path))
        text, source = fetch_bfile("A000166")
        assert source == "cached"
        assert text == "0 1\n"

    def test_argument_wins_over_env_var(self, tmp_path, monkeypatch):
        env_dir = tmp_path / "env"
        arg_dir = tmp_path / "arg"
        env_dir.mkdir()
        arg_dir.mkdir()
        (env_dir / "A000166.txt").write_text("0 111\n", encoding="ascii")
        (arg_dir / "A000166.txt").write_text("0 222\n", encoding="ascii")
        monkeypatch.setenv(CACHE_ENV_VAR, str(env_dir))
        text, source = fetch_bfile("A000166", cache_dir=arg_dir)
        assert (text, source) == ("0 222\n", "cached")

    def test_cached_text_is_byte_identical(self, tmp_path):
        payload = "# comment\n0 1\n1 0\n2 1\n"
        (tmp_path / "A000166.txt").write_text(payload, encoding="ascii")
        assert fetch_bfile("A000166", cache_dir=tmp_path)[0] == payload


class TestCheckSequenceGuards:
    def test_open_spec_is_domain_error(self):
        with pytest.raises(DomainError):
            check_sequence(load_registry()["A076731"], terms=5)

    def test_offset_mismatch_is_domain_error(self, tmp_path):
        (tmp_path / "A000166.txt").write_text("3 2\n4 9\n", encoding="ascii")
        spec = load_registry()["A000166"]
        with pytest.raises(DomainError):
            check_sequence(spec, terms=5, cache_dir=tmp_path)

    def test_negative_terms(self):
        with pytest.raises(DomainError):
            check_sequence(load_registry()["A000166"], terms=-1)

    def test_report_status_property(self):
        clean = SeqCheckReport("A000166", 3, (), "vendored")
        dirty = SeqCheckReport("A000166", 3, ((2, 1, 5),), "vendored")
        assert clean.status == "pass"
        assert dirty.status == "fail"
