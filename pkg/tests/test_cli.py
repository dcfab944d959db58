"""Command-line interface: output formats, determinism, and exit codes."""

import csv
import io
import json
from fractions import Fraction

import pytest

from hatcheck.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def invoke_json(capsys, *argv):
    code, out, err = invoke(capsys, *argv, "--format", "json")
    assert err == ""
    return code, json.loads(out), out


class TestCount:
    def test_rectangular_example(self, capsys):
        code, payload, _ = invoke_json(
            capsys, "count", "--n", "5", "--m", "7", "--l", "3"
        )
        assert code == 0
        assert payload["results"]["total"] == "2100"
        assert payload["request"] == {
            "subcommand": "count",
            "n": "5",
            "m": "7",
            "l": "3",
        }

    def test_fixed_points_option(self, capsys):
        code, payload, _ = invoke_json(
            capsys, "count", "--n", "4", "--fixed-points", "1"
        )
        assert code == 0
        assert payload["results"]["total"] == "24"
        assert payload["results"]["fixed_point_free"] == "9"
        assert payload["results"]["exactly_k"] == "8"

    def test_m_and_l_default_to_n(self, capsys):
        code_a, out_a, _ = invoke(capsys, "count", "--n", "4")
        code_b, out_b, _ = invoke(
            capsys, "count", "--n", "4", "--m", "4", "--l", "4"
        )
        assert code_a == code_b == 0
        assert out_a == out_b

    def test_invalid_shape_is_domain_error(self, capsys):
        code, out, err = invoke(capsys, "count", "--n", "3", "--m", "2", "--l", "1")
        assert code == 1
        assert out == ""
        assert "error:" in err

    def test_text_format(self, capsys):
        code, out, _ = invoke(capsys, "count", "--n", "4")
        assert code == 0
        assert out.splitlines()[0] == "count n=4 m=4 l=4"
        assert "total = 24" in out
        assert "fixed_point_free = 9" in out


class TestProb:
    def test_single_pair_fraction(self, capsys):
        code, payload, _ = invoke_json(capsys, "prob", "--n", "2", "--m", "3", "--l", "1")
        assert code == 0
        assert payload["results"]["prob_no_fixed_point"] == "2/3"
        assert payload["results"]["decimal"] == "0.666666666667"

    def test_classic_four(self, capsys):
        code, payload, _ = invoke_json(capsys, "prob", "--n", "4")
        assert code == 0
        assert payload["results"]["prob_no_fixed_point"] == "3/8"
        assert payload["results"]["decimal"] == "0.375"


class TestPmf:
    def test_probabilities_sum_to_one(self, capsys):
        code, payload, _ = invoke_json(capsys, "pmf", "--n", "5", "--m", "7", "--l", "3")
        assert code == 0
        table = payload["table"]
        k_col = table["columns"].index("probability")
        probs = [Fraction(row[k_col]) for row in table["rows"]]
        assert sum(probs) == 1
        assert len(probs) == 4

    def test_counts_match_census(self, capsys):
        code, payload, _ = invoke_json(capsys, "pmf", "--n", "4")
        counts = [int(row[1]) for row in payload["table"]["rows"]]
        assert code == 0
        assert counts == [9, 8, 6, 0, 1]
        assert payload["results"]["poisson_rate"] == "1/1"

    def test_csv_table(self, capsys):
        code, out, _ = invoke(capsys, "pmf", "--n", "4", "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["k", "count", "probability", "decimal", "poisson"]
        assert len(rows) == 6
        assert rows[1][:3] == ["0", "9", "3/8"]


class TestTable:
    def test_perm_family(self, capsys):
        code, payload, _ = invoke_json(capsys, "table", "--family", "perm", "--ranges", "4")
        assert code == 0
        rows = payload["table"]["rows"]
        assert len(rows) == 5
        assert [row[4] for row in rows] == ["9", "8", "6", "0", "1"]

    def test_rect_family_skips_out_of_domain(self, capsys):
        code, payload, _ = invoke_json(
            capsys, "table", "--family", "rect", "--ranges", "2..4,3"
        )
        assert code == 0
        cells = {(row[0], row[1]) for row in payload["table"]["rows"]}
        assert cells == {("2", "3"), ("3", "3")}  # n=4 > m=3 skipped

    def test_wrong_range_arity(self, capsys):
        code, out, err = invoke(capsys, "table", "--family", "perm", "--ranges", "1,2")
        assert code == 1
        assert "error:" in err

    def test_bad_range_text(self, capsys):
        code, _, err = invoke(capsys, "table", "--family", "perm", "--ranges", "3..1")
        assert code == 1
        assert "error:" in err


class TestSample:
    def test_deterministic_output(self, capsys):
        argv = ("sample", "--n", "6", "--l", "4", "--trials", "4000", "--seed", "11")
        code_a, out_a, _ = invoke(capsys, *argv)
        code_b, out_b, _ = invoke(capsys, *argv)
        assert code_a == code_b == 0
        assert out_a == out_b

    def test_counts_sum_and_metadata(self, capsys):
        code, payload, _ = invoke_json(
            capsys, "sample", "--n", "5", "--trials", "3000", "--seed", "9"
        )
        assert code == 0
        observed = [int(row[1]) for row in payload["table"]["rows"]]
        assert sum(observed) == 3000
        assert payload["metadata"]["seed"] == "9"
        assert "xoshiro256**" in payload["metadata"]["rng"]

    def test_text_metadata_lines(self, capsys):
        code, out, _ = invoke(
            capsys, "sample", "--n", "4", "--trials", "100", "--seed", "5"
        )
        assert code == 0
        assert "# seed 5" in out
        assert "# rng xoshiro256**" in out

    def test_fpf_run(self, capsys):
        code, payload, _ = invoke_json(
            capsys,
            "sample", "--n", "6", "--trials", "500", "--seed", "21", "--fpf",
        )
        assert code == 0
        results = payload["results"]
        assert results["draws"] == "500"
        assert int(results["total_iterations"]) >= 500
        assert float(results["mean_iterations"]) >= 1.0
        # 1 / P(no fixed point) for n=6: 720/265
        assert results["expected_iterations"] == "2.71698113208"

    def test_fpf_impossible_shape(self, capsys):
        code, out, err = invoke(
            capsys, "sample", "--n", "1", "--trials", "10", "--seed", "0", "--fpf"
        )
        assert code == 1
        assert "error:" in err

    def test_workers_do_not_change_output(self, capsys):
        base = ("sample", "--n", "5", "--trials", "70000", "--seed", "2")
        _, out_a, _ = invoke(capsys, *base)
        _, out_b, _ = invoke(capsys, *base, "--workers", "3")
        # workers is not echoed in the record, so outputs must be identical
        assert out_a == out_b

    def test_bad_seed(self, capsys):
        code, _, err = invoke(
            capsys, "sample", "--n", "4", "--trials", "10", "--seed", "-1"
        )
        assert code == 1
        assert "error:" in err


class TestVerify:
    def test_passes_clean(self, capsys):
        code, payload, _ = invoke_json(capsys, "verify", "--max-m", "5")
        assert code == 0
        assert payload["results"]["mismatches"] == "0"
        assert int(payload["results"]["shapes_checked"]) > 0
        assert int(payload["results"]["sieve_families_checked"]) == 5
        assert "table" not in payload  # no mismatch table when clean


class TestOeisCheck:
    def test_derangements_pass(self, capsys):
        code, payload, _ = invoke_json(capsys, "oeis-check", "--id", "A000166")
        assert code == 0
        assert payload["results"]["status"] == "pass"
        assert payload["results"]["source"] == "vendored"
        assert payload["results"]["terms_checked"] == "100"

    def test_triangle_pass(self, capsys):
        code, payload, _ = invoke_json(
            capsys, "oeis-check", "--id", "A047920", "--terms", "91"
        )
        assert code == 0
        assert payload["results"]["status"] == "pass"

    def test_open_mapping_exits_2(self, capsys):
        code, payload, _ = invoke_json(capsys, "oeis-check", "--id", "A076731")
        assert code == 2
        assert payload["results"]["status"] == "open"
        assert payload["results"]["note"]

    def test_open_note_survives_csv_quoting(self, capsys):
        code, out, _ = invoke(
            capsys, "oeis-check", "--id", "A076731", "--format", "csv"
        )
        assert code == 2
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["field", "value"]
        note = dict(rows[1:])["note"]
        assert note  # commas inside the note must not split the row

    def test_unregistered_id(self, capsys):
        code, _, err = invoke(capsys, "oeis-check", "--id", "A999999")
        assert code == 1
        assert "error:" in err

    def test_invalid_id(self, capsys):
        code, _, err = invoke(capsys, "oeis-check", "--id", "bogus")
        assert code == 1

    def test_offline_live_conflict(self, capsys):
        code, _, err = invoke(
            capsys, "oeis-check", "--id", "A000166", "--offline", "--live"
        )
        assert code == 1
        assert "error:" in err

    def test_data_dir_cache(self, capsys, tmp_path):
        (tmp_path / "A000166.txt").write_text("0 1\n1 0\n2 1\n", encoding="ascii")
        code, payload, _ = invoke_json(
            capsys,
            "oeis-check", "--id", "A000166", "--data-dir", str(tmp_path),
        )
        assert code == 0
        assert payload["results"]["source"] == "cached"
        assert payload["results"]["terms_checked"] == "3"


class TestOutputContract:
    def test_json_is_canonical(self, capsys):
        for argv in (
            ("count", "--n", "5", "--m", "7", "--l", "3"),
            ("pmf", "--n", "4"),
            ("verify", "--max-m", "3"),
            ("oeis-check", "--id", "A000166"),
        ):
            _, payload, raw = invoke_json(capsys, *argv)
            assert json.dumps(payload, indent=2, sort_keys=True) + "\n" == raw

    def test_repeated_invocations_are_byte_identical(self, capsys):
        for argv in (
            ("count", "--n", "6", "--m", "9", "--l", "4", "--format", "json"),
            ("pmf", "--n", "5", "--format", "csv"),
            ("sample", "--n", "4", "--trials", "200", "--seed", "1"),
        ):
            _, out_a, _ = invoke(capsys, *argv)
            _, out_b, _ = invoke(capsys, *argv)
            assert out_a == out_b

    def test_all_json_values_are_strings(self, capsys):
        _, payload, _ = invoke_json(capsys, "pmf", "--n", "4")
        for section in ("request", "results", "metadata"):
            for value in payload[section].values():
                assert isinstance(value, str)
        for row in payload["table"]["rows"]:
            assert all(isinstance(cell, str) for cell in row)

    def test_csv_scalar_layout(self, capsys):
        code, out, _ = invoke(capsys, "count", "--n", "4", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["field", "value"]
        assert ["total", "24"] in rows


class TestArgumentErrors:
    def test_help_exits_zero(self, capsys):
        assert run(["--help"]) == 0
        capsys.readouterr()

    def test_subcommand_help_exits_zero(self, capsys):
        assert run(["sample", "--help"]) == 0
        capsys.readouterr()

    def test_version_exits_zero(self, capsys):
        assert run(["--version"]) == 0
        out = capsys.readouterr().out
        assert "hatcheck" in out

    def test_missing_subcommand(self, capsys):
        code, _, err = invoke(capsys)
        assert code == 1
        assert "error:" in err

    def test_unknown_subcommand(self, capsys):
        code, _, err = invoke(capsys, "frobnicate")
        assert code == 1

    def test_missing_required_argument(self, capsys):
        code, _, err = invoke(capsys, "sample", "--n", "4", "--trials", "10")
        assert code == 1
        assert "error:" in err

    def test_non_integer_argument(self, capsys):
        code, _, err = invoke(capsys, "count", "--n", "four")
        assert code == 1
