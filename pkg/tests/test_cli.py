"""Subcommand behavior, exit codes, and reproducible output."""

import json

import pytest

from phardy.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSeriesCommand:
    def test_p2_order6_exact(self, capsys):
        code, out, _ = run_cli(capsys, "series", "--p", "2", "--order", "6")
        assert code == 0
        payload = json.loads(out)
        assert payload["coefficients"] == [
            "1/4", "0", "5/64", "0", "21/512", "0", "429/16384"]

    def test_p3_csv(self, capsys):
        code, out, _ = run_cli(capsys, "series", "--p", "3", "--order", "4",
                               "--format", "csv")
        assert code == 0
        assert out.splitlines() == ["k,c_k", "0,8/27", "1,0", "2,8/81",
                                    "3,0", "4,112/2187"]

    def test_order_zero(self, capsys):
        code, out, _ = run_cli(capsys, "series", "--p", "2", "--order", "0")
        assert code == 0
        assert json.loads(out)["coefficients"] == ["1/4"]

    def test_non_integer_p_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "series", "--p", "5/2", "--order", "4")
        assert code == 2
        assert "correction" in err

    def test_correction_mode(self, capsys):
        code, out, _ = run_cli(capsys, "series", "--correction", "--p", "3",
                               "--order", "4")
        assert code == 0
        payload = json.loads(out)
        assert payload["coefficients"][4] == "14/81"
        assert payload["coefficients"][2] == "1/3"

    def test_correction_reports_positivity(self, capsys):
        code, out, _ = run_cli(capsys, "series", "--correction", "--p", "3/2",
                               "--order", "12")
        assert code == 0
        payload = json.loads(out)
        assert "all_even_positive" in payload


class TestWeightCommand:
    def test_csv_table(self, capsys):
        code, out, _ = run_cli(capsys, "weight", "--p", "2", "--n", "1..5",
                               "--digits", "30", "--format", "csv")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "n,w_improved,w_classical,ratio_minus_one"
        assert len(lines) == 6
        for line in lines[1:]:
            assert not line.split(",")[3].startswith("-")

    def test_rational_p_single_row(self, capsys):
        code, out, _ = run_cli(capsys, "weight", "--p", "3/2", "--n", "1..1")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert len(rows) == 1 and rows[0]["verified_positive"]

    def test_p_one_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "weight", "--p", "1", "--n", "1..1")
        assert code == 2
        assert "exceed 1" in err

    def test_bad_range_is_usage_error(self, capsys):
        code, _, _ = run_cli(capsys, "weight", "--p", "2", "--n", "5..2")
        assert code == 2


class TestVerifyCommand:
    def test_trials_pass(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--p", "2", "--trials", "30",
                               "--support", "20", "--seed", "42")
        assert code == 0
        payload = json.loads(out)
        assert payload["all_pass"] is True
        assert payload["min_slack_improved"] > 0

    def test_single_trial_deterministic(self, capsys):
        args = ("verify", "--p", "2", "--trials", "1", "--support", "1",
                "--seed", "0")
        code_a, out_a, _ = run_cli(capsys, *args)
        code_b, out_b, _ = run_cli(capsys, *args)
        assert code_a == code_b == 0
        assert out_a == out_b

    def test_supersolution_mode(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--supersolution", "--p",
                               "2.5", "--n", "1..60")
        assert code == 0
        payload = json.loads(out)
        assert payload["pass"] is True
        assert payload["max_residual"] < payload["tolerance"]


class TestLemmasCommand:
    def test_single_lemma_single_p(self, capsys):
        code, out, _ = run_cli(capsys, "lemmas", "--only", "gpm", "--p", "2",
                               "--x-grid", "0.01:0.5:0.01")
        assert code == 0
        payload = json.loads(out)
        assert payload["reports"]["gpm"]["pass"] is True

    def test_ef_lemma_low_p(self, capsys):
        code, out, _ = run_cli(capsys, "lemmas", "--only", "ef", "--p", "1.5",
                               "--x-grid", "0.02:0.5:0.02")
        assert code == 0
        assert json.loads(out)["reports"]["ef"]["worst_margin"] > 0

    def test_small_grid_all_lemmas(self, capsys):
        code, out, _ = run_cli(capsys, "lemmas", "--p-grid", "1.5:3:0.5",
                               "--x-grid", "0.05:0.5:0.05")
        assert code == 0
        payload = json.loads(out)
        assert set(payload["reports"]) == {
            "g_bounds", "gpm", "ak_lower", "binom_upper", "g_linear",
            "pairwise", "ef", "decomposition", "n1"}
        assert all(rep["pass"] for rep in payload["reports"].values())

    def test_pairwise_outside_window_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "lemmas", "--only", "pairwise",
                               "--p", "5/2")
        assert code == 2
        assert "odd" in err


class TestRayleighCommand:
    def test_small_run(self, capsys):
        code, out, _ = run_cli(capsys, "rayleigh", "--p", "2", "--weight",
                               "classical", "--N", "40",
                               "--max-iters", "3000")
        assert code == 0
        payload = json.loads(out)
        assert payload["quotient"] >= 1 - 1e-9

    def test_small_support_is_usage_error(self, capsys):
        code, _, _ = run_cli(capsys, "rayleigh", "--p", "2", "--N", "1")
        assert code == 2

    def test_phi_export(self, capsys, tmp_path):
        target = tmp_path / "phi.csv"
        code, _, _ = run_cli(capsys, "rayleigh", "--p", "2", "--weight",
                             "improved", "--N", "10", "--max-iters", "2000",
                             "--phi-out", str(target))
        assert code == 0
        lines = target.read_text().splitlines()
        assert lines[0] == "n,phi_n" and len(lines) == 11


class TestReproducibility:
    def test_weight_json_byte_identical(self, capsys):
        args = ("weight", "--p", "3", "--n", "1..4", "--digits", "25")
        _, out_a, _ = run_cli(capsys, *args)
        _, out_b, _ = run_cli(capsys, *args)
        assert out_a == out_b

    def test_out_file_matches_stdout(self, capsys, tmp_path):
        target = tmp_path / "table.csv"
        run_cli(capsys, "weight", "--p", "2", "--n", "1..3",
                "--format", "csv", "--out", str(target))
        code, out, _ = run_cli(capsys, "weight", "--p", "2", "--n", "1..3",
                               "--format", "csv")
        assert code == 0
        assert target.read_text() == out
