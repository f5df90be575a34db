"""Tests for the eval, sample and verify commands."""

import json
from fractions import Fraction

import pytest

import src.stepfn.functions
from src import config
from src.cli import RunConfig, format_decimal, format_exact, main

SWAP_SYSTEM = ["--q", "2", "--sigma", "1,0", "--d", "1/3,2/3", "--r", "1/4,3/4"]
UNIFORM_SYSTEM = ["--q", "2", "--sigma", "0,1", "--d", "1/2,1/2", "--r", "1/2,1/2"]


def run(capsys, *argv: str) -> tuple[int, list[str], str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.splitlines(), captured.err


class TestFormatting:
    @pytest.mark.parametrize(
        "value, exact, decimal",
        [
            (Fraction(5, 6), "5/6", "0.833333333333333"),
            (Fraction(2, 3), "2/3", "0.666666666666667"),
            (Fraction(1, 4), "1/4", "0.25"),
            (Fraction(0), "0/1", "0"),
            (Fraction(1), "1/1", "1"),
            (Fraction(-1, 3), "-1/3", "-0.333333333333333"),
        ],
    )
    def test_renderings(self, value, exact, decimal):
        assert format_exact(value) == exact
        assert format_decimal(value) == decimal


class TestRunConfig:
    def test_free_weights_are_completed(self):
        run_config = RunConfig(q=3, r="1/6,1/3")
        assert run_config.weights("r").to_list() == ["1/6", "1/3", "1/2"]

    def test_defaults_are_uniform_identity(self):
        run_config = RunConfig(q=3)
        assert run_config.system().sigma == (0, 1, 2)
        assert run_config.weights("d").to_list() == ["1/3", "1/3", "1/3"]

    def test_flags_win_over_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"q": 2, "x": "1/4", "seed": 3}))
        run_config = RunConfig.from_sources({"x": "3/4", "seed": None}, str(path))
        assert run_config.x == "3/4"
        assert run_config.seed == 3

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError):
            RunConfig.model_validate({"q": 2, "colour": "red"})


class TestEval:
    def test_cdf(self, capsys):
        code, out, _ = run(capsys, "eval", "cdf", *SWAP_SYSTEM, "--x", "3/4")
        assert code == 0
        assert out == ["5/6", "0.833333333333333"]

    def test_takagi(self, capsys):
        code, out, _ = run(capsys, "eval", "takagi", *UNIFORM_SYSTEM, "--u", "1", "--x", "1/4")
        assert code == 0
        assert out == ["1/4", "0.25"]

    def test_takagi_truncation(self, capsys):
        code, out, _ = run(
            capsys, "eval", "takagi", *SWAP_SYSTEM, "--u", "1", "--k", "0", "--x", "3/4"
        )
        assert code == 0
        assert out[0] == "-1/3"

    def test_derivative(self, capsys):
        code, out, _ = run(
            capsys, "eval", "derivative", *UNIFORM_SYSTEM, "--u", "2", "--x", "1/4"
        )
        assert (code, out) == (0, ["1/2", "0.5"])
        code, out, _ = run(
            capsys, "eval", "derivative", *UNIFORM_SYSTEM, "--u", "2", "--x", "1/4", "--raw"
        )
        assert (code, out) == (0, ["2/1", "2"])

    def test_finite_difference(self, capsys):
        code, out, _ = run(
            capsys,
            "eval", "derivative", *UNIFORM_SYSTEM, "--u", "1", "--x", "1/4", "--fd-step", "1/8",
        )
        assert code == 0
        assert out[2] == "finite difference (h=1/8): 1/2"

    def test_theorem_rhs(self, capsys):
        code, out, _ = run(
            capsys, "eval", "theorem-rhs", *UNIFORM_SYSTEM, "--u", "1", "--x", "1/4"
        )
        assert (code, out) == (0, ["1/2", "0.5"])

    def test_config_file(self, capsys, tmp_path):
        path = tmp_path / "swap.json"
        path.write_text(
            json.dumps({"q": 2, "sigma": [1, 0], "d": ["1/3", "2/3"], "r": ["1/4", "3/4"]})
        )
        code, out, _ = run(capsys, "eval", "cdf", "--config", str(path), "--x", "3/4")
        assert (code, out[0]) == (0, "5/6")

    def test_x_out_of_range(self, capsys):
        code, _, err = run(capsys, "eval", "cdf", *SWAP_SYSTEM, "--x", "5/4")
        assert code == 2
        assert "x out of [0,1]" in err

    @pytest.mark.parametrize(
        "flags, field",
        [
            (["--sigma", "0,0"], "sigma"),
            (["--d", "1/2,1/3"], "d"),
            (["--r", "0.5,0.5"], "r"),
            (["--q", "1"], "q"),
            (["--q", "3", "--sigma", "1,0"], "sigma"),
            (["--q", "3", "--r", "1/2"], "r"),
            (["--d", "1/4,1/4,1/2"], "d"),
        ],
    )
    def test_bad_field_is_named(self, capsys, flags, field):
        code, _, err = run(capsys, "eval", "cdf", "--x", "1/2", *flags)
        assert code == 2
        assert f"{field}:" in err

    def test_wrong_length_order_is_named(self, capsys):
        code, _, err = run(capsys, "eval", "takagi", "--u", "1,0", "--x", "1/2")
        assert code == 2
        assert err.startswith("error: u: ")
        assert "q-1=1" in err

    def test_missing_order(self, capsys):
        code, _, err = run(capsys, "eval", "takagi", "--x", "1/2")
        assert code == 2
        assert "u:" in err


class TestSample:
    def test_cdf_rows(self, capsys, tmp_path):
        path = tmp_path / "cdf.csv"
        code, _, _ = run(
            capsys, "sample", "--function", "cdf", "--grid-level", "3", "--output", str(path),
            *SWAP_SYSTEM,
        )
        assert code == 0
        raw = path.read_bytes()
        assert b"\r\n" not in raw
        lines = raw.decode("utf-8").splitlines()
        assert lines[0] == "x_num,x_den,value_num,value_den,value_decimal"
        assert len(lines) == 10
        assert lines[1] == "0,1,0,1,0"
        assert lines[7] == "3,4,5,6,0.833333333333333"
        assert lines[-1] == "1,1,1,1,1"

    def test_takagi_rows(self, capsys, tmp_path):
        path = tmp_path / "takagi.csv"
        code, _, _ = run(
            capsys, "sample", "--function", "takagi", "--u", "1", "--grid-level", "3",
            "--output", str(path), *UNIFORM_SYSTEM,
        )
        assert code == 0
        assert "1,4,1,4,0.25" in path.read_text().splitlines()

    def test_derivative_rows(self, capsys, tmp_path):
        path = tmp_path / "derivative.csv"
        code, _, _ = run(
            capsys, "sample", "--function", "derivative", "--u", "2", "--grid-level", "3",
            "--output", str(path), *UNIFORM_SYSTEM,
        )
        assert code == 0
        assert "1,4,1,2,0.5" in path.read_text().splitlines()

    def test_same_input_same_bytes(self, capsys, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            run(capsys, "sample", "--function", "cdf", "--grid-level", "4",
                "--output", str(path), *SWAP_SYSTEM)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_cap_violation(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "sample", "--function", "cdf", "--grid-level", "3",
            "--output", str(tmp_path / "x.csv"), "--max-table-cells", "4",
        )
        assert code == 3
        assert "cap" in err

    def test_cap_flag_lasts_one_run(self, capsys, tmp_path):
        default_cells, default_terms = config.MAX_TABLE_CELLS, config.MAX_TUPLE_TERMS
        code, _, _ = run(
            capsys, "eval", "cdf", "--x", "1/2",
            "--max-table-cells", "4", "--max-tuple-terms", "2",
        )
        assert code == 0
        assert (config.MAX_TABLE_CELLS, config.MAX_TUPLE_TERMS) == (default_cells, default_terms)

        code, out, err = run(capsys, "eval", "takagi", "--u", "1", "--x", "1/8")
        assert code == 0, err
        assert out[0] == "1/8"

    def test_caps_restored_after_failure(self, capsys, tmp_path):
        default_cells = config.MAX_TABLE_CELLS
        code, _, _ = run(
            capsys, "sample", "--function", "cdf", "--grid-level", "3",
            "--output", str(tmp_path / "x.csv"), "--max-table-cells", "4",
        )
        assert code == 3
        assert config.MAX_TABLE_CELLS == default_cells

    def test_unwritable_output(self, capsys, tmp_path):
        target = tmp_path / "missing" / "cdf.csv"
        code, _, _ = run(
            capsys, "sample", "--function", "cdf", "--grid-level", "2", "--output", str(target)
        )
        assert code == 4


class TestVerify:
    def test_theorem_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "theorem", "--seed", "7", "--trials", "1")
        assert code == 0
        assert "IDENTITY VERIFICATION REPORT" in out
        assert out[-1].endswith("ALL PASS")

    def test_json_report(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        code, _, _ = run(
            capsys, "verify", "--suite", "bounds", "--seed", "1", "--trials", "1",
            "--output", str(path),
        )
        assert code == 0
        report = json.loads(path.read_text())
        assert report["seed"] == 1 and report["ok"] is True

    def test_unknown_suite(self, capsys):
        code, _, err = run(capsys, "verify", "--suite", "nope")
        assert code == 2
        assert "suite:" in err

    def test_corrupted_sigma_fails(self, capsys, monkeypatch):
        monkeypatch.setattr(
            src.stepfn.functions, "sigma_power", lambda cfg, n: tuple([0] * cfg.q)
        )
        code, out, _ = run(capsys, "verify", "--suite", "theorem", "--seed", "7", "--trials", "1")
        assert code == 1
        assert any("FIRST COUNTEREXAMPLE" in line for line in out)
