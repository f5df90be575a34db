"""Tests for the verification suites and their report."""

from fractions import Fraction

import numpy as np
import pytest

import src.stepfn.functions
import src.validation.suites as suites
from src.core import ConfigError
from src.validation import (
    SUITE_CHOICES,
    STANDARD_CONFIGS,
    SuiteResult,
    VerificationReport,
    draw_instances,
    load_report,
    random_step,
    random_weights,
    run_suites,
    save_report,
)


def corrupt_sigma(monkeypatch):
    """Make every sigma power collapse onto digit 0 inside the step functions."""
    monkeypatch.setattr(src.stepfn.functions, "sigma_power", lambda cfg, n: tuple([0] * cfg.q))


class TestInstances:
    def test_random_weights_are_valid(self):
        rng = np.random.default_rng(3)
        for q in (2, 3, 4):
            for _ in range(20):
                w = random_weights(rng, q)
                assert w.q == q
                assert sum(w) == 1
                assert max(c.denominator for c in w) <= 64

    def test_same_seed_same_instances(self):
        first = draw_instances(np.random.default_rng(5), 2, roles=("d", "r"))
        second = draw_instances(np.random.default_rng(5), 2, roles=("d", "r"))
        assert [i.describe() for i in first] == [i.describe() for i in second]
        assert len(first) == 2 * len(STANDARD_CONFIGS)

    def test_role_access(self):
        inst = draw_instances(np.random.default_rng(0), 1, roles=("e", "s"))[0]
        assert inst.e.q == inst.cfg.q
        with pytest.raises(AttributeError):
            inst.d

    def test_random_step(self):
        f = random_step(np.random.default_rng(1), 3, 2)
        assert f.level == 2 and len(f.values) == 9


class TestSuiteResult:
    def test_keeps_first_failure(self):
        result = SuiteResult("demo")
        result.check_equal("eq", Fraction(1), Fraction(1), {"x": Fraction(1, 2)})
        result.check_equal("eq", Fraction(1), Fraction(2), {"x": Fraction(1, 4)})
        result.check_true("flag", False, {"x": Fraction(3, 4)}, detail="never")
        assert (result.passed, result.failed) == (1, 2)
        assert not result.ok
        assert result.first_failure.check == "eq"
        assert result.first_failure.instance == {"x": "1/4"}
        assert "FIRST COUNTEREXAMPLE [eq]" in result.summary()

    def test_report_roundtrip(self, tmp_path):
        result = SuiteResult("demo", trials=2)
        result.check_true("flag", True, {})
        report = VerificationReport(seed=4, results=[result])
        path = tmp_path / "report.json"
        save_report(report, path)
        loaded = load_report(path)
        assert loaded["ok"] is True
        assert loaded["suites"][0]["checks"] == {"flag": {"passed": 1, "failed": 0}}
        assert "ALL PASS" in report.summary()


class TestSuites:
    @pytest.mark.parametrize("suite", [s for s in SUITE_CHOICES if s != "all"])
    def test_suite_passes(self, suite):
        report = run_suites(suite, seed=11, trials=1)
        assert report.ok, report.summary()
        assert report.results[0].passed > 0

    def test_theorem_with_seed_seven(self):
        report = run_suites("theorem", seed=7, trials=2)
        assert report.ok, report.summary()

    def test_deterministic_report(self):
        first = run_suites("measure-axioms", seed=2, trials=1).summary()
        second = run_suites("measure-axioms", seed=2, trials=1).summary()
        assert first == second
        assert "seed: 2" in first

    def test_unknown_suite(self):
        with pytest.raises(ConfigError):
            run_suites("nope", seed=0)

    def test_corrupted_sigma_is_caught(self, monkeypatch):
        corrupt_sigma(monkeypatch)
        report = run_suites("theorem", seed=7, trials=1)
        assert not report.ok
        failure = report.results[0].first_failure
        assert failure is not None
        assert "sigma" in failure.instance
        assert "FIRST COUNTEREXAMPLE" in report.summary()


class TestSuiteCoverage:
    def test_zero_expectation_reaches_beta_five_on_every_base(self, monkeypatch):
        seen: dict[int, set[tuple[int, ...]]] = {2: set(), 3: set()}

        def record(result, mc, f, ks, describe):
            seen[mc.cfg.q].add(tuple(describe(k=0)["beta"]))

        monkeypatch.setattr(suites, "_check_cells_zero", record)
        suites.check_zero_expectation(seed=1, trials=1)
        for q in (2, 3):
            assert (5,) in seen[q]
            assert (4, 5) in seen[q]
            assert (3, 4, 5) in seen[q]
            assert max(max(betas) for betas in seen[q]) == suites.MAX_BETA

    def test_tail_check_runs_level_eight_grids(self, monkeypatch):
        monkeypatch.setattr(suites, "takagi_T", lambda mc, u, x: Fraction(0))
        monkeypatch.setattr(suites, "takagi_D_recursive", lambda mc, u, k, x: Fraction(0))
        result = suites.check_bounds(seed=0, trials=2)

        # q=2: two instances, one direction, 2^8 + 1 points; q=3: one instance, two directions
        binary = 2 * 2 * 1 * (2**8 + 1) * 8
        ternary = 2 * 1 * 2 * (3**8 + 1) * 8
        assert result.counts["tail bound"] == [binary + ternary, 0]
