"""Tests for the step algebra and the selector / Radon-Nikodym functions."""

from fractions import Fraction

import pytest

from src.core import ConfigError, QAdicInterval, QAdicPoint, SystemConfig, WeightVec
from src.stepfn import (
    StepFunction,
    StepOp,
    base_diff,
    compose_phi,
    phi_l,
    step_combine,
    w_fn,
    z_fn,
)


def values(f: StepFunction) -> list[Fraction]:
    return list(f.values)


class TestStepFunction:
    def test_relevel_repeats_values(self):
        f = StepFunction.from_values(2, [1, 2])
        assert f.level == 1
        assert values(f.relevel(3)) == [1, 1, 1, 1, 2, 2, 2, 2]

    def test_from_values_needs_power_of_q(self):
        with pytest.raises(ConfigError):
            StepFunction.from_values(3, [1, 2, 3, 4])

    def test_equality_across_levels(self):
        f = StepFunction.from_values(2, [1, 2])
        assert f == f.relevel(2)
        assert f != StepFunction.from_values(2, [1, 2, 2, 2])

    def test_tables_are_read_only(self):
        f = StepFunction.from_values(2, [1, 2])
        with pytest.raises(ValueError):
            f.values[0] = Fraction(5)

    def test_evaluation(self):
        f = StepFunction.from_values(2, [1, 2, 3, 4])
        assert f(QAdicPoint.from_fraction(2, "1/4")) == 2
        assert f(QAdicPoint.one(2)) == 4

    def test_indicator(self):
        f = StepFunction.indicator(QAdicInterval(3, 1, 2))
        assert values(f) == [0, 0, 1]

    def test_algebra(self):
        f = StepFunction.from_values(2, [1, 2])
        g = StepFunction.from_values(2, ["1/2", 0, 0, 1])
        assert values(f + g) == [Fraction(3, 2), 1, 2, 3]
        assert values(f * g) == [Fraction(1, 2), 0, 0, 2]
        assert values(f - f).count(0) == 2
        assert values(-f) == [-1, -2]
        assert values(step_combine(StepOp.SCALE, "1/3", f)) == [Fraction(1, 3), Fraction(2, 3)]
        assert values(step_combine("add", f, f, f)) == [3, 6]

    def test_mixed_bases_rejected(self):
        with pytest.raises(ConfigError):
            StepFunction.from_values(2, [1, 2]) + StepFunction.from_values(3, [1, 2, 3])


class TestComposePhi:
    def test_tiles_table(self):
        cfg = SystemConfig.identity(2)
        f = StepFunction.from_values(2, [1, 2])
        composed = compose_phi(f, 2, cfg)
        assert composed.level == 3
        assert values(composed) == [1, 2] * 4

    def test_matches_pointwise_composition(self):
        from src.core import grid, phi_apply

        cfg = SystemConfig.identity(3)
        f = StepFunction.from_values(3, range(9))
        composed = compose_phi(f, 1, cfg)
        for x in grid(3, 3)[:-1]:
            assert composed(x) == f(phi_apply(x, 1))

    def test_zero_power_is_identity(self):
        f = StepFunction.from_values(2, [1, 2])
        assert compose_phi(f, 0, SystemConfig.identity(2)) is f


class TestSelectors:
    def test_phi_under_swap(self, cfg_g):
        assert values(phi_l(cfg_g.cfg, 0)) == [1, 0, 0, 1]
        assert values(phi_l(cfg_g.cfg, 1)) == [0, 1, 1, 0]

    def test_selectors_partition_unity(self, cfg_c3):
        total = step_combine(StepOp.ADD, *(phi_l(cfg_c3, l) for l in range(3)))
        assert total == StepFunction.constant(3, 1)

    def test_base_diff(self, cfg_g, cfg_u2):
        assert values(base_diff(cfg_g.cfg, cfg_g.r, 0)) == [
            4,
            Fraction(-4, 3),
            Fraction(-4, 3),
            4,
        ]
        assert values(base_diff(cfg_u2.cfg, cfg_u2.r, 0)) == [2, -2, 2, -2]

    def test_base_diff_excludes_last_digit(self, cfg_g):
        with pytest.raises(ConfigError):
            base_diff(cfg_g.cfg, cfg_g.r, 1)

    def test_w_fn(self, cfg_g):
        s = WeightVec(("1/3", "2/3"))
        assert values(w_fn(cfg_g.cfg, s, cfg_g.r)) == [
            Fraction(4, 3),
            Fraction(8, 9),
            Fraction(8, 9),
            Fraction(4, 3),
        ]

    def test_w_fn_of_equal_weights_is_one(self, cfg_c3):
        r = WeightVec(("1/6", "1/3", "1/2"))
        assert w_fn(cfg_c3, r, r) == StepFunction.constant(3, 1)

    def test_z_fn_level_zero_is_one(self, cfg_g):
        e = WeightVec(("1/2", "1/2"))
        z = z_fn(cfg_g.cfg, e, e, cfg_g.d, cfg_g.r, 0)
        assert values(z) == [1]

    def test_z_fn_level_one(self, cfg_g):
        e = WeightVec(("1/2", "1/2"))
        z = z_fn(cfg_g.cfg, e, e, cfg_g.d, cfg_g.r, 1)
        assert values(z) == [Fraction(3, 2), Fraction(3, 4)]
