"""Tests for the twisted measure, its distribution function and integration."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core import ConfigError, QAdicInterval, QAdicPoint, SystemConfig, WeightVec, grid
from src.measure import (
    MeasureContext,
    cdf,
    cond_expect,
    expectation,
    integral_profile,
    integrate_step,
    interval_measure,
    lebesgue_level1_integral,
    mass_table,
    partial_expectation,
)
from src.stepfn import StepFunction, phi_l


def pt(q: int, text: str) -> QAdicPoint:
    return QAdicPoint.from_fraction(q, text)


def weights(q: int):
    """Strictly positive probability vectors with small denominators."""
    return st.lists(st.integers(1, 6), min_size=q, max_size=q).map(
        lambda parts: WeightVec(tuple(Fraction(p, sum(parts)) for p in parts))
    )


class TestIntervalMeasure:
    def test_examples(self, cfg_g):
        assert interval_measure(cfg_g, QAdicInterval.from_digits(2, (1, 0))) == Fraction(1, 2)
        assert interval_measure(cfg_g, QAdicInterval.from_digits(2, (1, 1, 0))) == Fraction(1, 8)
        assert interval_measure(cfg_g, QAdicInterval(2, 0, 0)) == 1

    def test_mass_table_matches_products(self, cfg_g):
        table = mass_table(cfg_g, 3)
        for n in range(8):
            assert table[n] == interval_measure(cfg_g, QAdicInterval(2, 3, n))

    def test_mass_table_is_read_only(self, cfg_g):
        with pytest.raises(ValueError):
            mass_table(cfg_g, 2)[0] = Fraction(0)

    def test_identity_sigma_is_multinomial(self):
        cfg = SystemConfig.identity(3)
        r = WeightVec(("1/6", "1/3", "1/2"))
        mc = MeasureContext(cfg, r, r)
        # digits 2, 0, 2: r_2 * r_0 * r_2
        assert interval_measure(mc, QAdicInterval.from_digits(3, (2, 0, 2))) == Fraction(1, 24)

    def test_base_mismatch(self, cfg_g):
        with pytest.raises(ConfigError):
            interval_measure(cfg_g, QAdicInterval(3, 1, 0))


class TestCdf:
    def test_example(self, cfg_g):
        assert cdf(cfg_g, pt(2, "3/4")) == Fraction(5, 6)

    def test_endpoints(self, cfg_g):
        assert cdf(cfg_g, QAdicPoint.zero(2)) == 0
        assert cdf(cfg_g, QAdicPoint.one(2)) == 1

    def test_uniform_is_identity(self):
        cfg = SystemConfig(q=3, sigma=(1, 2, 0))
        mc = MeasureContext(cfg, WeightVec.uniform(3), WeightVec.uniform(3))
        for x in grid(3, 3):
            assert cdf(mc, x) == x.value

    def test_matches_mass_prefix(self, cfg_g):
        table = mass_table(cfg_g, 4)
        for x in grid(2, 4):
            assert cdf(cfg_g, x) == sum(table[: x.cells_below(4)], Fraction(0))


class TestIntegration:
    def test_expectation_of_selector(self, cfg_g):
        phi0 = phi_l(cfg_g.cfg, 0)
        assert integrate_step(cfg_g, phi0, QAdicPoint.one(2)) == Fraction(1, 4)
        assert integrate_step(cfg_g, phi0, pt(2, "1/2")) == Fraction(1, 12)
        assert expectation(cfg_g, phi0, QAdicInterval(2, 1, 1)) == Fraction(1, 6)

    def test_profile_endpoints(self, cfg_g):
        phi0 = phi_l(cfg_g.cfg, 0)
        profile = integral_profile(cfg_g, phi0, 3)
        assert len(profile) == 9
        assert profile[0] == 0
        assert profile[-1] == Fraction(1, 4)
        assert profile[4] == Fraction(1, 12)

    def test_partial_expectation(self, cfg_g):
        phi0 = phi_l(cfg_g.cfg, 0)
        right = QAdicInterval(2, 1, 1)
        assert partial_expectation(cfg_g, phi0, right, pt(2, "1/2")) == 0
        assert partial_expectation(cfg_g, phi0, right, QAdicPoint.one(2)) == Fraction(1, 6)
        # [1/2, 3/4) is the cell 10, where Phi_0 vanishes under the swap
        assert partial_expectation(cfg_g, phi0, right, pt(2, "3/4")) == 0

    def test_cond_expect_preserves_cell_integrals(self, cfg_g):
        f = StepFunction.from_values(2, [1, -2, 3, "1/2", 0, 5, -1, 2])
        coarse = cond_expect(cfg_g, f, 1)
        assert coarse.level == 1
        for n in range(2):
            iv = QAdicInterval(2, 1, n)
            assert expectation(cfg_g, coarse, iv) == expectation(cfg_g, f, iv)

    def test_cond_expect_of_coarse_function(self, cfg_g):
        f = StepFunction.from_values(2, [1, 2])
        assert cond_expect(cfg_g, f, 2) == f

    def test_lebesgue_level1(self):
        cfg = SystemConfig.identity(3)
        x = pt(3, "4/9")
        assert lebesgue_level1_integral(cfg, 0, x) == Fraction(1, 3)
        assert lebesgue_level1_integral(cfg, 1, x) == Fraction(1, 9)
        assert lebesgue_level1_integral(cfg, 2, x) == 0


@settings(max_examples=25, deadline=None)
@given(
    sigma=st.sampled_from([(0, 1, 2), (1, 2, 0), (2, 0, 1)]),
    d=weights(3),
    r=weights(3),
    level=st.integers(0, 4),
    data=st.data(),
)
def test_additivity_over_children(sigma, d, r, level, data):
    mc = MeasureContext(SystemConfig(q=3, sigma=sigma), d, r)
    iv = QAdicInterval(3, level, data.draw(st.integers(0, 3**level - 1)))
    children = sum((interval_measure(mc, c) for c in iv.children()), Fraction(0))
    assert children == interval_measure(mc, iv)


@settings(max_examples=25, deadline=None)
@given(d=weights(2), r=weights(2), sigma=st.sampled_from([(0, 1), (1, 0)]))
def test_selector_expectation_ignores_d(d, r, sigma):
    mc = MeasureContext(SystemConfig(q=2, sigma=sigma), d, r)
    for l in range(2):
        assert integrate_step(mc, phi_l(mc.cfg, l), QAdicPoint.one(2)) == r[l]


@settings(max_examples=25, deadline=None)
@given(d=weights(2), r=weights(2), data=st.data())
def test_cdf_is_monotone(d, r, data):
    mc = MeasureContext(SystemConfig(q=2, sigma=(1, 0)), d, r)
    points = grid(2, 4)
    i = data.draw(st.integers(0, len(points) - 2))
    assert cdf(mc, points[i]) < cdf(mc, points[i + 1])
