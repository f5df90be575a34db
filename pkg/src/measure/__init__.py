"""The measure mu_{d,r}, its distribution function and integration of step functions."""

from .mu import (
    MeasureContext,
    cdf,
    cdf_from_masses,
    cond_expect,
    expectation,
    integral_profile,
    integrate_step,
    interval_measure,
    lebesgue_level1_integral,
    mass_table,
    partial_expectation,
)

__all__ = [
    "MeasureContext",
    "cdf",
    "cdf_from_masses",
    "cond_expect",
    "expectation",
    "integral_profile",
    "integrate_step",
    "interval_measure",
    "lebesgue_level1_integral",
    "mass_table",
    "partial_expectation",
]
