"""Shared fixtures: the three reference systems used throughout the tests."""

import pytest

from src.core import SystemConfig, WeightVec
from src.measure import MeasureContext
from src.takagi import clear_caches


@pytest.fixture(autouse=True)
def fresh_caches():
    clear_caches()
    yield
    clear_caches()


@pytest.fixture
def cfg_u2() -> MeasureContext:
    """q=2, identity, uniform d and r: mu is Lebesgue measure."""
    cfg = SystemConfig.identity(2)
    return MeasureContext(cfg, WeightVec.uniform(2), WeightVec.uniform(2))


@pytest.fixture
def cfg_g() -> MeasureContext:
    """q=2, swap, d=(1/3, 2/3), r=(1/4, 3/4)."""
    cfg = SystemConfig(q=2, sigma=(1, 0))
    return MeasureContext(cfg, WeightVec(("1/3", "2/3")), WeightVec(("1/4", "3/4")))


@pytest.fixture
def cfg_c3() -> SystemConfig:
    """q=3 with the 3-cycle 0 -> 1 -> 2 -> 0."""
    return SystemConfig(q=3, sigma=(1, 2, 0))
