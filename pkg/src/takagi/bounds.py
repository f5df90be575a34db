"""Uniform bounds on the truncations."""

from fractions import Fraction

from src.core import ConfigError, MultiIndex, SystemConfig, WeightVec


def sup_bound(cfg: SystemConfig, r: WeightVec, u: MultiIndex) -> Fraction:
    """
    Majorant of sup_x |D_{d,r,u,k}(x)| over every d and k.

    (q-1)^{|u|-1} / (q max r) * (2 / min r * 1 / (1 - max r))^{|u|}
    """
    u.check_for(cfg)
    if r.q != cfg.q:
        raise ConfigError(f"r has {r.q} components, expected {cfg.q}")
    top, bottom = r.max(), r.min()
    step = Fraction(2) / bottom / (1 - top)
    return Fraction((cfg.q - 1) ** (u.order - 1)) / (cfg.q * top) * step**u.order


def tail_bound_base(cfg: SystemConfig, r: WeightVec, k: int) -> Fraction:
    """Bound on |T_{d,r,e_l} - D_{d,r,e_l,k}|, uniform in d, l and x."""
    if k < 0:
        raise ConfigError(f"truncation depth must be >= 0, got {k}")
    if r.q != cfg.q:
        raise ConfigError(f"r has {r.q} components, expected {cfg.q}")
    top = r.max()
    return Fraction(2) / (cfg.q * r.min()) * top**k / (1 - top)
