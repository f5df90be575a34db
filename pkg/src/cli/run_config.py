"""Run configuration shared by the eval, sample and verify commands."""

import json
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator

from src.core import (
    ConfigError,
    FieldError,
    MultiIndex,
    QAdicPoint,
    SystemConfig,
    WeightVec,
    parse_rational,
    validate_config,
)

FUNCTIONS = ("cdf", "takagi", "derivative", "theorem-rhs")


def _split(value: Any) -> Any:
    """Accept "a,b,c" as well as a JSON list."""
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    return value


class RunConfig(BaseModel):
    """
    Every knob of a run. Rationals stay strings ("p/q") until they are
    turned into exact core types.
    """

    model_config = ConfigDict(extra="forbid")

    q: int = Field(default=2, ge=2, description="Base of the expansion")
    sigma: list[int] | None = Field(default=None, description="Permutation image table")
    d: list[str] | None = Field(default=None, description="First-level weights")
    r: list[str] | None = Field(default=None, description="Refinement weights")
    e: list[str] | None = Field(default=None, description="First-level weights of the target measure")
    s: list[str] | None = Field(default=None, description="Refinement weights of the target measure")
    u: list[int] | None = Field(default=None, description="Derivative multi-index")
    x: str | None = Field(default=None, description="Evaluation point p/q")
    k: int | None = Field(default=None, ge=0, description="Truncation depth")

    function: str | None = Field(default=None, description="cdf, takagi, derivative or theorem-rhs")
    raw: bool = Field(default=False, description="Print the unnormalized derivative")
    fd_step: str | None = Field(default=None, description="Finite-difference step p/q")

    grid_level: int = Field(default=3, ge=0, description="Sample x = m/q^G")
    output: str | None = Field(default=None, description="Output file")

    suite: str = Field(default="all", description="Verification suite")
    seed: int = Field(default=0, ge=0)
    trials: int | None = Field(default=None, ge=1, description="Instances per configuration")

    max_table_cells: int | None = Field(default=None, ge=1)
    max_tuple_terms: int | None = Field(default=None, ge=1)

    @field_validator("sigma", "u", "d", "r", "e", "s", mode="before")
    @classmethod
    def split_lists(cls, value: Any) -> Any:
        return _split(value)

    @field_validator("d", "r", "e", "s")
    @classmethod
    def check_rationals(cls, value: list[str] | None) -> list[str] | None:
        if value is not None:
            for item in value:
                parse_rational(item)
        return value

    @field_validator("x", "fd_step")
    @classmethod
    def check_rational(cls, value: str | None) -> str | None:
        if value is not None:
            parse_rational(value)
        return value

    @field_validator("function")
    @classmethod
    def check_function(cls, value: str | None) -> str | None:
        if value is not None and value not in FUNCTIONS:
            raise ValueError(f"unknown function {value!r}; choose from {', '.join(FUNCTIONS)}")
        return value

    @field_validator("suite")
    @classmethod
    def check_suite(cls, value: str) -> str:
        # lazy: the suites pull in every math module
        from src.validation import SUITE_CHOICES

        if value not in SUITE_CHOICES:
            raise ValueError(f"unknown suite {value!r}; choose from {', '.join(SUITE_CHOICES)}")
        return value

    @field_validator("sigma", "d", "r", "e", "s", "u")
    @classmethod
    def check_length(cls, value: list | None, info: ValidationInfo) -> list | None:
        """Vectors must fit q; weights may omit their last component."""
        q = info.data.get("q")
        if value is None or q is None:
            return value
        name = info.field_name
        if name == "sigma" and len(value) != q:
            raise ValueError(f"sigma must have q={q} entries, got {len(value)}")
        if name == "u" and len(value) != q - 1:
            raise ValueError(f"u must have q-1={q - 1} components, got {len(value)}")
        if name in ("d", "r", "e", "s") and len(value) not in (q - 1, q):
            raise ValueError(
                f"{name} must have q={q} components (or q-1 free ones), got {len(value)}"
            )
        return value

    @classmethod
    def from_sources(cls, flags: dict[str, Any], config_path: str | None = None) -> "RunConfig":
        """Merge a JSON config file with command-line flags; flags win."""
        merged: dict[str, Any] = {}
        if config_path:
            try:
                with open(config_path, encoding="utf-8") as f:
                    loaded = json.load(f)
            except json.JSONDecodeError as e:
                raise FieldError("config", f"{config_path} is not valid JSON: {e}") from e
            if not isinstance(loaded, dict):
                raise FieldError("config", f"{config_path} must hold a JSON object")
            merged.update(loaded)
        merged.update({key: value for key, value in flags.items() if value is not None})
        return cls.model_validate(merged)

    # -- exact core types ---------------------------------------------------

    def system(self) -> SystemConfig:
        sigma = self.sigma if self.sigma is not None else list(range(self.q))
        try:
            return validate_config(self.q, sigma)
        except ConfigError as e:
            raise FieldError("sigma", str(e)) from e

    def weights(self, role: str) -> WeightVec:
        """The weight vector for role d, r, e or s; uniform when not given."""
        value = getattr(self, role)
        if value is None:
            return WeightVec.uniform(self.q)
        try:
            if len(value) == self.q - 1:
                return WeightVec.from_free(value)
            return WeightVec(tuple(value))
        except ConfigError as e:
            raise FieldError(role, str(e)) from e

    def multi_index(self) -> MultiIndex:
        if self.u is None:
            raise FieldError("u", "a derivative order is required")
        try:
            u = MultiIndex(tuple(self.u))
            u.check_for(self.system())
        except (ConfigError, ValueError) as e:
            raise FieldError("u", str(e)) from e
        return u

    def point(self) -> QAdicPoint:
        if self.x is None:
            raise FieldError("x", "an evaluation point is required")
        try:
            return QAdicPoint.from_fraction(self.q, self.x)
        except ConfigError as e:
            raise FieldError("x", str(e)) from e

    def step(self) -> Fraction | None:
        return parse_rational(self.fd_step) if self.fd_step is not None else None
