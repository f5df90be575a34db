"""Exception hierarchy shared by every module."""


class QAdicError(ValueError):
    """Base class for all library errors."""


class ConfigError(QAdicError):
    """Invalid combinatorial context or input value."""


class NotABijection(ConfigError):
    """Permutation table has repeated or out-of-range images."""


class OrderViolation(ConfigError):
    """sigma^q is not the identity."""

    def __init__(self, point: int, image: int, q: int):
        self.point = point
        self.image = image
        super().__init__(
            f"sigma^{q} is not the identity: sigma^{q}({point}) = {image}"
        )


class InvalidWeights(ConfigError):
    """Weight vector is not a strictly positive probability vector."""


class FieldError(ConfigError):
    """A run-configuration field failed to parse or validate."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class LevelCapExceeded(QAdicError):
    """A dense table would exceed the configured cell cap."""


class EmptyMultiIndex(QAdicError):
    """Operation requires a derivative order |u| >= 1."""


class CombinatorialGuard(QAdicError):
    """Direct tuple summation would enumerate too many terms."""
