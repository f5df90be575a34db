"""Command-line surface: eval, sample and verify."""

from .main import build_parser, format_decimal, format_exact, main
from .run_config import FUNCTIONS, RunConfig

__all__ = [
    "FUNCTIONS",
    "RunConfig",
    "build_parser",
    "format_decimal",
    "format_exact",
    "main",
]
