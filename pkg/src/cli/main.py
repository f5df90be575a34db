"""
The qtakagi command line: eval, sample and verify.

Usage:
    qtakagi eval cdf --q 2 --sigma 1,0 --d 1/3,2/3 --r 1/4,3/4 --x 3/4
    qtakagi sample --function takagi --u 1 --grid-level 4 --output takagi.csv
    qtakagi verify --suite all --seed 1
"""

import argparse
import logging
import sys
from contextlib import contextmanager
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import pandas as pd
from pydantic import ValidationError

from src import config
from src.core import (
    CombinatorialGuard,
    ConfigError,
    FieldError,
    LevelCapExceeded,
    MultiIndex,
    QAdicError,
    QAdicPoint,
    check_cells,
    grid,
)

from .run_config import FUNCTIONS, RunConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IDENTITY_FAILURE = 1
EXIT_CONFIG = 2
EXIT_CAP = 3
EXIT_IO = 4

CSV_COLUMNS = ["x_num", "x_den", "value_num", "value_den", "value_decimal"]


def format_exact(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction) -> str:
    """15 significant digits of an exact rational."""
    with localcontext() as ctx:
        ctx.prec = 15
        rendered = Decimal(value.numerator) / Decimal(value.denominator)
    return format(rendered, ".15g")


def evaluator(run: RunConfig, function: str) -> Callable[[QAdicPoint], Fraction]:
    """
    Resolve a function selector to a map x -> exact value.

    All inputs are parsed up front so that a bad field fails before any
    point is evaluated.
    """
    from src.derivs import DerivMode, mixed_partial_oracle, normalized_derivative, theorem_rhs
    from src.measure import MeasureContext, cdf
    from src.takagi import takagi_D_recursive, takagi_T

    cfg = run.system()

    if function == "cdf":
        mc = MeasureContext(cfg, run.weights("d"), run.weights("r"))
        return lambda x: cdf(mc, x)

    u = run.multi_index()
    if function == "takagi":
        mc = MeasureContext(cfg, run.weights("d"), run.weights("r"))
        if run.k is not None:
            return lambda x: takagi_D_recursive(mc, u, run.k, x)
        return lambda x: takagi_T(mc, u, x)

    r = run.weights("r")
    if function == "derivative":
        if run.raw:
            return lambda x: mixed_partial_oracle(cfg, DerivMode.COUPLED, x, u, r)
        return lambda x: normalized_derivative(cfg, r, u, x)
    if function == "theorem-rhs":
        return lambda x: theorem_rhs(cfg, r, u, x)
    raise FieldError("function", f"unknown function {function!r}")


def _direction(u: MultiIndex) -> int:
    if u.order != 1:
        raise FieldError("fd_step", "finite differences need a first-order u = e_l")
    return u.support()[0]


def cmd_eval(run: RunConfig) -> int:
    """Print one exact value and its decimal rendering."""
    from src.derivs import finite_difference

    if run.function is None:
        raise FieldError("function", "choose one of " + ", ".join(FUNCTIONS))
    evaluate = evaluator(run, run.function)
    x = run.point()
    value = evaluate(x)
    print(format_exact(value))
    print(format_decimal(value))

    step = run.step()
    if step is not None:
        if run.function != "derivative":
            raise FieldError("fd_step", "finite differences apply to the derivative only")
        u = run.multi_index()
        approx = finite_difference(run.system(), run.weights("r"), _direction(u), x, step)
        if not run.raw:
            approx /= run.q
        print(f"finite difference (h={format_exact(step)}): {format_exact(approx)}")
        print(format_decimal(approx))
    return EXIT_OK


def cmd_sample(run: RunConfig) -> int:
    """Evaluate on the grid m/q^G and write a CSV."""
    if run.function is None:
        raise FieldError("function", "choose one of " + ", ".join(FUNCTIONS))
    if run.output is None:
        raise FieldError("output", "sample needs an output path")
    evaluate = evaluator(run, run.function)
    check_cells(run.q, run.grid_level)

    rows = []
    for x in grid(run.q, run.grid_level):
        value = evaluate(x)
        rows.append(
            {
                "x_num": str(x.value.numerator),
                "x_den": str(x.value.denominator),
                "value_num": str(value.numerator),
                "value_den": str(value.denominator),
                "value_decimal": format_decimal(value),
            }
        )
    df = pd.DataFrame(rows, columns=CSV_COLUMNS)
    df.to_csv(run.output, index=False, encoding="utf-8", lineterminator="\n")
    logger.info("sampled %s on %d points", run.function, len(df))
    print(f"Wrote {len(df)} rows to: {run.output}")
    return EXIT_OK


def cmd_verify(run: RunConfig) -> int:
    """Run the identity suites and print the report."""
    from src.validation import run_suites, save_report

    report = run_suites(run.suite, run.seed, run.trials)
    print(report.summary())
    if run.output:
        save_report(report, run.output)
        print(f"\nReport saved to: {run.output}")
    return EXIT_OK if report.ok else EXIT_IDENTITY_FAILURE


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "eval": cmd_eval,
    "sample": cmd_sample,
    "verify": cmd_verify,
}


def _add_context_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("system")
    group.add_argument("--config", help="JSON file with run settings (flags win)")
    group.add_argument("--q", type=int, help="Base q >= 2 (default 2)")
    group.add_argument("--sigma", help="Permutation images, e.g. 1,0 (default identity)")
    group.add_argument("--d", help="First-level weights p/q,... (default uniform)")
    group.add_argument("--r", help="Refinement weights p/q,... (default uniform)")
    group.add_argument("--u", help="Derivative order u_0,...,u_{q-2}")
    group.add_argument("--k", type=int, help="Truncation depth (takagi: D instead of T)")
    group.add_argument("--max-table-cells", type=int, help="Cap on dense table cells")
    group.add_argument("--max-tuple-terms", type=int, help="Cap on direct D tuple terms")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtakagi",
        description="Exact q-adic measures, Takagi functions and derivative identities",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="More logging on stderr"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="Evaluate one function at one point")
    p_eval.add_argument("function", choices=FUNCTIONS)
    p_eval.add_argument("--x", help="q-adic point p/q in [0,1]")
    p_eval.add_argument("--raw", action="store_true", default=None,
                        help="Unnormalized derivative d^u L_r(x)")
    p_eval.add_argument("--fd-step", help="Also print a central difference with step h")
    _add_context_flags(p_eval)

    p_sample = sub.add_parser("sample", help="Evaluate on the grid m/q^G and write CSV")
    p_sample.add_argument("--function", choices=FUNCTIONS)
    p_sample.add_argument("--grid-level", type=int, help="G (default 3)")
    p_sample.add_argument("--output", help="CSV path")
    p_sample.add_argument("--raw", action="store_true", default=None,
                          help="Unnormalized derivative d^u L_r(x)")
    _add_context_flags(p_sample)

    p_verify = sub.add_parser("verify", help="Run the identity suites")
    p_verify.add_argument("--suite", help="Suite name or 'all' (default all)")
    p_verify.add_argument("--seed", type=int, help="Instance seed (default 0)")
    p_verify.add_argument("--trials", type=int, help="Instances per standard configuration")
    p_verify.add_argument("--output", help="Also save the report as JSON")
    _add_context_flags(p_verify)

    return parser


def _setup_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, config.LOG_LEVEL, logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@contextmanager
def _caps_applied(run: RunConfig) -> Iterator[None]:
    """Override the size caps for one run; the previous caps come back afterwards."""
    saved = config.MAX_TABLE_CELLS, config.MAX_TUPLE_TERMS
    if run.max_table_cells is not None:
        config.MAX_TABLE_CELLS = run.max_table_cells
    if run.max_tuple_terms is not None:
        config.MAX_TUPLE_TERMS = run.max_tuple_terms
    try:
        yield
    finally:
        config.MAX_TABLE_CELLS, config.MAX_TUPLE_TERMS = saved


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.verbose)

    flags = {
        key: value
        for key, value in vars(args).items()
        if key not in ("command", "config", "verbose")
    }
    try:
        run = RunConfig.from_sources(flags, args.config)
        with _caps_applied(run):
            return COMMANDS[args.command](run)
    except ValidationError as e:
        for error in e.errors():
            field = ".".join(str(part) for part in error["loc"]) or "config"
            print(f"error: {field}: {error['msg']}", file=sys.stderr)
        return EXIT_CONFIG
    except (LevelCapExceeded, CombinatorialGuard) as e:
        print(f"error: cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except (ConfigError, QAdicError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
