"""
The identity suites run by `verify`.

Each suite draws seeded random rational weights for every standard
configuration, evaluates both sides of its identities exactly and tallies
the outcome in a SuiteResult. Instance order is fixed by the seed, so two
runs with the same seed produce the same report.
"""

import logging
from fractions import Fraction
from collections import Counter
from itertools import combinations
from math import factorial
from typing import Callable

import numpy as np

from src.core import (
    ConfigError,
    MultiIndex,
    QAdicInterval,
    QAdicPoint,
    SystemConfig,
    WeightVec,
    grid,
    locate,
    phi_apply,
)
from src.core.system import sigma_power
from src.derivs import (
    DerivMode,
    basechange_eval,
    cdf_polynomial,
    classical_takagi,
    derivative_transfer_eval,
    hlsrq_partial,
    hsrq_partial,
    mixed_partial_oracle,
    normalized_derivative,
    theorem_rhs,
)
from src.measure import (
    MeasureContext,
    cdf,
    cond_expect,
    expectation,
    integral_profile,
    integrate_step,
    interval_measure,
    mass_table,
    partial_expectation,
)
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
from src.takagi import (
    enumerate_psi,
    sup_bound,
    tail_bound_base,
    takagi_D_direct,
    takagi_D_recursive,
    takagi_T,
)

from .instances import STANDARD_CONFIGS, draw_instances, random_step
from .report import SuiteResult, VerificationReport

logger = logging.getLogger(__name__)

AXIOM_LEVEL = 5
"""Deepest level of the additivity and normalization checks."""

TAKAGI_GRID_LEVEL = 4
TAKAGI_MAX_DEPTH = 5
MAX_ORDER = 3

BOUND_GRID_LEVEL = {2: 4, 3: 3}
TAIL_GRID_LEVEL = 8
TAIL_TRIALS = {2: 3, 3: 1}
"""Instances per configuration that also run the level-8 tail check."""

MAX_BETA = 5
"""Largest shift in the zero-expectation sequences."""


def _multi_indices(q: int, orders: range | tuple[int, ...]) -> list[MultiIndex]:
    return [u for order in orders for u in MultiIndex.of_order(q, order)]


def _context(inst) -> MeasureContext:
    return MeasureContext(inst.cfg, inst.d, inst.r)


# ---------------------------------------------------------------------------
# measure-axioms
# ---------------------------------------------------------------------------


def check_measure_axioms(seed: int, trials: int) -> SuiteResult:
    """Additivity, normalization, factorization and the classical reductions."""
    result = SuiteResult("measure-axioms")
    rng = np.random.default_rng(seed)

    for inst in draw_instances(rng, trials):
        cfg, q, mc = inst.cfg, inst.cfg.q, _context(inst)
        levels = [
            [interval_measure(mc, QAdicInterval(q, k, n)) for n in range(q**k)]
            for k in range(AXIOM_LEVEL + 1)
        ]

        for k, masses in enumerate(levels):
            result.check_equal(
                "normalization", Fraction(1), sum(masses, Fraction(0)), inst.describe(level=k)
            )
            result.check_equal(
                "mass table", masses, list(mass_table(mc, k)), inst.describe(level=k)
            )
            if k < AXIOM_LEVEL:
                for n, mass in enumerate(masses):
                    children = sum(levels[k + 1][n * q : (n + 1) * q], Fraction(0))
                    result.check_equal(
                        "additivity", mass, children, inst.describe(interval=f"I_{k}({n})")
                    )
            if k >= 2:
                for n, mass in enumerate(masses):
                    j, l = divmod(n, q)
                    by_recursion = levels[k - 1][j] * inst.r[sigma_power(cfg, j)[l]]
                    result.check_equal(
                        "recursive definition",
                        by_recursion,
                        mass,
                        inst.describe(interval=f"I_{k}({n})"),
                    )

        for i in range(1, 4):
            for k in range(1, min(3, 6 - i) + 1):
                for b in range(q**i):
                    head = levels[i][b]
                    inner = mc.rescaled(b)
                    for a in range(q**k):
                        whole = interval_measure(mc, QAdicInterval(q, i + k, b * q**k + a))
                        split = head * interval_measure(inner, QAdicInterval(q, k, a))
                        result.check_equal(
                            "factorization",
                            whole,
                            split,
                            inst.describe(prefix=f"I_{i}({b})", suffix=f"I_{k}({a})"),
                        )

        if cfg.sigma == tuple(range(q)):
            for k in range(1, 5):
                for n, mass in enumerate(levels[k]):
                    digits = QAdicInterval(q, k, n).digits()
                    product = inst.d[digits[0]]
                    for digit in digits[1:]:
                        product *= inst.r[digit]
                    result.check_equal(
                        "multinomial reduction", product, mass, inst.describe(interval=f"I_{k}({n})")
                    )

        uniform = WeightVec.uniform(q)
        flat = MeasureContext(cfg, uniform, uniform)
        one = StepFunction.constant(q, 1)
        for x in grid(q, 3):
            result.check_equal("uniform weights give L(x)=x", x.value, cdf(flat, x), inst.describe(x=x))
            result.check_equal(
                "cdf equals integral of one",
                cdf(mc, x),
                integrate_step(mc, one, x),
                inst.describe(x=x),
            )
        result.check_equal("cdf at 0", Fraction(0), cdf(mc, QAdicPoint.zero(q)), inst.describe())
        result.check_equal("cdf at 1", Fraction(1), cdf(mc, QAdicPoint.one(q)), inst.describe())

        whole = QAdicInterval(q, 0, 0)
        for d in (inst.d, uniform):
            varied = MeasureContext(cfg, d, inst.r)
            for l in range(q):
                result.check_equal(
                    "selector mean is r_l",
                    inst.r[l],
                    expectation(varied, phi_l(cfg, l), whole),
                    inst.describe(first=d, l=l),
                )

        f = random_step(rng, q, 3)
        for k in range(3):
            projected = cond_expect(mc, f, k)
            for n in range(q**k):
                cell = QAdicInterval(q, k, n)
                result.check_equal(
                    "conditional expectation adjunction",
                    expectation(mc, f, cell),
                    expectation(mc, projected, cell),
                    inst.describe(interval=f"I_{k}({n})"),
                )

    return result


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------


def check_substitution(seed: int, trials: int) -> SuiteResult:
    """Composition with phi^i, the shift-indicator identity, substitution and constancy."""
    result = SuiteResult("substitution")
    rng = np.random.default_rng(seed)

    for cfg in STANDARD_CONFIGS:
        q = cfg.q
        for i in (1, 2):
            for x in grid(q, 3):
                cell = locate(x, i)
                shifted_x = phi_apply(x, i)
                for y in grid(q, 4):
                    if not cell.contains(y):
                        continue
                    moved = phi_apply(y, i).value <= shifted_x.value
                    direct = y.value <= x.value
                    result.check_true(
                        "shift indicator",
                        moved == direct,
                        {"q": q, "sigma": list(cfg.sigma), "i": i, "x": x, "y": y},
                        detail="1[phi^i y <= phi^i x] == 1[y <= x] on I_i(a)",
                    )

    for inst in draw_instances(rng, trials):
        cfg, q, mc = inst.cfg, inst.cfg.q, _context(inst)
        f = random_step(rng, q, int(rng.integers(1, 4)))
        g = random_step(rng, q, int(rng.integers(1, 4)))

        for i in range(4):
            result.check_true(
                "composition homomorphism",
                compose_phi(f * g, i, cfg) == compose_phi(f, i, cfg) * compose_phi(g, i, cfg),
                inst.describe(i=i, f=f.to_list(), g=g.to_list()),
            )

        whole = QAdicInterval(q, 0, 0)
        for i in range(1, 4):
            composed = compose_phi(f, i, cfg)
            for a in range(q**i):
                cell = QAdicInterval(q, i, a)
                result.check_equal(
                    "substitution",
                    interval_measure(mc, cell) * expectation(mc.rescaled(a), f, whole),
                    expectation(mc, composed, cell),
                    inst.describe(i=i, a=a, f=f.to_list()),
                )

        for i in (1, 2):
            composed = compose_phi(f, i, cfg)
            for x in grid(q, i + 2):
                cell = locate(x, i)
                result.check_equal(
                    "substitution on [0,x]",
                    interval_measure(mc, cell)
                    * integrate_step(mc.rescaled(cell.index), f, phi_apply(x, i)),
                    partial_expectation(mc, composed, cell, x),
                    inst.describe(i=i, x=x, f=f.to_list()),
                )

        for k in (1, 2):
            raw = random_step(rng, q, k + 2)
            g0 = raw - cond_expect(mc, raw, k)
            h = random_step(rng, q, k)
            result.check_true(
                "centered function has zero conditional expectation",
                cond_expect(mc, g0, k).is_zero(),
                inst.describe(k=k, g=g0.to_list()),
            )
            for x in grid(q, k + 2):
                result.check_equal(
                    "constancy",
                    h(x) * integrate_step(mc, g0, x),
                    integrate_step(mc, h * g0, x),
                    inst.describe(k=k, x=x),
                )

    return result


# ---------------------------------------------------------------------------
# zero-expectation
# ---------------------------------------------------------------------------


def _cell_expectations(profile: np.ndarray, q: int, k: int) -> np.ndarray:
    """E(f; I_k(n)) for every n, from a prefix table of f at level >= k."""
    width = (len(profile) - 1) // q**k
    return profile[width::width] - profile[0:-1:width]


def _check_cells_zero(
    result: SuiteResult,
    mc: MeasureContext,
    f: StepFunction,
    ks: range,
    describe: Callable[..., dict],
) -> None:
    profile = integral_profile(mc, f, max(ks))
    for k in ks:
        values = _cell_expectations(profile, mc.cfg.q, k)
        nonzero = [(n, v) for n, v in enumerate(values) if v != 0]
        detail = ""
        if nonzero:
            n, v = nonzero[0]
            detail = f"E(I_{k}({n})) = {v}, expected 0"
        result.check_true(
            "full interval" if k == 0 else "every level-k cell",
            not nonzero,
            describe(k=k),
            detail=detail,
        )


def check_zero_expectation(seed: int, trials: int) -> SuiteResult:
    """Shifted base differences and their products integrate to zero on coarse cells."""
    result = SuiteResult("zero-expectation")
    rng = np.random.default_rng(seed)

    for inst in draw_instances(rng, trials):
        cfg, q, mc = inst.cfg, inst.cfg.q, _context(inst)
        diffs = [base_diff(cfg, inst.r, l) for l in range(q - 1)]

        for beta in range(MAX_BETA + 1):
            for l, bd in enumerate(diffs):
                _check_cells_zero(
                    result,
                    mc,
                    compose_phi(bd, beta, cfg),
                    range(min(4, beta + 1) + 1),
                    lambda **kw: inst.describe(beta=[beta], labels=[l], **kw),
                )

        for length in (2, 3):
            for betas in combinations(range(MAX_BETA + 1), length):
                labels = [int(rng.integers(0, q - 1)) for _ in betas]
                factors = [compose_phi(diffs[l], b, cfg) for l, b in zip(labels, betas)]
                product = step_combine(StepOp.MULTIPLY, *factors)
                _check_cells_zero(
                    result,
                    mc,
                    product,
                    range(min(4, betas[0] + 1) + 1),
                    lambda **kw: inst.describe(beta=list(betas), labels=labels, **kw),
                )

    return result


# ---------------------------------------------------------------------------
# radon-nikodym
# ---------------------------------------------------------------------------


def check_radon_nikodym(seed: int, trials: int) -> SuiteResult:
    """The W-product formula for Z and the integral forms of L_{e,s} and L_{q,s}."""
    result = SuiteResult("radon-nikodym")
    rng = np.random.default_rng(seed)

    for inst in draw_instances(rng, trials, roles=("d", "r", "e", "s")):
        cfg, q = inst.cfg, inst.cfg.q
        d, r, e, s = inst.d, inst.r, inst.e, inst.s
        w = w_fn(cfg, s, r)

        selectors = [
            step_combine(StepOp.SCALE, s[l] / r[l], phi_l(cfg, l)) for l in range(q)
        ]
        result.check_true(
            "W as weighted selectors",
            step_combine(StepOp.ADD, *selectors) == w,
            inst.describe(),
        )

        z = [z_fn(cfg, e, s, d, r, k) for k in range(6)]
        result.check_true("Z_0 is one", z[0] == StepFunction.constant(q, 1), inst.describe())
        for k in range(1, 5):
            product = z[1]
            for i in range(k):
                product = product * compose_phi(w, i, cfg)
            result.check_true("W product", z[k + 1] == product, inst.describe(k=k))

        mc = MeasureContext(cfg, d, r)
        target = MeasureContext(cfg, e, s)
        for x in grid(q, 3):
            expected = cdf(target, x)
            for k in range(x.level, 4):
                result.check_equal(
                    "Z stabilization",
                    expected,
                    integrate_step(mc, z[k], x),
                    inst.describe(k=k, x=x),
                )

        base = MeasureContext.uniform_first(cfg, r)
        shifted = MeasureContext.uniform_first(cfg, s)
        densities = {1: StepFunction.constant(q, 1)}
        for k in range(2, 5):
            densities[k] = densities[k - 1] * compose_phi(w, k - 2, cfg)
        for x in grid(q, 3):
            expected = cdf(shifted, x)
            for k in range(x.level + 1, 5):
                result.check_equal(
                    "W integral of L_{q,s}",
                    expected,
                    integrate_step(base, densities[k], x),
                    inst.describe(k=k, x=x),
                )

    return result


# ---------------------------------------------------------------------------
# takagi-equiv
# ---------------------------------------------------------------------------


def check_takagi_equivalence(seed: int, trials: int) -> SuiteResult:
    """Direct and recursive truncations agree exactly; psi_u counts are right."""
    result = SuiteResult("takagi-equiv")
    rng = np.random.default_rng(seed)

    for cfg in STANDARD_CONFIGS:
        for u in _multi_indices(cfg.q, range(1, MAX_ORDER + 1)):
            maps = enumerate_psi(cfg, u)
            where = {"q": cfg.q, "sigma": list(cfg.sigma), "u": list(u.u)}
            result.check_equal("psi count", factorial(u.order) // u.factorial, len(maps), where)
            result.check_true(
                "psi preimages", all(m.counts(cfg.q) == u.u for m in maps), where
            )
            result.check_true(
                "psi order", [m.slots for m in maps] == sorted(m.slots for m in maps), where
            )

    for inst in draw_instances(rng, trials):
        cfg, q, mc = inst.cfg, inst.cfg.q, _context(inst)
        points = grid(q, TAKAGI_GRID_LEVEL)
        for u in _multi_indices(q, range(1, MAX_ORDER + 1)):
            for k in range(TAKAGI_MAX_DEPTH + 1):
                for x in points:
                    result.check_equal(
                        "direct = recursive",
                        takagi_D_direct(mc, u, k, x),
                        takagi_D_recursive(mc, u, k, x),
                        inst.describe(u=list(u.u), k=k, x=x),
                    )
        logger.debug("takagi-equiv: finished %s", inst.cfg)

    return result


# ---------------------------------------------------------------------------
# theorem
# ---------------------------------------------------------------------------


def check_theorem(seed: int, trials: int) -> SuiteResult:
    """
    The derivative identity and the chain of identities leading to it.

    First-order cases use `trials` weights per configuration on level-4
    grids; higher orders use a quarter as many on level-3 grids.
    """
    result = SuiteResult("theorem")
    rng = np.random.default_rng(seed)

    for inst in draw_instances(rng, trials, roles=("r",)):
        cfg, q, r = inst.cfg, inst.cfg.q, inst.r
        for l in range(q - 1):
            u = MultiIndex.unit(q, l)
            for x in grid(q, 4):
                result.check_equal(
                    "theorem, first order",
                    normalized_derivative(cfg, r, u, x),
                    theorem_rhs(cfg, r, u, x),
                    inst.describe(u=list(u.u), x=x),
                )

        for mode, mc in (
            (DerivMode.COUPLED, MeasureContext.coupled(cfg, r)),
            (DerivMode.UNIFORM_FIRST, MeasureContext.uniform_first(cfg, r)),
        ):
            for x in grid(q, 4):
                result.check_equal(
                    "oracle consistency",
                    cdf(mc, x),
                    cdf_polynomial(cfg, mode, x).evaluate(r.free),
                    inst.describe(mode=mode.value, x=x),
                )

        for x in grid(q, 5):
            lhs, rhs = basechange_eval(cfg, r, x)
            result.check_equal("base change", lhs, rhs, inst.describe(s=r, x=x))

    for inst in draw_instances(rng, max(1, trials // 4), roles=("r",)):
        cfg, q, r = inst.cfg, inst.cfg.q, inst.r
        for u in _multi_indices(q, range(1, MAX_ORDER + 1)):
            sequence = [j for j, count in enumerate(u.u) for _ in range(count)]
            for x in grid(q, 3):
                where = inst.describe(u=list(u.u), x=x)
                if u.order >= 2:
                    result.check_equal(
                        "theorem, higher order",
                        normalized_derivative(cfg, r, u, x),
                        theorem_rhs(cfg, r, u, x),
                        where,
                    )
                    poly = cdf_polynomial(cfg, DerivMode.COUPLED, x)
                    result.check_equal(
                        "mixed partial symmetry",
                        poly.diff_along(sequence).evaluate(r.free),
                        poly.diff_along(reversed(sequence)).evaluate(r.free),
                        where,
                    )

                lhs, rhs = derivative_transfer_eval(cfg, r, u, x)
                result.check_equal("derivative transfer", lhs, rhs, where)

                k = x.level + 2
                series = hsrq_partial(cfg, r, u, x, k)
                result.check_equal(
                    "mixed-partial series",
                    mixed_partial_oracle(cfg, DerivMode.UNIFORM_FIRST, x, u, r),
                    series,
                    where,
                )
                result.check_equal(
                    "mixed-partial series is stable",
                    series,
                    hsrq_partial(cfg, r, u, x, k + 1),
                    where,
                )
                result.check_equal(
                    "combined expression",
                    theorem_rhs(cfg, r, u, x),
                    hlsrq_partial(cfg, r, u, x, k),
                    where,
                )

    dyadic = SystemConfig.identity(2)
    half = WeightVec.uniform(2)
    e0 = MultiIndex.unit(2, 0)
    for x in grid(2, 6):
        result.check_equal(
            "classical Takagi anchor",
            2 * classical_takagi(x),
            mixed_partial_oracle(dyadic, DerivMode.COUPLED, x, e0, half),
            {"q": 2, "sigma": [0, 1], "r": half, "x": x},
        )

    return result


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def check_bounds(seed: int, trials: int) -> SuiteResult:
    """The sup-norm majorant, the first-order tail bound and stabilization to T."""
    result = SuiteResult("bounds")
    rng = np.random.default_rng(seed)
    tail_runs: Counter[SystemConfig] = Counter()

    for inst in draw_instances(rng, trials):
        cfg, q, mc, r = inst.cfg, inst.cfg.q, _context(inst), inst.r
        for u in _multi_indices(q, range(1, MAX_ORDER + 1)):
            bound = sup_bound(cfg, r, u)
            for x in grid(q, BOUND_GRID_LEVEL[q]):
                exact = takagi_T(mc, u, x)
                for k in range(TAKAGI_MAX_DEPTH + 1):
                    value = takagi_D_recursive(mc, u, k, x)
                    where = inst.describe(u=list(u.u), k=k, x=x)
                    result.check_true(
                        "sup bound",
                        abs(value) <= bound,
                        where,
                        detail=f"|D| = {abs(value)} <= {bound}",
                    )
                    if k >= x.level:
                        result.check_equal("stabilization to T", exact, value, where)
                if x.is_one:
                    result.check_equal("T(1) = 0", Fraction(0), exact, inst.describe(u=list(u.u)))
                    for k in range(TAKAGI_MAX_DEPTH):
                        result.check_equal(
                            "D_k(1) = 0",
                            Fraction(0),
                            takagi_D_recursive(mc, u, k, x),
                            inst.describe(u=list(u.u), k=k),
                        )

        tail_runs[cfg] += 1
        if tail_runs[cfg] > TAIL_TRIALS[q]:
            continue
        bounds = [tail_bound_base(cfg, r, k) for k in range(TAIL_GRID_LEVEL)]
        for l in range(q - 1):
            u = MultiIndex.unit(q, l)
            for x in grid(q, TAIL_GRID_LEVEL):
                exact = takagi_T(mc, u, x)
                for k, bound in enumerate(bounds):
                    gap = abs(exact - takagi_D_recursive(mc, u, k, x))
                    result.check_true(
                        "tail bound",
                        gap <= bound,
                        inst.describe(u=list(u.u), k=k, x=x),
                        detail=f"|T - D_k| = {gap} <= {bound}",
                    )
        logger.debug("bounds: tail check done for %s", cfg)

    return result


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

SuiteFn = Callable[[int, int], SuiteResult]

SUITES: dict[str, tuple[SuiteFn, int]] = {
    "measure-axioms": (check_measure_axioms, 5),
    "substitution": (check_substitution, 5),
    "zero-expectation": (check_zero_expectation, 3),
    "radon-nikodym": (check_radon_nikodym, 5),
    "takagi-equiv": (check_takagi_equivalence, 5),
    "theorem": (check_theorem, 20),
    "bounds": (check_bounds, 3),
}
"""name -> (suite, default instances per standard configuration)"""

SUITE_CHOICES = (*SUITES, "all")


def run_suites(suite: str, seed: int, trials: int | None = None) -> VerificationReport:
    """Run one suite (or all, in registry order) and aggregate the report."""
    if suite not in SUITE_CHOICES:
        raise ConfigError(f"unknown suite {suite!r}; choose from {', '.join(SUITE_CHOICES)}")
    names = list(SUITES) if suite == "all" else [suite]
    results = []
    for name in names:
        fn, default = SUITES[name]
        count = default if trials is None else trials
        logger.info("running %s with %d instances per configuration", name, count)
        outcome = fn(seed, count)
        outcome.trials = count
        logger.info("%s: %d passed, %d failed", name, outcome.passed, outcome.failed)
        results.append(outcome)
    return VerificationReport(seed=seed, results=results)
