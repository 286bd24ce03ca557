"""
Suite runner.

Every check draws from its own stream, ``RngStream(seed).named(check name)``, so the
outcome of a check does not depend on which other checks run or in which order.
A failing check is rerun once on a derived stream and fails only if both runs fail.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor

import src.harness.checks  # noqa: F401  (registers the checks)
from src.core.config import settings
from src.core.correlation import check_context
from src.core.exceptions import LipminError, UnknownSuiteError
from src.core.logging import get_logger
from src.core.retry import rerun_on_failure
from src.harness.registry import SUITES, Outcome, RegisteredCheck, checks_for
from src.harness.report import CheckRecord, Report
from src.paths.rng import RngStream

logger = get_logger(__name__)


def suite_names(name: str) -> tuple[str, ...]:
    """Suites selected by ``name``; ``all`` expands to every suite.

    Raises:
        UnknownSuiteError: if ``name`` is neither a suite nor ``all``
    """
    if name == "all":
        return SUITES
    if name not in SUITES:
        raise UnknownSuiteError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}, all")
    return (name,)


def run_check(check: RegisteredCheck, n: int, seed: int) -> CheckRecord:
    """Run one check, rerunning it once on a derived stream if it fails."""
    stream = RngStream(seed).named(check.name)

    def attempt(index: int) -> Outcome:
        with check_context(check.name):
            try:
                return check.func(n, stream.derived(index))
            except LipminError as e:
                logger.warning("Check %s raised %s: %s", check.name, type(e).__name__, e)
                return Outcome(
                    kind="error", statistic=math.nan, passed=False, n=0, detail=str(e)
                )

    outcome, runs = rerun_on_failure(attempt, lambda o: not o.passed, attempts=2)
    if runs > 1:
        logger.warning(
            "Check %s failed on its first run; rerun %s",
            check.name,
            "passed" if outcome.passed else "failed",
        )
    return CheckRecord(
        name=check.name,
        kind=outcome.kind,
        statistic=outcome.statistic,
        target=outcome.target,
        tolerance=outcome.tolerance,
        p_value=outcome.p_value,
        passed=outcome.passed,
        n=outcome.n,
        seed=seed,
        reruns=runs - 1,
        detail=outcome.detail,
    )


def run_suite(
    name: str,
    n: int,
    seed: int,
    include_slow: bool = False,
    workers: int | None = None,
    timing: bool = False,
) -> Report:
    """Run the checks of suite ``name`` (or of every suite for ``all``).

    Checks run on a thread pool of ``workers`` threads (LIPMIN_HARNESS_WORKERS by
    default); records keep registration order whatever the pool size.

    Raises:
        UnknownSuiteError: if ``name`` is not a known suite
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    checks = [c for s in suite_names(name) for c in checks_for(s, include_slow)]
    logger.info("Running suite %s: %d checks, n=%d, seed=%d", name, len(checks), n, seed)

    started = time.perf_counter()
    with ThreadPoolExecutor(max_workers=workers or settings.harness_workers) as pool:
        records = list(pool.map(lambda c: run_check(c, n, seed), checks))
    elapsed = time.perf_counter() - started

    report = Report(
        suite=name,
        n=n,
        seed=seed,
        checks=records,
        wall_time=round(elapsed, 3) if timing else None,
    )
    logger.info(
        "Suite %s finished: %d/%d checks passed",
        name,
        len(records) - len(report.failed),
        len(records),
    )
    return report
