"""
Registry of verification checks.

A check is a function ``(n, rng) -> Outcome``: ``n`` is the suite's base Monte
Carlo size (each check scales it to its own needs) and ``rng`` the check's own
stream. Checks register themselves under a suite name with ``@register``.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import NamedTuple

from src.harness.stats import KsResult, MomentResult
from src.paths.rng import RngStream

SUITES = ("minorant", "laws", "samplers", "straddle", "azema")


class Outcome(NamedTuple):
    """Result of one check, before the runner adds seed and rerun bookkeeping."""

    kind: str
    statistic: float
    passed: bool
    n: int
    target: float | None = None
    tolerance: float | None = None
    p_value: float | None = None
    detail: str | None = None


CheckFn = Callable[[int, RngStream], Outcome]


@dataclass(frozen=True)
class RegisteredCheck:
    name: str
    suite: str
    func: CheckFn
    slow: bool = False


_REGISTRY: dict[str, RegisteredCheck] = {}


def register(suite: str, name: str, slow: bool = False) -> Callable[[CheckFn], CheckFn]:
    """Decorator adding a check to ``suite``."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")

    def decorator(func: CheckFn) -> CheckFn:
        if name in _REGISTRY:
            raise ValueError(f"check {name!r} registered twice")
        _REGISTRY[name] = RegisteredCheck(name=name, suite=suite, func=func, slow=slow)
        return func

    return decorator


def checks_for(suite: str, include_slow: bool = False) -> list[RegisteredCheck]:
    """Checks of ``suite`` in registration order."""
    return [
        c for c in _REGISTRY.values() if c.suite == suite and (include_slow or not c.slow)
    ]


def ks_outcome(res: KsResult, n: int, threshold: float, detail: str | None = None) -> Outcome:
    return Outcome(
        kind="ks",
        statistic=res.statistic,
        passed=res.pvalue > threshold,
        n=n,
        tolerance=threshold,
        p_value=res.pvalue,
        detail=detail,
    )


def moment_outcome(res: MomentResult, detail: str | None = None) -> Outcome:
    return Outcome(
        kind="moment",
        statistic=res.mean,
        passed=res.passed,
        n=res.n,
        target=res.target,
        tolerance=res.k_sigma * res.se,
        detail=detail,
    )


def exact_outcome(
    error: float, tolerance: float, n: int = 1, detail: str | None = None
) -> Outcome:
    """Deterministic check: passes iff error <= tolerance."""
    return Outcome(
        kind="exact",
        statistic=error,
        passed=error <= tolerance,
        n=n,
        target=0.0,
        tolerance=tolerance,
        detail=detail,
    )


def combine(outcomes: list[Outcome], detail: str | None = None) -> Outcome:
    """Fold several sub-checks into one: passes iff all pass; reports the first failure,
    or the last sub-check when all pass."""
    failing = [o for o in outcomes if not o.passed]
    lead = failing[0] if failing else outcomes[-1]
    summary = "; ".join(o.detail for o in outcomes if o.detail)
    return lead._replace(passed=not failing, detail=detail or summary or None)
