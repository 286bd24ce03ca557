"""
Retry policies built on tenacity.

Two kinds of retries exist in the toolkit:
- resampling a random object whose simulation hit a resource cap
- rerunning a failed statistical check once on a derived seed
"""

from collections.abc import Callable
from typing import Any, TypeVar

from tenacity import (
    RetryCallState,
    Retrying,
    retry,
    retry_if_exception_type,
    retry_if_result,
    stop_after_attempt,
)

from src.core.logging import get_logger

logger = get_logger(__name__)

T = TypeVar("T")


def _log_attempt(retry_state: RetryCallState) -> None:
    outcome = retry_state.outcome
    reason = outcome.exception() if outcome is not None and outcome.failed else "result rejected"
    logger.debug(
        "Attempt %d of %s failed: %s",
        retry_state.attempt_number,
        getattr(retry_state.fn, "__name__", "call"),
        reason,
    )


def with_resample(
    exc_type: type[BaseException] | tuple[type[BaseException], ...],
    attempts: int = 3,
) -> Callable[[Callable[..., T]], Callable[..., T]]:
    """
    Decorator that re-invokes a sampler when it raises one of ``exc_type``.

    No waiting between attempts: each attempt draws fresh randomness from the
    generator passed to the sampler. After ``attempts`` failures the last
    exception is re-raised.

    Args:
        exc_type: Exception type(s) that trigger a resample
        attempts: Maximum number of attempts (default: 3)

    Returns:
        Decorator applying the retry policy
    """
    return retry(
        stop=stop_after_attempt(attempts),
        retry=retry_if_exception_type(exc_type),
        before_sleep=_log_attempt,
        reraise=True,
    )


def rerun_on_failure(
    func: Callable[[int], T],
    is_failure: Callable[[T], bool],
    attempts: int = 2,
) -> tuple[T, int]:
    """
    Run ``func(attempt_index)`` until ``is_failure`` is false or attempts run out.

    Args:
        func: Callable receiving the zero-based attempt index
        is_failure: Predicate on the result that triggers a rerun
        attempts: Maximum number of runs (default: 2)

    Returns:
        Tuple of (last result, number of runs performed)
    """
    runs = 0

    def _call() -> Any:
        nonlocal runs
        result = func(runs)
        runs += 1
        return result

    retrying = Retrying(
        stop=stop_after_attempt(attempts),
        retry=retry_if_result(is_failure),
        before_sleep=_log_attempt,
        retry_error_callback=lambda state: state.outcome.result() if state.outcome else None,
    )
    result = retrying(_call)
    return result, runs
