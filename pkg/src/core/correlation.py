"""
Check-scoped correlation IDs for log attribution.

The verification harness runs many checks, possibly on worker threads. Each check
sets a check_id in a contextvars.ContextVar so that log formatters can attribute
every line emitted while the check runs.
"""

import uuid
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar

# Context variable holding the currently running check's ID.
check_id_var: ContextVar[str] = ContextVar("check_id", default="-")


@contextmanager
def check_context(name: str | None = None) -> Iterator[str]:
    """Bind a check ID for the duration of the block.

    Args:
        name: Check name to use as the ID; a short random ID is generated if omitted

    Yields:
        The bound check ID
    """
    cid = name or str(uuid.uuid4())[:8]
    token = check_id_var.set(cid)
    try:
        yield cid
    finally:
        check_id_var.reset(token)
