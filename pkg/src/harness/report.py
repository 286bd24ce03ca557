"""
Verification reports.

A report is a pydantic model serialized as indented JSON. Given the same suite,
N and seed it is byte-identical across runs; wall time is only recorded when
timing is requested.
"""

from __future__ import annotations

import math
from pathlib import Path

from pydantic import BaseModel, Field, field_validator, model_validator

from src.core.logging import get_logger

logger = get_logger(__name__)

SCHEMA_VERSION = 1


class CheckRecord(BaseModel):
    """Outcome of one statistical check."""

    name: str
    kind: str = Field(description="ks, ks2, moment, identity or exact")
    statistic: float | None
    target: float | None = None
    tolerance: float | None = None
    p_value: float | None = None
    passed: bool
    n: int = Field(ge=0)
    seed: int
    reruns: int = 0
    detail: str | None = None

    @field_validator("statistic", "target", "tolerance", "p_value")
    @classmethod
    def finite_or_none(cls, v: float | None) -> float | None:
        """NaN and infinities are not valid JSON; store them as None or a large sentinel."""
        if v is None or math.isfinite(v):
            return v
        return None if math.isnan(v) else math.copysign(1e308, v)


class Report(BaseModel):
    """Outcome of a verification suite."""

    schema_version: int = SCHEMA_VERSION
    suite: str
    n: int
    seed: int
    checks: list[CheckRecord] = Field(default_factory=list)
    passed: bool = True
    wall_time: float | None = None

    @model_validator(mode="after")
    def overall_pass(self) -> Report:
        self.passed = all(c.passed for c in self.checks)
        return self

    @property
    def failed(self) -> list[CheckRecord]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"

    def write(self, target: Path) -> None:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(self.to_json(), encoding="utf-8")
        logger.info("Wrote report for suite %s to %s", self.suite, target)
