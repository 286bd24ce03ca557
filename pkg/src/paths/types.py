"""
Path representations and process specifications.

GridPath holds a path sampled on an equispaced grid; EventPath holds an exact
piecewise-affine path with jumps, as produced by compound-Poisson-with-drift
processes. Both are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Annotated, Any, Literal

import numpy as np
import scipy.stats
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator

from src.core.exceptions import PathError


def _frozen_array(values: Any) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GridPath:
    """Path values X(t0 + k*dt), k = 0..n-1."""

    t0: float
    dt: float
    values: np.ndarray

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise PathError(f"dt must be > 0, got {self.dt}")
        values = _frozen_array(self.values)
        if values.ndim != 1 or values.size == 0:
            raise PathError("values must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(values)):
            raise PathError("values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def tmax(self) -> float:
        return self.t0 + (self.n - 1) * self.dt

    @cached_property
    def times(self) -> np.ndarray:
        return _frozen_array(self.t0 + self.dt * np.arange(self.n))

    @property
    def origin_index(self) -> int | None:
        """Index of the grid point nearest 0, or None if 0 is outside the window."""
        if not self.t0 - 0.5 * self.dt <= 0.0 <= self.tmax + 0.5 * self.dt:
            return None
        return int(np.clip(np.rint(-self.t0 / self.dt), 0, self.n - 1))

    def index_of(self, t: float) -> int:
        """Index of the grid point nearest ``t``."""
        self.check_inside(t)
        return int(np.clip(np.rint((t - self.t0) / self.dt), 0, self.n - 1))

    def check_inside(self, t: float) -> None:
        slack = 1e-9 * self.dt
        if not self.t0 - slack <= t <= self.tmax + slack:
            raise PathError(f"t={t} outside window [{self.t0}, {self.tmax}]")

    def min_left_values(self) -> np.ndarray:
        """X_t ∧ X_{t-} on the grid; continuous-path convention."""
        return self.values


@dataclass(frozen=True)
class EventPath:
    """
    Exact piecewise-affine path with jumps.

    Breakpoint i carries the left limit ``left[i]`` and the value ``right[i]``;
    between breakpoints the path is affine with slope ``slope``. The first and
    last breakpoints are the window endpoints.
    """

    times: np.ndarray
    left: np.ndarray
    right: np.ndarray
    slope: float

    def __post_init__(self) -> None:
        times = _frozen_array(self.times)
        left = _frozen_array(self.left)
        right = _frozen_array(self.right)
        if times.ndim != 1 or times.size == 0:
            raise PathError("an event path needs at least one breakpoint")
        if left.shape != times.shape or right.shape != times.shape:
            raise PathError("times, left and right must have the same length")
        if np.any(np.diff(times) <= 0):
            raise PathError("breakpoint times must be strictly increasing")
        drift_values = right[:-1] + self.slope * np.diff(times)
        scale = 1.0 + np.max(np.abs(right)) + abs(self.slope) * (times[-1] - times[0])
        if drift_values.size and not np.allclose(
            left[1:], drift_values, rtol=0, atol=1e-9 * scale
        ):
            raise PathError("path is not affine with the given slope between breakpoints")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @property
    def tmin(self) -> float:
        return float(self.times[0])

    @property
    def tmax(self) -> float:
        return float(self.times[-1])

    @property
    def n(self) -> int:
        return int(self.times.size)

    @property
    def segments(self) -> list[tuple[float, float, float]]:
        return [
            (float(t), float(lv), float(rv))
            for t, lv, rv in zip(self.times, self.left, self.right, strict=True)
        ]

    @property
    def jumps(self) -> np.ndarray:
        return self.right - self.left

    @property
    def jump_count(self) -> int:
        return int(np.count_nonzero(self.jumps))

    def check_inside(self, t: float) -> None:
        if not self.tmin <= t <= self.tmax:
            raise PathError(f"t={t} outside window [{self.tmin}, {self.tmax}]")

    def _segment(self, t: float) -> int:
        return int(np.searchsorted(self.times, t, side="right")) - 1

    def value(self, t: float) -> float:
        """Right-continuous value X_t."""
        self.check_inside(t)
        i = self._segment(t)
        return float(self.right[i] + self.slope * (t - self.times[i]))

    def left_limit(self, t: float) -> float:
        """Left limit X_{t-}; equals X_t away from jumps."""
        self.check_inside(t)
        i = self._segment(t)
        if self.times[i] == t:
            return float(self.left[i])
        return float(self.right[i] + self.slope * (t - self.times[i]))

    def min_left_values(self) -> np.ndarray:
        """X ∧ X_- at the breakpoints."""
        return np.minimum(self.left, self.right)


Path = GridPath | EventPath


class BrownianWithDrift(BaseModel):
    """X_t = sigma * B_t + beta * t."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["brownian"] = "brownian"
    beta: float = 0.0
    sigma: float = Field(default=1.0, gt=0)

    def mean(self) -> float:
        """E[X_1]."""
        return self.beta


class JumpLaw(BaseModel):
    """
    Named jump-size distribution.

    ``name`` is either ``"constant"`` (params: value) or the name of a
    scipy.stats distribution with its keyword parameters, e.g.
    ``JumpLaw(name="norm", params={"loc": -1, "scale": 0.5})``.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    params: dict[str, float] = Field(default_factory=dict)

    @field_validator("name")
    @classmethod
    def validate_name(cls, v: str) -> str:
        if v == "constant":
            return v
        dist = getattr(scipy.stats, v, None)
        if not isinstance(dist, scipy.stats.rv_continuous | scipy.stats.rv_discrete):
            raise ValueError(f"unknown jump law '{v}'")
        return v

    def frozen(self) -> Any:
        return getattr(scipy.stats, self.name)(**self.params)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.name == "constant":
            return np.full(size, float(self.params.get("value", 0.0)))
        return np.asarray(self.frozen().rvs(size=size, random_state=rng), dtype=np.float64)

    def mean(self) -> float | None:
        """Mean jump size, or None when the law has no finite mean."""
        if self.name == "constant":
            return float(self.params.get("value", 0.0))
        # scipy reports nan (cauchy) or inf (heavy pareto) when E|J| is infinite
        m = float(self.frozen().mean())
        return m if math.isfinite(m) else None


class CompoundPoissonDrift(BaseModel):
    """X_t = d * t + sum of N_t iid jumps, N a Poisson process of the given rate."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["compound_poisson"] = "compound_poisson"
    d: float = 0.0
    rate: float = Field(gt=0)
    jump: JumpLaw

    def mean(self) -> float | None:
        """E[X_1], or None when the jump law has no finite mean."""
        jump_mean = self.jump.mean()
        if jump_mean is None:
            return None
        return self.d + self.rate * jump_mean


ProcessSpec = Annotated[BrownianWithDrift | CompoundPoissonDrift, Field(discriminator="kind")]

process_spec_adapter: TypeAdapter[BrownianWithDrift | CompoundPoissonDrift] = TypeAdapter(
    ProcessSpec
)
