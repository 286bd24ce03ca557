"""
Excursions of a path away from the contact set of its minorant.

Between consecutive contacts T_n < T_{n+1} the minorant is a tent (sawtooth),
so each excursion's apex time L and final value W_ζ follow from its endpoints:
L = t* = (W_ζ + αζ) / (2α) and ζ − L = (αζ − W_ζ) / (2α).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path as FilePath

import numpy as np

from src.core.exceptions import CorruptExcursionError, WindowError
from src.core.logging import get_logger
from src.minorant.engine import ContactTimes, sawtooth_segment
from src.paths.types import GridPath, Path

logger = get_logger(__name__)

FEATURE_COLUMNS = ("zeta", "L", "zeta_minus_L", "w_zeta", "h")


@dataclass(frozen=True)
class Excursion:
    """One excursion, rebased to start at (0, 0)."""

    start: float
    times: np.ndarray
    values: np.ndarray

    @property
    def lifetime(self) -> float:
        return float(self.times[-1])

    @property
    def final_value(self) -> float:
        return float(self.values[-1])


@dataclass(frozen=True)
class ExcursionFeatures:
    """(ζ, L, ζ − L, W_ζ, H) of one excursion."""

    zeta: float
    L: float
    zeta_minus_L: float
    w_zeta: float
    h: float

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.zeta, self.L, self.zeta_minus_L, self.w_zeta, self.h)


@dataclass
class FeatureTable:
    """Column-oriented features of many excursions."""

    zeta: np.ndarray
    L: np.ndarray
    zeta_minus_L: np.ndarray
    w_zeta: np.ndarray
    h: np.ndarray
    start: np.ndarray | None = None

    def __len__(self) -> int:
        return int(self.zeta.size)

    @classmethod
    def from_features(
        cls, features: list[ExcursionFeatures], starts: list[float] | None = None
    ) -> FeatureTable:
        cols = np.array([f.as_tuple() for f in features], dtype=np.float64).reshape(-1, 5)
        return cls(
            zeta=cols[:, 0],
            L=cols[:, 1],
            zeta_minus_L=cols[:, 2],
            w_zeta=cols[:, 3],
            h=cols[:, 4],
            start=None if starts is None else np.asarray(starts, dtype=np.float64),
        )

    def column(self, name: str) -> np.ndarray:
        if name not in FEATURE_COLUMNS:
            raise KeyError(name)
        return np.asarray(getattr(self, name))

    def write_csv(self, target: FilePath) -> None:
        """One row per excursion; a leading ``start`` column when starts are known."""
        header = (["start"] if self.start is not None else []) + list(FEATURE_COLUMNS)
        cols = [self.column(name) for name in FEATURE_COLUMNS]
        if self.start is not None:
            cols.insert(0, self.start)
        with target.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(np.column_stack(cols).tolist())


@dataclass
class ExcursionBatch:
    """Generic excursions of one path, in time order."""

    excursions: list[Excursion] = field(default_factory=list)
    warning: str | None = None

    def __len__(self) -> int:
        return len(self.excursions)

    @property
    def lifetimes(self) -> np.ndarray:
        return np.array([e.lifetime for e in self.excursions], dtype=np.float64)

    @property
    def final_values(self) -> np.ndarray:
        """W_ζ of each excursion."""
        return np.array([e.values[-1] for e in self.excursions], dtype=np.float64)


@dataclass(frozen=True)
class StraddlingExcursion:
    """The excursion straddling t = 0, with its endpoints G <= 0 < D."""

    G: float
    D: float
    excursion: Excursion

    @property
    def lifetime(self) -> float:
        return self.D - self.G

    @property
    def split(self) -> float:
        """U = −G / (D − G), the relative position of 0 inside the excursion."""
        return -self.G / (self.D - self.G)


def _slice(path: Path, i: int, j: int) -> Excursion:
    f = path.min_left_values()
    times = np.asarray(path.times)
    if isinstance(path, GridPath):
        rel_t = np.arange(j - i + 1) * path.dt
    else:
        rel_t = times[i : j + 1] - times[i]
    start = 0.0 if isinstance(path, GridPath) and i == path.origin_index else float(times[i])
    return Excursion(start=start, times=rel_t, values=f[i : j + 1] - f[i])


def extract_generic_excursions(
    path: Path, contacts: ContactTimes, buffer: float = 0.0
) -> ExcursionBatch:
    """Excursions between consecutive contacts, from D on, ending >= buffer before tmax.

    Fewer than two usable contacts yields an empty batch with a warning.
    """
    if contacts.D is None:
        logger.warning("No first positive contact D inside the buffered window")
        return ExcursionBatch(warning="no contact D inside the buffered window")
    tmax = float(path.times[-1])
    times = contacts.times
    keep = (times >= contacts.D) & (times <= tmax - buffer)
    idx = contacts.indices[keep]
    if idx.size < 2:
        logger.warning("Fewer than 2 contacts after D; no generic excursions extracted")
        return ExcursionBatch(warning="fewer than 2 contacts after D")
    excursions = [_slice(path, int(a), int(b)) for a, b in zip(idx[:-1], idx[1:])]
    logger.debug("Extracted %d generic excursions", len(excursions))
    return ExcursionBatch(excursions=excursions)


def straddling_excursion(path: Path, contacts: ContactTimes) -> StraddlingExcursion:
    """The excursion [G, D] containing t = 0, rebased at G.

    Raises:
        WindowError: if G or D was not detected inside the buffered window
    """
    if contacts.G is None or contacts.D is None:
        raise WindowError("straddling excursion needs both G and D inside the window")
    pos_g = int(np.flatnonzero(contacts.times == contacts.G)[-1])
    pos_d = int(np.flatnonzero(contacts.times == contacts.D)[0])
    exc = _slice(path, int(contacts.indices[pos_g]), int(contacts.indices[pos_d]))
    return StraddlingExcursion(G=contacts.G, D=contacts.D, excursion=exc)


def excursion_features(exc: Excursion, alpha: float) -> ExcursionFeatures:
    """Features of one excursion.

    L is the sawtooth apex of (0, 0)–(ζ, W_ζ); H is the gap between the path and the
    sawtooth at the sample nearest L, which carries an O(√dt) bias on grids.

    Raises:
        CorruptExcursionError: if |W_ζ| > αζ or fewer than 2 samples
    """
    if exc.values.size < 2:
        raise CorruptExcursionError("an excursion needs at least 2 samples")
    zeta = exc.lifetime
    w = exc.final_value
    if abs(w) > alpha * zeta * (1 + 1e-9) + 1e-12:
        raise CorruptExcursionError(f"|W_zeta|={abs(w):.6g} exceeds alpha*zeta={alpha * zeta:.6g}")
    w = float(np.clip(w, -alpha * zeta, alpha * zeta))
    tent = sawtooth_segment(0.0, 0.0, zeta, w, alpha)
    k = int(np.argmin(np.abs(exc.times - tent.t_star)))
    h = max(float(exc.values[k]) - float(tent(exc.times[k])), 0.0)
    return ExcursionFeatures(
        zeta=zeta,
        L=tent.t_star,
        zeta_minus_L=(alpha * zeta - w) / (2 * alpha),
        w_zeta=w,
        h=h,
    )


def batch_features(batch: ExcursionBatch, alpha: float) -> FeatureTable:
    """Features of every excursion in ``batch``."""
    feats = [excursion_features(e, alpha) for e in batch.excursions]
    return FeatureTable.from_features(feats, starts=[e.start for e in batch.excursions])
