"""Data splitting, candidate change points, segment means, CUSUM matrices.

Conventions used throughout:

* Order-preserved m-fold splitting interleaves the raw series: part k
  (1-based) consists of raw snapshots k, k+m, k+2m, ...; trailing snapshots
  beyond m*floor(T/m) are dropped.
* A candidate change point tau pairs the left window {1..tau} with the right
  window {T-tau+1..T}; tau <= floor((T+1)/2) keeps the windows disjoint.
* The smoothed CUSUM contrast is
  Z = sqrt(tau/(2 rho)) * (ED_k(xbar1) - ED_k(xbar2)), and E is the same
  without the rank truncation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .netgen import NetSeries, _trusted_series
from .symmat import SymMatrix, ed_truncate


@dataclass(frozen=True)
class SplitSeries:
    """2 or 3 equal-length interleaved copies of a raw series."""

    parts: tuple[NetSeries, ...]

    def __post_init__(self):
        if len(self.parts) not in (2, 3):
            raise InvalidInputError("a split must have 2 or 3 parts")
        lengths = {p.T for p in self.parts}
        if len(lengths) != 1:
            raise InvalidInputError("split parts must have equal length")

    @property
    def folds(self) -> int:
        return len(self.parts)

    @property
    def part_length(self) -> int:
        return self.parts[0].T


@dataclass(frozen=True)
class TauGrid:
    """Strictly increasing candidate change points, each in [2, floor((T+1)/2)]."""

    taus: tuple[int, ...]

    def __post_init__(self):
        ts = tuple(int(t) for t in self.taus)
        if len(ts) == 0:
            raise InvalidInputError("candidate grid is empty")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise InvalidInputError("candidate taus must be strictly increasing")
        if ts[0] < 2:
            raise InvalidInputError("candidate taus must be at least 2")
        object.__setattr__(self, "taus", ts)

    def __iter__(self):
        return iter(self.taus)

    def __len__(self):
        return len(self.taus)


def split(series: NetSeries, folds: int) -> SplitSeries:
    """Order-preserved interleaved split into ``folds`` equal parts."""
    if folds not in (2, 3):
        raise InvalidInputError(f"folds must be 2 or 3, got {folds}")
    if series.T < 2 * folds:
        raise InvalidInputError(
            f"series too short: need at least {2 * folds} snapshots for a "
            f"{folds}-fold split, got {series.T}"
        )
    plen = series.T // folds
    parts = tuple(
        _trusted_series(series.snapshots[k::folds][:plen]) for k in range(folds)
    )
    return SplitSeries(parts=parts)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def candidate_taus(T: int, h: float, override=None) -> TauGrid:
    """Dyadic candidate grid {round(h T), round(2 h T), ...} clamped to range.

    With bandwidth h in (0, 0.5), exponents run from 0 to
    floor(log2(1/(2h))); values are clamped into [2, floor((T+1)/2)],
    deduplicated and sorted. An explicit ``override`` list bypasses the
    construction but is validated against the same range.
    """
    if not (0.0 < h < 0.5):
        raise InvalidInputError(f"bandwidth h must lie in (0, 0.5), got {h}")
    tau_max = (T + 1) // 2
    if tau_max < 2:
        raise InvalidInputError(f"series length T={T} admits no valid candidate tau")
    if override is not None:
        grid = TauGrid(taus=tuple(int(t) for t in override))
        if grid.taus[-1] > tau_max:
            raise InvalidInputError(
                f"override tau {grid.taus[-1]} exceeds floor((T+1)/2) = {tau_max}"
            )
        return grid
    # Tiny epsilon so exact powers of two are not lost to float rounding.
    j_max = int(math.floor(math.log2(1.0 / (2.0 * h)) + 1e-12))
    vals = sorted(
        {min(max(_round_half_up((2.0 ** j) * h * T), 2), tau_max) for j in range(j_max + 1)}
    )
    return TauGrid(taus=tuple(vals))


def _check_tau(T: int, tau: int) -> None:
    if not (1 <= tau <= (T + 1) // 2):
        raise InvalidInputError(
            f"tau={tau} out of range [1, floor((T+1)/2)] = [1, {(T + 1) // 2}]"
        )


def _window_mean(snaps: np.ndarray, start: int, stop: int) -> np.ndarray:
    # Sum in float64 and divide; snapshots are uint8.
    return snaps[start:stop].sum(axis=0, dtype=np.float64) / (stop - start)


def segment_means(series: NetSeries, tau: int) -> tuple[SymMatrix, SymMatrix]:
    """Averages over the left window {1..tau} and the right window {T-tau+1..T}."""
    _check_tau(series.T, tau)
    s = series.snapshots
    xbar1 = _window_mean(s, 0, tau)
    xbar2 = _window_mean(s, series.T - tau, series.T)
    return SymMatrix(xbar1), SymMatrix(xbar2)


def z_matrix(series: NetSeries, tau: int, rho: float, k: int) -> SymMatrix:
    """Smoothed CUSUM contrast sqrt(tau/(2 rho)) * (ED_k(xbar1) - ED_k(xbar2))."""
    if rho <= 0:
        raise InvalidInputError(f"rho must be positive, got {rho}")
    xbar1, xbar2 = segment_means(series, tau)
    scale = math.sqrt(tau / (2.0 * rho))
    return SymMatrix(scale * (ed_truncate(xbar1, k).values - ed_truncate(xbar2, k).values))


def e_matrix(series: NetSeries, tau: int, rho: float) -> SymMatrix:
    """Raw CUSUM contrast sqrt(tau/(2 rho)) * (xbar1 - xbar2), no rank truncation."""
    if rho <= 0:
        raise InvalidInputError(f"rho must be positive, got {rho}")
    xbar1, xbar2 = segment_means(series, tau)
    scale = math.sqrt(tau / (2.0 * rho))
    return SymMatrix(scale * (xbar1.values - xbar2.values))
