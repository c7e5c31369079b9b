"""The empirical screened-product CUSUM test (MOSAIC) for dynamic networks.

Pipeline, all on a twofold order-preserved split of the raw series into
copies x and xdot of length T:

1. Nuisance estimates from the hT left-most / right-most stationary windows:
   the two copies' window means are pooled and rank-k smoothed, giving the
   connectivity scale ``rho_hat`` and the variance proxies ``sigma2``.
2. A data-driven signal edge set ``S_hat``: edges whose pooled smoothed CUSUM
   at tau = hT exceeds the hard threshold 4 c_d sqrt(log(e n)/n).
3. Residual CUSUM matrices per candidate tau: W = xbar1 - ED_k(xbar2) within
   each copy; the per-tau statistic sums W * Wdot over an edge set.
4. The aggregated statistic max over tau of tau * A_S / sigma_S, taken over
   both S_hat and the full edge set Omega; the final statistic is the largest
   absolute component and is compared against the upper alpha/(2 |T|) normal
   quantile.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidInputError
from .netgen import NetSeries
from .segstats import (SplitSeries, candidate_taus, segment_means, split,
                       _round_half_up)
from .statutil import normal_quantile
from .symmat import SymMatrix, ed_truncate

Edge = tuple[int, int]


@dataclass(frozen=True)
class MosaicConfig:
    """Tuning inputs for the empirical test."""

    k: int = 2
    h: float = 0.1
    alpha: float = 0.05
    c_d: float = 1.0
    tau_override: tuple[int, ...] | None = None
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInputError(f"working rank k must be >= 1, got {self.k}")
        if not (0.0 < self.h < 0.5):
            raise InvalidInputError(f"bandwidth h must lie in (0, 0.5), got {self.h}")
        if not (0.0 < self.alpha < 1.0):
            raise InvalidInputError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.c_d <= 0.0:
            raise InvalidInputError(f"screening constant c_d must be > 0, got {self.c_d}")
        if self.tau_override is not None:
            object.__setattr__(self, "tau_override", tuple(int(t) for t in self.tau_override))


@dataclass(frozen=True)
class TestReport:
    """Outcome of one empirical test run.

    ``per_tau`` lists, for each candidate tau, the normalized screened-set
    and all-edges components (tau * A_S / sigma_S, tau * A_Omega / sigma_Omega).
    The statistic is the largest absolute component across the grid.
    """

    statistic: float
    threshold: float
    reject: bool
    per_tau: tuple[tuple[int, float, float], ...]
    screened_edges: int
    rho_hat: float
    sigma2_shat: float
    sigma2_omega: float
    tau_argmax: int


@lru_cache(maxsize=8)
def _triu_indices(n: int):
    return np.triu_indices(n, k=1)


def _edge_arrays(edges) -> tuple[np.ndarray, np.ndarray]:
    pairs = sorted(edges)
    if not pairs:
        return np.empty(0, dtype=np.intp), np.empty(0, dtype=np.intp)
    arr = np.asarray(pairs, dtype=np.intp)
    return arr[:, 0], arr[:, 1]


def threshold_dn(n: int, c_d: float) -> float:
    """Hard screening threshold 4 c_d sqrt(log(e n) / n)."""
    return 4.0 * c_d * math.sqrt(math.log(math.e * n) / n)


def _round_ht(T: int, h: float) -> int:
    return max(1, _round_half_up(h * T))


def _pooled_window_means(part1: np.ndarray, part2: np.ndarray, tau: int):
    T = part1.shape[0]
    left = (part1[:tau].sum(axis=0, dtype=np.float64)
            + part2[:tau].sum(axis=0, dtype=np.float64)) / (2.0 * tau)
    right = (part1[T - tau:].sum(axis=0, dtype=np.float64)
             + part2[T - tau:].sum(axis=0, dtype=np.float64)) / (2.0 * tau)
    return left, right


def _stationary_smoothed(split_series: SplitSeries, h: float, k: int):
    """Rank-k smoothed pooled means over the left/right hT stationary windows."""
    if split_series.folds != 2:
        raise InvalidInputError("nuisance estimation requires a twofold split")
    T = split_series.part_length
    ht = _round_ht(T, h)
    if ht > (T + 1) // 2:
        raise InvalidInputError(f"window hT={ht} exceeds floor((T+1)/2) for T={T}")
    s1 = split_series.parts[0].snapshots
    s2 = split_series.parts[1].snapshots
    left, right = _pooled_window_means(s1, s2, ht)
    ed_left = ed_truncate(SymMatrix(left), k).values
    ed_right = ed_truncate(SymMatrix(right), k).values
    return ht, ed_left, ed_right


def rho_floor(n: int, T: int) -> float:
    """Lower clamp for the connectivity estimate: one expected edge overall."""
    return 1.0 / (n * n * T)


def _rho_from_eds(ed_left: np.ndarray, ed_right: np.ndarray, floor: float) -> float:
    iu = _triu_indices(ed_left.shape[0])
    peak = max(np.abs(ed_left[iu]).max(), np.abs(ed_right[iu]).max())
    return float(min(max(peak, floor), 1.0))


def residual_matrix(part: NetSeries, tau: int, k: int) -> SymMatrix:
    """Residual CUSUM matrix xbar1 - ED_k(xbar2) within one split copy."""
    xbar1, xbar2 = segment_means(part, tau)
    return SymMatrix(xbar1.values - ed_truncate(xbar2, k).values)


def estimate_rho(split_series: SplitSeries, h: float, k: int) -> float:
    """Max smoothed connectivity over the hT stationary windows, clamped.

    The clamp range is [1/(n^2 T), 1] with T the split-copy length, so an
    empty network never yields a zero scale.
    """
    _, ed_left, ed_right = _stationary_smoothed(split_series, h, k)
    n = ed_left.shape[0]
    return _rho_from_eds(ed_left, ed_right, rho_floor(n, split_series.part_length))


def _sigma2_from_eds(ed_left, ed_right, rows, cols) -> float:
    if rows.size == 0:
        return 0.0
    tl = ed_left[rows, cols]
    tr = ed_right[rows, cols]
    return float(0.5 * np.sum(tl * tl + tr * tr))


def estimate_sigma2(split_series: SplitSeries, h: float, k: int, edges) -> float:
    """Variance proxy sum over ``edges`` of (theta_left^2 + theta_right^2)/2.

    The theta estimates are the rank-k smoothed pooled means over the hT
    stationary windows. Returns 0.0 for an empty edge set.
    """
    _, ed_left, ed_right = _stationary_smoothed(split_series, h, k)
    rows, cols = _edge_arrays(edges)
    return _sigma2_from_eds(ed_left, ed_right, rows, cols)


def _screen_from_eds(ed_left, ed_right, ht, rho_hat, c_d) -> frozenset[Edge]:
    n = ed_left.shape[0]
    zhat = math.sqrt(ht / (2.0 * rho_hat)) * (ed_left - ed_right)
    iu = _triu_indices(n)
    keep = np.abs(zhat[iu]) > threshold_dn(n, c_d)
    return frozenset(zip(iu[0][keep].tolist(), iu[1][keep].tolist()))


def screen_edges(split_series: SplitSeries, h: float, k: int,
                 rho_hat: float, c_d: float) -> frozenset[Edge]:
    """Data-driven signal edge set: |Zhat_ij| above the hard threshold.

    Zhat is the pooled smoothed CUSUM at tau = round(hT), normalized by the
    supplied rho_hat. Strict inequality at the threshold.
    """
    if rho_hat <= 0:
        raise InvalidInputError(f"rho_hat must be positive, got {rho_hat}")
    ht, ed_left, ed_right = _stationary_smoothed(split_series, h, k)
    return _screen_from_eds(ed_left, ed_right, ht, rho_hat, c_d)


def _residual_from_snaps(snaps: np.ndarray, tau: int, k: int) -> np.ndarray:
    T = snaps.shape[0]
    xbar1 = snaps[:tau].sum(axis=0, dtype=np.float64) / tau
    xbar2 = snaps[T - tau:].sum(axis=0, dtype=np.float64) / tau
    return xbar1 - ed_truncate(SymMatrix(xbar2), k).values


def mosaic_test(series_raw: NetSeries, cfg: MosaicConfig) -> TestReport:
    """Run the full empirical test on a raw series.

    The raw series is split twofold; all lengths below refer to the
    split-copy length T. Needs T >= 4.
    """
    sp = split(series_raw, 2)
    T = sp.part_length
    if T < 4:
        raise InvalidInputError(
            f"series too short: split copies have {T} < 4 snapshots"
        )
    n = series_raw.n
    grid = candidate_taus(T, cfg.h, cfg.tau_override)

    ht, ed_left, ed_right = _stationary_smoothed(sp, cfg.h, cfg.k)
    floor = rho_floor(n, T)
    rho_hat = _rho_from_eds(ed_left, ed_right, floor)
    shat = _screen_from_eds(ed_left, ed_right, ht, rho_hat, cfg.c_d)

    iu = _triu_indices(n)
    s_rows, s_cols = _edge_arrays(shat)
    sigma_floor = floor * floor
    sigma2_shat = max(_sigma2_from_eds(ed_left, ed_right, s_rows, s_cols), sigma_floor)
    sigma2_omega = max(_sigma2_from_eds(ed_left, ed_right, iu[0], iu[1]), sigma_floor)

    snaps1 = sp.parts[0].snapshots
    snaps2 = sp.parts[1].snapshots
    per_tau = []
    for tau in grid:
        w = _residual_from_snaps(snaps1, tau, cfg.k)
        wdot = _residual_from_snaps(snaps2, tau, cfg.k)
        prod = w * wdot
        a_shat = float(prod[s_rows, s_cols].sum()) if s_rows.size else 0.0
        a_omega = float(prod[iu].sum())
        per_tau.append((
            tau,
            tau * a_shat / math.sqrt(sigma2_shat),
            tau * a_omega / math.sqrt(sigma2_omega),
        ))

    best = max(per_tau, key=lambda row: max(abs(row[1]), abs(row[2])))
    statistic = max(abs(best[1]), abs(best[2]))
    threshold = normal_quantile(1.0 - cfg.alpha / (2.0 * len(grid)))
    return TestReport(
        statistic=statistic,
        threshold=threshold,
        reject=statistic > threshold,
        per_tau=tuple(per_tau),
        screened_edges=len(shat),
        rho_hat=rho_hat,
        sigma2_shat=sigma2_shat,
        sigma2_omega=sigma2_omega,
        tau_argmax=best[0],
    )
