"""Monte Carlo experiment runner: null-distribution studies, power tables,
and the detection/centrality pipeline for ingested series.

Time convention: experiment defaults use a raw horizon of 240 snapshots, so
the twofold split yields copies of length T = 120; the change sits at raw
time 120 (copy time 60), and the null study's pivotal statistic is evaluated
at tau = T/2 = 60 with per-side windows of 60 snapshots.

All replication randomness flows through ``statutil.rng_for_rep`` streams,
so any run with fixed seeds replays byte-identically.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .baseline import l2_cusum_test
from .errors import InvalidInputError
from .mosaic import (MosaicConfig, TestReport, mosaic_test, rho_floor,
                     _residual_from_snaps, _sigma2_from_eds,
                     _stationary_smoothed, _triu_indices)
from .netgen import MeanSpec, NetSeries, SeriesSpec, make_mean, sample_series
from .oracle_tests import OracleConfig, phi_test, psi_test
from .segstats import split
from .statutil import ks_distance_std_normal, normality_pvalue, rng_for_rep
from .symmat import eigenvector_centrality

DETECTORS = ("mosaic", "l2cusum", "psi", "phi")

# Stream namespace for design-level draws (fixed edge sets), far above any
# realistic replication index.
_EDGE_STREAM = 0x65646765  # "edge"


@dataclass(frozen=True)
class NullStudy:
    """Samples and summary of a null-distribution run."""

    samples: np.ndarray
    mean: float
    sd: float
    ks_distance: float
    normality_p: float
    rho: float
    n: int
    t_raw: int
    edge_count: int


@dataclass(frozen=True)
class PowerCell:
    power: float
    se: float
    reps: int
    rejections: int


@dataclass(frozen=True)
class ExperimentGrid:
    """The experiment matrix for a power table."""

    rho_list: tuple[float, ...]
    s_star_list: tuple[int, ...]
    delta_list: tuple[float, ...]
    cfg: MosaicConfig = field(default_factory=MosaicConfig)
    n: int = 150
    t_raw: int = 240
    reps: int = 500
    scenario: str = "known-rank"
    detectors: tuple[str, ...] = ("mosaic", "l2cusum")
    cal_reps: int = 100
    workers: int = 1

    def __post_init__(self):
        if self.reps < 1:
            raise InvalidInputError("reps must be at least 1")
        if self.scenario not in ("known-rank", "misspecified"):
            raise InvalidInputError(f"unknown scenario {self.scenario!r}")
        bad = [d for d in self.detectors if d not in DETECTORS]
        if bad:
            raise InvalidInputError(f"unknown detectors {bad}; choose from {DETECTORS}")
        for attr in ("rho_list", "s_star_list", "delta_list", "detectors"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))


@dataclass(frozen=True)
class PowerTable:
    """Rejection frequencies keyed by (rho, s_star, delta, detector)."""

    rows: dict

    def to_csv_rows(self):
        out = []
        for (rho, s_star, delta, detector), cell in self.rows.items():
            out.append(
                f"{rho:g},{s_star},{delta:g},{detector},"
                f"{cell.power:.6f},{cell.se:.6f},{cell.reps}"
            )
        return out


POWER_CSV_HEADER = "rho,s_star,delta,detector,power,se,reps"


def _map_reps(fn, reps: int, workers: int):
    if workers <= 1:
        return [fn(r) for r in range(reps)]
    out = [None] * reps
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for r, value in zip(range(reps), pool.map(fn, range(reps))):
            out[r] = value
    return out


def _null_scenario(scenario: str) -> str:
    if scenario in ("null-rank2", "null-misspecified"):
        return scenario
    if scenario == "known-rank":
        return "null-rank2"
    if scenario == "misspecified":
        return "null-misspecified"
    raise InvalidInputError(f"unknown null scenario {scenario!r}")


def fixed_half_edge_set(n: int, seed: int):
    """A fixed random half of the i<j edge pairs, drawn once from ``seed``."""
    iu = _triu_indices(n)
    m = iu[0].size
    rng = rng_for_rep(seed, _EDGE_STREAM)
    sel = np.sort(rng.choice(m, size=m // 2, replace=False))
    return iu[0][sel], iu[1][sel]


def run_null_distribution(cfg: MosaicConfig, rho: float, reps: int, *,
                          n: int = 150, t_raw: int = 240,
                          scenario: str = "null-rank2",
                          workers: int = 1) -> NullStudy:
    """Sample the pivotal statistic tau * A_S / sigma_S under the null.

    Each replication draws a fresh homogeneous series, splits it twofold and
    evaluates the screened product statistic at tau = T/2 over a fixed
    random half of the edge pairs (drawn once from ``cfg.seed``).
    """
    if reps < 100:
        raise InvalidInputError(f"need at least 100 replications, got {reps}")
    theta1, theta2 = make_mean(
        MeanSpec(n=n, rho=rho, scenario=_null_scenario(scenario), seed=cfg.seed)
    )
    rows, cols = fixed_half_edge_set(n, cfg.seed)
    spec = SeriesSpec(theta1=theta1, theta2=theta2, tau_star=t_raw, T=t_raw,
                      seed=cfg.seed)
    floor2 = rho_floor(n, t_raw // 2) ** 2

    def one(rep: int) -> float:
        rng = rng_for_rep(cfg.seed, rep)
        series = sample_series(spec, rng)
        sp = split(series, 2)
        tau = sp.part_length // 2
        _, ed_left, ed_right = _stationary_smoothed(sp, cfg.h, cfg.k)
        sigma2 = max(_sigma2_from_eds(ed_left, ed_right, rows, cols), floor2)
        w = _residual_from_snaps(sp.parts[0].snapshots, tau, cfg.k)
        wdot = _residual_from_snaps(sp.parts[1].snapshots, tau, cfg.k)
        a_s = float(np.sum(w[rows, cols] * wdot[rows, cols]))
        return tau * a_s / math.sqrt(sigma2)

    samples = np.array(_map_reps(one, reps, workers))
    return NullStudy(
        samples=samples,
        mean=float(samples.mean()),
        sd=float(samples.std(ddof=1)),
        ks_distance=ks_distance_std_normal(samples),
        normality_p=normality_pvalue(samples),
        rho=rho,
        n=n,
        t_raw=t_raw,
        edge_count=rows.size,
    )


def _true_rho(theta1, theta2) -> float:
    return max(theta1.max_abs_offdiag(), theta2.max_abs_offdiag())


def _changed_edge_count(theta1, theta2) -> int:
    diff = theta2.values - theta1.values
    iu = _triu_indices(theta1.n)
    return int(np.count_nonzero(diff[iu]))


def run_power_table(grid: ExperimentGrid, csv_path=None) -> PowerTable:
    """Rejection frequency per (rho, s*, delta) cell and detector.

    All requested detectors see the same simulated series within a
    replication. With ``csv_path`` given, completed cells are appended and
    flushed as they finish.
    """
    alt_scenario = "alt-block" if grid.scenario == "known-rank" else "alt-misspecified"
    cells = list(product(range(len(grid.rho_list)), range(len(grid.s_star_list)),
                         range(len(grid.delta_list))))
    detectors = tuple(d for d in DETECTORS if d in grid.detectors)
    rows: dict = {}
    sink = None
    if csv_path is not None:
        sink = open(csv_path, "a")
    try:
        for i_rho, i_s, i_delta in cells:
            rho = grid.rho_list[i_rho]
            s_star = grid.s_star_list[i_s]
            delta = grid.delta_list[i_delta]
            # Streams are keyed by (rho, s*) only, so delta columns reuse the
            # same noise; s*=0 rows then agree exactly across delta.
            stream_base = (i_rho * len(grid.s_star_list) + i_s) * grid.reps
            theta1, theta2 = make_mean(
                MeanSpec(n=grid.n, rho=rho, scenario=alt_scenario,
                         s_star=s_star, delta=delta, seed=grid.cfg.seed)
            )
            spec = SeriesSpec(theta1=theta1, theta2=theta2,
                              tau_star=grid.t_raw // 2, T=grid.t_raw,
                              seed=grid.cfg.seed)
            true_rho = _true_rho(theta1, theta2)
            m_star = _changed_edge_count(theta1, theta2)
            p_n = grid.n * (grid.n - 1) // 2
            psi_cfg = OracleConfig(rho=true_rho, k=grid.cfg.k, h=grid.cfg.h,
                                   alpha=grid.cfg.alpha, c_d=grid.cfg.c_d,
                                   s_star=s_star if s_star >= 1 else grid.n)
            phi_cfg = OracleConfig(rho=true_rho, k=grid.cfg.k, h=grid.cfg.h,
                                   alpha=grid.cfg.alpha, c_d=grid.cfg.c_d,
                                   m_star=m_star if m_star >= 1 else p_n)

            def one(rep: int) -> dict:
                rng = rng_for_rep(grid.cfg.seed, stream_base + rep)
                series = sample_series(spec, rng)
                flags = {}
                for det in detectors:
                    if det == "mosaic":
                        flags[det] = mosaic_test(series, grid.cfg).reject
                    elif det == "l2cusum":
                        flags[det] = l2_cusum_test(
                            series, grid.cfg.alpha, grid.cal_reps, rng,
                            k=grid.cfg.k, h=grid.cfg.h,
                        ).reject
                    elif det == "psi":
                        flags[det] = psi_test(series, psi_cfg).reject
                    else:
                        flags[det] = phi_test(series, phi_cfg).reject
                return flags

            results = _map_reps(one, grid.reps, grid.workers)
            for det in detectors:
                rej = sum(1 for flags in results if flags[det])
                power = rej / grid.reps
                cell = PowerCell(
                    power=power,
                    se=math.sqrt(power * (1.0 - power) / grid.reps),
                    reps=grid.reps,
                    rejections=rej,
                )
                rows[(rho, s_star, delta, det)] = cell
                if sink is not None:
                    sink.write(
                        f"{rho:g},{s_star},{delta:g},{det},"
                        f"{cell.power:.6f},{cell.se:.6f},{cell.reps}\n"
                    )
            if sink is not None:
                sink.flush()
    finally:
        if sink is not None:
            sink.close()
    return PowerTable(rows=rows)


def detect(series: NetSeries, cfg: MosaicConfig) -> TestReport:
    """Run the empirical test on an ingested series."""
    return mosaic_test(series, cfg)


@dataclass(frozen=True)
class CentralityProfile:
    """Per-snapshot eigenvector centralities; all-zero snapshots are flagged."""

    values: np.ndarray
    degenerate: tuple[int, ...]


def centrality_profile(series: NetSeries) -> CentralityProfile:
    """Max-normalized eigenvector centrality for every node at every time."""
    out = np.zeros((series.T, series.n))
    flagged = []
    for t in range(series.T):
        snap = series.snapshots[t]
        if not snap.any():
            flagged.append(t)
            continue
        out[t] = eigenvector_centrality(series.snapshot(t))
    return CentralityProfile(values=out, degenerate=tuple(flagged))
