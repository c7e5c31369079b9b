"""Shared fixtures: designs, series builders, and the heavy Monte Carlo runs
reused by both the module property tests and the acceptance suite."""
from __future__ import annotations

import numpy as np
import pytest

from netcpd import (ExperimentGrid, MeanSpec, MosaicConfig, SeriesSpec,
                    make_mean, mosaic_test, run_null_distribution,
                    run_power_table, sample_series)
from netcpd.statutil import rng_for_rep

SEED = 20240801
WORKERS = 2

# Null-distribution and Table-1/2 reference scales. The null study is pinned
# at a raw horizon of 240 (split copies of 120, tau = 60); the power/size
# tables use the raw horizon of 120 quoted with the table designs.
NULL_T_RAW = 240
TABLE_T_RAW = 120


def bipartite_adj(n: int, left, right) -> np.ndarray:
    """Adjacency of a complete bipartite graph on the given node groups."""
    a = np.zeros((n, n))
    for i in left:
        for j in right:
            a[i, j] = a[j, i] = 1.0
    return a


def constant_series(adj: np.ndarray, T: int):
    """A noiseless series repeating one binary snapshot."""
    from netcpd import NetSeries

    return NetSeries(np.repeat(adj[None, :, :].astype(np.uint8), T, axis=0))


def two_regime_series(adj1: np.ndarray, adj2: np.ndarray, tau_star: int, T: int):
    """Noiseless series equal to adj1 through tau_star, adj2 afterwards."""
    from netcpd import NetSeries

    snaps = np.empty((T, adj1.shape[0], adj1.shape[0]), dtype=np.uint8)
    snaps[:tau_star] = adj1.astype(np.uint8)
    snaps[tau_star:] = adj2.astype(np.uint8)
    return NetSeries(snaps)


def sampled_null_series(n, rho, t_raw, seed, scenario="null-rank2"):
    theta1, theta2 = make_mean(MeanSpec(n=n, rho=rho, scenario=scenario, seed=seed))
    spec = SeriesSpec(theta1=theta1, theta2=theta2, tau_star=t_raw, T=t_raw, seed=seed)
    return sample_series(spec, rng_for_rep(seed, 0))


@pytest.fixture(scope="session")
def null_studies_rank2():
    """Criterion 1: 2000-rep pivotal-statistic samples per rho, rank-2 null."""
    cfg = MosaicConfig(k=2, h=0.1, seed=SEED)
    return {
        rho: run_null_distribution(cfg, rho, 2000, n=150, t_raw=NULL_T_RAW,
                                   scenario="null-rank2", workers=WORKERS)
        for rho in (0.01, 0.015, 0.02)
    }


@pytest.fixture(scope="session")
def null_studies_misspec():
    """Criterion 4: same study under the rank-3 misspecified null."""
    cfg = MosaicConfig(k=2, h=0.1, seed=SEED)
    return {
        rho: run_null_distribution(cfg, rho, 2000, n=150, t_raw=NULL_T_RAW,
                                   scenario="null-misspecified", workers=WORKERS)
        for rho in (0.01, 0.015, 0.02)
    }


@pytest.fixture(scope="session")
def size_rate_2000():
    """Criterion 2: full-pipeline null rejection rate, null-rank2 design."""
    cfg = MosaicConfig(k=2, h=0.1, alpha=0.05, c_d=1.0, seed=SEED)
    theta1, theta2 = make_mean(MeanSpec(n=150, rho=0.02, scenario="null-rank2",
                                        seed=SEED))
    spec = SeriesSpec(theta1=theta1, theta2=theta2, tau_star=TABLE_T_RAW,
                      T=TABLE_T_RAW, seed=SEED)

    from netcpd.harness import _map_reps

    def one(rep):
        series = sample_series(spec, rng_for_rep(SEED, rep))
        return mosaic_test(series, cfg).reject

    flags = _map_reps(one, 2000, WORKERS)
    return sum(flags) / 2000.0


@pytest.fixture(scope="session")
def table1_power_cells():
    """Criterion 3: the three reference power cells at 500 reps."""
    cfg = MosaicConfig(k=2, h=0.1, alpha=0.05, c_d=1.0, seed=SEED)
    out = {}
    for rho, s_star, delta in ((0.01, 40, 1.2), (0.02, 25, 1.0), (0.03, 15, 1.2)):
        grid = ExperimentGrid(rho_list=(rho,), s_star_list=(s_star,),
                              delta_list=(delta,), cfg=cfg, n=150,
                              t_raw=TABLE_T_RAW, reps=500,
                              scenario="known-rank", detectors=("mosaic",),
                              workers=WORKERS)
        cell = run_power_table(grid).rows[(rho, s_star, delta, "mosaic")]
        out[(rho, s_star, delta, "mosaic")] = cell.power
    grid = ExperimentGrid(rho_list=(0.03,), s_star_list=(15,), delta_list=(1.2,),
                          cfg=cfg, n=150, t_raw=TABLE_T_RAW, reps=500,
                          scenario="known-rank", detectors=("l2cusum",),
                          cal_reps=100, workers=WORKERS)
    cell = run_power_table(grid).rows[(0.03, 15, 1.2, "l2cusum")]
    out[(0.03, 15, 1.2, "l2cusum")] = cell.power
    return out
