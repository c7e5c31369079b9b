"""Simulation designs: mean-matrix constructors and Bernoulli network sampling.

Four mean-matrix scenarios are supported:

* ``null-rank2``        -- no change; Theta = rho*11^T + (rho/2) u u^T with u a
  random 0/1 vector of weight floor(n/2).
* ``null-misspecified`` -- null-rank2 plus 0.05*rho * uc uc^T, where uc puts
  Rademacher signs on the complement of u (true rank 3).
* ``alt-block``         -- Theta1 = rho*11^T; Theta2 adds
  delta*sqrt(rho/s*) ut ut^T on a random 0/1 support ut of weight s*.
* ``alt-misspecified``  -- alt-block plus 0.1*rho * utc utc^T on the signed
  complement of ut (Theta2 has true rank 3).

Diagonals are zero throughout. Support vectors and Rademacher signs are drawn
once per design seed and stay fixed across Monte Carlo replications; only the
Bernoulli noise varies from stream to stream.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, InvalidSpecError
from .statutil import rng_for_rep
from .symmat import SymMatrix

SCENARIOS = ("null-rank2", "null-misspecified", "alt-block", "alt-misspecified")

# Namespace constants so design-level draws never collide with replication
# streams (which use small rep indices).
_DESIGN_STREAM = 0x6D65616E  # "mean"


@dataclass(frozen=True)
class MeanSpec:
    """Design parameters for a pair of mean matrices (theta1, theta2)."""

    n: int
    rho: float
    scenario: str
    s_star: int = 0
    delta: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise InvalidSpecError("n must be at least 2")
        if not (0.0 < self.rho <= 1.0):
            raise InvalidSpecError(f"rho must lie in (0, 1], got {self.rho}")
        if self.scenario not in SCENARIOS:
            raise InvalidSpecError(f"unknown scenario {self.scenario!r}")
        if self.scenario.startswith("alt"):
            if not (0 <= self.s_star <= self.n):
                raise InvalidSpecError(f"s_star must lie in [0, n], got {self.s_star}")
            if self.s_star > 0:
                peak = self.rho + self.delta * np.sqrt(self.rho / self.s_star)
                if peak > 1.0:
                    raise InvalidSpecError(
                        f"changed-entry probability {peak:.4f} exceeds 1"
                    )


@dataclass(frozen=True)
class SeriesSpec:
    """A dynamic-network series: theta1 up to tau_star, theta2 afterwards.

    ``tau_star == T`` encodes "no change", so one sampler serves both the
    null and the alternative.
    """

    theta1: SymMatrix
    theta2: SymMatrix
    tau_star: int
    T: int
    seed: int = 0

    def __post_init__(self):
        if self.theta1.n != self.theta2.n:
            raise InvalidSpecError("theta1 and theta2 must share the node count")
        if not (1 <= self.tau_star <= self.T):
            raise InvalidSpecError(
                f"tau_star must lie in [1, T={self.T}], got {self.tau_star}"
            )
        for name, th in (("theta1", self.theta1), ("theta2", self.theta2)):
            v = th.values
            if np.any(v < 0.0) or np.any(v > 1.0):
                raise InvalidSpecError(f"{name} entries must lie in [0, 1]")
            if np.any(np.diag(v) != 0.0):
                raise InvalidSpecError(f"{name} must have a zero diagonal")


@dataclass(frozen=True)
class NetSeries:
    """A time-ordered stack of binary, zero-diagonal symmetric snapshots.

    ``snapshots`` has shape (T, n, n) and dtype uint8.
    """

    snapshots: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.snapshots)
        if s.ndim != 3 or s.shape[1] != s.shape[2]:
            raise InvalidInputError(f"expected shape (T, n, n), got {s.shape}")
        if s.shape[0] < 1 or s.shape[1] < 2:
            raise InvalidInputError("series needs T >= 1 snapshots of dimension >= 2")
        if not np.all((s == 0) | (s == 1)):
            raise InvalidInputError("snapshots must be binary")
        if not np.all(s == s.transpose(0, 2, 1)):
            raise InvalidInputError("snapshots must be symmetric")
        if np.any(s[:, np.arange(s.shape[1]), np.arange(s.shape[1])] != 0):
            raise InvalidInputError("snapshots must have zero diagonals")
        s = np.ascontiguousarray(s, dtype=np.uint8)
        s.flags.writeable = False
        object.__setattr__(self, "snapshots", s)

    @property
    def n(self) -> int:
        return self.snapshots.shape[1]

    @property
    def T(self) -> int:
        return self.snapshots.shape[0]

    def snapshot(self, t: int) -> SymMatrix:
        """Snapshot at 0-based time t as a SymMatrix."""
        return SymMatrix(self.snapshots[t].astype(np.float64))


def _trusted_series(snaps: np.ndarray) -> NetSeries:
    # Internal fast path for arrays we constructed ourselves; skips the
    # validation pass, which is measurable inside Monte Carlo loops.
    obj = object.__new__(NetSeries)
    object.__setattr__(obj, "snapshots", snaps)
    return obj


def _support_vector(rng: np.random.Generator, n: int, weight: int) -> np.ndarray:
    u = np.zeros(n)
    if weight > 0:
        u[rng.choice(n, size=weight, replace=False)] = 1.0
    return u


def _rank1(vec: np.ndarray) -> np.ndarray:
    m = np.outer(vec, vec)
    np.fill_diagonal(m, 0.0)
    return m


def make_mean(spec: MeanSpec) -> tuple[SymMatrix, SymMatrix]:
    """Build (theta1, theta2) for the given design.

    Raises InvalidSpecError if any resulting entry falls outside [0, 1].
    """
    rng = rng_for_rep(spec.seed, _DESIGN_STREAM)
    n, rho = spec.n, spec.rho
    ones = np.ones(n)
    if spec.scenario in ("null-rank2", "null-misspecified"):
        u = _support_vector(rng, n, n // 2)
        theta = rho * _rank1(ones) + (rho / 2.0) * _rank1(u)
        if spec.scenario == "null-misspecified":
            signs = rng.integers(0, 2, size=n) * 2.0 - 1.0
            uc = (1.0 - u) * signs
            theta = theta + 0.05 * rho * _rank1(uc)
        theta1 = theta2 = theta
    else:
        theta1 = rho * _rank1(ones)
        ut = _support_vector(rng, n, spec.s_star)
        if spec.s_star > 0:
            theta2 = theta1 + spec.delta * np.sqrt(rho / spec.s_star) * _rank1(ut)
            if spec.scenario == "alt-misspecified":
                # The rank-inflating term is part of the change, so it only
                # exists when the change support is nonempty.
                signs = rng.integers(0, 2, size=n) * 2.0 - 1.0
                utc = (1.0 - ut) * signs
                theta2 = theta2 + 0.1 * rho * _rank1(utc)
        else:
            theta2 = theta1.copy()
    for name, th in (("theta1", theta1), ("theta2", theta2)):
        if th.min() < 0.0 or th.max() > 1.0:
            raise InvalidSpecError(
                f"{name} entries escape [0, 1] (range [{th.min():.4f}, {th.max():.4f}])"
            )
    return SymMatrix(theta1), SymMatrix(theta2)


def sample_series(spec: SeriesSpec, rng: np.random.Generator | None = None) -> NetSeries:
    """Sample a Bernoulli dynamic network series from a SeriesSpec.

    Snapshots t = 1..tau_star (1-based) draw from theta1, the rest from
    theta2. Upper-triangle entries are sampled independently and mirrored.
    When no generator is supplied, a stream derived from ``spec.seed`` is
    used, so identical (spec, seed) pairs yield bit-identical series.
    """
    if rng is None:
        rng = rng_for_rep(spec.seed, 0)
    n, T = spec.theta1.n, spec.T
    iu = np.triu_indices(n, k=1)
    probs1 = spec.theta1.values[iu]
    probs2 = spec.theta2.values[iu]
    snaps = np.zeros((T, n, n), dtype=np.uint8)
    t1 = spec.tau_star
    draws = rng.random((T, iu[0].size))
    upper = np.empty((T, iu[0].size), dtype=np.uint8)
    upper[:t1] = draws[:t1] < probs1
    upper[t1:] = draws[t1:] < probs2
    snaps[:, iu[0], iu[1]] = upper
    snaps[:, iu[1], iu[0]] = upper
    snaps.flags.writeable = False
    return _trusted_series(snaps)
