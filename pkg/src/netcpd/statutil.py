"""Numerical statistics utilities.

Inverse normal CDF, empirical-CDF distance to the standard normal,
a Shapiro-Wilk normality p-value, and reproducible counter-based RNG
stream derivation for parallel Monte Carlo.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import stats as _scipy_stats
from scipy.special import ndtr as _ndtr

from .errors import DegenerateInputError, InvalidInputError

__all__ = [
    "normal_cdf",
    "normal_quantile",
    "ks_distance_std_normal",
    "normality_pvalue",
    "rng_for_rep",
]

# Acklam rational-approximation coefficients for the inverse normal CDF.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def normal_cdf(z: float) -> float:
    """Standard normal CDF via the double-precision complementary error function."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF, |error| < 1e-6 on (0, 1).

    Acklam's rational approximation followed by one Newton step against the
    erfc-based CDF, which pushes the error to near machine precision.
    """
    if not (0.0 < p < 1.0) or not math.isfinite(p):
        raise InvalidInputError(f"quantile level must lie in (0, 1), got {p!r}")
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        z = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    elif p <= 1.0 - _P_LOW:
        q = p - 0.5
        r = q * q
        z = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
            (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)
    else:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        z = -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    # One Newton refinement: z <- z - (Phi(z) - p) / phi(z).
    pdf = math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
    if pdf > 0.0:
        z -= (normal_cdf(z) - p) / pdf
    return z


def ks_distance_std_normal(samples) -> float:
    """Sup-norm distance between the empirical CDF and the standard normal CDF."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    m = x.size
    if m < 20:
        raise InvalidInputError(f"need at least 20 samples, got {m}")
    cdf = _ndtr(x)
    grid = np.arange(1, m + 1) / m
    d_plus = np.max(grid - cdf)
    d_minus = np.max(cdf - (grid - 1.0 / m))
    return float(max(d_plus, d_minus))


def normality_pvalue(samples) -> float:
    """Shapiro-Wilk normality test p-value.

    Valid for samples of 20 to 5000 observations with nonzero variance.
    """
    x = np.asarray(samples, dtype=np.float64)
    if not (20 <= x.size <= 5000):
        raise InvalidInputError(f"sample size must lie in [20, 5000], got {x.size}")
    if np.ptp(x) == 0.0:
        raise DegenerateInputError("constant sample: normality test undefined")
    return float(_scipy_stats.shapiro(x).pvalue)


def rng_for_rep(master_seed: int, rep: int) -> np.random.Generator:
    """A reproducible, statistically independent stream for replication ``rep``.

    Streams use the counter-based Philox generator, keyed through a seed
    sequence that mixes the 128-bit pair (master_seed, rep), so identical
    inputs give identical draws on any platform, distinct reps never share
    state, and each stream can spawn further independent children.
    """
    if rep < 0:
        raise InvalidInputError(f"rep must be nonnegative, got {rep}")
    seq = np.random.SeedSequence(
        entropy=int(master_seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(int(rep),)
    )
    return np.random.Generator(np.random.Philox(seq))
