"""Change-point tests for dynamic networks.

A dynamic network is a time-ordered stack of binary, zero-diagonal symmetric
adjacency matrices on a fixed node set. This package tests whether the mean
matrix changes somewhere along the series:

* ``mosaic.mosaic_test`` -- the empirical screened spectral product CUSUM
  (MOSAIC) with a pivotal standard-normal null calibration;
* ``oracle_tests.psi_test`` / ``phi_test`` -- oracle rate-threshold variants
  with known sparsity and scale;
* ``baseline.l2_cusum_test`` -- a bootstrap-calibrated operator-norm CUSUM
  competitor;
* ``harness`` -- Monte Carlo size/power experiments and the detection +
  centrality pipeline;
* ``cli_io`` -- the ``netcpd`` command-line front end.
"""

from .baseline import L2Report, l2_cusum_stat, l2_cusum_test
from .errors import (DegenerateInputError, InvalidInputError, InvalidSpecError,
                     NumericalError, SeriesFormatError)
from .harness import (CentralityProfile, ExperimentGrid, NullStudy, PowerTable,
                      centrality_profile, detect, run_null_distribution,
                      run_power_table)
from .mosaic import (MosaicConfig, TestReport, estimate_rho, estimate_sigma2,
                     mosaic_test, residual_matrix, screen_edges, threshold_dn)
from .netgen import (MeanSpec, NetSeries, SeriesSpec, make_mean, sample_series)
from .oracle_tests import (OracleConfig, OracleReport, phi_test, product_stat,
                           psi_test)
from .segstats import (SplitSeries, TauGrid, candidate_taus, e_matrix,
                       segment_means, split, z_matrix)
from .statutil import (ks_distance_std_normal, normal_quantile,
                       normality_pvalue, rng_for_rep)
from .symmat import (SpectralDecomp, SymMatrix, ed_truncate, eigh_sym,
                     eigenvector_centrality)

__version__ = "0.1.0"
