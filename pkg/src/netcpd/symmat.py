"""Dense symmetric matrices and their spectral operations.

The whole pipeline works with n x n real symmetric matrices: adjacency
snapshots, mean matrices, CUSUM contrasts and residuals. This module owns the
matrix type plus the three spectral primitives everything else builds on:

* ``eigh_sym`` -- full eigendecomposition ordered by descending ``|eigenvalue|``
  with a deterministic sign convention,
* ``ed_truncate`` -- rank-k spectral truncation (reconstruction from the k
  eigenpairs of largest absolute eigenvalue),
* ``eigenvector_centrality`` -- max-normalized leading-eigenvector scores for
  nonnegative matrices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidInputError, NumericalError

# Relative tolerance for "is this matrix symmetric" checks at construction.
_SYM_RTOL = 1e-8


@dataclass(frozen=True)
class SymMatrix:
    """An n x n real symmetric matrix, symmetric by construction.

    ``values`` is stored exactly symmetric: tiny asymmetries (relative
    magnitude below 1e-8) are averaged away, anything larger is rejected.
    """

    values: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.values, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 2:
            raise InvalidInputError("matrix dimension must be at least 2")
        scale = max(np.max(np.abs(a)), 1.0)
        if np.max(np.abs(a - a.T)) > _SYM_RTOL * scale:
            raise InvalidInputError("matrix is not symmetric")
        a = (a + a.T) / 2.0
        a.flags.writeable = False
        object.__setattr__(self, "values", a)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def max_abs_offdiag(self) -> float:
        """Largest absolute off-diagonal entry."""
        a = np.abs(self.values.copy())
        np.fill_diagonal(a, 0.0)
        return float(a.max())


@dataclass(frozen=True)
class SpectralDecomp:
    """Eigenpairs sorted by descending absolute eigenvalue.

    ``eigenvalues[j]`` pairs with column ``eigenvectors[:, j]``. Columns are
    orthonormal and carry the sign convention of :func:`eigh_sym`.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eigh_sym(m: SymMatrix) -> SpectralDecomp:
    """Full eigendecomposition of a symmetric matrix.

    Eigenpairs are ordered by descending ``|eigenvalue|``; exact ties in
    magnitude are broken by descending signed eigenvalue. Each eigenvector is
    rescaled so that its entry of largest absolute value is nonnegative, which
    makes the output deterministic for a given input.

    Raises
    ------
    InvalidInputError
        If the matrix contains non-finite entries.
    NumericalError
        If the underlying solver fails to converge.
    """
    a = m.values
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix contains non-finite entries")
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"eigendecomposition did not converge (max-norm {np.max(np.abs(a)):.3e}, "
            f"LAPACK report: {exc})"
        ) from exc
    # eigh returns ascending eigenvalues; re-sort by (|lambda| desc, lambda desc).
    order = np.lexsort((-vals, -np.abs(vals)))
    vals = vals[order]
    vecs = vecs[:, order]
    # Sign convention: largest-|entry| coordinate of each eigenvector >= 0.
    amax = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[amax, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    vecs = vecs * signs
    return SpectralDecomp(eigenvalues=vals, eigenvectors=vecs)


def ed_truncate(m: SymMatrix, k: int) -> SymMatrix:
    """Rank-k spectral truncation: keep the k largest-|eigenvalue| pairs.

    Returns ``sum_{j<=k} lambda_j v_j v_j^T`` in the :func:`eigh_sym` ordering.
    The reconstructed diagonal is kept as-is; downstream statistics only ever
    sum over off-diagonal entries.
    """
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise InvalidInputError(f"rank k must be an integer, got {k!r}")
    if k < 1 or k > m.n:
        raise InvalidInputError(f"rank k={k} out of range [1, {m.n}]")
    dec = eigh_sym(m)
    vk = dec.eigenvectors[:, :k]
    out = (vk * dec.eigenvalues[:k]) @ vk.T
    return SymMatrix(out)


def eigenvector_centrality(m: SymMatrix) -> np.ndarray:
    """Leading-eigenvector centrality scores, rescaled so the max entry is 1.

    Requires an entrywise nonnegative matrix with at least one nonzero entry.
    Disconnected graphs are allowed: the leading eigenvector of the full
    matrix is returned (zeros off the dominant component).
    """
    a = m.values
    if np.any(a < 0):
        raise InvalidInputError("centrality requires a nonnegative matrix")
    if not np.any(a > 0):
        raise DegenerateInputError("centrality of an all-zero matrix is undefined")
    dec = eigh_sym(m)
    v = dec.eigenvectors[:, 0]
    # Perron theory gives a nonnegative leading vector; clip roundoff dust.
    v = np.clip(v, 0.0, None)
    top = v.max()
    if top <= 0:
        raise NumericalError("leading eigenvector collapsed to zero after sign fix")
    return v / top
