"""Principal component extraction with unit-norm, variance-ordered weights.

The production path is a dense symmetric eigendecomposition of the sample
covariance; an iterative power-iteration-with-deflation path is kept as an
independent cross-check (``method="deflation"``).  Both share the same
deterministic ordering and sign conventions, so identical input yields
bit-identical output.
"""

import warnings as _warnings

import numpy as np

from .errors import DimensionMismatch, ZeroVector
from .moments import as_panel, series_stats
from .types import ComponentKind, ComponentSet, NormalizationKind

RANK_EPS = 1e-12


def _order_and_sign(eigenvalues, vectors):
    """Descending-eigenvalue order; ties broken by the index of the largest
    weight entry; each vector flipped so its largest-magnitude entry is positive."""
    tie_break = np.argmax(np.abs(vectors), axis=0)
    order = np.lexsort((tie_break, -eigenvalues))
    eigenvalues = eigenvalues[order]
    vectors = vectors[:, order]
    for i in range(vectors.shape[1]):
        col = vectors[:, i]
        if col[np.argmax(np.abs(col))] < 0.0:
            vectors[:, i] = -col
    return eigenvalues, vectors


def _power_iteration(matrix, start, max_iter=50_000, rtol=1e-14):
    """Dominant eigenpair of a symmetric PSD matrix via power iteration.

    Residual-based stopping: ||A v - lam v|| <= rtol * scale.
    """
    scale = float(np.linalg.norm(matrix, ord=2)) or 1.0
    v = start / np.linalg.norm(start)
    lam = 0.0
    for _ in range(max_iter):
        av = matrix @ v
        nrm = float(np.linalg.norm(av))
        if nrm == 0.0:
            return 0.0, v
        v_new = av / nrm
        lam = float(v_new @ matrix @ v_new)
        if np.linalg.norm(matrix @ v_new - lam * v_new) <= rtol * scale:
            return lam, v_new
        v = v_new
    return lam, v


def _deflation_eigh(cov, k):
    """Top-k eigenpairs by repeated power iteration and rank-one deflation."""
    n = cov.shape[0]
    rng = np.random.default_rng(0x5EED)
    work = cov.copy()
    values = np.empty(k)
    vectors = np.empty((n, k))
    for i in range(k):
        lam, v = _power_iteration(work, rng.standard_normal(n))
        values[i] = lam
        vectors[:, i] = v
        work = work - lam * np.outer(v, v)
    return values, vectors


def pca_decompose(returns, k: int, method: str = "eig") -> ComponentSet:
    """Extract k principal components of a returns panel.

    Components are ordered by descending variance; weight rows are
    orthonormal; component i's (T - 1)-normalized series variance equals the
    i-th largest eigenvalue of the sample covariance.  If the panel's
    numerical rank r is below k, the r achievable components are returned
    and a ``rank_deficient`` flag is set instead of failing, since wide
    panels (N > T) are always rank-deficient.
    """
    x = as_panel(returns)
    t, n = x.shape
    if not 1 <= k <= min(t - 1, n):
        raise ValueError(f"k={k} outside [1, min(T-1, N)] = [1, {min(t - 1, n)}]")
    if method not in ("eig", "deflation"):
        raise ValueError(f"unknown method {method!r}")

    xc = x - x.mean(axis=0)
    cov = (xc.T @ xc) / (t - 1)
    cov = 0.5 * (cov + cov.T)

    if method == "eig":
        eigenvalues, vectors = np.linalg.eigh(cov)
        eigenvalues, vectors = eigenvalues[::-1], vectors[:, ::-1]
    else:
        eigenvalues, vectors = _deflation_eigh(cov, min(k, n))

    cutoff = RANK_EPS * max(float(eigenvalues[0]), 0.0)
    rank = int(np.sum(eigenvalues > cutoff))
    flags: tuple[str, ...] = ()
    if rank < k:
        flags = (f"rank_deficient:requested={k},available={rank}",)
        _warnings.warn(
            f"panel rank {rank} below requested k={k}; returning {rank} components",
            stacklevel=2,
        )
    k_eff = min(k, rank)
    eigenvalues, vectors = _order_and_sign(eigenvalues[:k_eff], vectors[:, :k_eff])

    weights = np.ascontiguousarray(vectors.T)
    series = x @ vectors
    stats = tuple(series_stats(series[:, i]) for i in range(k_eff))
    return ComponentSet(
        weights=weights,
        series=series,
        stats=stats,
        kind=ComponentKind.PCA,
        normalization=NormalizationKind.UNIT_WEIGHT,
        warnings=flags,
    )


def project_residual(returns, component) -> np.ndarray:
    """Project a panel onto the hyperplane orthogonal to a weight vector.

    The result has exactly zero exposure (and hence zero covariance) along
    the removed direction.
    """
    x = as_panel(returns)
    v = np.asarray(component, dtype=np.float64).ravel()
    if v.shape != (x.shape[1],):
        raise DimensionMismatch(f"weight length {v.shape} vs {x.shape[1]} assets")
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:
        raise ZeroVector("cannot project along a zero vector")
    unit = v / nrm
    return x - np.outer(x @ unit, unit)
