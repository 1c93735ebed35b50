"""Independent component extraction by kurtosis maximization.

Fixed-point iteration on the kurtosis contrast (the classical fourth-moment
FastICA update ``w <- E[z (w.z)^3] - 3 w``) with whitening, one-at-a-time
deflation, and seeded restarts.  Conventions, chosen for determinism:

* components are ordered by descending absolute excess kurtosis;
* each component's sign makes its series skewness non-negative (falling back
  to a positive largest weight entry when skewness is zero);
* all component series share the variance of the first component, whose
  original-space weight vector is normalized to unit norm.
"""

import warnings as _warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    ConvergenceWarning,
    GaussianDataWarning,
    LengthMismatch,
    RankDeficient,
)
from .moments import as_panel, series_stats
from .types import ComponentKind, ComponentSet, NormalizationKind

GAUSSIAN_KURTOSIS_BAND = 0.05
SKEW_SIGN_EPS = 1e-12


@dataclass(frozen=True)
class IcaConfig:
    """Knobs of the fixed-point extraction; defaults match everyday use."""

    max_iterations: int = 1000
    tolerance: float = 1e-8
    restarts: int = 5
    seed: int = 0
    contrast: str = "kurtosis"

    def __post_init__(self):
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1 or self.restarts < 1:
            raise ValueError("max_iterations and restarts must be >= 1")
        if self.contrast != "kurtosis":
            raise ValueError(f"unsupported contrast {self.contrast!r}")


@dataclass(frozen=True)
class Whitening:
    """Linear map to a unit-covariance panel, plus the inverse weight map.

    ``z = (x - mean) @ forward`` has identity sample covariance on the k
    retained directions; ``weight_to_original`` maps a whitened-space weight
    vector back to an original-space portfolio weight vector.
    """

    mean: np.ndarray
    forward: np.ndarray
    eigenvalues: np.ndarray

    def weight_to_original(self, w) -> np.ndarray:
        return self.forward @ np.asarray(w, dtype=np.float64)


def whiten(returns, k: int) -> tuple[np.ndarray, Whitening]:
    """Whiten a panel down to its top-k covariance directions.

    Raises RankDeficient when k exceeds the numerical rank (eigenvalues
    below 1e-12 of the largest).
    """
    x = as_panel(returns)
    t, n = x.shape
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    mean = x.mean(axis=0)
    xc = x - mean
    cov = (xc.T @ xc) / (t - 1)
    eigenvalues, vectors = np.linalg.eigh(0.5 * (cov + cov.T))
    eigenvalues, vectors = eigenvalues[::-1], vectors[:, ::-1]
    rank = int(np.sum(eigenvalues > 1e-12 * max(float(eigenvalues[0]), 0.0)))
    if k > rank:
        raise RankDeficient(f"k={k} exceeds numerical rank {rank}")
    forward = vectors[:, :k] / np.sqrt(eigenvalues[:k])
    z = np.ascontiguousarray(xc @ forward)
    return z, Whitening(mean=mean, forward=forward, eigenvalues=eigenvalues[:k].copy())


def _extract_one(z, basis, rng, config):
    """One deflation step: a unit vector orthogonal to ``basis`` at a fixed
    point of the kurtosis contrast, or None if every restart fails."""
    k = z.shape[1]
    for _ in range(config.restarts):
        w = rng.standard_normal(k)
        if basis.shape[0]:
            w = w - basis.T @ (basis @ w)
        nrm = float(np.linalg.norm(w))
        if nrm < 1e-12:
            continue
        w = w / nrm
        for _ in range(config.max_iterations):
            xu3, _, _ = _kernels.quartic_accumulate(z, w)
            w_new = xu3 - 3.0 * w
            if basis.shape[0]:
                w_new = w_new - basis.T @ (basis @ w_new)
            nrm = float(np.linalg.norm(w_new))
            if nrm < 1e-12:
                break
            w_new = w_new / nrm
            if abs(abs(float(w_new @ w)) - 1.0) < config.tolerance:
                return w_new
            w = w_new
    return None


def ica_decompose(returns, k: int = 10, config: IcaConfig | None = None) -> ComponentSet:
    """Extract k independent components by deflationary kurtosis maximization.

    The panel is whitened to k directions, then unit vectors maximizing the
    magnitude of the projected series' excess kurtosis are pulled out one at
    a time, each constrained orthogonal (in whitened space) to its
    predecessors.  Non-convergence of a component after all restarts stops
    extraction early: the converged components are returned with a
    ``no_convergence`` flag.  If every candidate kurtosis sits within
    +/-0.05 of zero a ``gaussian_data`` flag is set and a warning is raised,
    since the decomposition is then non-identifiable.
    """
    config = config or IcaConfig()
    x = as_panel(returns)
    t = x.shape[0]
    if t < 4 * k:
        raise ValueError(f"need T >= 4k samples for k={k}, got T={t}")
    z, whitening = whiten(x, k)

    rng = np.random.default_rng(config.seed)
    basis = np.zeros((0, k))
    flags: list[str] = []
    for i in range(k):
        w = _extract_one(z, basis, rng, config)
        if w is None:
            flags.append(f"no_convergence:component_{i + 1}")
            _warnings.warn(
                ConvergenceWarning(
                    f"component {i + 1} failed to converge after "
                    f"{config.restarts} restarts; returning {i} components"
                ),
                stacklevel=2,
            )
            break
        basis = np.vstack([basis, w])

    m = basis.shape[0]
    kurtoses = np.empty(m)
    for i in range(m):
        _, m2, m4 = _kernels.quartic_accumulate(z, np.ascontiguousarray(basis[i]))
        kurtoses[i] = m4 / (m2 * m2) - 3.0
    if m and bool(np.all(np.abs(kurtoses) < GAUSSIAN_KURTOSIS_BAND)):
        flags.append("gaussian_data")
        _warnings.warn(
            GaussianDataWarning(
                "all component kurtoses within +/-0.05 of zero; "
                "independent components are not identifiable"
            ),
            stacklevel=2,
        )

    order = np.argsort(-np.abs(kurtoses), kind="stable")
    basis = basis[order]

    # Map to original-space weight vectors and fix signs.
    weights = np.empty((m, x.shape[1]))
    for i in range(m):
        a = whitening.weight_to_original(basis[i])
        s = x @ a
        d = s - s.mean()
        m2 = float(np.mean(d * d))
        skew = float(np.mean(d**3)) / m2**1.5 if m2 > 0 else 0.0
        if skew < -SKEW_SIGN_EPS:
            a = -a
        elif abs(skew) <= SKEW_SIGN_EPS and a[np.argmax(np.abs(a))] < 0.0:
            a = -a
        weights[i] = a

    # Equal-variance convention: IC1's weight vector is unit norm and every
    # series is rescaled to IC1's variance.
    if m:
        weights[0] /= np.linalg.norm(weights[0])
        target_var = float(np.var(x @ weights[0]))
        for i in range(1, m):
            var_i = float(np.var(x @ weights[i]))
            weights[i] *= np.sqrt(target_var / var_i)

    series = x @ weights.T
    stats = tuple(series_stats(series[:, i]) for i in range(m))
    return ComponentSet(
        weights=weights,
        series=series,
        stats=stats,
        kind=ComponentKind.ICA,
        normalization=NormalizationKind.EQUAL_VARIANCE,
        warnings=tuple(flags),
    )


def pc_ic_correlation(pcs: ComponentSet, ics: ComponentSet) -> np.ndarray:
    """Correlation matrix of stacked PC and IC series.

    The PC-PC and IC-IC diagonal blocks are identity by construction; the
    PC-IC block carries the interesting structure.
    """
    if pcs.sample_count != ics.sample_count:
        raise LengthMismatch(
            f"PC series length {pcs.sample_count} vs IC series length {ics.sample_count}"
        )
    stacked = np.hstack([pcs.series, ics.series])
    return np.corrcoef(stacked, rowvar=False)


def amari_index(p) -> float:
    """Permutation/scale-invariant distance of a gain matrix from a scaled
    permutation, normalized to [0, 1]; 0 means perfect source recovery.

    ``p`` is typically (estimated unmixing) @ (true mixing).
    """
    a = np.abs(np.asarray(p, dtype=np.float64))
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
        raise ValueError("amari_index needs a square matrix of size >= 2")
    n = a.shape[0]
    if not np.all(a.max(axis=1) > 0.0) or not np.all(a.max(axis=0) > 0.0):
        raise ValueError("gain matrix has an all-zero row or column")
    rows = float(np.sum(a.sum(axis=1) / a.max(axis=1) - 1.0))
    cols = float(np.sum(a.sum(axis=0) / a.max(axis=0) - 1.0))
    return (rows + cols) / (2.0 * n * (n - 1))
