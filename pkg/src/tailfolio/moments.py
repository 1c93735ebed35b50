"""First, second and fourth moment estimation for return panels.

Normalizer conventions, fixed once so every downstream identity is exact:

* per-series statistics (:func:`series_stats`, and everything built on them:
  component stats, portfolio volatility/kurtosis, volatility targeting) use
  population (1/T) central moments, the convention of standard ICA tooling,
  so excess kurtosis is ``m4 / m2**2 - 3`` with biased ``m2`` and ``m4``;
* :func:`estimate_moments` covariance uses the unbiased (T - 1) normalizer;
* the cokurtosis tensor is built from population moments, so its full
  contraction with (w, w, w, w) equals the projected-series excess kurtosis
  times the squared population variance of the projection, to round-off.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    DegenerateSeries,
    DimensionMismatch,
    EmptyPanel,
    NonFiniteInput,
    TooLarge,
)

DEFAULT_TENSOR_MAX_N = 8


@dataclass(frozen=True)
class SeriesStats:
    """Population mean, volatility and excess kurtosis of one return series."""

    mean: float
    volatility: float
    excess_kurtosis: float

    def __post_init__(self):
        if not self.volatility > 0.0:
            raise DegenerateSeries("volatility must be positive")
        # -2 is the analytic lower bound for any distribution; allow round-off
        if self.excess_kurtosis < -2.0 - 1e-9:
            raise ValueError(
                f"excess kurtosis {self.excess_kurtosis} below the -2 bound"
            )


@dataclass(frozen=True)
class MomentSummary:
    """Per-column mean vector and unbiased covariance of a panel."""

    mean: np.ndarray
    covariance: np.ndarray
    sample_count: int

    def __post_init__(self):
        if self.sample_count < 2:
            raise EmptyPanel("moment summary needs at least 2 samples")
        c = self.covariance
        scale = float(np.max(np.abs(c))) if c.size else 0.0
        if scale > 0.0 and np.max(np.abs(c - c.T)) > 1e-12 * scale:
            raise ValueError("covariance is not symmetric")
        eigs = np.linalg.eigvalsh(c)
        if eigs[0] < -1e-10 * max(eigs[-1], 0.0):
            raise ValueError("covariance is not positive semi-definite")


@dataclass(frozen=True)
class CokurtosisOracle:
    """Materialized excess-cokurtosis tensor, usable as a contraction oracle.

    ``tensor[i, j, k, l]`` is the fourth joint central moment of columns
    (i, j, k, l) minus the symmetrized Gaussian part
    ``V_ij V_kl + V_ik V_jl + V_il V_jk`` (population covariance V), which
    makes the tensor fully index-symmetric and zero for Gaussian data.
    """

    tensor: np.ndarray
    max_n: int = DEFAULT_TENSOR_MAX_N

    def contract(self, w) -> float:
        """Full contraction of the tensor with four copies of ``w``."""
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (self.tensor.shape[0],):
            raise DimensionMismatch(
                f"weight length {w.shape} vs tensor size {self.tensor.shape[0]}"
            )
        out = self.tensor
        for _ in range(4):
            out = out @ w
        return float(out)


def as_panel(returns) -> np.ndarray:
    """Validate and convert a returns panel to a T-by-N float64 array.

    Raises EmptyPanel for fewer than 2 rows or no columns, NonFiniteInput
    for NaN/inf entries.
    """
    x = np.ascontiguousarray(returns, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise EmptyPanel(f"expected a 2-D panel, got ndim={x.ndim}")
    t, n = x.shape
    if t < 2 or n < 1:
        raise EmptyPanel(f"panel of shape {t}x{n} is too small")
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("panel contains NaN or infinite entries")
    return x


def estimate_moments(returns) -> MomentSummary:
    """Column means and unbiased (T - 1) covariance of a panel."""
    x = as_panel(returns)
    t = x.shape[0]
    mean = x.mean(axis=0)
    xc = x - mean
    cov = (xc.T @ xc) / (t - 1)
    cov = 0.5 * (cov + cov.T)
    return MomentSummary(mean=mean, covariance=cov, sample_count=t)


def population_covariance(returns) -> np.ndarray:
    """Population (1/T) covariance; the normalizer all fourth-moment identities use."""
    x = as_panel(returns)
    xc = x - x.mean(axis=0)
    cov = (xc.T @ xc) / x.shape[0]
    return 0.5 * (cov + cov.T)


def series_stats(series) -> SeriesStats:
    """Population mean, volatility and excess kurtosis of a single series.

    Requires length >= 4 (fourth moment) and a non-constant series.
    """
    s = np.asarray(series, dtype=np.float64).ravel()
    if s.size < 4:
        raise DegenerateSeries(f"series of length {s.size} has no fourth moment")
    if not np.all(np.isfinite(s)):
        raise NonFiniteInput("series contains NaN or infinite entries")
    mu = float(s.mean())
    d = s - mu
    m2 = float(np.mean(d * d))
    if m2 <= 0.0 or float(s.max()) == float(s.min()):
        raise DegenerateSeries("series is constant")
    m4 = float(np.mean(d**4))
    return SeriesStats(
        mean=mu, volatility=float(np.sqrt(m2)), excess_kurtosis=m4 / (m2 * m2) - 3.0
    )


def _weight_values(w) -> np.ndarray:
    values = getattr(w, "values", w)
    return np.ascontiguousarray(values, dtype=np.float64)


def portfolio_variance(w, moments: MomentSummary) -> float:
    """Quadratic form w' V w against the summary covariance."""
    v = _weight_values(w)
    n = moments.covariance.shape[0]
    if v.shape != (n,):
        raise DimensionMismatch(f"weight length {v.shape} vs {n} assets")
    return float(v @ moments.covariance @ v)


def portfolio_excess_kurtosis(w, returns) -> float:
    """Excess kurtosis of the projected series (w . S_t).

    Computed on the projection itself; the materialized tensor contraction
    (:func:`cokurtosis_tensor`) is the independent cross-check of this path.
    """
    x = as_panel(returns)
    v = _weight_values(w)
    if v.shape != (x.shape[1],):
        raise DimensionMismatch(f"weight length {v.shape} vs {x.shape[1]} assets")
    xc = np.ascontiguousarray(x - x.mean(axis=0))
    _, m2, m4 = _kernels.quartic_accumulate(xc, v)
    if m2 <= 0.0:
        raise DegenerateSeries("projected series is constant")
    return m4 / (m2 * m2) - 3.0


def cokurtosis_tensor(returns, max_n: int = DEFAULT_TENSOR_MAX_N) -> CokurtosisOracle:
    """Materialize the N^4 excess-cokurtosis tensor (memory-capped at max_n).

    Only intended as a small-N oracle; the projection path above is the
    production route for portfolio kurtosis.
    """
    x = as_panel(returns)
    t, n = x.shape
    if n > max_n:
        raise TooLarge(f"N={n} exceeds the tensor cap max_n={max_n}")
    if t < 4:
        raise EmptyPanel(f"need at least 4 samples for fourth moments, got {t}")
    xc = x - x.mean(axis=0)
    pairs = (xc[:, :, None] * xc[:, None, :]).reshape(t, n * n)
    m4 = (pairs.T @ pairs / t).reshape(n, n, n, n)
    v = (xc.T @ xc) / t
    gaussian_part = (
        np.einsum("ij,kl->ijkl", v, v)
        + np.einsum("ik,jl->ijkl", v, v)
        + np.einsum("il,jk->ijkl", v, v)
    )
    return CokurtosisOracle(tensor=m4 - gaussian_part, max_n=max_n)
