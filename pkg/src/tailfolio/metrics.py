"""Portfolio evaluation metrics: Sharpe, fat-tailed ratio, drawdown, correlation.

All statistics use population (1/T) moments, a zero risk-free rate, and a
configurable annualization factor (default 252 trading days).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegenerateSeries, KurtosisNearZero, LengthMismatch, ZeroVolatility
from .moments import series_stats
from .portfolio import KURTOSIS_FLOOR, signed_cuberoot

DEFAULT_ANNUALIZATION = 252.0


@dataclass(frozen=True)
class MetricReport:
    volatility: float
    sharpe: float
    excess_kurtosis: float
    fat_tailed_ratio: float
    max_drawdown: float
    correlation_vs: tuple[str, float] | None = None


def _series(p) -> np.ndarray:
    values = getattr(p, "returns", p)
    return np.asarray(values, dtype=np.float64).ravel()


def sharpe_ratio(p, annualization: float = DEFAULT_ANNUALIZATION) -> float:
    """mean / volatility, scaled by sqrt(annualization); risk-free rate 0."""
    r = _series(p)
    vol = float(np.std(r))
    if not vol > 0.0 or float(np.max(r)) == float(np.min(r)):
        raise ZeroVolatility("series has zero volatility")
    return float(r.mean()) / vol * math.sqrt(annualization)


def fat_tailed_ratio(p, kurtosis_floor: float = KURTOSIS_FLOOR) -> float:
    """Signed cube root of mean / excess kurtosis, the kurtosis analog of Sharpe."""
    stats = series_stats(_series(p))
    if abs(stats.excess_kurtosis) < kurtosis_floor:
        raise KurtosisNearZero(
            f"|excess kurtosis| {abs(stats.excess_kurtosis):.4g} below {kurtosis_floor}"
        )
    return float(signed_cuberoot(stats.mean / stats.excess_kurtosis))


def max_drawdown(p, compounded: bool = True) -> float:
    """Largest peak-to-trough fractional decline of the equity curve.

    The curve is compounded by default; ``compounded=False`` uses the
    additive curve 1 + cumsum(returns) for sensitivity checks.
    """
    r = _series(p)
    if r.size == 0:
        raise DegenerateSeries("empty series")
    curve = np.cumprod(1.0 + r) if compounded else 1.0 + np.cumsum(r)
    return float(_kernels.max_drawdown_scan(np.ascontiguousarray(curve)))


def portfolio_correlation(a, b) -> float:
    """Pearson correlation of two return series."""
    ra, rb = _series(a), _series(b)
    if ra.size != rb.size:
        raise LengthMismatch(f"lengths {ra.size} vs {rb.size}")
    if float(np.std(ra)) == 0.0 or float(np.std(rb)) == 0.0:
        raise DegenerateSeries("correlation of a constant series is undefined")
    rho = float(np.corrcoef(ra, rb)[0, 1])
    return max(-1.0, min(1.0, rho))


def metric_report(
    p,
    annualization: float = DEFAULT_ANNUALIZATION,
    correlation_vs: tuple[str, object] | None = None,
    kurtosis_floor: float = KURTOSIS_FLOOR,
) -> MetricReport:
    """Bundle the standard metrics for one portfolio.

    ``correlation_vs`` is an optional (name, series) pair.  A near-zero
    kurtosis makes the fat-tailed ratio NaN here rather than an error, so a
    report can always be produced.
    """
    stats = series_stats(_series(p))
    try:
        ftr = fat_tailed_ratio(p, kurtosis_floor)
    except KurtosisNearZero:
        ftr = math.nan
    named = None
    if correlation_vs is not None:
        name, other = correlation_vs
        named = (name, portfolio_correlation(p, other))
    return MetricReport(
        volatility=stats.volatility,
        sharpe=sharpe_ratio(p, annualization),
        excess_kurtosis=stats.excess_kurtosis,
        fat_tailed_ratio=ftr,
        max_drawdown=max_drawdown(p),
        correlation_vs=named,
    )
