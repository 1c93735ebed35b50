"""Kelly, fat-tailed, hybrid and combined-objective portfolio construction.

Weight formulas on extracted components:

* Kelly (PCA components): weight_i proportional to mean_i / variance_i:
  linear in performance;
* fat-tailed (ICA components): weight_i proportional to the signed cube
  root of mean_i / excess_kurtosis_i, sub-linear, flattening concentration;
* hybrid: equal 1/n allocation to unit-variance-scaled components, whose
  portfolio variance is exactly 1/n in-sample;
* combined: numerical maximizer of
  ``w.m - lambda * w.V.w - nu * (quartic contraction)``, kept as an
  experimental route since its shape depends on the aversion ratio.

Proportionality constants are resolved by unit-norm default normalization
plus :func:`scale_to_target_vol`.
"""

import warnings as _warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels
from .errors import (
    ConvergenceWarning,
    KurtosisNearZero,
    NotEnoughComponents,
    ZeroVariance,
    ZeroVolatility,
)
from .moments import as_panel
from .types import ComponentKind, ComponentSet

KURTOSIS_FLOOR = 0.05


class WeightSpace(str, Enum):
    ASSET = "asset"
    COMPONENT = "component"


class Construction(str, Enum):
    KELLY = "kelly"
    FAT_TAILED = "fat_tailed"
    HYBRID_PC = "hybrid_pc"
    HYBRID_IC = "hybrid_ic"
    COMBINED = "combined"


@dataclass(frozen=True)
class WeightVector:
    """Leverage per component or asset, with normalization metadata."""

    values: np.ndarray
    space: WeightSpace
    leverage_scale: float = 1.0
    flags: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ValueError("weights must be finite")
        if not self.leverage_scale > 0.0:
            raise ValueError("leverage_scale must be positive")


@dataclass(frozen=True)
class RiskAversion:
    """Aversion to variance (lambda_var) and to kurtosis (nu_kurt)."""

    lambda_var: float = 1.0
    nu_kurt: float = 0.0

    def __post_init__(self):
        if self.lambda_var < 0.0 or self.nu_kurt < 0.0:
            raise ValueError("risk aversions must be non-negative")
        if self.lambda_var == 0.0 and self.nu_kurt == 0.0:
            raise ValueError("at least one risk aversion must be positive")


@dataclass(frozen=True)
class PortfolioSeries:
    """A realized portfolio return series with its defining weights."""

    returns: np.ndarray
    weights: WeightVector
    construction: Construction


def signed_cuberoot(x):
    """Odd real cube root: sign(x) * |x|**(1/3), exactly odd."""
    return np.cbrt(x)


def portfolio_from_weights(
    components: ComponentSet, weights: WeightVector, construction: Construction
) -> PortfolioSeries:
    """Realize the return series of component weights (first len(values) columns)."""
    m = weights.values.shape[0]
    if m > components.n_components:
        raise NotEnoughComponents(
            f"{m} weights vs {components.n_components} components"
        )
    returns = components.series[:, :m] @ weights.values
    return PortfolioSeries(returns=returns, weights=weights, construction=construction)


def _unit_normalized(raw, space, flags=()):
    nrm = float(np.linalg.norm(raw))
    if nrm > 0.0:
        raw = raw / nrm
    else:
        flags = flags + ("zero_mean_components",)
    return WeightVector(values=raw, space=space, leverage_scale=1.0, flags=flags)


def kelly_weights(components: ComponentSet) -> WeightVector:
    """Kelly leverage per PCA component: mean / variance, unit-normalized."""
    if components.kind is not ComponentKind.PCA:
        raise ValueError("kelly_weights expects a PCA component set")
    vol = components.volatilities()
    if np.any(vol <= 0.0):
        raise ZeroVariance("every component needs positive variance")
    raw = components.means() / (vol * vol)
    return _unit_normalized(raw, WeightSpace.COMPONENT)


def fat_tailed_weights(
    components: ComponentSet, kurtosis_floor: float = KURTOSIS_FLOOR
) -> WeightVector:
    """Fat-tailed leverage per ICA component: cbrt(mean / excess kurtosis).

    Components whose |excess kurtosis| sits below ``kurtosis_floor`` are
    excluded (weight zero, flagged) since the ratio diverges there; if every
    component is excluded, KurtosisNearZero is raised.
    """
    if components.kind is not ComponentKind.ICA:
        raise ValueError("fat_tailed_weights expects an ICA component set")
    kurt = components.excess_kurtoses()
    mean = components.means()
    included = np.abs(kurt) >= kurtosis_floor
    if not np.any(included):
        raise KurtosisNearZero(
            f"all {kurt.size} component kurtoses within +/-{kurtosis_floor} of zero"
        )
    flags = tuple(
        f"kurtosis_near_zero:component_{i + 1}"
        for i in range(kurt.size)
        if not included[i]
    )
    raw = np.zeros_like(mean)
    raw[included] = signed_cuberoot(mean[included] / kurt[included])
    return _unit_normalized(raw, WeightSpace.COMPONENT, flags)


def hybrid_portfolio(components: ComponentSet, n: int) -> PortfolioSeries:
    """Equal 1/n allocation to the first n components scaled to unit variance.

    For in-sample-uncorrelated components (any PCA/ICA output of this
    toolkit) the portfolio variance is exactly 1/n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > components.n_components:
        raise NotEnoughComponents(
            f"requested n={n} of {components.n_components} components"
        )
    vol = components.volatilities()[:n]
    if np.any(vol <= 0.0):
        raise ZeroVariance("every component needs positive variance")
    values = 1.0 / (n * vol)
    construction = (
        Construction.HYBRID_PC
        if components.kind is ComponentKind.PCA
        else Construction.HYBRID_IC
    )
    weights = WeightVector(values=values, space=WeightSpace.COMPONENT)
    return portfolio_from_weights(components, weights, construction)


def _combined_objective(xc, mean, cov, aversion):
    lam, nu = aversion.lambda_var, aversion.nu_kurt

    def evaluate(w):
        quad = float(w @ cov @ w)
        value = float(mean @ w) - lam * quad
        grad = mean - 2.0 * lam * (cov @ w)
        if nu > 0.0:
            xu3, m2, m4 = _kernels.quartic_accumulate(xc, w)
            quartic = m4 - 3.0 * m2 * m2
            value -= nu * quartic
            grad = grad - nu * (4.0 * xu3 - 12.0 * m2 * (cov @ w))
        return value, grad

    return evaluate


def combined_weights(
    source,
    aversion: RiskAversion,
    max_iterations: int = 5000,
    grad_tol: float = 1e-8,
) -> WeightVector:
    """Maximize w.m - lambda w.V.w - nu (quartic contraction) by gradient
    ascent with backtracking line search.

    ``source`` is a ComponentSet (optimizing over component leverages) or a
    raw returns panel (optimizing over asset weights).  Population moments
    are used throughout; the quartic term is evaluated on the projected
    series.  The ascent starts from the closed-form Kelly solution
    V^-1 m / (2 lambda) (zero vector when lambda is 0), so with nu = 0 it
    reproduces the Kelly weights immediately.  Experimental: unlike the
    Kelly and fat-tailed constructions, the resulting shape depends on the
    aversion ratio.
    """
    if isinstance(source, ComponentSet):
        panel, space = source.series, WeightSpace.COMPONENT
    else:
        panel, space = source, WeightSpace.ASSET
    x = as_panel(panel)
    mean = x.mean(axis=0)
    xc = np.ascontiguousarray(x - mean)
    cov = (xc.T @ xc) / x.shape[0]
    cov = 0.5 * (cov + cov.T)

    if aversion.lambda_var > 0.0:
        try:
            w = np.linalg.solve(cov, mean) / (2.0 * aversion.lambda_var)
        except np.linalg.LinAlgError:
            w = np.linalg.lstsq(cov, mean, rcond=None)[0] / (2.0 * aversion.lambda_var)
    else:
        w = np.zeros_like(mean)

    evaluate = _combined_objective(xc, mean, cov, aversion)
    value, grad = evaluate(w)
    step = 1.0
    converged = False
    for _ in range(max_iterations):
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= grad_tol * (1.0 + abs(value)):
            converged = True
            break
        accepted = False
        while step > 1e-18:
            trial = w + step * grad
            trial_value, trial_grad = evaluate(trial)
            if trial_value >= value + 1e-4 * step * gnorm * gnorm:
                w, value, grad = trial, trial_value, trial_grad
                step = min(step * 2.0, 1e6)
                accepted = True
                break
            step *= 0.5
        if not accepted:
            # Line search hit floating-point floor; accept if the gradient is
            # already inside the contract tolerance, flag otherwise.
            converged = gnorm <= 1e-6 * (1.0 + abs(value))
            break
    flags: tuple[str, ...] = ()
    if not converged:
        flags = ("no_convergence",)
        _warnings.warn(
            ConvergenceWarning(
                f"combined objective not converged after {max_iterations} iterations"
            ),
            stacklevel=2,
        )
    return WeightVector(values=w, space=space, leverage_scale=1.0, flags=flags)


def scale_to_target_vol(p: PortfolioSeries, target_vol: float) -> PortfolioSeries:
    """Rescale a portfolio so its in-sample (population) volatility equals
    target_vol; weights scale by the same factor."""
    if not target_vol > 0.0:
        raise ValueError("target_vol must be positive")
    vol = float(np.std(p.returns))
    if not vol > 0.0 or float(np.max(p.returns)) == float(np.min(p.returns)):
        raise ZeroVolatility("cannot scale a zero-volatility portfolio")
    factor = target_vol / vol
    weights = WeightVector(
        values=p.weights.values * factor,
        space=p.weights.space,
        leverage_scale=p.weights.leverage_scale * factor,
        flags=p.weights.flags,
    )
    return PortfolioSeries(
        returns=p.returns * factor, weights=weights, construction=p.construction
    )
