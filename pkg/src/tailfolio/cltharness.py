"""Monte Carlo harness for the scaling laws of equal-volatility baskets.

Each trial simulates independent non-Gaussian sources, mixes them with a
random well-conditioned matrix, extracts principal and independent
components, and builds the two hybrid portfolios for n = 1..n_max.  Across
trials the harness reports, per n, the mean and 95% confidence band of
portfolio variance (exactly 1/n by construction) and of excess kurtosis,
plus least-squares log-log kurtosis slopes over n in [2, n_max].

The testable consequences of the limit theorem on these portfolios: the
variance of both families decays as 1/n, while excess kurtosis decays
markedly faster for independent components than for principal components.
The harness reports measured slopes without asserting exact exponents,
since the achievable exponent depends on the kurtosis profile of the
sources (for equal-kurtosis sources, fourth-cumulant additivity already
pins the independent-component curve at kappa_source / n).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDof
from .ica import IcaConfig, ica_decompose
from .pca import pca_decompose
from .portfolio import hybrid_portfolio

MAX_MIXING_CONDITION = 50.0
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class Laplace:
    """IID Laplace sources; unit variance, excess kurtosis 3."""

    name = "laplace"

    def sample(self, rng, t, n):
        return rng.laplace(0.0, 1.0 / math.sqrt(2.0), size=(t, n))

    def population_kurtoses(self, n):
        return np.full(n, 3.0)


@dataclass(frozen=True)
class StudentT:
    """IID Student-t sources; unit variance, excess kurtosis 6/(dof-4)."""

    dof: float = 6.0
    name = "student_t"

    def __post_init__(self):
        if not self.dof > 4.0:
            raise InvalidDof(f"dof={self.dof} must exceed 4 for finite kurtosis")

    def sample(self, rng, t, n):
        return rng.standard_t(self.dof, size=(t, n)) / math.sqrt(
            self.dof / (self.dof - 2.0)
        )

    def population_kurtoses(self, n):
        return np.full(n, 6.0 / (self.dof - 4.0))


@dataclass(frozen=True)
class UniformGaussianMix:
    """Per-source uniform/Gaussian mixtures forming a sub-Gaussian ladder.

    Source i draws from a unit-variance uniform with probability i**(-decay)
    and from a standard normal otherwise, so its excess kurtosis is
    -1.2 * i**(-decay): a heterogeneous-kurtosis ensemble in which kurtosis
    diversifies far faster than 1/n.
    """

    decay: float = 1.5
    name = "uniform_gaussian_mix"

    def tail_weights(self, n):
        return np.arange(1, n + 1, dtype=np.float64) ** (-self.decay)

    def sample(self, rng, t, n):
        p = self.tail_weights(n)
        uniform_draw = rng.random(size=(t, n)) < p
        sqrt3 = math.sqrt(3.0)
        out = rng.standard_normal(size=(t, n))
        out[uniform_draw] = rng.uniform(-sqrt3, sqrt3, size=int(uniform_draw.sum()))
        return out

    def population_kurtoses(self, n):
        return -1.2 * self.tail_weights(n)


@dataclass(frozen=True)
class StochasticVol:
    """Regime-switching stochastic-volatility sources, the PCA stress case.

    Signs are independent Gaussians (columns stay uncorrelated) but groups
    of columns share a log-AR(1) volatility factor, and the grouping is
    reshuffled every regime, so any measured correlation/volatility snapshot
    is only locally valid.
    """

    persistence: float = 0.95
    vol_of_vol: float = 0.1
    group_size: int = 2
    n_regimes: int = 8
    name = "stochastic_vol"

    def sample(self, rng, t, n):
        n_groups = max(1, n // self.group_size)
        sigma_h = self.vol_of_vol / math.sqrt(1.0 - self.persistence**2)
        h = rng.standard_normal(n_groups) * sigma_h
        block = max(1, math.ceil(t / self.n_regimes))
        group_of = rng.integers(0, n_groups, size=n)
        z = rng.standard_normal(size=(t, n))
        eps = rng.standard_normal(size=(t, n_groups))
        out = np.empty((t, n))
        for s in range(t):
            if s and s % block == 0:
                group_of = rng.integers(0, n_groups, size=n)
            h = self.persistence * h + self.vol_of_vol * eps[s]
            out[s] = np.exp(h[group_of]) * z[s]
        # E[exp(2h)] = exp(2 sigma_h^2) makes the columns unit variance.
        return out / math.exp(sigma_h**2)

    def population_kurtoses(self, n):
        sigma_h2 = self.vol_of_vol**2 / (1.0 - self.persistence**2)
        return np.full(n, 3.0 * math.exp(4.0 * sigma_h2) - 3.0)


SOURCE_FAMILIES = {
    "laplace": Laplace,
    "student_t": StudentT,
    "uniform_gaussian_mix": UniformGaussianMix,
    "stochastic_vol": StochasticVol,
}


@dataclass(frozen=True)
class CltExperimentConfig:
    n_max: int = 10
    n_sources: int = 10
    source_family: object = field(default_factory=Laplace)
    T: int = 10_000
    trials: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")
        if self.n_sources < self.n_max:
            raise ValueError("n_sources must be >= n_max")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.T < 1000:
            raise ValueError("T must be >= 1000")


@dataclass(frozen=True)
class ScalingReport:
    """Per-n ensemble statistics and fitted log-log kurtosis slopes.

    ``*_ci`` arrays hold 95% half-widths and are None for a single trial.
    Slopes are NaN when the kurtosis signal is degenerate (all ensemble
    means inside the near-Gaussian band).
    """

    n: np.ndarray
    var_pc_mean: np.ndarray
    var_ic_mean: np.ndarray
    var_pc_ci: np.ndarray | None
    var_ic_ci: np.ndarray | None
    kurt_pc_mean: np.ndarray
    kurt_ic_mean: np.ndarray
    kurt_pc_ci: np.ndarray | None
    kurt_ic_ci: np.ndarray | None
    slope_pc: float
    slope_pc_se: float
    slope_ic: float
    slope_ic_se: float
    source_kurt_mean: np.ndarray
    trials_completed: int
    trials_failed: int
    config: CltExperimentConfig


def generate_sources(family, n_sources: int, t: int, seed: int) -> np.ndarray:
    """Simulate ``n_sources`` independent standardized sources of length t."""
    rng = np.random.default_rng(seed)
    return family.sample(rng, t, n_sources)


def random_mixing(rng, n: int, max_condition: float = MAX_MIXING_CONDITION) -> np.ndarray:
    """Random square mixing matrix with condition number below the cap."""
    for _ in range(200):
        a = rng.standard_normal((n, n))
        if np.linalg.cond(a) < max_condition:
            return a
    raise RuntimeError(f"no mixing matrix with condition < {max_condition} found")


def fit_loglog_slope(ns, values) -> tuple[float, float]:
    """Least-squares slope (and standard error) of log|values| vs log(ns)."""
    ns = np.asarray(ns, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    mask = np.abs(values) > 0.0
    if mask.sum() < 2:
        return math.nan, math.nan
    x = np.log(ns[mask])
    y = np.log(np.abs(values[mask]))
    xbar = x.mean()
    sxx = float(np.sum((x - xbar) ** 2))
    slope = float(np.sum((x - xbar) * (y - y.mean())) / sxx)
    intercept = float(y.mean() - slope * xbar)
    resid = y - (intercept + slope * x)
    dof = x.size - 2
    se = math.sqrt(float(resid @ resid) / dof / sxx) if dof > 0 else math.nan
    return slope, se


def _single_trial(config, trial_seed):
    rng = np.random.default_rng(trial_seed)
    sources = config.source_family.sample(rng, config.T, config.n_sources)
    mixing = random_mixing(rng, config.n_sources)
    panel = sources @ mixing.T

    pcs = pca_decompose(panel, config.n_max)
    ica_seed = int(rng.integers(0, 2**63 - 1))
    ics = ica_decompose(panel, config.n_max, IcaConfig(seed=ica_seed))
    if pcs.n_components < config.n_max or ics.n_components < config.n_max:
        raise RuntimeError("decomposition returned fewer components than n_max")

    var_pc = np.empty(config.n_max)
    var_ic = np.empty(config.n_max)
    kurt_pc = np.empty(config.n_max)
    kurt_ic = np.empty(config.n_max)
    for n in range(1, config.n_max + 1):
        for components, var_out, kurt_out in (
            (pcs, var_pc, kurt_pc),
            (ics, var_ic, kurt_ic),
        ):
            r = hybrid_portfolio(components, n).returns
            d = r - r.mean()
            m2 = float(np.mean(d * d))
            var_out[n - 1] = m2
            kurt_out[n - 1] = float(np.mean(d**4)) / (m2 * m2) - 3.0

    centered = sources - sources.mean(axis=0)
    m2s = np.mean(centered**2, axis=0)
    source_kurt = np.mean(centered**4, axis=0) / m2s**2 - 3.0
    order = np.argsort(-np.abs(source_kurt), kind="stable")
    return var_pc, var_ic, kurt_pc, kurt_ic, source_kurt[order]


def run_clt_experiment(config: CltExperimentConfig) -> ScalingReport:
    """Run the full scaling experiment; trial failures are skipped and counted.

    Per-trial generator streams derive deterministically from
    (config.seed, trial index), so the report is reproducible regardless of
    scheduling.
    """
    children = np.random.SeedSequence(config.seed).spawn(config.trials)
    rows_var_pc, rows_var_ic, rows_kurt_pc, rows_kurt_ic, rows_src = [], [], [], [], []
    failed = 0
    for child in children:
        try:
            var_pc, var_ic, kurt_pc, kurt_ic, src = _single_trial(config, child)
        except Exception:
            failed += 1
            continue
        rows_var_pc.append(var_pc)
        rows_var_ic.append(var_ic)
        rows_kurt_pc.append(kurt_pc)
        rows_kurt_ic.append(kurt_ic)
        rows_src.append(src)
    completed = len(rows_var_pc)
    if completed == 0:
        raise RuntimeError(f"all {config.trials} trials failed")

    def summarize(rows):
        data = np.vstack(rows)
        mean = data.mean(axis=0)
        if completed < 2:
            return mean, None
        half = _Z95 * data.std(axis=0, ddof=1) / math.sqrt(completed)
        return mean, half

    var_pc_mean, var_pc_ci = summarize(rows_var_pc)
    var_ic_mean, var_ic_ci = summarize(rows_var_ic)
    kurt_pc_mean, kurt_pc_ci = summarize(rows_kurt_pc)
    kurt_ic_mean, kurt_ic_ci = summarize(rows_kurt_ic)
    source_kurt_mean = np.vstack(rows_src).mean(axis=0)

    ns = np.arange(1, config.n_max + 1)

    def kurtosis_slope(mean, ci):
        # A curve indistinguishable from zero kurtosis has no meaningful
        # log-log slope; report NaN instead of fitting noise.
        band = np.maximum(0.05, 2.0 * ci) if ci is not None else 0.05
        if bool(np.all(np.abs(mean) <= band)):
            return math.nan, math.nan
        return fit_loglog_slope(ns[1:], mean[1:])

    slope_pc, slope_pc_se = kurtosis_slope(kurt_pc_mean, kurt_pc_ci)
    slope_ic, slope_ic_se = kurtosis_slope(kurt_ic_mean, kurt_ic_ci)

    return ScalingReport(
        n=ns,
        var_pc_mean=var_pc_mean,
        var_ic_mean=var_ic_mean,
        var_pc_ci=var_pc_ci,
        var_ic_ci=var_ic_ci,
        kurt_pc_mean=kurt_pc_mean,
        kurt_ic_mean=kurt_ic_mean,
        kurt_pc_ci=kurt_pc_ci,
        kurt_ic_ci=kurt_ic_ci,
        slope_pc=slope_pc,
        slope_pc_se=slope_pc_se,
        slope_ic=slope_ic,
        slope_ic_se=slope_ic_se,
        source_kurt_mean=source_kurt_mean,
        trials_completed=completed,
        trials_failed=failed,
        config=config,
    )
