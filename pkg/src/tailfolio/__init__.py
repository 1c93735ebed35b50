"""Factor decomposition and kurtosis-aware portfolio construction.

PCA extracts directions of maximal variance; the ICA here extracts
directions of maximal excess kurtosis.  On top of either component set the
package builds Kelly, fat-tailed (cube-root mean/kurtosis), hybrid
(equal-volatility 1/n) and combined-objective portfolios, evaluates them
(Sharpe, fat-tailed ratio, max drawdown), and ships a Monte Carlo harness
measuring how variance and kurtosis diversify as components are added.
"""

from . import errors
from ._kernels import BACKEND as KERNEL_BACKEND
from .cltharness import (
    CltExperimentConfig,
    Laplace,
    ScalingReport,
    StochasticVol,
    StudentT,
    UniformGaussianMix,
    fit_loglog_slope,
    generate_sources,
    run_clt_experiment,
)
from .data import (
    BucketSpec,
    PricePanel,
    ReturnsPanel,
    bucketize,
    compute_returns,
    load_bucket_specs,
    load_prices,
    write_panel,
)
from .ica import IcaConfig, Whitening, amari_index, ica_decompose, pc_ic_correlation, whiten
from .metrics import (
    MetricReport,
    fat_tailed_ratio,
    max_drawdown,
    metric_report,
    portfolio_correlation,
    sharpe_ratio,
)
from .moments import (
    CokurtosisOracle,
    MomentSummary,
    SeriesStats,
    cokurtosis_tensor,
    estimate_moments,
    population_covariance,
    portfolio_excess_kurtosis,
    portfolio_variance,
    series_stats,
)
from .pca import pca_decompose, project_residual
from .portfolio import (
    Construction,
    PortfolioSeries,
    RiskAversion,
    WeightSpace,
    WeightVector,
    combined_weights,
    fat_tailed_weights,
    hybrid_portfolio,
    kelly_weights,
    portfolio_from_weights,
    scale_to_target_vol,
    signed_cuberoot,
)
from .types import ComponentKind, ComponentSet, NormalizationKind

__version__ = "0.1.0"

__all__ = [
    "BucketSpec",
    "CltExperimentConfig",
    "CokurtosisOracle",
    "ComponentKind",
    "ComponentSet",
    "Construction",
    "IcaConfig",
    "KERNEL_BACKEND",
    "Laplace",
    "MetricReport",
    "MomentSummary",
    "NormalizationKind",
    "PortfolioSeries",
    "PricePanel",
    "ReturnsPanel",
    "RiskAversion",
    "ScalingReport",
    "SeriesStats",
    "StochasticVol",
    "StudentT",
    "UniformGaussianMix",
    "WeightSpace",
    "WeightVector",
    "Whitening",
    "amari_index",
    "bucketize",
    "cokurtosis_tensor",
    "combined_weights",
    "compute_returns",
    "errors",
    "estimate_moments",
    "fat_tailed_ratio",
    "fat_tailed_weights",
    "fit_loglog_slope",
    "generate_sources",
    "hybrid_portfolio",
    "ica_decompose",
    "kelly_weights",
    "load_bucket_specs",
    "load_prices",
    "max_drawdown",
    "metric_report",
    "pc_ic_correlation",
    "pca_decompose",
    "population_covariance",
    "portfolio_correlation",
    "portfolio_excess_kurtosis",
    "portfolio_from_weights",
    "portfolio_variance",
    "project_residual",
    "run_clt_experiment",
    "scale_to_target_vol",
    "series_stats",
    "sharpe_ratio",
    "signed_cuberoot",
    "whiten",
    "write_panel",
]
