"""Shared domain types for component decompositions."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .moments import SeriesStats


class ComponentKind(str, Enum):
    PCA = "PCA"
    ICA = "ICA"


class NormalizationKind(str, Enum):
    UNIT_WEIGHT = "unit_weight"
    EQUAL_VARIANCE = "equal_variance"


@dataclass(frozen=True)
class ComponentSet:
    """Ordered factor components extracted from a returns panel.

    ``weights`` holds one weight vector per row (k x N); ``series`` the
    corresponding component return series (T x k); ``stats`` the per-series
    population statistics, recomputable from the series columns.  PCA sets
    carry unit-norm weight rows; ICA sets carry equal-variance series.
    ``warnings`` collects non-fatal extraction flags (rank deficiency,
    non-convergence, near-Gaussian data).
    """

    weights: np.ndarray
    series: np.ndarray
    stats: tuple[SeriesStats, ...]
    kind: ComponentKind
    normalization: NormalizationKind
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        k = self.weights.shape[0]
        if self.weights.ndim != 2 or self.series.ndim != 2:
            raise ValueError("weights and series must be 2-D")
        if self.series.shape[1] != k or len(self.stats) != k:
            raise ValueError(
                f"inconsistent component count: {k} weight rows, "
                f"{self.series.shape[1]} series columns, {len(self.stats)} stats"
            )

    @property
    def n_components(self) -> int:
        return self.weights.shape[0]

    @property
    def n_assets(self) -> int:
        return self.weights.shape[1]

    @property
    def sample_count(self) -> int:
        return self.series.shape[0]

    def means(self) -> np.ndarray:
        return np.array([s.mean for s in self.stats])

    def volatilities(self) -> np.ndarray:
        return np.array([s.volatility for s in self.stats])

    def excess_kurtoses(self) -> np.ndarray:
        return np.array([s.excess_kurtosis for s in self.stats])
