"""Shared builders for the test suite.

The exact-moment builders construct series from finite atom patterns whose
population moments are known in closed form (no sampling error), so ratio
assertions can be pinned at near machine precision.
"""

import numpy as np
import pytest

from tailfolio.moments import series_stats
from tailfolio.types import ComponentKind, ComponentSet, NormalizationKind


def three_point_series(mean: float, vol: float = 1.0, reps: int = 1) -> np.ndarray:
    """Series with population mean/vol/excess-kurtosis exactly (mean, vol, 3).

    Pattern of 12 atoms: +/- sqrt(6)*vol once each, ten zeros, shifted by
    ``mean``; m2 = vol^2 and m4 = 6 vol^4 exactly.
    """
    base = np.zeros(12)
    base[0] = -np.sqrt(6.0) * vol
    base[-1] = np.sqrt(6.0) * vol
    return np.tile(base, reps) + mean


def zero_kurtosis_series(mean: float = 0.0, reps: int = 1) -> np.ndarray:
    """Series with excess kurtosis exactly 0 (atoms +/- sqrt(3) w.p. 1/6)."""
    base = np.zeros(6)
    base[0] = -np.sqrt(3.0)
    base[-1] = np.sqrt(3.0)
    return np.tile(base, reps) + mean


def synthetic_components(series: np.ndarray, kind: ComponentKind) -> ComponentSet:
    """ComponentSet whose components are the given series with identity weights."""
    series = np.asarray(series, dtype=np.float64)
    k = series.shape[1]
    normalization = (
        NormalizationKind.UNIT_WEIGHT
        if kind is ComponentKind.PCA
        else NormalizationKind.EQUAL_VARIANCE
    )
    return ComponentSet(
        weights=np.eye(k),
        series=series,
        stats=tuple(series_stats(series[:, i]) for i in range(k)),
        kind=kind,
        normalization=normalization,
    )


def mixed_panel(
    n_sources: int, t: int, seed: int, family: str = "laplace", max_condition: float = 50.0
):
    """Independent sources mixed by a random well-conditioned square matrix.

    Returns (panel, mixing, sources).
    """
    rng = np.random.default_rng(seed)
    if family == "laplace":
        sources = rng.laplace(0.0, 1.0 / np.sqrt(2.0), size=(t, n_sources))
    elif family == "student_t6":
        sources = rng.standard_t(6.0, size=(t, n_sources)) / np.sqrt(6.0 / 4.0)
    else:
        raise ValueError(family)
    while True:
        mixing = rng.standard_normal((n_sources, n_sources))
        if np.linalg.cond(mixing) < max_condition:
            break
    return sources @ mixing.T, mixing, sources


def write_price_fixture(
    directory,
    n_assets: int = 20,
    n_sources: int = 10,
    days_per_bucket: int = 500,
    n_buckets: int = 4,
    seed: int = 20070101,
):
    """Synthetic price CSV plus bucket-spec JSON under ``directory``.

    Asset returns are a Laplace factor mixture with per-source drifts and a
    small idiosyncratic sleeve; prices compound from 100.  Returns
    (prices_path, buckets_path).
    """
    import datetime as dt
    import json

    rng = np.random.default_rng(seed)
    t_total = n_buckets * days_per_bucket + 1
    drifts = np.linspace(0.0005, 0.002, n_sources)
    sources = rng.laplace(0.0, 1.0 / np.sqrt(2.0), size=(t_total - 1, n_sources)) + drifts
    mixing = rng.standard_normal((n_assets, n_sources)) / np.sqrt(n_sources)
    returns = 0.01 * (sources @ mixing.T)
    returns += 0.001 * rng.standard_normal((t_total - 1, n_assets))
    prices = np.vstack([np.full(n_assets, 100.0), 100.0 * np.cumprod(1.0 + returns, axis=0)])

    dates = [dt.date(2007, 1, 1) + dt.timedelta(days=i) for i in range(t_total)]
    tickers = [f"A{i:02d}" for i in range(n_assets)]
    prices_path = directory / "prices.csv"
    with open(prices_path, "w") as handle:
        handle.write("date," + ",".join(tickers) + "\n")
        for date, row in zip(dates, prices):
            handle.write(
                date.isoformat() + "," + ",".join(repr(float(v)) for v in row) + "\n"
            )

    specs = []
    for b in range(n_buckets):
        start = dates[1 + b * days_per_bucket]
        end = dates[(b + 1) * days_per_bucket]
        specs.append({"start": start.isoformat(), "end": end.isoformat()})
    buckets_path = directory / "buckets.json"
    buckets_path.write_text(json.dumps(specs, indent=1))
    return prices_path, buckets_path


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
