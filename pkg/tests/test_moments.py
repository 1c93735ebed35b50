"""Moment estimation: examples, error paths, and the tensor/projection identity."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tailfolio.errors import (
    DegenerateSeries,
    DimensionMismatch,
    EmptyPanel,
    NonFiniteInput,
    TooLarge,
)
from tailfolio.moments import (
    MomentSummary,
    cokurtosis_tensor,
    estimate_moments,
    population_covariance,
    portfolio_excess_kurtosis,
    portfolio_variance,
    series_stats,
)

from oracles import quartic_contraction_reference


# ---------------------------------------------------------------------------
# estimate_moments
# ---------------------------------------------------------------------------


def test_duplicated_columns_give_rank_one_covariance(rng):
    col = rng.standard_normal(200)
    summary = estimate_moments(np.column_stack([col, col]))
    cov = summary.covariance
    assert cov[0, 1] == pytest.approx(cov[0, 0], rel=1e-12)
    assert cov[1, 0] == pytest.approx(cov[1, 1], rel=1e-12)


def test_constant_column_has_zero_variance_and_exact_mean():
    summary = estimate_moments(np.full((50, 1), 0.375))
    assert summary.covariance[0, 0] == 0.0
    assert summary.mean[0] == 0.375


def test_independent_normals_monte_carlo():
    x = np.random.default_rng(2024).standard_normal((10_000, 2))
    cov = estimate_moments(x).covariance
    assert abs(cov[0, 1]) < 0.05
    assert 0.9 < cov[0, 0] < 1.1
    assert 0.9 < cov[1, 1] < 1.1


def test_estimate_moments_rejects_bad_panels():
    with pytest.raises(EmptyPanel):
        estimate_moments(np.ones((1, 3)))
    with pytest.raises(EmptyPanel):
        estimate_moments(np.ones((5, 0)))
    bad = np.ones((5, 2))
    bad[3, 1] = np.nan
    with pytest.raises(NonFiniteInput):
        estimate_moments(bad)


def test_covariance_psd_for_random_panels(rng):
    # MomentSummary validates symmetry/PSD on construction.
    for _ in range(25):
        t = int(rng.integers(3, 60))
        n = int(rng.integers(1, 8))
        summary = estimate_moments(rng.standard_normal((t, n)))
        eigs = np.linalg.eigvalsh(summary.covariance)
        assert eigs[0] >= -1e-10 * max(eigs[-1], 0.0)


def test_moment_summary_rejects_asymmetric_covariance():
    with pytest.raises(ValueError):
        MomentSummary(
            mean=np.zeros(2),
            covariance=np.array([[1.0, 0.5], [0.1, 1.0]]),
            sample_count=10,
        )


# ---------------------------------------------------------------------------
# series_stats
# ---------------------------------------------------------------------------


def test_alternating_signs_attain_kurtosis_lower_bound():
    series = np.tile([1.0, -1.0], 50)
    assert series_stats(series).excess_kurtosis == -2.0


def test_gaussian_sample_kurtosis_near_zero():
    series = np.random.default_rng(7).standard_normal(200_000)
    assert abs(series_stats(series).excess_kurtosis) < 0.1


def test_laplace_sample_kurtosis_near_three():
    series = np.random.default_rng(8).laplace(0.0, 1.0, 200_000)
    assert series_stats(series).excess_kurtosis == pytest.approx(3.0, abs=0.3)


def test_series_stats_degenerate_inputs():
    with pytest.raises(DegenerateSeries):
        series_stats(np.full(100, 1.5))
    with pytest.raises(DegenerateSeries):
        series_stats(np.array([1.0, 2.0, 3.0]))


@given(st.integers(0, 2**32 - 1), st.integers(5, 200))
@settings(max_examples=40, deadline=None)
def test_excess_kurtosis_never_below_minus_two(seed, length):
    series = np.random.default_rng(seed).standard_normal(length)
    assert series_stats(series).excess_kurtosis >= -2.0


# ---------------------------------------------------------------------------
# portfolio_variance / portfolio_excess_kurtosis
# ---------------------------------------------------------------------------


def _summary(cov):
    cov = np.asarray(cov, dtype=np.float64)
    return MomentSummary(mean=np.zeros(cov.shape[0]), covariance=cov, sample_count=10)


def test_portfolio_variance_examples():
    diag = _summary(np.diag([4.0, 1.0]))
    assert portfolio_variance(np.array([1.0, 0.0]), diag) == 4.0
    assert portfolio_variance(np.zeros(2), diag) == 0.0
    eye = _summary(np.eye(2))
    assert portfolio_variance(np.array([0.5, 0.5]), eye) == 0.5


def test_portfolio_variance_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        portfolio_variance(np.ones(3), _summary(np.eye(2)))


def test_projected_kurtosis_matches_single_column(rng):
    x = rng.laplace(size=(500, 3))
    direct = series_stats(x[:, 1]).excess_kurtosis
    projected = portfolio_excess_kurtosis(np.array([0.0, 1.0, 0.0]), x)
    assert projected == pytest.approx(direct, rel=1e-12)


def test_equal_weight_laplace_pair_kurtosis():
    rng = np.random.default_rng(99)
    x = rng.laplace(0.0, 1.0 / np.sqrt(2.0), size=(100_000, 2))
    w = np.array([1.0, 1.0]) / np.sqrt(2.0)
    # independence additivity: 3 * (w1^4 + w2^4) = 1.5
    assert portfolio_excess_kurtosis(w, x) == pytest.approx(1.5, abs=0.3)


def test_gaussian_projection_kurtosis_near_zero(rng):
    x = rng.standard_normal((200_000, 3))
    w = rng.standard_normal(3)
    assert abs(portfolio_excess_kurtosis(w, x)) < 0.1


def test_projected_kurtosis_degenerate_direction():
    x = np.column_stack([np.ones(50), np.arange(50.0)])
    with pytest.raises(DegenerateSeries):
        portfolio_excess_kurtosis(np.array([1.0, 0.0]), x)


# ---------------------------------------------------------------------------
# cokurtosis tensor
# ---------------------------------------------------------------------------


def test_single_asset_tensor_is_fourth_moment_minus_three_v_squared(rng):
    x = rng.laplace(size=(400, 1))
    d = x[:, 0] - x[:, 0].mean()
    m2 = np.mean(d * d)
    m4 = np.mean(d**4)
    tensor = cokurtosis_tensor(x).tensor
    assert tensor[0, 0, 0, 0] == pytest.approx(m4 - 3.0 * m2 * m2, rel=1e-12)


def test_one_hot_contraction_matches_single_asset(rng):
    x = rng.laplace(size=(300, 4))
    oracle = cokurtosis_tensor(x)
    single = cokurtosis_tensor(x[:, 2:3]).tensor[0, 0, 0, 0]
    one_hot = np.array([0.0, 0.0, 1.0, 0.0])
    assert oracle.contract(one_hot) == pytest.approx(single, rel=1e-10)


def test_tensor_fully_symmetric(rng):
    x = rng.laplace(size=(250, 4))
    tensor = cokurtosis_tensor(x).tensor
    scale = np.max(np.abs(tensor))
    quads = rng.integers(0, 4, size=(20, 4))
    for i, j, k, l in quads:
        reference = tensor[i, j, k, l]
        for perm in itertools.permutations((i, j, k, l)):
            assert abs(tensor[perm] - reference) <= 1e-10 * scale


def test_gaussian_scalar_cokurtosis_converges_to_zero():
    x = np.random.default_rng(5).standard_normal((1_000_000, 1))
    assert abs(cokurtosis_tensor(x).tensor[0, 0, 0, 0]) < 0.05


def test_tensor_size_guard(rng):
    with pytest.raises(TooLarge):
        cokurtosis_tensor(rng.standard_normal((50, 9)))
    # the cap is adjustable
    cokurtosis_tensor(rng.standard_normal((50, 9)), max_n=9)


def test_tensor_contraction_matches_projection_path(rng):
    x = np.random.default_rng(42).laplace(size=(300, 4))
    oracle = cokurtosis_tensor(x)
    v0 = population_covariance(x)
    for _ in range(100):
        w = rng.standard_normal(4)
        lhs = quartic_contraction_reference(oracle.tensor, w)
        rhs = portfolio_excess_kurtosis(w, x) * float(w @ v0 @ w) ** 2
        assert lhs == pytest.approx(rhs, rel=1e-8)


# ---------------------------------------------------------------------------
# scaling laws
# ---------------------------------------------------------------------------


@given(st.floats(0.1, 10.0), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_weight_scaling_laws(c, seed):
    rng = np.random.default_rng(seed)
    x = rng.laplace(size=(200, 3))
    w = rng.standard_normal(3)
    summary = estimate_moments(x)
    assert portfolio_variance(c * w, summary) == pytest.approx(
        c * c * portfolio_variance(w, summary), rel=1e-12
    )
    # normalized kurtosis is scale-free; the raw contraction scales as c^4
    assert portfolio_excess_kurtosis(c * w, x) == pytest.approx(
        portfolio_excess_kurtosis(w, x), rel=1e-9
    )
    oracle = cokurtosis_tensor(x)
    assert oracle.contract(c * w) == pytest.approx(
        c**4 * oracle.contract(w), rel=1e-9
    )
