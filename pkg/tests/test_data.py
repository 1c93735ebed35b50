"""CSV ingestion, returns conventions, and date bucketing."""

import datetime as dt
import json

import numpy as np
import pytest

from tailfolio.data import (
    BucketSpec,
    PricePanel,
    bucketize,
    compute_returns,
    load_bucket_specs,
    load_prices,
    write_panel,
)
from tailfolio.errors import (
    DuplicateDate,
    EmptyBucket,
    ParseError,
    UnsortedDatesWarning,
)


def _write(tmp_path, text, name="prices.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


# ---------------------------------------------------------------------------
# load_prices / write_panel
# ---------------------------------------------------------------------------


def test_load_small_csv(tmp_path):
    path = _write(
        tmp_path,
        "date,AAA,BBB\n2020-01-01,100,50\n2020-01-02,101,49\n2020-01-03,102,48\n",
    )
    panel = load_prices(path)
    assert panel.tickers == ("AAA", "BBB")
    assert panel.prices.shape == (3, 2)
    assert panel.dates[0] == dt.date(2020, 1, 1)


def test_duplicate_date_is_an_error(tmp_path):
    path = _write(
        tmp_path, "date,AAA\n2020-01-01,100\n2020-01-02,101\n2020-01-02,102\n"
    )
    with pytest.raises(DuplicateDate, match="2020-01-02"):
        load_prices(path)


def test_blank_cell_becomes_nan(tmp_path):
    path = _write(tmp_path, "date,AAA,BBB\n2020-01-01,100,\n2020-01-02,101,49\n")
    panel = load_prices(path)
    assert np.isnan(panel.prices[0, 1])
    assert panel.prices[1, 1] == 49.0


def test_unsorted_dates_autosort_with_warning(tmp_path):
    path = _write(
        tmp_path, "date,AAA\n2020-01-03,103\n2020-01-01,101\n2020-01-02,102\n"
    )
    with pytest.warns(UnsortedDatesWarning):
        panel = load_prices(path)
    assert [d.day for d in panel.dates] == [1, 2, 3]
    assert list(panel.prices[:, 0]) == [101.0, 102.0, 103.0]


def test_parse_errors_carry_location(tmp_path):
    bad_number = _write(tmp_path, "date,AAA\n2020-01-01,abc\n", "bad1.csv")
    with pytest.raises(ParseError, match="row 2, column 2"):
        load_prices(bad_number)
    bad_date = _write(tmp_path, "date,AAA\nnot-a-date,1\n", "bad2.csv")
    with pytest.raises(ParseError, match="row 2, column 1"):
        load_prices(bad_date)
    bad_header = _write(tmp_path, "foo,AAA\n2020-01-01,1\n", "bad3.csv")
    with pytest.raises(ParseError, match="header"):
        load_prices(bad_header)


def test_round_trip_is_value_exact(tmp_path, rng):
    dates = tuple(dt.date(2021, 1, 1) + dt.timedelta(days=i) for i in range(10))
    prices = 100.0 * np.exp(rng.standard_normal((10, 3)) * 0.02)
    prices[3, 1] = np.nan
    panel = PricePanel(dates=dates, tickers=("A", "B", "C"), prices=prices)
    path = tmp_path / "roundtrip.csv"
    write_panel(panel, path)
    loaded = load_prices(path)
    assert loaded.dates == panel.dates
    assert loaded.tickers == panel.tickers
    np.testing.assert_array_equal(loaded.prices, panel.prices)
    # a second round trip is byte-identical
    path2 = tmp_path / "roundtrip2.csv"
    write_panel(loaded, path2)
    assert path.read_text() == path2.read_text()


# ---------------------------------------------------------------------------
# compute_returns
# ---------------------------------------------------------------------------


def _panel(price_rows, tickers=("AAA",)):
    dates = tuple(
        dt.date(2020, 1, 1) + dt.timedelta(days=i) for i in range(len(price_rows))
    )
    return PricePanel(
        dates=dates,
        tickers=tickers,
        prices=np.asarray(price_rows, dtype=np.float64),
    )


def test_simple_return_example():
    rp = compute_returns(_panel([[100.0], [110.0]]))
    assert rp.values[0, 0] == pytest.approx(0.10, rel=1e-15)
    assert rp.dates == (dt.date(2020, 1, 2),)


def test_constant_prices_give_zero_returns():
    rp = compute_returns(_panel([[50.0]] * 5))
    assert np.all(rp.values == 0.0)


def test_delisting_returns_zero_until_panel_end():
    rp = compute_returns(_panel([[100.0], [110.0], [np.nan], [np.nan]]))
    assert rp.values[0, 0] == pytest.approx(0.10)
    assert rp.values[1, 0] == 0.0
    assert rp.values[2, 0] == 0.0
    # zero returns contribute exactly zero variance after the last trade
    assert float(np.var(rp.values[1:, 0])) == 0.0


def test_interior_gap_carries_price_forward():
    rp = compute_returns(_panel([[100.0], [np.nan], [120.0]]))
    assert rp.values[0, 0] == 0.0
    assert rp.values[1, 0] == pytest.approx(0.20)


def test_leading_nans_stay_nan():
    rp = compute_returns(_panel([[np.nan], [100.0], [110.0]]))
    assert np.isnan(rp.values[0, 0])
    assert rp.values[1, 0] == pytest.approx(0.10)


def test_log_returns():
    rp = compute_returns(_panel([[100.0], [110.0]]), kind="log")
    assert rp.values[0, 0] == pytest.approx(np.log(1.1), rel=1e-15)


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        compute_returns(_panel([[1.0], [2.0]]), kind="weird")


# ---------------------------------------------------------------------------
# bucketize
# ---------------------------------------------------------------------------


def _long_panel():
    dates = tuple(dt.date(2020, 1, 1) + dt.timedelta(days=i) for i in range(20))
    prices = np.tile(np.linspace(100.0, 119.0, 20)[:, None], (1, 3))
    # asset C starts trading on day 6 only
    prices[:5, 2] = np.nan
    return PricePanel(dates=dates, tickers=("A", "B", "C"), prices=prices)


def test_membership_excludes_late_listings():
    panel = _long_panel()
    spec = BucketSpec(start=dt.date(2020, 1, 3), end=dt.date(2020, 1, 10))
    (rp,) = bucketize(panel, [spec])
    # C has no price on the membership date (2020-01-02)
    assert rp.tickers == ("A", "B")
    assert rp.dates[0] == dt.date(2020, 1, 3)
    assert rp.dates[-1] == dt.date(2020, 1, 10)


def test_full_span_bucket_keeps_all_listed_assets():
    panel = _long_panel()
    spec = BucketSpec(start=dt.date(2020, 1, 10), end=dt.date(2020, 1, 20))
    (rp,) = bucketize(panel, [spec])
    assert rp.tickers == ("A", "B", "C")
    assert rp.values.shape[0] == 11


def test_disjoint_buckets_have_disjoint_dates():
    panel = _long_panel()
    first, second = bucketize(
        panel,
        [
            BucketSpec(start=dt.date(2020, 1, 3), end=dt.date(2020, 1, 8)),
            BucketSpec(start=dt.date(2020, 1, 12), end=dt.date(2020, 1, 18)),
        ],
    )
    assert set(first.dates).isdisjoint(second.dates)


def test_bucket_needs_a_prior_membership_date():
    panel = _long_panel()
    with pytest.raises(EmptyBucket):
        bucketize(panel, [BucketSpec(start=dt.date(2020, 1, 1), end=dt.date(2020, 1, 5))])


def test_bucket_spec_validation():
    with pytest.raises(ValueError):
        BucketSpec(start=dt.date(2020, 2, 1), end=dt.date(2020, 1, 1))


def test_load_bucket_specs(tmp_path):
    path = tmp_path / "buckets.json"
    path.write_text(
        json.dumps(
            [
                {"start": "2020-01-03", "end": "2020-01-08"},
                {"start": "2020-01-12", "end": "2020-01-18"},
            ]
        )
    )
    specs = load_bucket_specs(path)
    assert len(specs) == 2
    assert specs[0].start == dt.date(2020, 1, 3)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([{"start": "2020-01-03"}]))
    with pytest.raises(ParseError):
        load_bucket_specs(bad)
