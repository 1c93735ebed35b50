"""Price-panel ingestion, returns computation and date bucketing.

Canonical CSV format: header row ``date,<ticker>,...``, ISO-8601 dates,
``.`` decimal separator, empty cell = missing price.  Prices are carried
forward from an asset's first valid observation, so a de-listed asset
returns exactly 0 from its last trading day to the end of the window and
interior gaps contribute a 0 return on the missing day.
"""

import csv
import datetime as dt
import json
import warnings as _warnings
from dataclasses import dataclass

import numpy as np

from .errors import DuplicateDate, EmptyBucket, ParseError, UnsortedDatesWarning


@dataclass(frozen=True)
class PricePanel:
    """Dated price matrix; NaN marks a non-trading cell."""

    dates: tuple[dt.date, ...]
    tickers: tuple[str, ...]
    prices: np.ndarray

    def __post_init__(self):
        if self.prices.shape != (len(self.dates), len(self.tickers)):
            raise ValueError("prices shape does not match dates/tickers")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise ValueError("dates must be strictly increasing")


@dataclass(frozen=True)
class ReturnsPanel:
    """Dated returns matrix; row t holds the return from date t-1 to t."""

    dates: tuple[dt.date, ...]
    tickers: tuple[str, ...]
    values: np.ndarray


@dataclass(frozen=True)
class BucketSpec:
    """Inclusive calendar window; membership is fixed on the last panel date
    strictly before ``start`` (resolved against the panel when None)."""

    start: dt.date
    end: dt.date
    membership_date: dt.date | None = None

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"bucket start {self.start} after end {self.end}")


def load_prices(path, format: str = "csv") -> PricePanel:
    """Read a canonical price CSV into a PricePanel.

    Unsorted dates are sorted with a warning; duplicate dates and malformed
    cells are errors (with row/column locations); all-NaN columns are
    dropped with a warning.
    """
    if format != "csv":
        raise ValueError(f"unsupported input format {format!r}")
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if len(header) < 2 or header[0].strip().lower() != "date":
            raise ParseError(f"{path}: header must be 'date,<ticker>,...'")
        tickers = tuple(name.strip() for name in header[1:])
        dates: list[dt.date] = []
        rows: list[list[float]] = []
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"{path}: row {row_no} has {len(row)} cells, expected {len(header)}"
                )
            try:
                date = dt.date.fromisoformat(row[0].strip())
            except ValueError:
                raise ParseError(
                    f"{path}: row {row_no}, column 1: bad date {row[0]!r}"
                ) from None
            values = []
            for col_no, cell in enumerate(row[1:], start=2):
                cell = cell.strip()
                if cell == "":
                    values.append(np.nan)
                    continue
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"{path}: row {row_no}, column {col_no}: bad number {cell!r}"
                    ) from None
            dates.append(date)
            rows.append(values)
    if not dates:
        raise ParseError(f"{path}: no data rows")
    if len(set(dates)) != len(dates):
        seen = set()
        dup = next(d for d in dates if d in seen or seen.add(d))
        raise DuplicateDate(f"{path}: date {dup.isoformat()} appears more than once")
    prices = np.asarray(rows, dtype=np.float64)
    order = np.argsort(np.array(dates, dtype="M8[D]"), kind="stable")
    if not np.array_equal(order, np.arange(len(dates))):
        _warnings.warn(
            UnsortedDatesWarning(f"{path}: dates out of order; sorting"), stacklevel=2
        )
        dates = [dates[i] for i in order]
        prices = prices[order]
    keep = ~np.all(np.isnan(prices), axis=0)
    if not np.all(keep):
        dropped = [t for t, k in zip(tickers, keep) if not k]
        _warnings.warn(f"{path}: dropping all-NaN columns {dropped}", stacklevel=2)
        tickers = tuple(t for t, k in zip(tickers, keep) if k)
        prices = prices[:, keep]
    if not tickers:
        raise ParseError(f"{path}: no usable columns")
    return PricePanel(dates=tuple(dates), tickers=tickers, prices=prices)


def write_panel(panel: PricePanel, path) -> None:
    """Write a PricePanel in the canonical CSV format (value round-trip exact)."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["date", *panel.tickers])
        for date, row in zip(panel.dates, panel.prices):
            writer.writerow(
                [date.isoformat()]
                + ["" if np.isnan(v) else repr(float(v)) for v in row]
            )


def _forward_filled(prices: np.ndarray) -> np.ndarray:
    """Carry each column forward from its first valid price; leading NaNs stay."""
    t, n = prices.shape
    last_valid = np.where(np.isnan(prices), -1, np.arange(t)[:, None])
    np.maximum.accumulate(last_valid, axis=0, out=last_valid)
    out = prices[np.maximum(last_valid, 0), np.arange(n)[None, :]]
    out[last_valid < 0] = np.nan
    return out


def compute_returns(panel: PricePanel, kind: str = "simple") -> ReturnsPanel:
    """Per-period returns with the carry-forward / de-listing convention.

    ``simple``: r_t = S_t / S_{t-1} - 1 (the default); ``log``:
    r_t = ln(S_t / S_{t-1}).  Returns before an asset's first valid price
    are NaN and are meant to be masked downstream.
    """
    if kind not in ("simple", "log"):
        raise ValueError(f"unknown returns kind {kind!r}")
    if len(panel.dates) < 2:
        raise EmptyBucket("need at least 2 dates to compute returns")
    filled = _forward_filled(panel.prices)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = filled[1:] / filled[:-1]
        values = ratio - 1.0 if kind == "simple" else np.log(ratio)
    return ReturnsPanel(
        dates=panel.dates[1:], tickers=panel.tickers, values=values
    )


def bucketize(
    panel: PricePanel, buckets: list[BucketSpec], kind: str = "simple"
) -> list[ReturnsPanel]:
    """Slice a panel into per-bucket returns with fixed membership.

    A bucket's asset set is the tickers with a valid price on the membership
    date (the last panel date strictly before the bucket start); no assets
    enter or leave within the bucket.  Returns cover the window from the
    membership date through the bucket end.
    """
    dates = np.array(panel.dates, dtype="M8[D]")
    out = []
    for spec in buckets:
        if spec.membership_date is not None:
            member_idx = int(np.searchsorted(dates, np.datetime64(spec.membership_date)))
            if member_idx >= len(dates) or panel.dates[member_idx] != spec.membership_date:
                raise EmptyBucket(f"membership date {spec.membership_date} not in panel")
        else:
            member_idx = int(np.searchsorted(dates, np.datetime64(spec.start))) - 1
            if member_idx < 0:
                raise EmptyBucket(f"no panel date before bucket start {spec.start}")
        end_idx = int(np.searchsorted(dates, np.datetime64(spec.end), side="right"))
        if end_idx - member_idx < 2:
            raise EmptyBucket(f"bucket {spec.start}..{spec.end} spans fewer than 2 dates")
        members = ~np.isnan(panel.prices[member_idx])
        if not np.any(members):
            raise EmptyBucket(f"no assets trading on membership date for {spec.start}")
        sub = PricePanel(
            dates=panel.dates[member_idx:end_idx],
            tickers=tuple(t for t, m in zip(panel.tickers, members) if m),
            prices=panel.prices[member_idx:end_idx][:, members],
        )
        out.append(compute_returns(sub, kind=kind))
    return out


def load_bucket_specs(path) -> list[BucketSpec]:
    """Read a JSON bucket-spec file: a list of {"start", "end"} ISO dates."""
    with open(path) as handle:
        raw = json.load(handle)
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{path}: expected a non-empty JSON list of buckets")
    specs = []
    for i, item in enumerate(raw):
        try:
            specs.append(
                BucketSpec(
                    start=dt.date.fromisoformat(item["start"]),
                    end=dt.date.fromisoformat(item["end"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}: bucket {i}: {exc}") from None
    return specs
