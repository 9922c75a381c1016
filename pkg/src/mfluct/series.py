"""Daily price series ingestion and log-return construction.

Time is measured in trading days: consecutive rows of the input file are
consecutive trading days, and calendar gaps are ignored in all arithmetic.
Prices are assumed to be already deflated; no inflation adjustment happens
here. Missing or non-numeric rows are rejected rather than interpolated,
because silent imputation would bias every downstream tail estimate.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np

__all__ = [
    "DataError",
    "PriceSeries",
    "ReturnsSeries",
    "load_prices",
    "write_prices",
    "log_prices",
    "log_returns",
]

_DELIMITERS = (",", ";", "\t")


class DataError(ValueError):
    """Input data violates a documented precondition."""


@dataclass(frozen=True)
class PriceSeries:
    """Ordered daily closing prices on a trading-day clock.

    ``values[i]`` is the close of trading day ``i``. ``dates`` is optional
    calendar annotation; it never enters any computation.
    """

    values: np.ndarray
    dates: tuple[date, ...] | None = None
    label: str = ""

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1:
            raise DataError("prices must be one-dimensional")
        if arr.size < 2:
            raise DataError("price series needs at least 2 rows")
        bad = np.where(~np.isfinite(arr) | (arr <= 0.0))[0]
        if bad.size:
            raise DataError(f"non-positive or non-finite price at row {bad[0] + 1}")
        object.__setattr__(self, "values", arr)
        if self.dates is not None:
            dates = tuple(self.dates)
            if len(dates) != arr.size:
                raise DataError("dates and prices differ in length")
            for i in range(1, len(dates)):
                if dates[i] <= dates[i - 1]:
                    raise DataError(
                        f"dates must be strictly increasing (row {i + 1}:"
                        f" {dates[i]} after {dates[i - 1]})"
                    )
            object.__setattr__(self, "dates", dates)

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class ReturnsSeries:
    """Log returns at horizon ``scale_s``: values[t] = ln p(t+s) - ln p(t).

    ``source_dates``, when present, are the dates of the full price series the
    returns were built from (length = len(values) + scale_s), keeping the
    mapping between a return and the price window it spans.
    """

    values: np.ndarray
    scale_s: int
    source_label: str = ""
    source_dates: tuple[date, ...] | None = None

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1:
            raise DataError("returns must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise DataError("returns contain non-finite values")
        if self.scale_s < 1:
            raise DataError("scale_s must be a positive integer")
        object.__setattr__(self, "values", arr)
        if self.source_dates is not None:
            dates = tuple(self.source_dates)
            if len(dates) != arr.size + self.scale_s:
                raise DataError("source_dates must cover the full price series")
            object.__setattr__(self, "source_dates", dates)

    def __len__(self) -> int:
        return int(self.values.size)


def _detect_delimiter(header: str) -> str:
    counts = {d: header.count(d) for d in _DELIMITERS}
    best = max(counts, key=counts.get)
    return best if counts[best] > 0 else ","


def load_prices(
    path: str | Path,
    date_column: str = "date",
    price_column: str = "price",
    no_dates: bool = False,
) -> PriceSeries:
    """Load a delimiter-separated price file into a validated PriceSeries.

    The file needs a header row; the delimiter is auto-detected among comma,
    semicolon and tab. Dates must be ISO-8601 and strictly increasing. The
    row index, not the calendar, is the trading-day clock: gaps between
    consecutive dates are not filled.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"input file does not exist: {path}")
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if len(lines) < 2:
        raise DataError(f"{path}: fewer than 2 data rows")
    delim = _detect_delimiter(lines[0])
    header = [h.strip() for h in lines[0].split(delim)]
    if price_column not in header:
        raise DataError(f"{path}: missing price column {price_column!r} in header {header}")
    p_col = header.index(price_column)
    d_col: int | None = None
    if not no_dates:
        if date_column not in header:
            raise DataError(f"{path}: missing date column {date_column!r} in header {header}")
        d_col = header.index(date_column)

    prices: list[float] = []
    dates: list[date] = []
    for row_no, line in enumerate(lines[1:], start=1):
        fields = [f.strip() for f in line.split(delim)]
        if len(fields) <= p_col or (d_col is not None and len(fields) <= d_col):
            raise DataError(f"{path}: row {row_no} has too few columns")
        try:
            prices.append(float(fields[p_col]))
        except ValueError:
            raise DataError(f"{path}: non-numeric price at row {row_no}: {fields[p_col]!r}") from None
        if d_col is not None:
            try:
                dates.append(date.fromisoformat(fields[d_col]))
            except ValueError:
                raise DataError(f"{path}: bad ISO date at row {row_no}: {fields[d_col]!r}") from None

    try:
        return PriceSeries(
            values=np.asarray(prices),
            dates=tuple(dates) if dates else None,
            label=path.stem,
        )
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_prices(p: PriceSeries, path: str | Path, delimiter: str = ",") -> Path:
    """Write a PriceSeries in the standard input format, full double precision."""
    path = Path(path)
    lines = []
    if p.dates is not None:
        lines.append(delimiter.join(["date", "price"]))
        for d, v in zip(p.dates, p.values):
            lines.append(delimiter.join([d.isoformat(), repr(float(v))]))
    else:
        lines.append(delimiter.join(["index", "price"]))
        for i, v in enumerate(p.values):
            lines.append(delimiter.join([str(i), repr(float(v))]))
    path.write_text("\n".join(lines) + "\n")
    return path


def log_prices(p: PriceSeries) -> np.ndarray:
    """Elementwise natural log of the prices."""
    return np.log(p.values)


def log_returns(p: PriceSeries, s: int) -> ReturnsSeries:
    """Log returns at horizon s trading days: ln p(t+s) - ln p(t)."""
    if s < 1:
        raise DataError("scale s must be a positive integer")
    if s >= len(p):
        raise DataError(f"scale s={s} must be smaller than the series length {len(p)}")
    x = np.log(p.values)
    return ReturnsSeries(
        values=x[s:] - x[:-s],
        scale_s=int(s),
        source_label=p.label,
        source_dates=p.dates,
    )
