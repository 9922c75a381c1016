"""Descriptive statistics, empirical PDFs, and before/after split comparison.

Moment conventions, fixed here for the whole package: central moments are
population-normalized (divide by n), std = sqrt(m2), skewness = m3 / m2^1.5,
and kurtosis is the Pearson ratio m4 / m2^2, which is 3 for a Gaussian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date

import numpy as np

from mfluct.series import DataError, ReturnsSeries

__all__ = [
    "SummaryStats",
    "EmpiricalPdf",
    "SplitReport",
    "summary_stats",
    "empirical_pdf",
    "split_compare",
    "standardized_histogram",
]


@dataclass(frozen=True)
class SummaryStats:
    """Population-normalized moments of a sample.

    ``skewness`` and ``kurtosis`` are NaN when the sample variance is zero
    (undefined rather than an error).
    """

    mean: float
    std: float
    skewness: float
    kurtosis: float
    n: int


@dataclass(frozen=True)
class EmpiricalPdf:
    """Histogram density: densities[i] = counts[i] / (n_in * bin_width).

    Normalization is over in-range samples, so the density integrates to one
    exactly; samples outside the bin range are tallied in ``n_outside``.
    """

    bin_centers: np.ndarray
    densities: np.ndarray
    counts: np.ndarray
    standardized: bool
    n_samples: int
    n_outside: int

    @property
    def bin_width(self) -> float:
        return float(self.bin_centers[1] - self.bin_centers[0])


@dataclass(frozen=True)
class SplitReport:
    """Summary statistics strictly before and strictly after a split index.

    A return spans price indices [t, t+s]; returns whose window straddles the
    split are excluded and counted, never assigned to a side. Side PDFs are
    built only when a side has at least 100 returns.
    """

    t_star_index: int
    t_star_date: date | None
    before: SummaryStats
    after: SummaryStats
    excluded_count: int
    before_pdf: EmpiricalPdf | None
    after_pdf: EmpiricalPdf | None


def _values(sample) -> np.ndarray:
    return np.asarray(getattr(sample, "values", sample), dtype=float)


def summary_stats(r) -> SummaryStats:
    """Mean, std, skewness and Pearson kurtosis of a return sample."""
    v = _values(r)
    if v.size < 2:
        raise DataError("summary statistics need at least 2 samples")
    mean = float(v.mean())
    d = v - mean
    m2 = float((d * d).mean())
    if m2 == 0.0:
        return SummaryStats(mean=mean, std=0.0, skewness=math.nan,
                            kurtosis=math.nan, n=int(v.size))
    m3 = float((d * d * d).mean())
    m4 = float((d * d * d * d).mean())
    return SummaryStats(
        mean=mean,
        std=math.sqrt(m2),
        skewness=m3 / m2**1.5,
        kurtosis=m4 / (m2 * m2),
        n=int(v.size),
    )


def standardized_histogram(z, bins: int, half_range: float = 6.0):
    """Equal-width histogram of already-standardized data over +-half_range.

    Returns (centers, counts, densities, n_outside); densities are normalized
    over the in-range count so they integrate to one exactly.
    """
    z = np.asarray(z, dtype=float)
    edges = np.linspace(-half_range, half_range, bins + 1)
    counts, _ = np.histogram(z, bins=edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    width = edges[1] - edges[0]
    n_in = int(counts.sum())
    if n_in == 0:
        raise DataError("no samples fall inside the histogram range")
    densities = counts / (n_in * width)
    return centers, counts, densities, int(z.size - n_in)


def empirical_pdf(samples, bins: int = 61, standardize: bool = True) -> EmpiricalPdf:
    """Empirical density of a sample, optionally standardized to mean 0, var 1.

    Standardized histograms span +-6 standard deviations; raw histograms span
    the data range.
    """
    v = _values(samples)
    if v.size < 100:
        raise DataError(f"empirical pdf needs at least 100 samples, got {v.size}")
    if bins < 2:
        raise DataError("bins must be >= 2")
    if standardize:
        std = float(v.std())
        if std == 0.0:
            raise DataError("cannot standardize a zero-variance sample")
        z = (v - v.mean()) / std
        centers, counts, densities, n_out = standardized_histogram(z, bins)
    else:
        lo, hi = float(v.min()), float(v.max())
        if lo == hi:
            hi = lo + 1.0
        edges = np.linspace(lo, hi, bins + 1)
        counts, _ = np.histogram(v, bins=edges)
        centers = 0.5 * (edges[:-1] + edges[1:])
        width = edges[1] - edges[0]
        densities = counts / (counts.sum() * width)
        n_out = 0
    return EmpiricalPdf(
        bin_centers=centers,
        densities=densities,
        counts=counts.astype(int),
        standardized=bool(standardize),
        n_samples=int(v.size),
        n_outside=n_out,
    )


def _resolve_split_index(r: ReturnsSeries, t_star) -> int:
    if isinstance(t_star, (int, np.integer)):
        return int(t_star)
    if isinstance(t_star, str):
        t_star = date.fromisoformat(t_star)
    if isinstance(t_star, date):
        if r.source_dates is None:
            raise DataError("date split requires a dated series")
        for i, d in enumerate(r.source_dates):
            if d >= t_star:
                return i
        raise DataError(f"split date {t_star} is after the series end")
    raise DataError(f"unsupported split specifier: {t_star!r}")


def split_compare(r: ReturnsSeries, t_star) -> SplitReport:
    """Compare return statistics strictly before and strictly after a split.

    ``t_star`` is a 0-based price index, an ISO date string, or a date; a date
    resolves to the first trading day at or after it. Each side must keep at
    least 30 returns.
    """
    s = r.scale_s
    n_prices = len(r) + s
    i_star = _resolve_split_index(r, t_star)
    if i_star <= 0 or i_star >= n_prices - 1:
        raise DataError(f"split index {i_star} is at or outside the series boundaries")
    before = r.values[: max(i_star - s + 1, 0)]
    after = r.values[i_star:]
    if before.size < 30 or after.size < 30:
        raise DataError(
            f"split leaves too few returns (before={before.size}, after={after.size}, need 30)"
        )
    excluded = len(r) - before.size - after.size
    t_star_date = r.source_dates[i_star] if r.source_dates is not None else None
    return SplitReport(
        t_star_index=i_star,
        t_star_date=t_star_date,
        before=summary_stats(before),
        after=summary_stats(after),
        excluded_count=int(excluded),
        before_pdf=empirical_pdf(before) if before.size >= 100 else None,
        after_pdf=empirical_pdf(after) if after.size >= 100 else None,
    )
