"""Intermittency across scales and through time: scans, crossover, sliding windows.

For each scale s the series is detrended at that scale and lambda2 estimated
from the increments, either by the PDF fit or by the kurtosis moment
estimator; sigma(s) is always the plain standard deviation of the raw s-day
log returns (not the detrended increments). A two-segment continuous fit of
lambda2 (or sigma) against ln s locates the crossover scale, and a sliding
window tracks lambda2 through time Fig-4 style.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mfluct.castaing import FitError, fit_lambda2_pdf, lambda2_from_kurtosis
from mfluct.detrend import DetrendConfig, detrended_increments
from mfluct.series import DataError, PriceSeries, log_prices, log_returns
from mfluct.stats import summary_stats

__all__ = [
    "DEFAULT_SCAN_SCALES",
    "FitOptions",
    "ScaleScan",
    "WindowedLambda",
    "CrossoverFit",
    "scan_scales",
    "fit_crossover",
    "sliding_lambda2",
    "lag_covariance",
]

# covers the displayed 4..20 day range plus the short end around the
# crossover; s=1 is kept for sigma(s) but always flags for lambda2
DEFAULT_SCAN_SCALES = (1, 2, 3, 4, 6, 8, 10, 12, 16, 20)

# with ~150-point windows a histogram fit is unstable, so sliding windows
# default to the moment estimator; scans have whole-series statistics and
# default to the pdf fit
DEFAULT_SCAN_METHOD = "pdf"
DEFAULT_WINDOW_METHOD = "kurtosis"

WEAK_IMPROVEMENT = 0.05  # crossover flagged weak below 5% SSE improvement


@dataclass(frozen=True)
class FitOptions:
    """How lambda2 is estimated from an increment sample."""

    method: str = DEFAULT_SCAN_METHOD  # "pdf" | "kurtosis"
    bins: int = 61
    quad_order: int = 40

    def __post_init__(self) -> None:
        if self.method not in ("pdf", "kurtosis"):
            raise DataError(f"unknown fit method {self.method!r}")


@dataclass(frozen=True)
class ScaleScan:
    """lambda2, sigma and fit diagnostics per scale.

    Failed or sub-Gaussian scales hold NaN in ``lambda2s`` with the reason in
    ``flags``; the scan itself never aborts on a single scale.
    """

    scales: np.ndarray
    lambda2s: np.ndarray
    sigmas: np.ndarray
    fit_residuals: np.ndarray
    flags: tuple[str, ...]
    method: str

    def __post_init__(self) -> None:
        s = np.asarray(self.scales, dtype=int)
        if s.size and np.any(np.diff(s) <= 0):
            raise DataError("scales must be strictly increasing")
        for name in ("lambda2s", "sigmas", "fit_residuals"):
            if np.asarray(getattr(self, name)).size != s.size:
                raise DataError(f"{name} must align with scales")
        if len(self.flags) != s.size:
            raise DataError("flags must align with scales")


@dataclass(frozen=True)
class WindowedLambda:
    """lambda2 per sliding window; centers are 0-based trading-day indices.

    Window c covers prices [c - window_len//2, c - window_len//2 + window_len),
    always exactly window_len points; edge positions that cannot fit a full
    window are omitted, never truncated.
    """

    centers: np.ndarray
    lambda2s: np.ndarray
    flags: tuple[str, ...]
    window_len: int
    scale_s: int
    method: str

    def __post_init__(self) -> None:
        c = np.asarray(self.centers, dtype=int)
        if c.size and np.any(np.diff(c) <= 0):
            raise DataError("window centers must be strictly increasing")


@dataclass(frozen=True)
class CrossoverFit:
    """Two-segment continuous fit of a quantity against ln s.

    ``weak`` is set when the break improves the SSE of a single line by less
    than WEAK_IMPROVEMENT, i.e. the data do not really support a crossover.
    """

    breakpoint_scale: float
    left_slope: float
    right_slope: float
    sse: float
    sse_single: float
    weak: bool
    quantity: str


def _estimate_lambda2(values: np.ndarray, options: FitOptions):
    """Return (lambda2, residual, flag) for one increment sample."""
    if options.method == "pdf":
        fit = fit_lambda2_pdf(values, bins=options.bins, quad_order=options.quad_order)
        return fit.params.lambda2, fit.residual, ""
    stats = summary_stats(values)
    if math.isnan(stats.kurtosis):
        return math.nan, math.nan, "zero-variance"
    lam2 = lambda2_from_kurtosis(stats.kurtosis)
    if math.isnan(lam2):
        return math.nan, math.nan, "sub-gaussian"
    return lam2, math.nan, ""


def scan_scales(p: PriceSeries, scales=DEFAULT_SCAN_SCALES,
                options: FitOptions = FitOptions()) -> ScaleScan:
    """Detrend and fit lambda2 at each scale; sigma(s) from raw returns.

    Per-scale failures (too few samples, zero variance, sub-Gaussian
    kurtosis, optimizer trouble) are recorded in place as flagged NaN
    entries. A pdf-fit bracket failure stores the kurtosis fallback value
    with an explanatory flag.
    """
    scales = tuple(int(s) for s in scales)
    if any(s < 1 for s in scales) or any(b <= a for a, b in zip(scales, scales[1:])):
        raise DataError("scales must be strictly increasing positive integers")
    if max(scales) > len(p) // 4:
        raise DataError(
            f"max scale {max(scales)} too large for series of length {len(p)}"
            " (need max(scales) <= length/4 for stable fits)"
        )
    x = log_prices(p)
    lambda2s, sigmas, residuals, flags = [], [], [], []
    for s in scales:
        sigmas.append(float(log_returns(p, s).values.std()))
        try:
            incr = detrended_increments(x, DetrendConfig(scale_s=s))
            lam2, resid, flag = _estimate_lambda2(incr.values, options)
        except FitError as exc:
            lam2, resid, flag = exc.fallback_lambda2, math.nan, f"pdf-bracket-failure:{exc}"
        except DataError as exc:
            lam2, resid, flag = math.nan, math.nan, f"error:{exc}"
        lambda2s.append(lam2)
        residuals.append(resid)
        flags.append(flag)
    return ScaleScan(
        scales=np.asarray(scales, dtype=int),
        lambda2s=np.asarray(lambda2s),
        sigmas=np.asarray(sigmas),
        fit_residuals=np.asarray(residuals),
        flags=tuple(flags),
        method=options.method,
    )


def _hinge_sse(u: np.ndarray, y: np.ndarray, u_c: float):
    """Least squares for a continuous two-segment line with knot at u_c."""
    left = np.minimum(u - u_c, 0.0)
    right = np.maximum(u - u_c, 0.0)
    design = np.column_stack([np.ones_like(u), left, right])
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return float(resid @ resid), coef


def fit_crossover(scan: ScaleScan, quantity: str = "lambda2") -> CrossoverFit:
    """Locate the scale where the trend of lambda2 (or sigma) vs ln s breaks.

    The breakpoint is chosen among the interior scanned scales by minimizing
    the total SSE of a continuous two-segment line in ln s; the single-line
    fit is nested in the model, so the reported SSE can never exceed it.
    """
    if quantity not in ("lambda2", "sigma"):
        raise DataError(f"unknown crossover quantity {quantity!r}")
    y_all = scan.lambda2s if quantity == "lambda2" else scan.sigmas
    valid = np.isfinite(np.asarray(y_all, dtype=float))
    if valid.sum() < 5:
        raise DataError(f"crossover fit needs >= 5 valid scales, got {int(valid.sum())}")
    s = scan.scales[valid].astype(float)
    y = np.asarray(y_all, dtype=float)[valid]
    u = np.log(s)

    ones = np.column_stack([np.ones_like(u), u])
    coef, _, _, _ = np.linalg.lstsq(ones, y, rcond=None)
    resid = y - ones @ coef
    sse_single = float(resid @ resid)

    best = None
    for i in range(1, s.size - 1):
        sse, coefs = _hinge_sse(u, y, u[i])
        if best is None or sse < best[0] - 1e-15:
            best = (sse, s[i], coefs)
    sse, break_scale, coefs = best
    if sse_single <= 1e-16:
        weak = True  # a single line already explains everything
    else:
        weak = (1.0 - sse / sse_single) < WEAK_IMPROVEMENT
    return CrossoverFit(
        breakpoint_scale=float(break_scale),
        left_slope=float(coefs[1]),
        right_slope=float(coefs[2]),
        sse=sse,
        sse_single=sse_single,
        weak=weak,
        quantity=quantity,
    )


def sliding_lambda2(p: PriceSeries, scale_s: int, window_len: int = 150,
                    step: int = 5,
                    options: FitOptions = FitOptions(method=DEFAULT_WINDOW_METHOD),
                    ) -> WindowedLambda:
    """Track lambda2 through sliding windows of exactly window_len points.

    Each admissible center c (stepping by ``step``) detrends and fits only the
    prices inside its window. Windows that would stick out past either edge
    are omitted. Length or method problems raise here, at construction;
    per-window statistical failures (for example sub-Gaussian kurtosis) are
    flagged NaN entries.
    """
    n = len(p)
    if scale_s < 1 or step < 1:
        raise DataError("scale_s and step must be positive")
    if window_len < 4 * scale_s:
        raise DataError(f"window_len {window_len} must be >= 4 * scale_s = {4 * scale_s}")
    if window_len > n:
        raise DataError(f"window_len {window_len} exceeds series length {n}")
    if options.method == "pdf":
        n_incr = (window_len // scale_s - 1) * scale_s
        if n_incr < 500:
            raise DataError(
                f"pdf fit needs >= 500 increments per window, a {window_len}-point"
                f" window yields {n_incr}; use the kurtosis method or a longer window"
            )

    x = log_prices(p)
    half = window_len // 2
    first, last = half, n - window_len + half
    cfg = DetrendConfig(scale_s=scale_s)
    centers, lambda2s, flags = [], [], []
    for c in range(first, last + 1, step):
        lo = c - half
        try:
            incr = detrended_increments(x[lo:lo + window_len], cfg)
            lam2, _, flag = _estimate_lambda2(incr.values, options)
        except FitError as exc:
            lam2, flag = exc.fallback_lambda2, f"pdf-bracket-failure:{exc}"
        except DataError as exc:
            lam2, flag = math.nan, f"error:{exc}"
        centers.append(c)
        lambda2s.append(lam2)
        flags.append(flag)
    return WindowedLambda(
        centers=np.asarray(centers, dtype=int),
        lambda2s=np.asarray(lambda2s),
        flags=tuple(flags),
        window_len=int(window_len),
        scale_s=int(scale_s),
        method=options.method,
    )


def lag_covariance(values, tau: int, center: bool = True) -> float:
    """Auxiliary diagnostic: covariance of a series with its tau-day lag.

    With ``center`` false this is the plain mean product <r(t+tau) r(t)>.
    """
    v = np.asarray(getattr(values, "values", values), dtype=float)
    if tau < 0 or tau >= v.size:
        raise DataError(f"lag tau={tau} outside the series")
    a = v[tau:]
    b = v[: v.size - tau] if tau > 0 else v
    if center:
        a = a - a.mean()
        b = b - b.mean()
    return float((a * b).mean())
