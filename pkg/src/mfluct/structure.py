"""Structure functions of detrended increments and mono/multifractal labeling.

The q-th order structure function at lag l is the mean absolute moment

    m(q, l) = < |D(t + l) - D(t)|^q >

over valid t of the increment sequence D. Power-law scaling m(q, l) ~ l^{xi_q}
defines the exponents xi_q; a single Hurst-like exponent H with xi_q = q H
means monofractal scaling, while curvature of xi_q in q is the multifractal
signature. Normalizing by the number of valid pairs (a mean, not a raw sum)
only shifts the prefactor and never the exponents.

Valid t, defined here once: when the increments carry window provenance, a
pair (t, t + l) is valid only if both increments come from the same
detrending window. Inside one window the fitted line cancels exactly in the
lag difference, so m(q, l) probes the raw double difference

    x(t+l+s) - x(t+l) - x(t+s) + x(t)

free of fit noise; pairs that straddle window boundaries would instead pick
up the slope jump between neighboring fits, which fattens the tails of D at
small l and visibly corrupts the q > 2 moments. Same-window pairing leaves
s - l pairs per window, which is why the count normalization matters, and
makes cells with l >= s empty (excluded with a flag, never an error). Plain
arrays without provenance are treated as one window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mfluct.series import DataError

__all__ = [
    "DEFAULT_Q_VALUES",
    "DEFAULT_LAGS",
    "StructureFunctionScan",
    "structure_functions",
    "classify_fractality",
    "fit_scaling_exponents",
]

DEFAULT_Q_VALUES = (0.5, 1.0, 1.5, 2.0, 3.0)
DEFAULT_LAGS = (1, 2, 3, 4, 6, 8, 12, 16, 24, 32)
MAX_Q = 6.0  # beyond q=6 fat-tail moments are dominated by single extremes
MONOFRACTAL_THRESHOLD = 0.1


@dataclass(frozen=True)
class StructureFunctionScan:
    """m(q, l) grid plus fitted exponents.

    Empty or nonpositive cells hold NaN in ``moments`` and are excluded from
    the fit; ``included[qi, li]`` marks the cells that entered it (positive
    moment, lag inside the fit range). ``nonlinearity`` is
    max_q |xi_q - q * hurst_H|, the distance from single-exponent scaling.
    """

    q_values: np.ndarray
    lags: np.ndarray
    moments: np.ndarray
    included: np.ndarray
    xi: np.ndarray
    xi_stderr: np.ndarray
    hurst_H: float
    nonlinearity: float
    fit_lag_range: tuple[int, int]


def fit_scaling_exponents(moments: np.ndarray, lags: np.ndarray,
                          q_values: np.ndarray, included: np.ndarray):
    """Fit xi_q (slope of ln m vs ln l) per q and H through the origin.

    Returns (xi, xi_stderr, hurst_H, nonlinearity). The H regression weights
    each xi_q by its inverse squared slope error when every error is
    available, and is taken through the origin since xi_0 = 0 identically.
    """
    n_q = q_values.size
    xi = np.full(n_q, math.nan)
    stderr = np.full(n_q, math.nan)
    for qi in range(n_q):
        sel = included[qi]
        if sel.sum() < 2:
            continue
        lx = np.log(lags[sel].astype(float))
        ly = np.log(moments[qi, sel])
        lx_c = lx - lx.mean()
        sxx = float(lx_c @ lx_c)
        slope = float(lx_c @ ly) / sxx
        xi[qi] = slope
        if sel.sum() > 2:
            resid = ly - (ly.mean() + slope * lx_c)
            stderr[qi] = math.sqrt(float(resid @ resid) / (sel.sum() - 2) / sxx)

    ok = np.isfinite(xi)
    if not np.any(ok):
        raise DataError("no scaling exponent could be fitted")
    w = np.ones(n_q)
    if np.all(np.isfinite(stderr[ok])) and np.all(stderr[ok] > 0.0):
        w[ok] = 1.0 / stderr[ok] ** 2
    qs, xs, ws = q_values[ok], xi[ok], w[ok]
    hurst = float((ws * qs * xs).sum() / (ws * qs * qs).sum())
    nonlinearity = float(np.max(np.abs(xs - qs * hurst)))
    return xi, stderr, hurst, nonlinearity


def _pair_mask(t_idx: np.ndarray, scale_s: int | None, lag: int) -> np.ndarray:
    """Valid source positions for lag pairs (see module docstring)."""
    lhs = t_idx[:-lag]
    consecutive = (t_idx[lag:] - lhs) == lag
    if scale_s is None:
        return consecutive
    return consecutive & (lhs // scale_s == t_idx[lag:] // scale_s)


def structure_functions(incr, q_values=DEFAULT_Q_VALUES, lags=None,
                        fit_lag_range: tuple[int, int] | None = None,
                        ) -> StructureFunctionScan:
    """Compute m(q, l) over valid pairs and fit the scaling exponents xi_q.

    ``incr`` is an IncrementSet (same-window pairing, see module docstring)
    or a plain 1-d sequence (single-window pairing). The default fit range
    [2, n/10] skips l = 1 discreteness and large-lag noise; it is clipped
    further by empty cells, e.g. lags at or above the increment scale.
    """
    v = np.asarray(getattr(incr, "values", incr), dtype=float)
    scale_s = getattr(incr, "scale_s", None)
    t_idx = getattr(incr, "t_indices", None)
    if t_idx is None:
        t_idx = np.arange(v.size)
    t_idx = np.asarray(t_idx, dtype=int)

    n = v.size
    q_values = np.asarray(tuple(q_values), dtype=float)
    if np.any(q_values <= 0.0) or np.any(q_values > MAX_Q):
        raise DataError(f"q values must lie in (0, {MAX_Q}]")
    if lags is None:
        lags = tuple(l for l in DEFAULT_LAGS if l < n / 4)
    lags = np.asarray(tuple(int(l) for l in lags), dtype=int)
    if lags.size == 0 or np.any(lags < 1) or np.any(np.diff(lags) <= 0):
        raise DataError("lags must be strictly increasing positive integers")
    if lags.max() >= n / 4:
        raise DataError(f"max lag {lags.max()} too large for {n} increments (need < n/4)")
    if not np.any(v != 0.0):
        raise DataError("increments are identically zero")

    if fit_lag_range is None:
        fit_lag_range = (2, max(4, n // 10))
    lo, hi = fit_lag_range

    moments = np.full((q_values.size, lags.size), math.nan)
    for li, lag in enumerate(lags):
        mask = _pair_mask(t_idx, scale_s, int(lag))
        if not np.any(mask):
            continue
        d = np.abs(v[lag:][mask] - v[:-lag][mask])
        for qi, q in enumerate(q_values):
            moments[qi, li] = float((d**q).mean())

    in_range = (lags >= lo) & (lags <= hi)
    with np.errstate(invalid="ignore"):
        included = np.isfinite(moments) & (moments > 0.0) & in_range[None, :]

    xi, stderr, hurst, nonlinearity = fit_scaling_exponents(
        moments, lags, q_values, included)

    return StructureFunctionScan(
        q_values=q_values,
        lags=lags,
        moments=moments,
        included=included,
        xi=xi,
        xi_stderr=stderr,
        hurst_H=hurst,
        nonlinearity=nonlinearity,
        fit_lag_range=(int(lo), int(hi)),
    )


def classify_fractality(scan: StructureFunctionScan,
                        threshold: float = MONOFRACTAL_THRESHOLD) -> str:
    """Label a scan monofractal or multifractal.

    Monofractal iff nonlinearity <= threshold; the boundary is inclusive, so
    a scan exactly at the threshold still counts as monofractal. The default
    threshold is a documented heuristic, not a significance level.
    """
    if threshold < 0.0:
        raise DataError("threshold must be nonnegative")
    return "monofractal" if scan.nonlinearity <= threshold else "multifractal"
