"""Local linear detrending of log prices and lag-s increments of the residuals.

The log price x(t) is fit, window by window, to a straight line in t; a line
in log price is an exponential trend of the raw index, and the residual x*(t)
is what the trend leaves behind. Windows have length 2s and advance by stride
s, so consecutive windows overlap by s points. Increments are then taken at
lag s inside each window, using that window's residuals for both endpoints,
which makes the construction exactly invariant under any global affine term
added to x(t).

Index convention, written down once to stop off-by-one drift: with 1-based
time t, window k = 1, 2, ... covers t in [1 + s(k-1), s(k+1)], and its
increments are x*(t+s) - x*(t) for t in [1 + s(k-1), s k]. Arrays in code are
0-based, so window k occupies offsets s(k-1) .. s(k+1) - 1 and its increment
source offsets are s(k-1) .. s k - 1. Fits are computed against 1-based t so
reported slopes and intercepts match the convention above.

Note the degenerate corner: at s = 1 every window holds exactly two points,
the fitted line interpolates them, and all residuals (hence all increments)
are identically zero. Scale scans flag s = 1 rather than estimate from it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from mfluct.series import DataError

__all__ = [
    "DetrendConfig",
    "WindowFit",
    "IncrementSet",
    "piecewise_linear_residuals",
    "detrended_increments",
]


@dataclass(frozen=True)
class DetrendConfig:
    """Detrending layout: increment lag / half-window length, tail policy."""

    scale_s: int
    drop_partial_tail: bool = True

    def __post_init__(self) -> None:
        if self.scale_s < 1:
            raise DataError("scale_s must be >= 1")


@dataclass(frozen=True)
class WindowFit:
    """Least-squares line for one detrending window.

    ``slope`` and ``intercept`` are in 1-based t units; ``start`` is the
    0-based offset of the window's first point.
    """

    k: int
    start: int
    slope: float
    intercept: float
    residuals: np.ndarray


@dataclass(frozen=True)
class IncrementSet:
    """Detrended increments at scale s, concatenated over windows in k order.

    ``t_indices[i]`` is the 0-based source offset t of ``values[i]``, i.e.
    values[i] = x*(t + s) - x*(t) with both endpoints inside window
    k = t_indices[i] // s + 1. Without a partial tail the length is exactly
    window_count * scale_s.
    """

    values: np.ndarray
    scale_s: int
    window_count: int
    t_indices: np.ndarray
    has_partial_tail: bool = False

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        idx = np.asarray(self.t_indices, dtype=int)
        if vals.shape != idx.shape:
            raise DataError("values and t_indices must align")
        if not np.all(np.isfinite(vals)):
            raise DataError("increments contain non-finite values")
        if not self.has_partial_tail and vals.size != self.window_count * self.scale_s:
            raise DataError("increment count must equal window_count * scale_s")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "t_indices", idx)

    def __len__(self) -> int:
        return int(self.values.size)


def _full_window_count(n: int, s: int) -> int:
    # window k needs s(k+1) <= n in 1-based coordinates
    return n // s - 1


def piecewise_linear_residuals(x, cfg: DetrendConfig) -> list[WindowFit]:
    """Fit a line to every 2s-point window of x and return the residuals.

    Fits use the centered formulation (t minus its window mean) so long
    windows do not lose precision to cancellation. Windows are independent;
    a trailing segment shorter than 2s is dropped unless
    ``cfg.drop_partial_tail`` is false, in which case it is fit as a final
    shorter window (at least 2 points).
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    s = cfg.scale_s
    if n < 2 * s:
        raise DataError(f"series of length {n} is shorter than one window of 2s={2 * s}")

    n_full = _full_window_count(n, s)
    starts = s * np.arange(n_full)
    cols = np.arange(2 * s)
    idx = starts[:, None] + cols[None, :]
    y = x[idx]
    tt = idx + 1.0  # 1-based time
    t_c = tt - tt.mean(axis=1, keepdims=True)
    slope = (t_c * y).sum(axis=1) / (t_c * t_c).sum(axis=1)
    intercept = y.mean(axis=1) - slope * tt.mean(axis=1)
    resid = y - (intercept[:, None] + slope[:, None] * tt)

    fits = [
        WindowFit(k=k + 1, start=int(starts[k]), slope=float(slope[k]),
                  intercept=float(intercept[k]), residuals=resid[k])
        for k in range(n_full)
    ]

    tail_start = s * n_full
    m = n - tail_start
    if not cfg.drop_partial_tail and 2 <= m < 2 * s:
        tt_tail = np.arange(tail_start + 1, n + 1, dtype=float)
        y_tail = x[tail_start:]
        t_c = tt_tail - tt_tail.mean()
        b = float((t_c * y_tail).sum() / (t_c * t_c).sum())
        a = float(y_tail.mean() - b * tt_tail.mean())
        fits.append(WindowFit(k=n_full + 1, start=tail_start, slope=b,
                              intercept=a, residuals=y_tail - (a + b * tt_tail)))
    return fits


def detrended_increments(x, cfg: DetrendConfig) -> IncrementSet:
    """Lag-s increments of the per-window residuals of x.

    Window k contributes x*(t+s) - x*(t) for the s offsets t at the start of
    the window; both endpoints use window k's own fit. A kept partial tail
    contributes fewer than s increments and flags the result.
    """
    s = cfg.scale_s
    fits = piecewise_linear_residuals(x, cfg)
    chunks = []
    t_chunks = []
    window_count = 0
    has_partial = False
    for w in fits:
        r = w.residuals
        m = r.size
        n_inc = s if m == 2 * s else m - s
        if n_inc <= 0:
            continue
        chunks.append(r[s:s + n_inc] - r[:n_inc])
        t_chunks.append(w.start + np.arange(n_inc))
        window_count += 1
        if m < 2 * s:
            has_partial = True
    if not chunks:
        raise DataError("no complete increment window available")
    return IncrementSet(
        values=np.concatenate(chunks),
        scale_s=s,
        window_count=window_count,
        t_indices=np.concatenate(t_chunks),
        has_partial_tail=has_partial,
    )
