"""Castaing variance-mixture density and intermittency (lambda2) estimation.

The model for a detrended increment is zeta * exp(omega), with independent
zero-mean Gaussians zeta ~ N(0, sigma0^2) and omega ~ N(0, lambda2).
Integrating out the log scale gives the density

    P(x) = int N(x; 0, sigma0^2 e^{2w}) N(w; 0, lambda2) dw

which is symmetric, develops fat tails as lambda2 grows, and collapses to the
plain Gaussian N(0, sigma0^2) at lambda2 = 0. Closed-form moments:

    Var(x)  = sigma0^2 * exp(2 * lambda2)
    Kurt(x) = 3 * exp(4 * lambda2)      (Pearson ratio m4 / m2^2)

so the kurtosis alone gives lambda2 = ln(K/3) / 4, a cheap moment estimator
used to cross-check the PDF fit and to seed its search bracket.

The mixture integral is evaluated with Gauss-Hermite quadrature in w, the
natural rule under the Gaussian mixing weight; it converges geometrically in
the quadrature order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from mfluct.series import DataError
from mfluct.stats import standardized_histogram

__all__ = [
    "MIN_QUAD_ORDER",
    "CastaingParams",
    "CastaingFit",
    "FitError",
    "castaing_pdf",
    "fit_lambda2_pdf",
    "lambda2_from_kurtosis",
]

MIN_QUAD_ORDER = 8
_SQRT_2PI = math.sqrt(2.0 * math.pi)

# pdf-fit defaults: bins over +-6 sample std; bins with fewer counts than
# MIN_BIN_COUNT carry too much shot noise for a log-density objective
DEFAULT_BINS = 61
MIN_BIN_COUNT = 5
MIN_FIT_SAMPLES = 500


class FitError(RuntimeError):
    """PDF fit could not converge; carries the kurtosis-based fallback."""

    def __init__(self, message: str, fallback_lambda2: float):
        super().__init__(message)
        self.fallback_lambda2 = fallback_lambda2


@dataclass(frozen=True)
class CastaingParams:
    """Model parameters: lambda2 = Var(log scale), sigma0 = e^{mean log scale}."""

    lambda2: float
    sigma0: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lambda2) and self.lambda2 >= 0.0):
            raise DataError("lambda2 must be finite and nonnegative")
        if not (math.isfinite(self.sigma0) and self.sigma0 > 0.0):
            raise DataError("sigma0 must be finite and positive")

    @property
    def variance(self) -> float:
        return self.sigma0**2 * math.exp(2.0 * self.lambda2)

    @property
    def kurtosis(self) -> float:
        return 3.0 * math.exp(4.0 * self.lambda2)


@dataclass(frozen=True)
class CastaingFit:
    """Estimated parameters plus fit provenance.

    ``residual`` is the count-weighted RMS log-density misfit; it is NaN for
    the kurtosis-moment method, which has no fit residual.
    """

    params: CastaingParams
    method: str  # "pdf-fit" | "kurtosis-moment"
    residual: float
    n_samples: int
    quad_order: int


@lru_cache(maxsize=16)
def _gh_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    # physicists' rule, pre-scaled so that for w ~ N(0, l2):
    # E[f(w)] ~= sum_i weights[i] * f(sqrt(l2) * nodes[i])
    u, w = np.polynomial.hermite.hermgauss(order)
    return u * math.sqrt(2.0), w / math.sqrt(math.pi)


def _gaussian_pdf(x: np.ndarray, sigma: float) -> np.ndarray:
    return np.exp(-0.5 * (x / sigma) ** 2) / (sigma * _SQRT_2PI)


def castaing_pdf(x, params: CastaingParams, quad_order: int = 40):
    """Evaluate the mixture density at x (scalar or array).

    At lambda2 = 0 the Gaussian with standard deviation sigma0 is returned
    exactly, bypassing the quadrature.
    """
    if quad_order < MIN_QUAD_ORDER:
        raise DataError(
            f"quad_order must be >= {MIN_QUAD_ORDER} to resolve the fat tails"
        )
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    if params.lambda2 == 0.0:
        out = _gaussian_pdf(xs, params.sigma0)
    else:
        nodes, weights = _gh_nodes(quad_order)
        sig = params.sigma0 * np.exp(math.sqrt(params.lambda2) * nodes)
        z = xs[:, None] / sig[None, :]
        out = (weights[None, :] * np.exp(-0.5 * z * z) / (sig[None, :] * _SQRT_2PI)).sum(axis=1)
    return float(out[0]) if scalar else out


def lambda2_from_kurtosis(kurtosis: float) -> float:
    """Invert K = 3 e^{4 lambda2}: returns ln(K/3)/4 for K >= 3.

    K < 3 is sub-Gaussian and outside the model; it maps to NaN (a flag, not
    an error) so scans can show gaps honestly. Nonpositive or non-finite K is
    an error.
    """
    if not math.isfinite(kurtosis) or kurtosis <= 0.0:
        raise DataError(f"kurtosis must be finite and positive, got {kurtosis}")
    if kurtosis < 3.0:
        return math.nan
    return math.log(kurtosis / 3.0) / 4.0


def _pearson_kurtosis(z: np.ndarray) -> float:
    d = z - z.mean()
    m2 = float((d * d).mean())
    if m2 == 0.0:
        return math.nan
    return float((d**4).mean()) / (m2 * m2)


def fit_lambda2_pdf(increments, bins: int = DEFAULT_BINS,
                    quad_order: int = 40) -> CastaingFit:
    """Estimate lambda2 by fitting the model density to a log histogram.

    The sample is standardized (mean 0, variance 1) and sigma0 is slaved to
    e^{-lambda2} so the model variance is exactly one, leaving a single free
    parameter. The objective is the count-weighted squared error between log
    empirical density and log model density over bins holding at least
    MIN_BIN_COUNT samples inside +-6 standard deviations; comparing logs
    weights the tails the way a semi-log plot does. The kurtosis estimator
    seeds the search bracket; the reported sigma0 is rescaled back to the
    original increment units.

    Accepts an IncrementSet or any 1-d array of samples.
    """
    v = np.asarray(getattr(increments, "values", increments), dtype=float)
    if v.size < MIN_FIT_SAMPLES:
        raise DataError(f"pdf fit needs at least {MIN_FIT_SAMPLES} samples, got {v.size}")
    std = float(v.std())
    if std == 0.0 or not math.isfinite(std):
        raise DataError("pdf fit needs a sample with positive finite variance")
    z = (v - v.mean()) / std

    centers, counts, densities, _ = standardized_histogram(z, bins)
    mask = counts >= MIN_BIN_COUNT
    if mask.sum() < 3:
        raise DataError("too few populated histogram bins for a pdf fit")
    xs = centers[mask]
    w = counts[mask].astype(float)
    log_emp = np.log(densities[mask])

    k_hat = _pearson_kurtosis(z)
    lam_seed = lambda2_from_kurtosis(k_hat) if k_hat >= 3.0 else 0.0
    if math.isnan(lam_seed):
        lam_seed = 0.0

    def objective(lam2: float) -> float:
        model = castaing_pdf(xs, CastaingParams(lam2, math.exp(-lam2)), quad_order)
        diff = log_emp - np.log(model)
        return float((w * diff * diff).sum())

    hi = max(4.0 * lam_seed, 0.5)
    for _ in range(3):
        res = minimize_scalar(objective, bounds=(0.0, hi), method="bounded",
                              options={"xatol": 1e-7})
        if not res.success:
            raise FitError(f"pdf fit optimizer failed: {res.message}", lam_seed)
        if res.x < hi - 1e-4 or hi >= 8.0:
            break
        hi *= 4.0  # optimum pinned at the bracket top: widen and retry
    else:
        raise FitError("pdf fit bracket expansion exhausted", lam_seed)

    lam2 = float(res.x)
    residual = math.sqrt(res.fun / w.sum())
    return CastaingFit(
        params=CastaingParams(lam2, math.exp(-lam2) * std),
        method="pdf-fit",
        residual=residual,
        n_samples=int(v.size),
        quad_order=int(quad_order),
    )
