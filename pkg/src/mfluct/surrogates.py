"""Seeded synthetic series with known ground truth for validating estimators.

Every generator draws from the deterministic normal stream in ``rng``; a
(kind, n, parameters, seed) tuple pins the output bit-for-bit. Stream layout,
part of the reproducibility contract:

* castaing-increments: the first n normals are the Gaussian factors zeta_t,
  the next n_w are the log-scale factors (n_w = n per-sample, or the number
  of blocks when ``vol_block_len`` is set).
* gaussian-walk: n - 1 normals, one per daily log-price step.
* two-regime: n - 1 normals for the steps, then the log-scale factors, with
  blocks restarting at the split index so no block straddles the regimes.

``vol_block_len`` holds the log-scale factor omega constant over consecutive
blocks of samples. The per-sample default is the literal multiplicative model
for an increment sample; block mode mimics volatility persistence so that a
price series built from the steps carries the target lambda2 at aggregated
scales too (a sum of B-block steps over s << B days is again a Gaussian with
a log-normal scale). Hierarchies of refreshed scales across octaves are
approximated the same way and are not a true cascade in scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mfluct.rng import normal_stream
from mfluct.series import DataError, PriceSeries

__all__ = [
    "SurrogateSpec",
    "TwoRegimeSurrogate",
    "gen_castaing_increments",
    "gen_gaussian_walk",
    "gen_two_regime",
    "generate",
]

KINDS = ("castaing-increments", "gaussian-walk", "two-regime")


@dataclass(frozen=True)
class SurrogateSpec:
    """Parameters fully determining one synthetic series."""

    kind: str
    n: int
    lambda2: float = 0.0
    sigma0: float = 1.0
    seed: int = 0
    lambda2_a: float | None = None
    lambda2_b: float | None = None
    split_fraction: float = 0.5
    vol_block_len: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise DataError(f"unknown surrogate kind {self.kind!r}, expected one of {KINDS}")
        if self.n < 2:
            raise DataError("n must be >= 2")
        if self.lambda2 < 0.0:
            raise DataError("lambda2 must be nonnegative")
        if self.sigma0 < 0.0:
            raise DataError("sigma0 must be nonnegative")
        if not 0 <= int(self.seed) < 2**64:
            raise DataError("seed must fit in an unsigned 64-bit integer")
        if self.vol_block_len is not None and self.vol_block_len < 1:
            raise DataError("vol_block_len must be >= 1")
        if self.kind == "two-regime":
            if self.lambda2_a is None or self.lambda2_b is None:
                raise DataError("two-regime needs lambda2_a and lambda2_b")
            if self.lambda2_a < 0.0 or self.lambda2_b < 0.0:
                raise DataError("regime lambda2 values must be nonnegative")
            if not 0.0 < self.split_fraction < 1.0:
                raise DataError("split_fraction must lie strictly inside (0, 1)")


@dataclass(frozen=True)
class TwoRegimeSurrogate:
    """Two-regime price series plus the split point metadata."""

    prices: PriceSeries
    split_index: int


def _omega_factors(z_omega: np.ndarray, n: int, block_len: int | None) -> np.ndarray:
    if block_len is None:
        return z_omega[:n]
    return z_omega[np.arange(n) // block_len]


def gen_castaing_increments(spec: SurrogateSpec) -> np.ndarray:
    """Samples of the multiplicative model zeta * exp(omega).

    zeta ~ N(0, sigma0^2) and omega ~ N(0, lambda2) are independent; with
    ``vol_block_len`` set, omega is shared across each block of samples.
    """
    if spec.kind != "castaing-increments":
        raise DataError(f"spec kind is {spec.kind!r}, expected 'castaing-increments'")
    n = spec.n
    n_omega = n if spec.vol_block_len is None else -(-n // spec.vol_block_len)
    z = normal_stream(spec.seed, n + n_omega)
    zeta = spec.sigma0 * z[:n]
    omega = math.sqrt(spec.lambda2) * _omega_factors(z[n:], n, spec.vol_block_len)
    return zeta * np.exp(omega)


def gen_gaussian_walk(spec: SurrogateSpec) -> PriceSeries:
    """Prices whose log is a cumulative sum of i.i.d. N(0, sigma0^2) steps.

    The first log price is 0, so the one-day log returns of the output are
    exactly the generated steps.
    """
    if spec.kind != "gaussian-walk":
        raise DataError(f"spec kind is {spec.kind!r}, expected 'gaussian-walk'")
    steps = spec.sigma0 * normal_stream(spec.seed, spec.n - 1)
    log_p = np.concatenate([[0.0], np.cumsum(steps)])
    return PriceSeries(values=np.exp(log_p), label=f"gaussian-walk(seed={spec.seed})")


def gen_two_regime(spec: SurrogateSpec) -> TwoRegimeSurrogate:
    """Price series whose log steps are Castaing increments with a regime break.

    Steps before the split index use lambda2_a, steps from the split index on
    use lambda2_b; the split index is int(round(n * split_fraction)) in price
    coordinates (price rows [0, split] are reached by regime-a steps).
    """
    if spec.kind != "two-regime":
        raise DataError(f"spec kind is {spec.kind!r}, expected 'two-regime'")
    n = spec.n
    m = n - 1  # number of steps
    split = int(round(n * spec.split_fraction))
    if split <= 0 or split >= n:
        raise DataError(f"split index {split} falls outside the series")

    block = spec.vol_block_len
    if block is None:
        n_omega_a, n_omega_b = split, m - split
    else:
        n_omega_a = -(-split // block)
        n_omega_b = -(-(m - split) // block)
    z = normal_stream(spec.seed, m + n_omega_a + n_omega_b)
    zeta = spec.sigma0 * z[:m]

    z_om = z[m:]
    omega = np.empty(m)
    lam_a, lam_b = math.sqrt(spec.lambda2_a), math.sqrt(spec.lambda2_b)
    if block is None:
        omega[:split] = lam_a * z_om[:split]
        omega[split:] = lam_b * z_om[split:m]
    else:
        omega[:split] = lam_a * z_om[np.arange(split) // block]
        omega[split:] = lam_b * z_om[n_omega_a + np.arange(m - split) // block]

    steps = zeta * np.exp(omega)
    log_p = np.concatenate([[0.0], np.cumsum(steps)])
    prices = PriceSeries(values=np.exp(log_p),
                         label=f"two-regime(split={split},seed={spec.seed})")
    return TwoRegimeSurrogate(prices=prices, split_index=split)


def gen_octave_refreshed_increments(n: int, lambda2: float, sigma0: float,
                                    seed: int, n_octaves: int | None = None) -> np.ndarray:
    """Increments with the log-scale factor built hierarchically across octaves.

    omega(t) is the sum over octaves j = 0..J-1 of components held constant on
    blocks of 2^j samples and refreshed between blocks, each with variance
    lambda2 / J, so Var(omega) = lambda2 while omega becomes log-correlated in
    t. Sums of these increments scale like a log-normal cascade over lags
    within the octave range, which is what the multifractality tests need; it
    is an approximation, not a true multiplicative cascade in scale.

    Stream layout: n normals for the Gaussian factors, then the octave
    components from coarse high-j blocks down to j = 0, each octave consuming
    ceil(n / 2^j) normals.
    """
    if n < 2:
        raise DataError("n must be >= 2")
    if lambda2 < 0.0 or sigma0 < 0.0:
        raise DataError("lambda2 and sigma0 must be nonnegative")
    J = n_octaves if n_octaves is not None else max(int(math.log2(n)) - 1, 1)
    counts = [-(-n // 2**j) for j in range(J - 1, -1, -1)]
    z = normal_stream(seed, n + sum(counts))
    zeta = sigma0 * z[:n]
    omega = np.zeros(n)
    sd = math.sqrt(lambda2 / J)
    pos = n
    t = np.arange(n)
    for j, cnt in zip(range(J - 1, -1, -1), counts):
        omega += sd * z[pos + (t >> j)]
        pos += cnt
    return zeta * np.exp(omega)


def generate(spec: SurrogateSpec):
    """Dispatch on spec.kind; the CLI uses this single entry point."""
    if spec.kind == "castaing-increments":
        return gen_castaing_increments(spec)
    if spec.kind == "gaussian-walk":
        return gen_gaussian_walk(spec)
    return gen_two_regime(spec)
