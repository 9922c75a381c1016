"""Deterministic normal variate stream shared by all surrogate generators.

The seed contract is part of the external interface: the same (seed, count)
pair must yield the same doubles on every platform, every run, and in any
reimplementation. The algorithm is therefore pinned exactly:

1. A Philox4x64-10 counter-based generator is keyed directly with the 64-bit
   seed (no seed-sequence scrambling), counter starting at zero.
2. The raw output stream is consumed as consecutive little-endian unsigned
   64-bit words w_0, w_1, ...
3. Each word maps to an open-interval uniform u_i = (floor(w_i / 2^11) + 0.5)
   * 2^-53, i.e. the top 53 bits centered in their bucket, so u_i is never
   exactly 0 or 1.
4. The normal variate is the standard normal inverse CDF of u_i (Wichura/
   Cephes ndtri as shipped by scipy).

Counter-based generation means blocks of the stream could be produced
independently and in parallel; output order is by index regardless.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

_TWO_POW_MINUS_53 = 2.0**-53


def normal_stream(seed: int, count: int) -> np.ndarray:
    """Return `count` standard normal variates for the given 64-bit seed."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    if not 0 <= int(seed) < 2**64:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    if count == 0:
        return np.empty(0, dtype=float)
    bitgen = np.random.Philox(key=int(seed))
    raw = np.random.Generator(bitgen).bytes(8 * count)
    words = np.frombuffer(raw, dtype="<u8")
    u = ((words >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_POW_MINUS_53
    return ndtri(u)
