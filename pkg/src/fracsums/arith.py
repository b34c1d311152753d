"""Arithmetic substrate: divisor-count sieve and quotient blocks."""

import math
from typing import NamedTuple

import numpy as np

from .config import CapacityError, DomainError, limits
from .hp import as_fraction


class QuotientBlock(NamedTuple):
    """Maximal range ``n_lo <= n <= n_hi`` on which ``floor(x/n) == q``."""
    q: int
    n_lo: int
    n_hi: int


def floor_of(x):
    """Exact floor of an int, float, Fraction or Decimal."""
    if isinstance(x, int):
        return x
    return math.floor(as_fraction(x))


def tau_segment(lo, hi):
    """Divisor counts tau(n) for lo <= n < hi (uint16 array of length hi - lo).

    Uses the pairing d <-> n/d: every n gets 2 for each divisor d < sqrt(n)
    and 1 for d = sqrt(n).
    """
    if lo < 1 or hi < lo:
        raise DomainError(f"bad segment [{lo}, {hi})")
    out = np.zeros(hi - lo, dtype=np.uint16)
    if hi == lo:
        return out
    top = math.isqrt(hi - 1)
    for d in range(1, top + 1):
        sq = d * d
        start = max(sq, -(-lo // d) * d)
        if start >= hi:
            continue
        out[start - lo::d] += 2
        if sq >= lo:
            out[sq - lo] -= 1
    return out


def tau_sieve(limit, cap=None):
    """Array ``tau`` with ``tau[n]`` the number of divisors of n, 1 <= n <= limit.

    Index 0 holds 0.  Segmented in chunks of ``limits().segment`` so the
    working set stays bounded; the output itself is uint16 (tau(n) < 65536
    for every n below 10**15).
    """
    lim = limits()
    cap = lim.memory_cap if cap is None else cap
    if limit < 1:
        raise DomainError("limit must be >= 1")
    if limit > cap:
        raise CapacityError(f"tau_sieve({limit}) exceeds memory cap {cap}")
    out = np.zeros(limit + 1, dtype=np.uint16)
    seg = lim.segment
    for lo in range(1, limit + 1, seg):
        hi = min(lo + seg, limit + 1)
        out[lo:hi] = tau_segment(lo, hi)
    return out


def divisor_prefix_table(limit, cap=None):
    """``D[k] = sum_{n<=k} tau(n)`` for 0 <= k <= limit (int64)."""
    tau = tau_sieve(limit, cap)
    return np.cumsum(tau, dtype=np.int64)


def quotient_blocks(x):
    """Blocks of constant floor(x/n) covering 1 <= n <= floor(x), ascending in n."""
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x!r}")
    m = floor_of(x)
    blocks = []
    n = 1
    while n <= m:
        q = m // n
        hi = m // q
        blocks.append(QuotientBlock(q, n, hi))
        n = hi + 1
    return blocks
