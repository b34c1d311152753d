"""Triple exponential sums with the starred (max sub-interval) norm."""

import math
from dataclasses import dataclass, asdict
from typing import NamedTuple

import numpy as np

from .config import CapacityError, DomainError, THRESHOLDS, limits


@dataclass(frozen=True)
class ExpSumParams:
    H: int
    N: int
    M: int
    X: float
    a: float = -1.0
    b: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if min(self.H, self.N, self.M) < 1:
            raise DomainError("H, N, M must be positive")
        if self.X < 1:
            raise DomainError("X must be >= 1")
        if self.a * (self.a - 1) * self.b * self.c == 0:
            raise DomainError("need a(a-1)bc != 0")


class StarNorm(NamedTuple):
    value: float
    exact: bool


def _pair_diameter(P):
    # P: (k, L) prefix sums including the leading 0; max_{i<j} |P_j - P_i|
    diff = P[:, None, :] - P[:, :, None]
    return np.abs(diff).max(axis=(1, 2))


def star_norm_batch(Z, cutoff=None):
    """Starred norms of each row of a 2-D complex array.

    Returns ``(values, exact)``.  Rows longer than ``cutoff`` get the upper
    proxy 2 max_j |P_j| over prefix sums and ``exact`` is False.
    """
    cutoff = limits().star_exact_cutoff if cutoff is None else cutoff
    Z = np.atleast_2d(np.asarray(Z, dtype=np.complex128))
    k, L = Z.shape
    if L == 0:
        return np.zeros(k), True
    P = np.zeros((k, L + 1), dtype=np.complex128)
    np.cumsum(Z, axis=1, out=P[:, 1:])
    if L > cutoff:
        return 2 * np.abs(P).max(axis=1), False
    out = np.empty(k)
    # keep the (rows, L+1, L+1) temporary near 2**24 entries
    step = max(1, (1 << 24) // ((L + 1) ** 2))
    for i in range(0, k, step):
        out[i:i + step] = _pair_diameter(P[i:i + step])
    return out, True


def star_norm(z, cutoff=None):
    """max over 1 <= N1 <= N2 <= len(z) of |z[N1] + ... + z[N2]|."""
    z = np.asarray(z, dtype=np.complex128).ravel()
    if len(z) == 0:
        return StarNorm(0.0, True)
    vals, exact = star_norm_batch(z[None, :], cutoff)
    return StarNorm(float(vals[0]), exact)


def phase_grid(p):
    """Phases X (m/M)^a (h/H)^b (n/N)^c, shape (H*N, M), rows ordered by (h, n)."""
    h = np.arange(p.H + 1, 2 * p.H + 1, dtype=np.float64) / p.H
    n = np.arange(p.N + 1, 2 * p.N + 1, dtype=np.float64) / p.N
    m = np.arange(p.M + 1, 2 * p.M + 1, dtype=np.float64) / p.M
    hn = np.multiply.outer(h**p.b, n**p.c).ravel()
    return p.X * np.multiply.outer(hn, m**p.a)


def rs_sum(p, cutoff=None):
    """S = sum_h sum_n |sum_{M < m <= 2M} e(phase)|*.  Returns ``(S, exact)``."""
    cap = limits().rs_work_cap
    if p.H * p.N * p.M > cap:
        raise CapacityError(f"H*N*M = {p.H * p.N * p.M} exceeds work cap {cap}")
    ph = phase_grid(p)
    ph -= np.floor(ph)
    z = np.exp(2j * np.pi * ph)
    vals, exact = star_norm_batch(z, cutoff)
    return math.fsum(vals), exact


def rs_bound(p, epsilon=THRESHOLDS.rs_eps):
    """(HNM)^(1+eps) {(X/(HNM^2))^(1/4) + M^(-1/2) + X^(-1)}."""
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    hnm = float(p.H) * p.N * p.M
    return hnm ** (1 + epsilon) * ((p.X / (hnm * p.M)) ** 0.25 + p.M**-0.5 + 1 / p.X)


RS_COLUMNS = ("H", "N", "M", "X", "a", "b", "c", "eps", "S", "bound", "ratio", "exact_norm_flag")


def rs_ratio_sweep(grid, epsilon=THRESHOLDS.rs_eps, cutoff=None):
    """One row per parameter set: params, S, bound, ratio, exact_norm_flag."""
    rows = []
    for p in grid:
        s, exact = rs_sum(p, cutoff)
        bound = rs_bound(p, epsilon)
        row = asdict(p)
        row.update(eps=epsilon, S=s, bound=bound, ratio=s / bound, exact_norm_flag=exact)
        rows.append(row)
    return rows


def dyadic_grid(sizes=(4, 8, 16, 32, 64), xs=(1, 10, 100, 1000), abc=(-1.0, 1.0, 1.0)):
    a, b, c = abc
    return [ExpSumParams(H, N, M, float(X), a, b, c)
            for H in sizes for N in sizes for M in sizes for X in xs]
