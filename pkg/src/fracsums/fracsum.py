"""Exact fractional sums S_f(x) and T_f(x), and the split T = T1 + T21 - T22 + T_Delta."""

import threading
from functools import lru_cache
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import floor_of, quotient_blocks, tau_sieve
from .config import CapacityError, DomainError, limits
from .divisor import divisor_summatory, delta
from .hp import CTX, TWO_GAMMA_MINUS_ONE, as_fraction, hp, hp_dot, hp_sum

_tau_lock = threading.Lock()
_tau_cache = np.zeros(1, dtype=np.uint16)


def _tau_upto(m):
    global _tau_cache
    cap = limits().memory_cap
    if m > cap:
        raise CapacityError(f"sieve up to {m} exceeds memory cap {cap}")
    with _tau_lock:
        if len(_tau_cache) <= m:
            _tau_cache = tau_sieve(min(max(m, 2 * (len(_tau_cache) - 1)), cap))
        return _tau_cache


def _check_x(x):
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x!r}")


def sf_exact(f, x):
    """S_f(x) = sum_{n <= x} f(floor(x/n)) over quotient blocks."""
    _check_x(x)
    blocks = quotient_blocks(x)
    return hp_dot((b.n_hi - b.n_lo + 1 for b in blocks), (f(b.q) for b in blocks))


def tf_exact_sieve(f, x):
    """T_f(x) = sum_{n <= x} f(floor(x/n)) tau(n) straight from a tau sieve.

    tau(n) is aggregated per n from the sieve array; f is then applied once
    per distinct value of floor(x/n).
    """
    _check_x(x)
    qs, weights = _sieve_weights(floor_of(x))
    return hp_dot(weights, (f(q) for q in qs))


@lru_cache(maxsize=8)
def _sieve_weights(m):
    # per-n aggregation of tau(n) by the value of floor(m/n); shared across f
    tau = _tau_upto(m)[1:m + 1].astype(np.int64)
    q = m // np.arange(1, m + 1, dtype=np.int64)
    starts = np.concatenate(([0], np.flatnonzero(np.diff(q)) + 1))
    weights = np.add.reduceat(tau, starts)
    return tuple(q[starts].tolist()), tuple(weights.tolist())


def block_weights(m, memo=None, threads=1):
    """(q, D(floor(m/q)) - D(floor(m/(q+1)))) for every distinct quotient, ascending in q."""
    blocks = quotient_blocks(m)
    memo = {} if memo is None else memo
    memo.setdefault(0, 0)
    keys = [b.n_hi for b in blocks if b.n_hi not in memo]
    if threads > 1 and len(keys) > 1:
        with ThreadPoolExecutor(threads) as pool:
            vals = list(pool.map(divisor_summatory, keys))
    else:
        vals = [divisor_summatory(k) for k in keys]
    memo.update(zip(keys, vals))
    out = [(b.q, memo[b.n_hi] - memo[b.n_lo - 1]) for b in blocks]
    out.reverse()
    return out


def tf_exact_fast(f, x, memo=None, threads=1):
    """T_f(x) = sum_q f(q) (D(x/q) - D(x/(q+1))) over distinct quotients q."""
    _check_x(x)
    pairs = block_weights(floor_of(x), memo, threads)
    return hp_dot((w for _, w in pairs), (f(q) for q, _ in pairs))


@dataclass(frozen=True)
class DecompositionReport:
    """T_f(x) split at cut N.

    T2 collects the quotients d <= floor(x/N); T1 the remaining n, i.e.
    n <= floor(x/(d_max + 1)) = ``n_split``.
    """
    N: float
    d_max: int
    n_split: int
    T1: object
    T2: object
    T21: object
    T22: object
    TDelta: object
    total: object

    @property
    def residual(self):
        return CTX.subtract(self.T2, hp_sum([self.T21, -self.T22, self.TDelta]))


def tf_decomposition(f, x, N):
    """Components T1, T2, T21, T22, T_Delta of T_f(x) at cut N, each summed from its definition."""
    _check_x(x)
    if not (1 <= N < x):
        raise DomainError(f"need 1 <= N < x, got N={N!r}, x={x!r}")
    xf = as_fraction(x)
    m = floor_of(xf)
    d_max = floor_of(xf / as_fraction(N))
    n_split = m // (d_max + 1)

    memo = {0: 0}

    def D(k):
        if k not in memo:
            memo[k] = divisor_summatory(k) if k >= 1 else 0
        return memo[k]

    t1_w, t1_f = [], []
    for b in quotient_blocks(m):
        if b.q <= d_max:
            break
        t1_w.append(D(b.n_hi) - D(b.n_lo - 1))
        t1_f.append(f(b.q))
    T1 = hp_dot(t1_w, t1_f)

    ds = range(1, d_max + 1)
    fd = [f(d) for d in ds]
    T2 = hp_dot((D(m // d) - D(m // (d + 1)) for d in ds), fd)

    xh = hp(xf)
    c1_part = hp_dot(fd, (CTX.divide(1, d * (d + 1)) for d in ds))
    T21 = CTX.multiply(CTX.multiply(xh, CTX.add(CTX.ln(xh), TWO_GAMMA_MINUS_ONE)), c1_part)

    def h(d):
        return CTX.divide(CTX.ln(hp(d)), d)

    logs = [h(d) for d in range(1, d_max + 2)]
    c3_part = hp_dot(fd, (CTX.subtract(logs[d - 1], logs[d]) for d in ds))
    T22 = CTX.multiply(xh, c3_part)

    deltas = [delta(xf / d) for d in range(1, d_max + 2)]
    TDelta = hp_dot(fd, (CTX.subtract(deltas[d - 1], deltas[d]) for d in ds))

    total = hp_sum([T1, T2])
    rep = DecompositionReport(N=float(N), d_max=d_max, n_split=n_split, T1=T1, T2=T2,
                              T21=T21, T22=T22, TDelta=TDelta, total=total)
    scale = max(abs(T2), abs(T21), abs(T22), abs(TDelta), 1)
    if abs(rep.residual) > scale * hp("1e-20"):
        raise ArithmeticError(f"decomposition residual {rep.residual} too large")
    return rep
