"""Arithmetic functions f with declared growth f(n) <= K n^alpha log(n+2)^theta."""

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import mpmath
import numpy as np

from .config import DomainError
from .hp import CTX, hp

CACHE_LIMIT = 10**6


@dataclass(frozen=True, eq=False)
class FunctionSpec:
    """A named arithmetic function with its growth data.

    ``closed_form`` optionally returns ``(C1, C3)`` as HighPrecReals together
    with an error radius; the asymptotics module prefers it over truncated
    series.  ``vec`` is an optional numpy evaluator used for long direct
    series; it must agree with ``eval`` pointwise.
    """
    name: str
    eval: Callable[[int], object]
    alpha: float
    log_power: float = 0.0
    growth_constant: float = 1.0
    closed_form: Optional[Callable[[], tuple]] = None
    vec: Optional[Callable[[np.ndarray], np.ndarray]] = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not (0 <= self.alpha < 1):
            raise DomainError(f"alpha must lie in [0, 1), got {self.alpha}")
        if self.log_power < 0:
            raise DomainError("log_power must be nonnegative")

    def __call__(self, n):
        if n <= CACHE_LIMIT:
            v = self._cache.get(n)
            if v is None:
                v = self._cache[n] = self.eval(n)
            return v
        return self.eval(n)

    def values(self, n):
        """Evaluate on an int64 array."""
        if self.vec is not None:
            return self.vec(n)
        return np.array([float(self.eval(int(k))) for k in n], dtype=np.float64)

    def envelope(self, n):
        """K n^alpha log(n+2)^theta, vectorised."""
        n = np.asarray(n, dtype=np.float64)
        return self.growth_constant * n**self.alpha * np.log(n + 2) ** self.log_power


def _mp_hp(value):
    return CTX.create_decimal(mpmath.nstr(value, 45, strip_zeros=False))


# ---- f = 1 -----------------------------------------------------------------

def _one_closed():
    return hp(1), hp(0), 0.0


ONE = FunctionSpec("one", lambda n: 1, alpha=0.0, closed_form=_one_closed,
                   vec=lambda n: np.ones(len(n), dtype=np.float64))


# ---- f(n) = floor(n^(1/m)) and floor(n^alpha) ------------------------------

def iroot(n, k):
    """Largest r with r**k <= n."""
    if n < 0:
        raise DomainError("iroot of negative")
    if n < 2 or k == 1:
        return n
    if n < 1 << 52:
        r = int(n ** (1.0 / k))
        while r**k > n:
            r -= 1
        while (r + 1) ** k <= n:
            r += 1
        return r
    # integer Newton iteration from an upper bound decreases monotonically
    r = 1 << -(-n.bit_length() // k)
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            return r
        r = s


def _isqrt_vec(n):
    n = np.asarray(n, dtype=np.int64)
    r = np.floor(np.sqrt(n.astype(np.float64))).astype(np.int64)
    r -= (r * r > n)
    r += ((r + 1) * (r + 1) <= n)
    return r.astype(np.float64)


@lru_cache(maxsize=None)
def _zeta_constants(m):
    # jumps of floor(n^(1/m)) sit at k^m, so C1 = zeta(m) and
    # C3 = sum_k log(k^m)/k^m = -m zeta'(m)
    with mpmath.workdps(50):
        c1 = mpmath.zeta(m)
        c3 = -m * mpmath.zeta(m, derivative=1)
        return _mp_hp(c1), _mp_hp(c3), 1e-38


SQRT_FLOOR = FunctionSpec("sqrt_floor", math.isqrt, alpha=0.5,
                          closed_form=lambda: _zeta_constants(2), vec=_isqrt_vec)


def pow_floor(alpha):
    """f(n) = floor(n^alpha), alpha in (0, 1), evaluated exactly.

    ``alpha`` is taken as the nearest fraction p/q with q <= 10**4; the floor
    is the largest integer k with k^q <= n^p.
    """
    frac = Fraction(alpha).limit_denominator(10**4) if not isinstance(alpha, Fraction) else alpha
    if not (0 < frac < 1):
        raise DomainError(f"pow_floor needs alpha in (0, 1), got {alpha}")
    p, q = frac.numerator, frac.denominator
    a = p / q

    def f(n):
        return iroot(n**p, q) if p > 1 else iroot(n, q)

    def vec(n):
        n = np.asarray(n, dtype=np.int64)
        est = np.floor(n.astype(np.float64) ** a)
        # correct the rare values whose float estimate sits next to an integer
        near = np.abs(n.astype(np.float64) ** a - np.round(n.astype(np.float64) ** a)) < 1e-6
        if near.any():
            idx = np.flatnonzero(near)
            est[idx] = [f(int(k)) for k in n[idx]]
        return est

    closed = (lambda: _zeta_constants(q)) if p == 1 else None
    return FunctionSpec(f"pow_floor({p}/{q})", f, alpha=a, closed_form=closed, vec=vec)


# ---- f(n) = floor(log n) + 1 ------------------------------------------------

def _exp_ceilings(kmax=120):
    with mpmath.workdps(80):
        return [int(mpmath.ceil(mpmath.exp(k))) for k in range(1, kmax + 1)]


_LOG_JUMPS = _exp_ceilings()


def _log_floor(n):
    # ceil(e^k) <= n  <=>  k <= log n, since e^k is never an integer
    return 1 + bisect.bisect_right(_LOG_JUMPS, n)


def _log_floor_vec(n):
    n = np.asarray(n, dtype=np.int64)
    return 1.0 + np.searchsorted(np.array(_LOG_JUMPS[:40], dtype=np.float64), n, side="right")


@lru_cache(maxsize=None)
def _log_floor_closed():
    # unit jumps at d = 1 and d = ceil(e^k); C1 = sum 1/d, C3 = sum log(d)/d
    with mpmath.workdps(50):
        jumps = [1] + _LOG_JUMPS
        c1 = mpmath.fsum(mpmath.mpf(1) / d for d in jumps)
        c3 = mpmath.fsum(mpmath.log(d) / d for d in jumps)
        # omitted k > 120: sum_{k>120} (k + 1) e^-k < 1e-49
        return _mp_hp(c1), _mp_hp(c3), 1e-49


LOG_FLOOR = FunctionSpec("log_floor", _log_floor, alpha=0.0, log_power=1.0,
                         growth_constant=4 / 3, closed_form=_log_floor_closed,
                         vec=_log_floor_vec)

BUILTIN_NAMES = ("one", "sqrt_floor", "pow_floor", "log_floor")


def get_function(name, alpha=None):
    """Look up a built-in function by CLI name."""
    if name == "one":
        return ONE
    if name == "sqrt_floor":
        return SQRT_FLOOR
    if name == "log_floor":
        return LOG_FLOOR
    if name == "pow_floor":
        if alpha is None:
            raise DomainError("pow_floor requires --alpha")
        return pow_floor(alpha)
    raise DomainError(f"unknown function {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
