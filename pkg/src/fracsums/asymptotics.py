"""Constants C1, C2, C3 with tail bounds, main/error terms, exponents and fits."""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import mpmath
import numpy as np

from .config import DomainError, InsufficientDataError, THRESHOLDS
from .fracsum import tf_exact_fast
from .hp import CTX, TWO_GAMMA_MINUS_ONE, as_fraction, hp, hp_sum

DEFAULT_DCUT = 10**7
_CHUNK = 1 << 20
_U = np.finfo(np.float64).eps / 2


@dataclass(frozen=True)
class TailBoundedValue:
    """``partial`` plus a radius that contains the full infinite sum."""
    partial: object
    tail_radius: float
    D_cut: int
    method: str = "series"

    @property
    def lo(self):
        return float(self.partial) - self.tail_radius

    @property
    def hi(self):
        return float(self.partial) + self.tail_radius

    def contains(self, value, slack=0.0):
        return abs(float(CTX.subtract(hp(value), self.partial))) <= self.tail_radius + slack


# ---- direct series ------------------------------------------------------------

def _c1_terms(f, d):
    return f.values(d) / (d * (d + 1.0))


def _c3_terms(f, d):
    # log d / d - log(d+1)/(d+1) = (log d - d log1p(1/d)) / (d (d+1)), no cancellation
    df = d.astype(np.float64)
    return f.values(d) * (np.log(df) - df * np.log1p(1.0 / df)) / (df * (df + 1.0))


def _series(f, terms, cut):
    parts, mass = [], 0.0
    for lo in range(1, cut + 1, _CHUNK):
        d = np.arange(lo, min(lo + _CHUNK, cut + 1), dtype=np.int64)
        t = terms(f, d)
        parts.append(float(np.sum(t)))
        mass += float(np.sum(np.abs(t)))
    # pairwise summation plus a few ulps per term, summed exactly across chunks
    rounding = (math.log2(_CHUNK) + 8) * _U * mass
    return hp_sum(parts), rounding


def _log_inflation(D):
    return 1.0 + 2.0 / (D * math.log(D))


def _incomplete_tail(K, alpha, k, D, inflate):
    """K * inflate * int_D^inf t^(alpha-2) (log t)^k dt."""
    s = 1.0 - alpha
    with mpmath.workdps(30):
        val = mpmath.gammainc(k + 1, s * mpmath.log(D)) / mpmath.mpf(s) ** (k + 1)
    return K * inflate * float(val)


def _effective_cut(D_cut, alpha, k):
    # t^(alpha-2) (log t)^k is decreasing for t >= exp(k/(2-alpha))
    need = math.exp(k / (2 - alpha)) if k > 0 else 1
    return max(D_cut, math.ceil(need), 3 if k > 0 else 1)


def c1_tail_radius(f, D):
    theta = f.log_power
    if theta == 0:
        return f.growth_constant * D ** (f.alpha - 1) / (1 - f.alpha)
    return _incomplete_tail(f.growth_constant, f.alpha, theta, D, _log_inflation(D) ** theta)


def c3_tail_radius(f, D):
    theta = f.log_power
    # |log d/d - log(d+1)/(d+1)| <= log(d+1)/d^2 for d >= 3
    inflate = (_log_inflation(D) ** theta) * (1.0 + 1.0 / (D * math.log(D)))
    return _incomplete_tail(f.growth_constant, f.alpha, theta + 1, D, inflate)


@lru_cache(maxsize=64)
def _c1_series(f, D_cut):
    cut = _effective_cut(D_cut, f.alpha, f.log_power)
    partial, rounding = _series(f, _c1_terms, cut)
    return TailBoundedValue(partial, float(c1_tail_radius(f, cut) + rounding), cut, "series")


@lru_cache(maxsize=64)
def _c3_series(f, D_cut):
    cut = _effective_cut(max(D_cut, 3), f.alpha, f.log_power + 1)
    partial, rounding = _series(f, _c3_terms, cut)
    return TailBoundedValue(partial, float(c3_tail_radius(f, cut) + rounding), cut, "series")


def _pick(f, method):
    if method not in ("auto", "series", "closed"):
        raise DomainError(f"unknown method {method!r}")
    if method == "closed" and f.closed_form is None:
        raise DomainError(f"{f.name} has no closed form")
    return method == "closed" or (method == "auto" and f.closed_form is not None)


def c1(f, D_cut=DEFAULT_DCUT, method="auto"):
    """C1(f) = sum_{d >= 1} f(d) / (d (d+1))."""
    if D_cut < 1:
        raise DomainError("D_cut must be >= 1")
    if _pick(f, method):
        v1, _, rad = f.closed_form()
        return TailBoundedValue(v1, rad, 0, "closed")
    return _c1_series(f, int(D_cut))


def c3(f, D_cut=DEFAULT_DCUT, method="auto"):
    """C3(f) = sum_{d >= 1} f(d) (log d / d - log(d+1) / (d+1))."""
    if D_cut < 3:
        raise DomainError("D_cut must be >= 3")
    if _pick(f, method):
        _, v3, rad = f.closed_form()
        return TailBoundedValue(v3, rad, 0, "closed")
    return _c3_series(f, int(D_cut))


def c2(f, D_cut=DEFAULT_DCUT, method="auto"):
    """C2(f) = (2 gamma - 1) C1(f) - C3(f), with radii combined."""
    a = c1(f, D_cut, method)
    b = c3(f, D_cut, method)
    partial = CTX.subtract(CTX.multiply(TWO_GAMMA_MINUS_ONE, a.partial), b.partial)
    radius = float(TWO_GAMMA_MINUS_ONE) * a.tail_radius + b.tail_radius
    return TailBoundedValue(partial, radius, max(a.D_cut, b.D_cut), a.method)


# ---- main and error terms -------------------------------------------------------

class MainTerm(NamedTuple):
    value: object
    uncertainty: float


class ErrorTerm(NamedTuple):
    value: object
    uncertainty: float
    flagged: bool


def main_term(f, x, D_cut=DEFAULT_DCUT, method="auto"):
    """C1 x log x + C2 x at midpoint constants, plus the spread from their radii."""
    if x < 2:
        raise DomainError("main term needs x >= 2")
    a = c1(f, D_cut, method)
    b = c2(f, D_cut, method)
    xh = hp(as_fraction(x))
    xlog = CTX.multiply(xh, CTX.ln(xh))
    value = CTX.add(CTX.multiply(a.partial, xlog), CTX.multiply(b.partial, xh))
    unc = float(xlog) * a.tail_radius + float(xh) * b.tail_radius
    return MainTerm(value, unc)


def error_term(f, x, D_cut=DEFAULT_DCUT, method="auto", memo=None, threads=1):
    """E(x) = T_f(x) - main term; flagged when the constant spread is >= 1% of |E|."""
    mt = main_term(f, x, D_cut, method)
    e = CTX.subtract(tf_exact_fast(f, x, memo, threads), mt.value)
    flagged = mt.uncertainty >= THRESHOLDS.constant_gate * abs(float(e))
    return ErrorTerm(e, mt.uncertainty, flagged)


# ---- exponents and fits ----------------------------------------------------------

HUXLEY_DELTA = 131 / 416
CONJECTURED_DELTA = 0.25


@dataclass(frozen=True)
class ExponentSet:
    alpha: float
    theta: float
    zhai_wu: float
    conditional: float
    huxley_driven: float
    theorem: float

    def conditional_at(self, theta):
        return (self.alpha * (1 - theta) + 1) / (2 - theta)


def predicted_exponents(alpha, theta=0.25):
    """Reference error exponents for T_f with f(n) << n^alpha."""
    if not (0 <= alpha < 1):
        raise DomainError(f"alpha must lie in [0, 1), got {alpha}")
    if not (0 < theta <= 0.5):
        raise DomainError(f"theta must lie in (0, 1/2], got {theta}")
    return ExponentSet(
        alpha=alpha, theta=theta,
        zhai_wu=(1 + alpha) / 2,
        conditional=(alpha * (1 - theta) + 1) / (2 - theta),
        huxley_driven=(416 + 285 * alpha) / 701,
        theorem=(4 + 3 * alpha) / 7,
    )


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual_rms: float
    points_used: int


def fit_exponent(samples, floor=THRESHOLDS.fit_floor):
    """Least-squares line through (log x, log |E|), dropping |E| < floor."""
    pts = [(float(x), abs(float(e))) for x, e in samples if abs(float(e)) >= floor]
    if len(pts) < 2:
        raise InsufficientDataError(f"need >= 2 samples above {floor}, got {len(pts)}")
    lx = np.log([p[0] for p in pts])
    ly = np.log([p[1] for p in pts])
    if np.ptp(lx) == 0:
        raise InsufficientDataError("all samples share one x")
    A = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - (slope * lx + intercept)
    return FitResult(float(slope), float(intercept),
                     float(np.sqrt(np.mean(resid**2))), len(pts))


def geometric_grid(x_min, x_max, points):
    """Strictly increasing integer grid, roughly geometric, deduplicated."""
    if points <= 0:
        return []
    if points == 1:
        return [int(round(x_min))]
    raw = np.geomspace(x_min, x_max, points)
    out = []
    for v in raw:
        k = int(round(v))
        if out and k <= out[-1]:
            k = out[-1] + 1
        out.append(k)
    return out
