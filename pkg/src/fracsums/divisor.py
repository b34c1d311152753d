"""Divisor summatory function D(x), the error term Delta(x) and its averages."""

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import divisor_prefix_table, floor_of
from .config import DomainError, THRESHOLDS
from .hp import CTX, EULER_GAMMA, TWO_GAMMA_MINUS_ONE, as_fraction, hp

_CHUNK = 1 << 20
_SMALL = 48


def _hyperbola(m):
    s = math.isqrt(m)
    if s <= _SMALL or m >= 1 << 62:
        total = sum(m // n for n in range(1, s + 1))
    else:
        total = 0
        for lo in range(1, s + 1, _CHUNK):
            n = np.arange(lo, min(lo + _CHUNK, s + 1), dtype=np.int64)
            total += int((m // n).sum())
    return 2 * total - s * s


def divisor_summatory(x):
    """D(x) = sum_{n <= x} tau(n), exactly, in O(sqrt x).

    Uses D(x) = 2 sum_{n <= sqrt x} floor(x/n) - floor(sqrt x)^2.
    """
    if x < 1:
        raise DomainError(f"D(x) needs x >= 1, got {x!r}")
    return _hyperbola(floor_of(x))


def delta(x):
    """Delta(x) = D(x) - x (log x + 2 gamma - 1) as a HighPrecReal."""
    d = divisor_summatory(x)
    xh = hp(as_fraction(x))
    main = CTX.multiply(xh, CTX.add(CTX.ln(xh), TWO_GAMMA_MINUS_ONE))
    return CTX.subtract(d, main)


def delta_psi_form(x):
    """-2 sum_{n <= sqrt x} psi(x/n), evaluated with exact fractional parts."""
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x!r}")
    fr = as_fraction(x)
    a, b = fr.numerator, fr.denominator
    s = math.isqrt(a // b)
    # psi(a/(b n)) = (a mod bn)/(bn) - 1/2
    if a < 1 << 62 and b * s < 1 << 62 and s > 0:
        n = np.arange(1, s + 1, dtype=np.int64) * b
        frac = (a % n) / n
        return -2.0 * math.fsum(frac - 0.5)
    return -2.0 * math.fsum((a % (b * n)) / (b * n) - 0.5 for n in range(1, s + 1))


# ---- vectorised Delta on rational grids -------------------------------------

_TABLE_MAX = 1 << 25
_table_lock = threading.Lock()
_table = np.zeros(1, dtype=np.int64)


def _prefix_upto(limit):
    global _table
    with _table_lock:
        if len(_table) <= limit:
            size = min(max(limit, 2 * (len(_table) - 1), 1 << 16), _TABLE_MAX)
            _table = divisor_prefix_table(size)
        return _table


def divisor_summatory_many(m):
    """D(m) for an int64 array of floors, using a sieve table when it pays."""
    m = np.asarray(m, dtype=np.int64)
    if len(m) == 0:
        return m.copy()
    top = int(m.max())
    if len(m) > 64 and top <= _TABLE_MAX:
        return _prefix_upto(top)[m]
    return np.array([_hyperbola(int(k)) for k in m], dtype=np.int64)


def delta_rational(num, den):
    """Delta(num/den) elementwise with exact floors.

    Returns ``(values, radius)``: the main term is evaluated in double
    precision and ``radius`` bounds the accumulated rounding of
    ``sum |values|``.
    """
    num = np.asarray(num, dtype=np.int64)
    den = np.asarray(den, dtype=np.int64)
    fl = num // den
    if len(fl) and fl.min() < 1:
        raise DomainError("Delta needs arguments >= 1")
    y = num / den
    main = y * (np.log(y) + float(TWO_GAMMA_MINUS_ONE))
    vals = divisor_summatory_many(fl) - main
    eps = np.finfo(np.float64).eps
    radius = float(np.sum(4 * eps * y * (np.abs(np.log(y)) + 2))) + len(vals) * eps * float(np.max(np.abs(vals), initial=0))
    return vals, radius


def delta_real(y):
    """Delta at float arguments (floors taken from the float value)."""
    y = np.asarray(y, dtype=np.float64)
    if len(y) and y.min() < 1:
        raise DomainError("Delta needs arguments >= 1")
    fl = np.floor(y).astype(np.int64)
    main = y * (np.log(y) + float(TWO_GAMMA_MINUS_ONE))
    vals = divisor_summatory_many(fl) - main
    eps = np.finfo(np.float64).eps
    radius = float(np.sum(4 * eps * y * (np.abs(np.log(y)) + 2)))
    return vals, radius


@dataclass
class DeltaAverageReport:
    """An averaged |Delta| sum against its proposition bound."""
    lhs: float
    bound: float
    ratio: float
    params: dict = field(default_factory=dict)
    rounding: float = 0.0

    @property
    def regime(self):
        big_x = self.params.get("X")
        return "D>=sqrtX" if self.params["D"] ** 2 >= big_x else "D<sqrtX"

    def row(self):
        out = dict(self.params)
        out.update(lhs=self.lhs, bound=self.bound, ratio=self.ratio,
                   regime=self.regime, rounding=self.rounding)
        return out


def _report(vals, radius, bound, params):
    lhs = math.fsum(np.abs(vals))
    return DeltaAverageReport(lhs=lhs, bound=float(bound), ratio=lhs / bound,
                              params=params, rounding=float(radius))


def delta_average(X, D, alpha, eps=THRESHOLDS.prop_eps):
    """sum_{D < d <= 2D} |Delta(X d^alpha / D^alpha)| against (X^3/8 D^3/4 + X^1/4 D)(XD)^eps."""
    if X < 1 or D < 1:
        raise DomainError("need X >= 1 and D >= 1")
    if alpha == 0:
        raise DomainError("alpha must be nonzero")
    D = int(D)
    d = np.arange(D + 1, 2 * D + 1, dtype=np.int64)
    fr = as_fraction(X)
    if float(alpha).is_integer() and fr.denominator == 1 and X * (2 * D) ** abs(alpha) < 2**62:
        k = int(abs(alpha))
        xn = fr.numerator
        if alpha > 0:
            num, den = xn * d**k, np.full_like(d, D**k)
        else:
            num, den = np.full_like(d, xn * D**k), d**k
        if (num // den).min() < 1:
            raise DomainError("argument of Delta below 1")
        vals, radius = delta_rational(num, den)
    else:
        y = float(X) * (d / D) ** float(alpha)
        if y.min() < 1:
            raise DomainError("argument of Delta below 1")
        vals, radius = delta_real(y)
    Xf = float(X)
    bound = (Xf**0.375 * D**0.75 + Xf**0.25 * D) * (Xf * D) ** eps
    return _report(vals, radius, bound, dict(X=Xf, D=D, alpha=float(alpha), eps=eps))


def delta_average_shifted(x, D, delta_shift, eps=THRESHOLDS.prop_eps):
    """sum_{D < d <= 2D} |Delta(x/(d + shift))| against (x^3/8 D^3/8 + x^1/4 D^3/4) x^eps."""
    if delta_shift not in (0, 1):
        raise DomainError("delta_shift must be 0 or 1")
    D = int(D)
    if D < 1 or D > x:
        raise DomainError("need 1 <= D <= x")
    if x < 2 * D + delta_shift:
        raise DomainError("x/(2D + shift) must be >= 1")
    d = np.arange(D + 1, 2 * D + 1, dtype=np.int64) + delta_shift
    fr = as_fraction(x)
    if fr.numerator < 2**62 and fr.denominator * (2 * D + 1) < 2**62:
        vals, radius = delta_rational(np.full_like(d, fr.numerator), d * fr.denominator)
    else:
        vals, radius = delta_real(float(x) / d)
    xf = float(x)
    bound = (xf**0.375 * D**0.375 + xf**0.25 * D**0.75) * xf**eps
    return _report(vals, radius, bound,
                   dict(x=xf, X=xf / D, D=D, shift=delta_shift, eps=eps))


def gamma_oracle(n0=1000, levels=6):
    """Euler's constant from H_n - log n, Richardson-extrapolated in 1/n.

    Independent of the stored constant; good to well beyond 12 digits.
    """
    from decimal import Context
    ctx = Context(prec=60)
    vals = []
    for j in range(levels):
        n = n0 << j
        h = sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))
        hd = ctx.divide(h.numerator, h.denominator)
        vals.append(ctx.subtract(hd, ctx.ln(ctx.create_decimal(n))))
    # error expansion has terms in 1/n^k, k >= 1; steps halve n^-1
    table = vals
    for k in range(1, levels):
        f = 2**k
        table = [ctx.divide(ctx.subtract(ctx.multiply(f, table[i + 1]), table[i]), f - 1)
                 for i in range(len(table) - 1)]
    return table[0]


__all__ = ["divisor_summatory", "delta", "delta_psi_form", "delta_average",
           "delta_average_shifted", "DeltaAverageReport", "gamma_oracle",
           "divisor_summatory_many", "delta_rational", "EULER_GAMMA"]
