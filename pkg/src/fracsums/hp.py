"""High-precision reals backed by :mod:`decimal`.

A ``HighPrecReal`` is a ``decimal.Decimal`` produced under :data:`CTX`
(40 significant digits).  Integers up to 10**40 convert exactly, which
covers every 128-bit value.  Sums go through :func:`hp_sum`, which adds
exactly and rounds once, so the result does not depend on term order or
chunking.
"""

from decimal import Decimal, Context, ROUND_HALF_EVEN, MAX_PREC, MAX_EMAX, MIN_EMIN
from fractions import Fraction
import numbers

HighPrecReal = Decimal

DIGITS = 40
CTX = Context(prec=DIGITS, rounding=ROUND_HALF_EVEN)
_EXACT = Context(prec=MAX_PREC, Emax=MAX_EMAX, Emin=MIN_EMIN)

# Euler-Mascheroni constant to 40 decimals; checked against a Richardson
# extrapolation of H_n - log n in the test suite.
EULER_GAMMA = Decimal("0.5772156649015328606065120900824024310422")
TWO_GAMMA_MINUS_ONE = CTX.subtract(CTX.multiply(2, EULER_GAMMA), 1)


def hp(value):
    """Convert ``value`` to a HighPrecReal.

    ints and floats convert exactly (floats are dyadic rationals);
    Fractions are divided at 40 digits.
    """
    if isinstance(value, Decimal):
        return CTX.plus(value)
    if isinstance(value, bool):
        return Decimal(int(value))
    if isinstance(value, numbers.Integral):
        return CTX.plus(Decimal(int(value)))
    if isinstance(value, float):
        return CTX.plus(Decimal(value))
    if isinstance(value, Fraction):
        return CTX.divide(Decimal(value.numerator), Decimal(value.denominator))
    if isinstance(value, numbers.Rational):
        return CTX.divide(Decimal(int(value.numerator)), Decimal(int(value.denominator)))
    if isinstance(value, numbers.Real):
        return CTX.plus(Decimal(float(value)))
    # mpmath mpf and friends
    return CTX.create_decimal(str(value))


def _exact(value):
    t = type(value)
    if t is Decimal:
        return value
    if t is int or t is float:
        return Decimal(value)
    if isinstance(value, numbers.Integral):
        return Decimal(int(value))
    return hp(value)


def hp_sum(terms):
    """Sum ``terms`` exactly, then round once to 40 digits."""
    acc = Decimal(0)
    for t in terms:
        acc = _EXACT.add(acc, _exact(t))
    return CTX.plus(acc)


def hp_dot(weights, values):
    """Exact ``sum(w * v)`` rounded once; weights are usually integers."""
    whole = 0
    acc = Decimal(0)
    for w, v in zip(weights, values):
        if type(w) is int and type(v) is int:
            whole += w * v
        else:
            acc = _EXACT.add(acc, _EXACT.multiply(_exact(w), _exact(v)))
    return CTX.plus(_EXACT.add(acc, Decimal(whole)))


def hp_ln(value):
    return CTX.ln(hp(value))


def hp_div(a, b):
    return CTX.divide(_exact(a), _exact(b))


def hp_mul(a, b):
    return CTX.multiply(_exact(a), _exact(b))


def hp_add(a, b):
    return CTX.add(_exact(a), _exact(b))


def hp_sub(a, b):
    return CTX.subtract(_exact(a), _exact(b))


def as_fraction(x):
    """Exact rational value of an int, float, Fraction or Decimal."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, (float, Decimal)):
        return Fraction(x)
    if isinstance(x, numbers.Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    return Fraction(float(x))


def fmt_hp(value, digits=32):
    """Render with up to ``digits`` significant digits (integers stay integral)."""
    return format(Decimal(value), f".{digits}g")


def fmt_float(value):
    return format(float(value), ".17g")
