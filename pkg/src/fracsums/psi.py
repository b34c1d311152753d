"""The sawtooth psi(t) and Vaaler's trigonometric approximation of it."""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import DomainError


def psi(t):
    """psi(t) = t - floor(t) - 1/2.

    Fractions and ints are handled exactly; psi(integer) = -1/2.
    """
    if isinstance(t, (int, Fraction)):
        return t - math.floor(t) - Fraction(1, 2)
    return t - math.floor(t) - 0.5


def psi_array(t):
    t = np.asarray(t, dtype=np.float64)
    return t - np.floor(t) - 0.5


def vaaler_phi(t):
    """Vaaler's weight Phi(t) = pi t (1 - |t|) cot(pi t) + |t| on [-1, 1].

    Continuous extension at the removable points: Phi(0) = 1, Phi(+-1) = 0.
    This is the weight for which the Fejer-kernel error majorant holds;
    see :func:`vaaler_phi_cos` for the cosine variant.
    """
    if abs(t) > 1:
        raise DomainError(f"Phi defined on [-1, 1], got {t}")
    a = abs(t)
    if a == 0:
        return 1.0
    if a == 1:
        return 0.0
    return math.pi * t * (1 - a) / math.tan(math.pi * t) + a


def vaaler_phi_cos(t):
    """pi t (1 - |t|) cos(pi t) + |t|, the cosine variant of the weight.

    Kept for comparison only: its truncated series does not satisfy the
    Fejer-kernel error bound (it vanishes at t = 0 instead of tending to 1).
    """
    if abs(t) > 1:
        raise DomainError(f"Phi defined on [-1, 1], got {t}")
    a = abs(t)
    return math.pi * t * (1 - a) * math.cos(math.pi * t) + a


def _phi_array(t, weight):
    if weight == "cos":
        return np.pi * t * (1 - t) * np.cos(np.pi * t) + t
    return np.pi * t * (1 - t) / np.tan(np.pi * t) + t


@dataclass(frozen=True)
class VaalerSeries:
    """Precomputed coefficients Phi(h/(H+1)) / (2 pi h), 1 <= h <= H."""
    H: int
    coeffs: np.ndarray

    @classmethod
    def build(cls, H, weight="cot"):
        if H < 1:
            raise DomainError("H must be >= 1")
        h = np.arange(1, H + 1, dtype=np.float64)
        t = h / (H + 1)
        return cls(H, _phi_array(t, weight) / (2 * np.pi * h))

    def __call__(self, x):
        """Truncated series at scalar or array x.

        The h and -h terms pair up: -(c e(hx) - c e(-hx))/i = -2 c sin(2 pi h x).
        """
        x = np.asarray(x, dtype=np.float64)
        h = np.arange(1, self.H + 1, dtype=np.float64)
        # reduce x mod 1 first so sin arguments stay small
        frac = x - np.floor(x)
        ang = 2 * np.pi * np.multiply.outer(frac, h)
        return -2.0 * (np.sin(ang) @ self.coeffs)


def psi_truncated(x, H, weight="cot"):
    """-sum_{1 <= |h| <= H} Phi(h/(H+1)) e(hx) / (2 pi i h), real-valued."""
    val = VaalerSeries.build(H, weight)(x)
    return float(val) if np.ndim(val) == 0 else val


def vaaler_error_bound(x, H):
    """Fejer-kernel majorant (1/(2H+2)) sum_{|h| <= H} (1 - |h|/(H+1)) e(hx).

    Summed directly as 1 + 2 sum_h (1 - h/(H+1)) cos(2 pi h x); tiny negative
    rounding is clipped to 0.
    """
    if H < 1:
        raise DomainError("H must be >= 1")
    x = np.asarray(x, dtype=np.float64)
    frac = x - np.floor(x)
    h = np.arange(1, H + 1, dtype=np.float64)
    w = 1 - h / (H + 1)
    kern = 1 + 2 * (np.cos(2 * np.pi * np.multiply.outer(frac, h)) @ w)
    out = np.maximum(kern, 0.0) / (2 * H + 2)
    return float(out) if np.ndim(out) == 0 else out
