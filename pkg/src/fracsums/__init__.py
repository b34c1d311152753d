"""Exact fractional divisor sums T_f(x) = sum_{n<=x} f(floor(x/n)) tau(n) and their asymptotics."""

__version__ = "0.1.0"

from .arith import QuotientBlock, quotient_blocks, tau_sieve
from .asymptotics import (ExponentSet, FitResult, TailBoundedValue, c1, c2, c3,
                          error_term, fit_exponent, main_term, predicted_exponents)
from .config import CapacityError, DomainError, InsufficientDataError
from .divisor import (DeltaAverageReport, delta, delta_average, delta_average_shifted,
                      delta_psi_form, divisor_summatory)
from .expsum import ExpSumParams, rs_bound, rs_ratio_sweep, rs_sum, star_norm
from .fracsum import DecompositionReport, sf_exact, tf_decomposition, tf_exact_fast, tf_exact_sieve
from .functions import FunctionSpec, LOG_FLOOR, ONE, SQRT_FLOOR, get_function, pow_floor
from .hp import EULER_GAMMA, HighPrecReal, hp, hp_sum
from .psi import VaalerSeries, psi, psi_truncated, vaaler_error_bound, vaaler_phi
