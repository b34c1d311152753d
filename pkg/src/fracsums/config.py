"""Caps, thresholds and error types shared across the package."""

import os
from dataclasses import dataclass, field


class FracsumsError(Exception):
    """Base class for package errors."""


class DomainError(FracsumsError, ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(FracsumsError, MemoryError):
    """A request exceeds a configured memory or work cap."""


class InsufficientDataError(FracsumsError, ValueError):
    """Too few usable samples for a fit."""


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    return int(float(raw))


@dataclass(frozen=True)
class Limits:
    # sieve arrays above this many entries are refused
    memory_cap: int = field(default_factory=lambda: _env_int("FRACSUMS_MEMORY_CAP", 10**8))
    # sieve segment length; segmentation kicks in above this
    segment: int = 10**7
    # exact starred norm up to this length, prefix proxy beyond
    star_exact_cutoff: int = field(
        default_factory=lambda: _env_int("FRACSUMS_STAR_CUTOFF", 4096))
    # cap on H*N*M in rs_sum
    rs_work_cap: int = field(default_factory=lambda: _env_int("FRACSUMS_RS_WORK_CAP", 10**8))


@dataclass(frozen=True)
class Thresholds:
    lemma1_residual: float = 3.0
    vaaler_slack: float = 1e-12
    rs_ratio_ceiling: float = 100.0
    prop_ratio_ceiling: float = 100.0
    fit_floor: float = 1e-6
    fit_margin: float = 0.08
    constant_gate: float = 0.01
    prop_eps: float = 0.05
    rs_eps: float = 0.1


def limits():
    """Current limits (re-reads environment overrides)."""
    return Limits()


THRESHOLDS = Thresholds()
