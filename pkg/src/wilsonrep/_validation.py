"""Input validation helpers shared by the estimators and the CLI."""
from __future__ import annotations

import numbers

from .timefreq import SampledFunction
from .wilson import DistributionInput, WilsonCoeffs


def check_nonneg_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
    return int(value)


def check_positive(value, name):
    if not isinstance(value, numbers.Real) or not value > 0:
        raise ValueError(f"{name} must be positive, got {value!r}")
    return float(value)


def check_signal(X):
    """Accept one analysable input or a list of them; return (items, was_single)."""
    ok = (SampledFunction, DistributionInput)
    if isinstance(X, ok):
        return [X], True
    items = list(X)
    for item in items:
        if not isinstance(item, ok):
            raise TypeError(
                f"expected SampledFunction or DistributionInput, got {type(item).__name__}"
            )
    return items, False


def check_coeffs(C, kind=WilsonCoeffs):
    if isinstance(C, kind):
        return [C], True
    items = list(C)
    for item in items:
        if not isinstance(item, kind):
            raise TypeError(f"expected {kind.__name__}, got {type(item).__name__}")
    return items, False

