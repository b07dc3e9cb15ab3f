"""scikit-learn style wrappers around the analysis, synthesis and classification routines."""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_coeffs, check_nonneg_int, check_positive, check_signal
from .seqspace import Thresholds, classify
from .timefreq import GaborCoeffs, SampledFunction, gabor_analysis, gabor_synthesis
from .window import (
    DEFAULT_GRID_STEP,
    WINDOW_TOLERANCE,
    WindowError,
    build_wilson_window,
    check_symmetry,
    wilson_condition_residual,
)
from .wilson import (
    DistributionInput,
    WilsonCoeffs,
    distribution_coefficients,
    wilson_analysis,
    wilson_synthesis,
)

__all__ = ["WilsonTransform", "GaborTransform", "DecayClassifier"]


def _fit_window(est):
    check_positive(est.grid_step, "grid_step")
    window = est.window if est.window is not None else build_wilson_window(est.grid_step)
    return window


class WilsonTransform(TransformerMixin, BaseEstimator):
    """Wilson analysis as ``transform`` and synthesis as ``inverse_transform``.

    Parameters
    ----------
    K, N : int
        Truncation k in [-K, K], n in [0, N].
    grid_step : float
        Step of the canonical window when ``window`` is None.
    window : Window, optional
        A custom window; it must pass the Wilson condition check in ``fit``.
    """

    def __init__(self, K=3, N=64, grid_step=DEFAULT_GRID_STEP, window=None):
        self.K = K
        self.N = N
        self.grid_step = grid_step
        self.window = window

    def fit(self, X=None, y=None):
        check_nonneg_int(self.K, "K")
        check_nonneg_int(self.N, "N")
        window = _fit_window(self)
        self.residual_ = wilson_condition_residual(window, 3)
        self.symmetry_ = check_symmetry(window)
        if self.residual_.max() > WINDOW_TOLERANCE:
            raise WindowError(
                f"window violates the Wilson condition (residual {self.residual_.max():.3g})"
            )
        self.window_ = window
        return self

    def transform(self, X):
        check_is_fitted(self, "window_")
        items, single = check_signal(X)
        out = []
        for item in items:
            if isinstance(item, SampledFunction):
                out.append(wilson_analysis(item, self.window_, self.K, self.N))
            else:
                out.append(distribution_coefficients(item, self.window_, self.K, self.N))
        return out[0] if single else out

    def inverse_transform(self, C, grid=None):
        check_is_fitted(self, "window_")
        items, single = check_coeffs(C, WilsonCoeffs)
        out = [wilson_synthesis(c, self.window_, grid) for c in items]
        return out[0] if single else out


class GaborTransform(TransformerMixin, BaseEstimator):
    """Lattice Gabor analysis/synthesis on a Z x b Z."""

    def __init__(self, a=0.5, b=1.0, K=3, N=64, grid_step=DEFAULT_GRID_STEP, window=None):
        self.a = a
        self.b = b
        self.K = K
        self.N = N
        self.grid_step = grid_step
        self.window = window

    def fit(self, X=None, y=None):
        check_positive(self.a, "a")
        check_positive(self.b, "b")
        check_nonneg_int(self.K, "K")
        check_nonneg_int(self.N, "N")
        self.window_ = _fit_window(self)
        return self

    def transform(self, X):
        check_is_fitted(self, "window_")
        items, single = check_signal(X)
        for item in items:
            if isinstance(item, DistributionInput):
                raise TypeError("Gabor analysis takes sampled functions only")
        out = [gabor_analysis(f, self.window_, self.a, self.b, self.K, self.N) for f in items]
        return out[0] if single else out

    def inverse_transform(self, C, grid=None):
        check_is_fitted(self, "window_")
        items, single = check_coeffs(C, GaborCoeffs)
        out = [gabor_synthesis(c, self.window_, grid) for c in items]
        return out[0] if single else out


class DecayClassifier(BaseEstimator):
    """Predict the smallest table space consistent with a coefficient array.

    ``predict`` returns the smallest label (None when inconclusive);
    ``classify`` returns the full reports.
    """

    def __init__(self, p=2.0, max_order=6, zero_tol=1e-12, edge_tol=1e-8,
                 rapid_slope=0.5, flat_tol=0.25, tail_tol=1e-6):
        self.p = p
        self.max_order = max_order
        self.zero_tol = zero_tol
        self.edge_tol = edge_tol
        self.rapid_slope = rapid_slope
        self.flat_tol = flat_tol
        self.tail_tol = tail_tol

    def fit(self, X=None, y=None):
        if not self.p >= 1:
            raise ValueError(f"p must lie in [1, inf], got {self.p}")
        check_nonneg_int(self.max_order, "max_order")
        self.thresholds_ = Thresholds(
            zero_tol=self.zero_tol,
            edge_tol=self.edge_tol,
            rapid_slope=self.rapid_slope,
            flat_tol=self.flat_tol,
            tail_tol=self.tail_tol,
            max_order=self.max_order,
            p=self.p,
        )
        return self

    def classify(self, C):
        check_is_fitted(self, "thresholds_")
        items, single = check_coeffs(C, WilsonCoeffs)
        out = [classify(c, self.thresholds_) for c in items]
        return out[0] if single else out

    def predict(self, C):
        reports = self.classify(C)
        if isinstance(reports, list):
            return [r.smallest for r in reports]
        return reports.smallest
