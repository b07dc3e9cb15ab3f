"""Compactly supported smooth windows generating Wilson bases.

The canonical window is built from the smooth transition

    s(x) = h(x) / (h(x) + h(1 - x)),    h(x) = exp(-1/x) for x > 0, else 0,

as the square root of a partition of unity on the half-integer lattice:
psi(x) = sqrt(2) sin(pi/2 s(2x + 1)) on [-1/2, 0] and sqrt(2) cos(pi/2 s(2x))
on [0, 1/2].  Since s(1 - y) = 1 - s(y), the shifted squares sum to exactly 2.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

__all__ = [
    "Window",
    "WindowError",
    "smooth_step",
    "build_wilson_window",
    "wilson_condition_residual",
    "check_symmetry",
    "period_grid",
    "WINDOW_TOLERANCE",
    "DEFAULT_GRID_STEP",
]

WINDOW_TOLERANCE = 1e-10
DEFAULT_GRID_STEP = 2.0**-10
VERIFY_STEP = 1e-3


class WindowError(ValueError):
    """Raised for windows that cannot be verified or differentiated."""


def _h(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def smooth_step(x):
    """C-infinity step: 0 on (-inf, 0], 1 on [1, inf), with s(1-x) = 1-s(x)."""
    x = np.asarray(x, dtype=float)
    a = _h(x)
    b = _h(1.0 - x)
    # a + b > 0 everywhere: at least one of x, 1-x exceeds 1/2
    out = a / (a + b)
    return out if out.ndim else float(out)


@lru_cache(maxsize=None)
def _canonical_derivative(order: int):
    """Lambdified derivatives of the two window branches as functions of x."""
    import sympy as sp

    x = sp.Symbol("x", real=True)
    h = lambda z: sp.exp(-1 / z)  # noqa: E731
    s = lambda z: h(z) / (h(z) + h(1 - z))  # noqa: E731
    left = sp.sqrt(2) * sp.sin(sp.pi / 2 * s(2 * x + 1))
    right = sp.sqrt(2) * sp.sin(sp.pi / 2 * s(1 - 2 * x))
    return (
        sp.lambdify(x, sp.diff(left, x, order), "numpy"),
        sp.lambdify(x, sp.diff(right, x, order), "numpy"),
    )


def _canonical(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    left = (x >= -0.5) & (x < 0.0)
    right = (x >= 0.0) & (x <= 0.5)
    out[left] = math.sqrt(2.0) * np.sin(0.5 * np.pi * smooth_step(2.0 * x[left] + 1.0))
    # sin(pi/2 s(1-2x)) = cos(pi/2 s(2x)); the sine form is exactly 0 at x = 1/2
    out[right] = math.sqrt(2.0) * np.sin(0.5 * np.pi * smooth_step(1.0 - 2.0 * x[right]))
    return out


def _canonical_deriv(x, order: int):
    x = np.asarray(x, dtype=float)
    if order == 0:
        return _canonical(x)
    f_left, f_right = _canonical_derivative(order)
    out = np.zeros_like(x)
    # every derivative of s vanishes outside (0, 1), hence so does every
    # derivative of psi at the knots -1/2, 0, 1/2
    left = (x > -0.5) & (x < 0.0)
    right = (x > 0.0) & (x < 0.5)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
        if left.any():
            out[left] = f_left(x[left])
        if right.any():
            out[right] = f_right(x[right])
    out[~np.isfinite(out)] = 0.0
    return out


@dataclass(frozen=True)
class Window:
    """Real, even, compactly supported window.

    ``evaluator`` is wrapped so that the window is exactly zero outside
    ``[-support_radius, support_radius]`` regardless of what it returns there.
    """

    evaluator: Callable
    support_radius: float = 0.5
    grid_step: float = DEFAULT_GRID_STEP
    derivative: Optional[Callable] = field(default=None, compare=False)
    name: str = "custom"

    def __post_init__(self):
        if not (self.grid_step > 0):
            raise WindowError("grid_step must be positive")
        if not self.support_radius > 0:
            raise WindowError(f"support_radius must be positive, got {self.support_radius}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        vals = np.asarray(self.evaluator(x), dtype=float) * np.ones_like(x)
        out = np.where(np.abs(x) <= self.support_radius, vals, 0.0)
        return out if out.ndim else float(out)

    def deriv(self, x, order: int = 1):
        """Closed-form ``order``-th derivative; requires ``derivative``."""
        if order == 0:
            return self(x)
        if self.derivative is None:
            raise WindowError(f"window {self.name!r} has no closed-form derivative")
        x = np.asarray(x, dtype=float)
        vals = np.asarray(self.derivative(x, order), dtype=float) * np.ones_like(x)
        out = np.where(np.abs(x) <= self.support_radius, vals, 0.0)
        return out if out.ndim else float(out)

    def half_width(self, step: Optional[float] = None) -> int:
        """Number of grid steps in the support radius (must be integral)."""
        step = self.grid_step if step is None else step
        if not math.isfinite(self.support_radius):
            raise WindowError("window support is not compact")
        m = self.support_radius / step
        if abs(m - round(m)) > 1e-9:
            raise WindowError(
                f"support radius {self.support_radius} is not a multiple of step {step}"
            )
        return int(round(m))

    def sample(self, step: Optional[float] = None):
        """Return (points, values) on [-R, R] inclusive."""
        step = self.grid_step if step is None else step
        m = self.half_width(step)
        pts = np.arange(-m, m + 1) * step
        return pts, self(pts)

    def scaled(self, alpha: float) -> "Window":
        deriv = None
        if self.derivative is not None:
            base = self.derivative
            deriv = lambda x, order: alpha * base(x, order)  # noqa: E731
        return Window(
            evaluator=lambda x: alpha * np.asarray(self.evaluator(x)),
            support_radius=self.support_radius,
            grid_step=self.grid_step,
            derivative=deriv,
            name=f"{alpha}*{self.name}",
        )

    def to_json(self) -> str:
        _, vals = self.sample()
        payload = {
            "support_radius": self.support_radius,
            "grid_step": self.grid_step,
            "samples": [float(v) for v in vals],
        }
        return json.dumps(payload)


def build_wilson_window(grid_step: float = DEFAULT_GRID_STEP) -> Window:
    """Canonical window supported on [-1/2, 1/2] with psi(0) = sqrt(2)."""
    return Window(
        evaluator=_canonical,
        support_radius=0.5,
        grid_step=grid_step,
        derivative=_canonical_deriv,
        name="canonical",
    )


def period_grid(step: float = VERIFY_STEP, offset: float = 0.0) -> np.ndarray:
    """Uniform grid over one period [offset, offset + 1/2] of the lattice sum."""
    m = int(round(0.5 / step))
    return offset + np.arange(m + 1) * (0.5 / m)


def _shift_range(grid, radius):
    lo = math.floor(2.0 * (np.min(grid) - radius)) - 1
    hi = math.ceil(2.0 * (np.max(grid) + radius)) + 1
    return range(lo, hi + 1)


def wilson_condition_residual(w: Window, n_max: int = 3, grid=None) -> np.ndarray:
    """Sup over ``grid`` of |sum_k psi(x-n-k/2) psi(x-k/2) - 2 delta_{n,0}|.

    Only the finitely many shifts k whose support meets the grid contribute.
    """
    if n_max < 0:
        raise WindowError("n_max must be >= 0")
    if not math.isfinite(w.support_radius):
        raise WindowError("window support is not compact; the lattice sum is infinite")
    grid = period_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise WindowError("verification grid is empty")
    ks = _shift_range(grid, w.support_radius)
    out = np.empty(n_max + 1)
    for n in range(n_max + 1):
        acc = np.zeros_like(grid)
        for k in ks:
            acc += w(grid - n - 0.5 * k) * w(grid - 0.5 * k)
        target = 2.0 if n == 0 else 0.0
        out[n] = np.max(np.abs(acc - target))
    return out


def check_symmetry(w: Window, grid=None) -> float:
    """Sup over ``grid`` of |psi(x) - conj(psi(-x))|."""
    if grid is None:
        grid = np.linspace(-w.support_radius, w.support_radius, 1001)
    grid = np.asarray(grid, dtype=float)
    return float(np.max(np.abs(w(grid) - np.conj(w(-grid)))))
