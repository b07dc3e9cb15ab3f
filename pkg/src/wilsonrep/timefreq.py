"""Sampled functions, time-frequency shifts and lattice Gabor operators.

All pairings are bilinear: ``inner_product(f, g)`` integrates ``f * g`` with no
hidden conjugation, so the analysis coefficient at ``(k, n)`` is the pairing of
``f`` against the explicitly conjugated atom ``conj(T_{ak} M_{bn} psi)``.
Integrals use composite Simpson on the stored grid.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .window import Window

__all__ = [
    "TimeFreqError",
    "AlignmentError",
    "GridError",
    "CoverageError",
    "Grid",
    "SampledFunction",
    "GaborCoeffs",
    "simpson_weights",
    "tf_shift",
    "inner_product",
    "stft",
    "gabor_analysis",
    "gabor_synthesis",
    "gabor_atom",
]

_ALIGN_TOL = 1e-9
BOUNDARY_TOL = 1e-12


class TimeFreqError(ValueError):
    pass


class AlignmentError(TimeFreqError):
    """A translation is not a whole number of grid steps."""


class GridError(TimeFreqError):
    """Two sampled functions live on incommensurable grids."""


class CoverageError(TimeFreqError):
    """An output grid does not cover the support of the result."""


def _steps(x: float, step: float) -> int:
    m = x / step
    r = round(m)
    if abs(m - r) > _ALIGN_TOL * max(1.0, abs(m)):
        raise AlignmentError(f"{x!r} is not a multiple of the grid step {step!r}")
    return int(r)


def simpson_weights(m: int, step: float) -> np.ndarray:
    """Composite Simpson weights for ``m`` (even) intervals."""
    if m < 0 or m % 2:
        raise ValueError(f"Simpson needs an even number of intervals, got {m}")
    w = np.ones(m + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (step / 3.0)


@dataclass(frozen=True)
class Grid:
    start: float
    step: float
    size: int

    @property
    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.size)

    @property
    def stop(self) -> float:
        return self.start + self.step * (self.size - 1)

    @classmethod
    def covering(cls, lo: float, hi: float, step: float) -> "Grid":
        """Smallest grid of multiples of ``step`` containing [lo, hi]."""
        i0 = math.floor(lo / step + _ALIGN_TOL)
        i1 = math.ceil(hi / step - _ALIGN_TOL)
        return cls(i0 * step, step, i1 - i0 + 1)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Complex samples on a uniform grid; exactly zero outside ``support``."""

    start: float
    step: float
    values: np.ndarray
    support: tuple

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "support", (float(self.support[0]), float(self.support[1])))
        if not self.step > 0:
            raise GridError("step must be positive")
        if vals.ndim != 1 or vals.size < 2:
            raise GridError("need at least two samples")
        lo, hi = self.support
        slack = _ALIGN_TOL * self.step + 1e-12
        if lo > hi or lo < self.start - slack or hi > self.stop + slack:
            raise GridError(f"support {self.support} not inside grid [{self.start}, {self.stop}]")
        if abs(vals[0]) > BOUNDARY_TOL or abs(vals[-1]) > BOUNDARY_TOL:
            raise GridError("first and last samples must vanish (grid must cover the support)")

    @property
    def stop(self) -> float:
        return self.start + self.step * (len(self.values) - 1)

    @property
    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(len(self.values))

    @property
    def grid(self) -> Grid:
        return Grid(self.start, self.step, len(self.values))

    @classmethod
    def from_callable(cls, func, support, step: float) -> "SampledFunction":
        lo, hi = support
        grid = Grid.covering(lo, hi, step)
        t = grid.points
        vals = np.where((t >= lo) & (t <= hi), func(t), 0.0)
        return cls(grid.start, step, vals, (lo, hi))

    def values_on(self, start: float, count: int) -> np.ndarray:
        """Samples at ``start + j*step`` for j < count, zero off the stored grid."""
        i0 = _steps(start - self.start, self.step)
        out = np.zeros(count, dtype=complex)
        lo, hi = max(i0, 0), min(i0 + count, len(self.values))
        if lo < hi:
            out[lo - i0 : hi - i0] = self.values[lo:hi]
        return out

    def l2_norm(self) -> float:
        return math.sqrt(inner_product(self, self.conj()).real)

    def conj(self) -> "SampledFunction":
        return SampledFunction(self.start, self.step, np.conj(self.values), self.support)

    def __sub__(self, other: "SampledFunction") -> "SampledFunction":
        return _combine(self, other, -1.0)

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        return _combine(self, other, 1.0)

    def __mul__(self, alpha) -> "SampledFunction":
        return SampledFunction(self.start, self.step, alpha * self.values, self.support)

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "step": self.step,
            "support": list(self.support),
            "values": [[v.real, v.imag] for v in self.values.tolist()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SampledFunction":
        vals = np.array([complex(re, im) for re, im in d["values"]])
        return cls(float(d["start"]), float(d["step"]), vals, tuple(d["support"]))


def _check_commensurable(f: SampledFunction, g: SampledFunction):
    if abs(f.step - g.step) > 1e-12 * f.step:
        raise GridError(f"incommensurable steps {f.step!r} and {g.step!r}")
    try:
        return _steps(g.start - f.start, f.step)
    except AlignmentError as exc:
        raise GridError(str(exc)) from None


def _combine(f, g, sign):
    off = _check_commensurable(f, g)
    i0 = min(0, off)
    i1 = max(len(f.values), off + len(g.values))
    start = f.start + i0 * f.step
    vals = f.values_on(start, i1 - i0) + sign * g.values_on(start, i1 - i0)
    support = (min(f.support[0], g.support[0]), max(f.support[1], g.support[1]))
    return SampledFunction(start, f.step, vals, support)


def tf_shift(f: SampledFunction, x: float, xi: float) -> SampledFunction:
    """Return M_xi T_x f; ``x`` must be a whole number of grid steps."""
    _steps(x, f.step)
    start = f.start + x
    t = start + f.step * np.arange(len(f.values))
    vals = f.values * np.exp(2j * np.pi * xi * t)
    return SampledFunction(start, f.step, vals, (f.support[0] + x, f.support[1] + x))


def inner_product(f: SampledFunction, g: SampledFunction) -> complex:
    """Simpson approximation of the integral of f*g (no conjugation)."""
    off = _check_commensurable(f, g)
    i0 = max(0, off)
    i1 = min(len(f.values), off + len(g.values))  # exclusive, f-indices
    if i1 - i0 < 2:
        return 0j
    m = i1 - i0 - 1
    start = f.start + i0 * f.step
    # an odd interval count is padded with one sample where both vanish
    count = m + 1 + (m % 2)
    prod = f.values_on(start, count) * g.values_on(start, count)
    return complex(np.dot(simpson_weights(count - 1, f.step), prod))


def _window_kernel(psi: Window, step: float):
    u, vals = psi.sample(step)
    return u, simpson_weights(len(u) - 1, step) * np.conj(vals)


def stft(f: SampledFunction, psi: Window, x: float, xi: float) -> complex:
    """V_psi f(x, xi) = integral of f(t) conj(psi(t - x)) exp(-2 pi i xi t) dt."""
    _steps(x, f.step)
    u, wk = _window_kernel(psi, f.step)
    t = x + u
    fv = f.values_on(t[0], len(u))
    return complex(np.dot(wk, fv * np.exp(-2j * np.pi * xi * t)))


@dataclass(frozen=True, eq=False)
class GaborCoeffs:
    """Coefficients on the lattice a*Z x b*Z, indexed k in [-K, K], n in [-N, N]."""

    a: float
    b: float
    K: int
    N: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", vals)
        if vals.shape != (2 * self.K + 1, 2 * self.N + 1):
            raise ValueError(
                f"values shape {vals.shape} does not match K={self.K}, N={self.N}"
            )

    @property
    def k_range(self):
        return np.arange(-self.K, self.K + 1)

    @property
    def n_range(self):
        return np.arange(-self.N, self.N + 1)

    def __getitem__(self, kn):
        k, n = kn
        return self.values[k + self.K, n + self.N]

    @property
    def tail_indicator(self) -> float:
        """Largest modulus on the truncation boundary (|k| = K or |n| = N)."""
        v = np.abs(self.values)
        return float(max(v[0].max(), v[-1].max(), v[:, 0].max(), v[:, -1].max()))

    @classmethod
    def zeros(cls, K, N, a=0.5, b=1.0):
        return cls(a, b, K, N, np.zeros((2 * K + 1, 2 * N + 1), dtype=complex))

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "K": self.K,
            "N": self.N,
            "values": [[[z.real, z.imag] for z in row] for row in self.values.tolist()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GaborCoeffs":
        vals = np.array([[complex(re, im) for re, im in row] for row in d["values"]])
        return cls(float(d["a"]), float(d["b"]), int(d["K"]), int(d["N"]), vals)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def gabor_atom(psi: Window, a: float, b: float, k: int, n: int, t) -> np.ndarray:
    """T_{ak} M_{bn} psi evaluated at ``t``."""
    u = np.asarray(t, dtype=float) - a * k
    return psi(u) * np.exp(2j * np.pi * b * n * u)


def gabor_analysis(
    f: SampledFunction, psi: Window, a: float = 0.5, b: float = 1.0, K: int = 0, N: int = 0
) -> GaborCoeffs:
    """Pairings of ``f`` with conj(T_{ak} M_{bn} psi) for |k| <= K, |n| <= N.

    Each pairing is a Simpson sum over the atom support ak + [-R, R]; the
    stored grid of ``f`` must contain the lattice points ak.
    """
    if K < 0 or N < 0:
        raise ValueError("K and N must be non-negative")
    _steps(a, f.step)
    u, wk = _window_kernel(psi, f.step)
    ns = np.arange(-N, N + 1)
    kernel = np.exp(-2j * np.pi * b * np.outer(ns, u)) * wk  # (2N+1, L)
    rows = np.empty((2 * K + 1, len(u)), dtype=complex)
    for i, k in enumerate(range(-K, K + 1)):
        rows[i] = f.values_on(a * k + u[0], len(u))
    return GaborCoeffs(a, b, K, N, rows @ kernel.T)


def _default_grid(c_a, K, psi: Window, step: float) -> Grid:
    return Grid.covering(-c_a * K - psi.support_radius, c_a * K + psi.support_radius, step)


def gabor_synthesis(c: GaborCoeffs, psi: Window, out_grid: Optional[Grid] = None) -> SampledFunction:
    """Finite sum of c_{k,n} T_{ak} M_{bn} psi evaluated on ``out_grid``."""
    if out_grid is None:
        out_grid = _default_grid(c.a, c.K, psi, psi.grid_step)
    R = psi.support_radius
    lo, hi = -c.a * c.K - R, c.a * c.K + R
    slack = _ALIGN_TOL * out_grid.step
    if out_grid.start > lo + slack or out_grid.stop < hi - slack:
        raise CoverageError(
            f"grid [{out_grid.start}, {out_grid.stop}] does not cover [{lo}, {hi}]"
        )
    t = out_grid.points
    out = np.zeros(out_grid.size, dtype=complex)
    ns = c.n_range
    for i, k in enumerate(c.k_range):
        row = c.values[i]
        if not row.any():
            continue
        sel = np.abs(t - c.a * k) <= R
        u = t[sel] - c.a * k
        out[sel] += (row @ np.exp(2j * np.pi * c.b * np.outer(ns, u))) * psi(u)
    return SampledFunction(out_grid.start, out_grid.step, out, (lo, hi))
