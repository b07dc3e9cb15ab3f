"""Wilson atoms, the reindexing maps and the Wilson analysis/synthesis operators.

The Wilson system of a window psi is

    psi_{k,0} = T_k psi,
    psi_{k,n} = 2**-0.5 T_{k/2} (M_n + (-1)**(k+n) M_{-n}) psi,   n > 0,

and both Wilson operators factor through the Gabor lattice (1/2) Z x Z:
analysis is ``reindex_v`` after ``gabor_analysis`` and synthesis is
``gabor_synthesis`` after ``reindex_w``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from math import comb
from typing import Callable, Optional

import numpy as np

from .timefreq import (
    CoverageError,
    GaborCoeffs,
    Grid,
    SampledFunction,
    gabor_analysis,
    gabor_synthesis,
    simpson_weights,
)
from .window import WINDOW_TOLERANCE, Window, WindowError, wilson_condition_residual

__all__ = [
    "WilsonCoeffs",
    "DistributionInput",
    "wilson_atom",
    "atom_values",
    "reindex_i2",
    "reindex_v",
    "reindex_w",
    "wilson_analysis",
    "wilson_synthesis",
    "gram_matrix",
    "index_pairs",
    "flat_index",
    "reenumerate",
    "pair_distribution",
    "distribution_coefficients",
]

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class WilsonCoeffs:
    """Wilson coefficients indexed k in [-K, K], n in [0, N]."""

    K: int
    N: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", vals)
        if vals.shape != (2 * self.K + 1, self.N + 1):
            raise ValueError(
                f"values shape {vals.shape} does not match K={self.K}, N={self.N}"
            )

    @property
    def k_range(self):
        return np.arange(-self.K, self.K + 1)

    @property
    def n_range(self):
        return np.arange(self.N + 1)

    def __getitem__(self, kn):
        k, n = kn
        return self.values[k + self.K, n]

    @property
    def tail_indicator(self) -> float:
        """Largest modulus on the truncation boundary (|k| = K or n = N)."""
        v = np.abs(self.values)
        return float(max(v[0].max(), v[-1].max(), v[:, -1].max()))

    @classmethod
    def zeros(cls, K, N):
        return cls(K, N, np.zeros((2 * K + 1, N + 1), dtype=complex))

    @classmethod
    def unit(cls, K, N, k, n, value=1.0):
        c = np.zeros((2 * K + 1, N + 1), dtype=complex)
        c[k + K, n] = value
        return cls(K, N, c)

    def __mul__(self, alpha):
        return WilsonCoeffs(self.K, self.N, alpha * self.values)

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "N": self.N,
            "n_min": 0,
            "values": [[[z.real, z.imag] for z in row] for row in self.values.tolist()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WilsonCoeffs":
        vals = np.array([[complex(re, im) for re, im in row] for row in d["values"]])
        return cls(int(d["K"]), int(d["N"]), vals)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _center(k: int, n: int) -> float:
    return float(k) if n == 0 else 0.5 * k


def atom_values(psi: Window, k: int, ns, x: float, order: int = 0) -> np.ndarray:
    """``order``-th derivative of psi_{k,n} at the point ``x`` for every n in ``ns``.

    Derivatives use the Leibniz rule on the exponential factors together
    with the window's closed-form derivatives.
    """
    ns = np.atleast_1d(np.asarray(ns, dtype=int))
    out = np.zeros(ns.shape, dtype=complex)
    zero = ns == 0
    if zero.any():
        out[zero] = psi.deriv(x - k, order)
    pos = ~zero
    if pos.any():
        n = ns[pos]
        u = x - 0.5 * k
        sign = np.where((k + n) % 2 == 0, 1.0, -1.0)
        acc = np.zeros(n.shape, dtype=complex)
        for j in range(order + 1):
            dj = psi.deriv(u, j)
            if dj == 0.0:
                continue
            w = 2j * np.pi * n
            plus = w ** (order - j) * np.exp(w * u)
            minus = (-w) ** (order - j) * np.exp(-w * u)
            acc += comb(order, j) * (plus + sign * minus) * dj
        out[pos] = acc / SQRT2
    return out


def wilson_atom(psi: Window, k: int, n: int, out_grid: Optional[Grid] = None) -> SampledFunction:
    """Sample psi_{k,n} on ``out_grid`` (default: its own support at the window step)."""
    if n < 0:
        raise ValueError("Wilson atoms are indexed by n >= 0")
    c = _center(k, n)
    R = psi.support_radius
    if out_grid is None:
        out_grid = Grid.covering(c - R, c + R, psi.grid_step)
    slack = 1e-9 * out_grid.step
    if out_grid.start > c - R + slack or out_grid.stop < c + R - slack:
        raise CoverageError(f"grid does not cover atom support [{c - R}, {c + R}]")
    u = out_grid.points - c
    if n == 0:
        vals = psi(u).astype(complex)
    else:
        sign = 1.0 if (k + n) % 2 == 0 else -1.0
        e = np.exp(2j * np.pi * n * u)
        vals = (e + sign * np.conj(e)) * psi(u) / SQRT2
    return SampledFunction(out_grid.start, out_grid.step, vals, (c - R, c + R))


def reindex_i2(c: GaborCoeffs) -> GaborCoeffs:
    """Frequency flip (c_{k,-n})."""
    return GaborCoeffs(c.a, c.b, c.K, c.N, c.values[:, ::-1].copy())


def _signs(ks, ns):
    return np.where((np.add.outer(ks, ns)) % 2 == 0, 1.0, -1.0)


def reindex_v(c: GaborCoeffs) -> WilsonCoeffs:
    """Gabor coefficients on (1/2) Z x Z to Wilson coefficients on Z x N."""
    if c.a != 0.5 or c.b != 1.0:
        raise ValueError(f"Wilson reindexing needs the (1/2, 1) lattice, got ({c.a}, {c.b})")
    K = c.K // 2
    N = c.N
    out = np.empty((2 * K + 1, N + 1), dtype=complex)
    ks = np.arange(-K, K + 1)
    out[:, 0] = c.values[2 * ks + c.K, c.N]
    if N:
        rows = c.values[ks + c.K]
        pos = rows[:, c.N + 1 :]
        neg = rows[:, c.N - 1 :: -1]
        # half-sum times sqrt(2) undoes the division in reindex_w to within 1 ulp
        out[:, 1:] = 0.5 * (pos + _signs(ks, np.arange(1, N + 1)) * neg) * SQRT2
    return WilsonCoeffs(K, N, out)


def reindex_w(c: WilsonCoeffs) -> GaborCoeffs:
    """Wilson coefficients to Gabor coefficients on (1/2) Z x Z (K doubles)."""
    K, N = c.K, c.N
    Kg = 2 * K
    out = np.zeros((2 * Kg + 1, 2 * N + 1), dtype=complex)
    ks = np.arange(-K, K + 1)
    out[2 * ks + Kg, N] = c.values[:, 0]
    if N:
        rows = c.values[:, 1:]
        out[ks + Kg, N + 1 :] = rows / SQRT2
        out[ks + Kg, N - 1 :: -1] = _signs(ks, np.arange(1, N + 1)) * rows / SQRT2
    return GaborCoeffs(0.5, 1.0, Kg, N, out)


def wilson_analysis(f: SampledFunction, psi: Window, K: int, N: int) -> WilsonCoeffs:
    """Pairings of ``f`` with conj(psi_{k,n}); computed as v o C_{psi,1/2,1}."""
    return reindex_v(gabor_analysis(f, psi, 0.5, 1.0, 2 * K, N))


def wilson_synthesis(
    c: WilsonCoeffs, psi: Window, out_grid: Optional[Grid] = None
) -> SampledFunction:
    """Finite sum of c_{k,n} psi_{k,n}; computed as D_{psi,1/2,1} o w."""
    return gabor_synthesis(reindex_w(c), psi, out_grid)


def _order_key(kn):
    k, n = kn
    return (abs(k) + n, 0 if k >= 0 else 1, n)


def index_pairs(K: int, N: int) -> list:
    """Wilson indices with |k| <= K, n <= N in the flattening order.

    Diagonals d = |k| + n are visited in increasing order; within a diagonal
    k >= 0 comes first, then increasing n.
    """
    pairs = [(k, n) for k in range(-K, K + 1) for n in range(N + 1)]
    return sorted(pairs, key=_order_key)


def flat_index(k: int, n: int) -> int:
    """Position of (k, n) in the enumeration of all of Z x N."""
    if n < 0:
        raise ValueError("n must be >= 0")
    d = abs(k) + n
    # diagonal d holds d+1 pairs with k >= 0 and d pairs with k < 0
    before = d * d
    if k >= 0:
        return before + n
    return before + (d + 1) + n


def reenumerate(c: WilsonCoeffs) -> np.ndarray:
    """Flatten Wilson coefficients to a single sequence (zeros off the truncation)."""
    pairs = index_pairs(c.K, c.N)
    m = max(flat_index(k, n) for k, n in pairs) + 1
    out = np.zeros(m, dtype=complex)
    for k, n in pairs:
        out[flat_index(k, n)] = c[k, n]
    return out


def gram_matrix(psi: Window, K: int, N: int, step: Optional[float] = None) -> np.ndarray:
    """Simpson Gram matrix of the atoms, ordered by ``index_pairs(K, N)``."""
    res = wilson_condition_residual(psi, 0)
    if res.max() > WINDOW_TOLERANCE:
        raise WindowError(f"window fails the Wilson condition (residual {res.max():.3g})")
    step = psi.grid_step if step is None else step
    R = psi.support_radius
    grid = Grid.covering(-K - R, K + R, step)
    pairs = index_pairs(K, N)
    atoms = np.array([wilson_atom(psi, k, n, grid).values for k, n in pairs])
    w = simpson_weights(grid.size - 1, step)
    return atoms @ (w * np.conj(atoms)).T


@dataclass(frozen=True)
class DistributionInput:
    """A distribution paired with Wilson atoms analytically or by quadrature.

    kind is one of ``delta``, ``delta_derivative``, ``dirac_comb``,
    ``polynomial`` or ``function``.
    """

    kind: str
    x0: float = 0.0
    order: int = 0
    func: Optional[Callable] = None
    label: str = ""

    KINDS = ("delta", "delta_derivative", "dirac_comb", "polynomial", "function")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unsupported distribution kind {self.kind!r}")
        if self.kind == "function" and self.func is None:
            raise ValueError("function-backed input needs func")
        if self.order < 0:
            raise ValueError("order must be >= 0")

    @classmethod
    def delta(cls, x0=0.0):
        return cls("delta", x0=x0, label=f"delta({x0:g})")

    @classmethod
    def delta_derivative(cls, x0=0.0, order=1):
        return cls("delta_derivative", x0=x0, order=order, label=f"delta^({order})({x0:g})")

    @classmethod
    def dirac_comb(cls):
        return cls("dirac_comb", label="dirac_comb")

    @classmethod
    def polynomial(cls, degree):
        return cls("polynomial", order=degree, label=f"t^{degree}")

    @classmethod
    def function(cls, func, label="function"):
        return cls("function", func=func, label=label)

    def evaluate(self, t):
        """Point values for the function-backed kinds."""
        t = np.asarray(t, dtype=float)
        if self.kind == "polynomial":
            return t**self.order
        if self.kind == "function":
            return np.asarray(self.func(t)) * np.ones_like(t)
        raise TypeError(f"{self.kind} has no point values")


def _pair_row(d: DistributionInput, psi: Window, k: int, ns, step) -> np.ndarray:
    ns = np.atleast_1d(ns)
    if d.kind == "delta":
        return np.conj(atom_values(psi, k, ns, d.x0))
    if d.kind == "delta_derivative":
        sign = -1.0 if d.order % 2 else 1.0
        return sign * np.conj(atom_values(psi, k, ns, d.x0, d.order))
    if d.kind == "dirac_comb":
        out = np.zeros(ns.shape, dtype=complex)
        R = psi.support_radius
        for n_idx, n in enumerate(ns):
            c = _center(k, int(n))
            for j in range(math.ceil(c - R), math.floor(c + R) + 1):
                out[n_idx] += np.conj(atom_values(psi, k, [n], float(j))[0])
        return out
    # quadrature over the atom support
    out = np.zeros(ns.shape, dtype=complex)
    for n_idx, n in enumerate(ns):
        atom = wilson_atom(psi, k, int(n), _atom_grid(psi, k, int(n), step))
        w = simpson_weights(len(atom.values) - 1, atom.step)
        out[n_idx] = np.dot(w, d.evaluate(atom.points) * np.conj(atom.values))
    return out


def _atom_grid(psi, k, n, step):
    c = _center(k, n)
    R = psi.support_radius
    return Grid.covering(c - R, c + R, psi.grid_step if step is None else step)


def pair_distribution(
    d: DistributionInput, psi: Window, k: int, n: int, step: Optional[float] = None
) -> complex:
    """The pairing of ``d`` with conj(psi_{k,n})."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return complex(_pair_row(d, psi, k, [n], step)[0])


def _gabor_of_callable(g, psi: Window, Kg: int, N: int, step: float) -> GaborCoeffs:
    u, vals = psi.sample(step)
    wk = simpson_weights(len(u) - 1, step) * np.conj(vals)
    ns = np.arange(-N, N + 1)
    kernel = np.exp(-2j * np.pi * np.outer(ns, u)) * wk
    rows = np.array([g(0.5 * k + u) for k in range(-Kg, Kg + 1)], dtype=complex)
    return GaborCoeffs(0.5, 1.0, Kg, N, rows @ kernel.T)


def distribution_coefficients(
    d: DistributionInput, psi: Window, K: int, N: int, step: Optional[float] = None
) -> WilsonCoeffs:
    """Wilson coefficients of a distribution on the truncation [-K, K] x [0, N]."""
    step = psi.grid_step if step is None else step
    if d.kind in ("polynomial", "function"):
        return reindex_v(_gabor_of_callable(d.evaluate, psi, 2 * K, N, step))
    ns = np.arange(N + 1)
    vals = np.array([_pair_row(d, psi, k, ns, step) for k in range(-K, K + 1)])
    return WilsonCoeffs(K, N, vals)
