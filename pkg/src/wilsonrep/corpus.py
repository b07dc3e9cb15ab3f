"""Named test functions and distributions with known smallest table spaces."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .timefreq import SampledFunction
from .window import DEFAULT_GRID_STEP, Window, smooth_step
from .wilson import DistributionInput, WilsonCoeffs, distribution_coefficients, wilson_analysis

__all__ = ["CorpusEntry", "make_entry", "CORPUS_NAMES", "corpus_listing", "bump", "gaussian"]

GAUSSIAN_RADIUS = 8.0

CORPUS_NAMES = (
    "bump",
    "gaussian",
    "sine",
    "constant",
    "monomial",
    "delta",
    "delta_prime",
    "dirac_comb",
)


def bump(t):
    """C-infinity bump on [-1, 1] with bump(0) = 1."""
    return smooth_step(1.0 + np.asarray(t)) * smooth_step(1.0 - np.asarray(t))


def gaussian(t):
    return np.exp(-0.5 * np.asarray(t, dtype=float) ** 2)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    input: Union[SampledFunction, DistributionInput]
    expected_smallest_label: str
    note: str
    K: int
    N: int = 64

    def coefficients(self, psi: Window, K: int = None, N: int = None) -> WilsonCoeffs:
        K = self.K if K is None else K
        N = self.N if N is None else N
        if isinstance(self.input, SampledFunction):
            return wilson_analysis(self.input, psi, K, N)
        return distribution_coefficients(self.input, psi, K, N)


def make_entry(name: str, step: float = DEFAULT_GRID_STEP, m: int = 2, x0: float = 0.0) -> CorpusEntry:
    """Build a corpus entry.  ``m`` is the monomial degree, ``x0`` the delta location."""
    if name == "bump":
        f = SampledFunction.from_callable(bump, (-1.0, 1.0), step)
        return CorpusEntry(name, f, "D", "smooth, supported in [-1, 1]", K=3)
    if name == "gaussian":
        R = GAUSSIAN_RADIUS
        f = SampledFunction.from_callable(gaussian, (-R, R), step)
        return CorpusEntry(
            name, f, "S", f"exp(-t^2/2) cut at |t| = {R:g}; dropped mass ~ exp(-R^2)", K=18
        )
    if name == "sine":
        d = DistributionInput.function(lambda t: np.sin(2 * np.pi * t), label="sin(2 pi t)")
        return CorpusEntry(name, d, "D_Linf", "bounded with bounded derivatives, not vanishing at infinity", K=16)
    if name == "constant":
        d = DistributionInput.polynomial(0)
        return CorpusEntry(name, d, "D_Linf", "bounded with bounded derivatives, not vanishing at infinity", K=16)
    if name == "monomial":
        d = DistributionInput.polynomial(m)
        return CorpusEntry(
            f"monomial({m})", d, "O_M", f"t^{m}: polynomially bounded with all derivatives", K=16
        )
    if name == "delta":
        return CorpusEntry(
            f"delta({x0:g})", DistributionInput.delta(x0), "E'", "point mass, compact support", K=3
        )
    if name == "delta_prime":
        return CorpusEntry(
            f"delta_prime({x0:g})",
            DistributionInput.delta_derivative(x0, 1),
            "E'",
            "first derivative of a point mass, compact support",
            K=3,
        )
    if name == "dirac_comb":
        return CorpusEntry(
            name,
            DistributionInput.dirac_comb(),
            "D'_Linf",
            "translates of a point mass at the integers: uniformly bounded, not vanishing",
            K=16,
        )
    raise KeyError(f"unknown corpus entry {name!r}; choose from {', '.join(CORPUS_NAMES)}")


def corpus_listing() -> list:
    out = []
    for name in CORPUS_NAMES:
        e = make_entry(name)
        out.append({"name": e.name, "expected_smallest_label": e.expected_smallest_label, "note": e.note})
    return out
