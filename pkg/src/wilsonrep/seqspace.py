"""Weighted mixed norms on truncated coefficient arrays and decay classification.

Membership in a sequence space cannot be certified from finitely many
coefficients.  ``classify`` is a heuristic: it reads off a decay signature
(k-behaviour, n-behaviour) from relative profiles of the truncated array and
reports every table label whose sequence-space signature is consistent with it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

import numpy as np

from .timefreq import GaborCoeffs
from .wilson import WilsonCoeffs

__all__ = [
    "weight",
    "NormFamilySpec",
    "mixed_norm",
    "decay_profile",
    "SpaceLabel",
    "SPACE_LABELS",
    "FUNCTION_ROW",
    "DISTRIBUTION_ROW",
    "Thresholds",
    "ClassificationReport",
    "classify",
    "K_CLASSES",
]

Coeffs = Union[WilsonCoeffs, GaborCoeffs]


def weight(i, l):
    """Polynomial weight (1 + i^2)^(l/2)."""
    i = np.asarray(i, dtype=float)
    out = (1.0 + i * i) ** (0.5 * l)
    return out if out.ndim else float(out)


_KINDS = ("sup", "lp", "finite")


@dataclass(frozen=True)
class NormFamilySpec:
    """A two-level norm: ``inner`` over one index, then ``outer`` over the other.

    ``outer_axis`` names the index reduced last.  ``sup`` carries a weight
    order l (any integer), ``lp`` an exponent p in [1, inf].  ``finite`` as the
    outer kind counts the outer indices whose inner norm is nonzero.
    """

    outer: str = "sup"
    outer_param: float = 0
    inner: str = "lp"
    inner_param: float = 2
    outer_axis: str = "n"

    def __post_init__(self):
        if self.outer not in _KINDS or self.inner not in ("sup", "lp"):
            raise ValueError(f"bad norm kinds {self.outer!r}/{self.inner!r}")
        if self.outer_axis not in ("n", "k"):
            raise ValueError("outer_axis must be 'n' or 'k'")
        for kind, param in ((self.outer, self.outer_param), (self.inner, self.inner_param)):
            if kind == "lp" and not param >= 1:
                raise ValueError(f"p must lie in [1, inf], got {param}")
            if kind == "sup" and float(param) != int(param):
                raise ValueError(f"weight order must be an integer, got {param}")

    def with_order(self, l: int) -> "NormFamilySpec":
        if self.outer == "sup":
            return replace(self, outer_param=l)
        if self.inner == "sup":
            return replace(self, inner_param=l)
        raise ValueError("norm family has no weighted level")


def _reduce(a, idx, kind, param, axis):
    # a: moduli with the reduced index along ``axis``
    if kind == "sup":
        shape = [1] * a.ndim
        shape[axis] = -1
        return np.max(a * weight(idx, param).reshape(shape), axis=axis)
    if kind == "lp":
        if math.isinf(param):
            return np.max(a, axis=axis)
        m = np.max(a, axis=axis, keepdims=True)
        m = np.where(m > 0, m, 1.0)
        return np.squeeze(m, axis) * np.sum((a / m) ** param, axis=axis) ** (1.0 / param)
    return np.count_nonzero(a, axis=axis).astype(float)


def mixed_norm(c: Coeffs, spec: NormFamilySpec) -> float:
    """Evaluate ``spec`` on the truncated array ``c``."""
    a = np.abs(c.values)  # axis 0: k, axis 1: n
    ks, ns = c.k_range, c.n_range
    if spec.outer_axis == "n":
        inner = _reduce(a, ks, spec.inner, spec.inner_param, 0)
        return float(_reduce(inner, ns, spec.outer, spec.outer_param, 0))
    inner = _reduce(a, ns, spec.inner, spec.inner_param, 1)
    return float(_reduce(inner, ks, spec.outer, spec.outer_param, 0))


def decay_profile(c: Coeffs, l_values: Sequence[int], spec: Optional[NormFamilySpec] = None) -> dict:
    """``mixed_norm`` of ``c`` for each weight order in ``l_values``."""
    spec = NormFamilySpec() if spec is None else spec
    return {int(l): mixed_norm(c, spec.with_order(int(l))) for l in l_values}


# k-behaviour classes, ordered from strongest to weakest decay
K_CLASSES = ("finite", "rapid", "lp", "c0", "bounded", "polynomial", "any")
_K_RANK = {name: i for i, name in enumerate(K_CLASSES)}


@dataclass(frozen=True)
class SpaceLabel:
    name: str
    row: str
    position: int
    k_behaviour: str
    n_behaviour: str
    sequence_space: str

    @property
    def signature(self):
        return (self.k_behaviour, self.n_behaviour)

    def admits(self, k_class: str, n_class: str) -> bool:
        if self.row == "function" and n_class != "rapid":
            return False
        return _K_RANK[k_class] <= _K_RANK[self.k_behaviour]


# O_C and O_M' sit over tensor products with the inductive topology; their
# sets differ from those of O_M and O_C' but not in a way a finite truncation
# can detect, so each is only admitted through the next-smaller label.
FUNCTION_ROW = (
    SpaceLabel("D", "function", 0, "finite", "rapid", "C^(Z) (x)_i s"),
    SpaceLabel("D^F", "function", 1, "finite", "rapid", "C^(Z) (x) s"),
    SpaceLabel("S", "function", 2, "rapid", "rapid", "s (x) s"),
    SpaceLabel("D_Lp", "function", 3, "lp", "rapid", "l^p (x) s"),
    SpaceLabel("B_dot", "function", 4, "c0", "rapid", "c_0 (x) s"),
    SpaceLabel("D_Linf", "function", 5, "bounded", "rapid", "l^inf (x) s"),
    SpaceLabel("O_C", "function", 6, "bounded", "rapid", "s' (x)_i s"),
    SpaceLabel("O_M", "function", 7, "polynomial", "rapid", "s' (x) s"),
    SpaceLabel("E", "function", 8, "any", "rapid", "C^Z (x) s"),
)
DISTRIBUTION_ROW = (
    SpaceLabel("E'", "distribution", 0, "finite", "polynomial", "C^(Z) (x) s'"),
    SpaceLabel("O_M'", "distribution", 1, "finite", "polynomial", "s (x)_i s'"),
    SpaceLabel("O_C'", "distribution", 2, "rapid", "polynomial", "s (x) s'"),
    SpaceLabel("D'_Lp", "distribution", 3, "lp", "polynomial", "l^p (x) s'"),
    SpaceLabel("B_dot'", "distribution", 4, "c0", "polynomial", "c_0 (x) s'"),
    SpaceLabel("D'_Linf", "distribution", 5, "bounded", "polynomial", "l^inf (x) s'"),
    SpaceLabel("S'", "distribution", 6, "polynomial", "polynomial", "s' (x) s'"),
    SpaceLabel("D'", "distribution", 7, "any", "polynomial", "C^Z (x) s'"),
)
SPACE_LABELS = {lab.name: lab for lab in FUNCTION_ROW + DISTRIBUTION_ROW}


@dataclass(frozen=True)
class Thresholds:
    """Tuning of the decay heuristics (all relative to the largest entry)."""

    zero_tol: float = 1e-12      # entries below this count as exact zeros
    edge_tol: float = 1e-8       # a support edge must be resolved above this
    rapid_slope: float = 0.5     # fraction of log(index extent) for the slope test
    flat_tol: float = 0.25       # |power-law exponent| below this is "bounded"
    tail_tol: float = 1e-6       # larger tail indicator -> inconclusive
    max_order: int = 6           # deepest weight order probed
    p: float = 2.0               # exponent of the l^p column test


@dataclass
class ClassificationReport:
    labels: list
    signatures: dict
    tail_indicator: float
    verdict: str
    heuristic: bool = True

    @property
    def smallest(self) -> Optional[str]:
        return self.labels[0] if self.labels else None

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "signatures": self.signatures,
            "tail_indicator": self.tail_indicator,
            "verdict": self.verdict,
            "heuristic": self.heuristic,
        }


def _fold(profile: np.ndarray) -> np.ndarray:
    """Fold a two-sided profile onto |index|."""
    m = len(profile) // 2
    return np.maximum(profile[m:], profile[m::-1])


def _smooth(q: np.ndarray) -> np.ndarray:
    """Fill parity zeros (e.g. odd n for even inputs) from the left neighbour."""
    out = q.copy()
    out[1:] = np.maximum(q[1:], q[:-1])
    return out


def _weighted_slope(q: np.ndarray, max_order: int) -> float:
    """Fitted slope of log max_j (1+j^2)^(l/2) q_j against l = 0..max_order."""
    j = np.arange(len(q))
    ls = np.arange(max_order + 1)
    logs = [np.log(np.max(weight(j, l) * q)) for l in ls]
    return float(np.polyfit(ls, logs, 1)[0])


def _power_exponent(q: np.ndarray, floor: float) -> float:
    """Least-squares exponent alpha of q_j ~ j^alpha over the upper half."""
    J = len(q) - 1
    j = np.arange(len(q))
    sel = (j >= max(1, J // 2)) & (q > floor)
    if sel.sum() < 2:
        return -math.inf
    return float(np.polyfit(np.log1p(j[sel]), np.log(q[sel]), 1)[0])


def _rapid(q: np.ndarray, th: Thresholds) -> tuple:
    J = len(q) - 1
    slope = _weighted_slope(q, th.max_order)
    limit = th.rapid_slope * 0.5 * math.log1p(J * J)
    return slope < limit, slope


def _k_class(q: np.ndarray, th: Thresholds) -> tuple:
    top = q.max()
    info = {}
    if top == 0:
        return "finite", info
    zero = th.zero_tol * top
    nz = np.nonzero(q > zero)[0]
    last = nz[-1]
    info["last_nonzero"] = int(last)
    if last < len(q) - 1 and q[last] >= th.edge_tol * top:
        return "finite", info
    q = _smooth(q)
    rapid, slope = _rapid(q, th)
    info["slope"] = slope
    if rapid:
        return "rapid", info
    alpha = _power_exponent(q, zero)
    info["exponent"] = alpha
    if alpha < -1.0 / th.p - th.flat_tol:
        return "lp", info
    if alpha < -th.flat_tol:
        return "c0", info
    if alpha <= th.flat_tol:
        return "bounded", info
    if alpha <= th.max_order:
        return "polynomial", info
    return "any", info


def classify(c: WilsonCoeffs, thresholds: Optional[Thresholds] = None) -> ClassificationReport:
    """Rank every table label consistent with the decay signature of ``c``.

    The n-profile is the sup over k; it is "rapid" when the weighted sup norms
    grow slowly in the weight order.  The k-profile is the sup over n after
    damping n-growth, folded onto |k|.  Labels are returned smallest space
    first: the function row (when the n-profile is rapid) precedes the
    distribution row.
    """
    th = Thresholds() if thresholds is None else thresholds
    a = np.abs(c.values)
    p_n = _smooth(a.max(axis=0))
    top = p_n.max()
    ns = np.arange(c.N + 1)

    if top == 0:
        n_class, n_slope = "rapid", 0.0
        tail = 0.0
    else:
        rapid, n_slope = _rapid(p_n, th)
        if rapid:
            n_class = "rapid"
            tail = float(p_n[-1] / top)
        else:
            n_class = "polynomial"
            damped = p_n * weight(ns, -th.max_order)
            tail = float(damped[-1] / damped.max())

    damp = 0 if n_class == "rapid" else -th.max_order
    q_k = _fold((a * weight(ns, damp)).max(axis=1))
    k_class, k_info = _k_class(q_k, th)

    signatures = {
        "k": k_class,
        "n": n_class,
        "n_slope": n_slope,
        "p": th.p,
        **{f"k_{key}": val for key, val in k_info.items()},
    }
    if tail > th.tail_tol:
        return ClassificationReport([], signatures, tail, "inconclusive")
    labels = [lab.name for lab in FUNCTION_ROW + DISTRIBUTION_ROW if lab.admits(k_class, n_class)]
    return ClassificationReport(labels, signatures, tail, "conclusive")
