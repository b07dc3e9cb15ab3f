import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wilsonrep.corpus import bump
from wilsonrep.timefreq import (
    AlignmentError,
    CoverageError,
    GaborCoeffs,
    Grid,
    GridError,
    SampledFunction,
    gabor_analysis,
    gabor_synthesis,
    inner_product,
    simpson_weights,
    stft,
    tf_shift,
)
from wilsonrep.window import build_wilson_window
from wilsonrep.wilson import reindex_i2

STEP = 2.0**-10


def sampled(func, lo, hi, step=STEP):
    return SampledFunction.from_callable(func, (lo, hi), step)


@pytest.fixture(scope="module")
def psi_f(psi):
    return sampled(psi, -0.5, 0.5)


@pytest.fixture(scope="module")
def bump_f():
    return sampled(bump, -1.0, 1.0)


def test_simpson_weights_exact_on_cubics():
    w = simpson_weights(8, 0.25)
    t = np.arange(9) * 0.25
    assert np.dot(w, t**3) == pytest.approx(4.0, rel=1e-14)  # integral of t^3 over [0, 2]
    with pytest.raises(ValueError):
        simpson_weights(3, 0.1)


def test_sampled_function_invariants():
    with pytest.raises(GridError):
        SampledFunction(0.0, 0.1, np.ones(5), (0.0, 0.4))
    with pytest.raises(GridError):
        SampledFunction(0.0, 0.1, np.zeros(5), (0.0, 2.0))
    f = sampled(bump, -1.0, 1.0)
    assert f.points[0] <= -1.0 and f.points[-1] >= 1.0
    g = SampledFunction.from_dict(json.loads(json.dumps(f.to_dict())))
    assert np.array_equal(g.values, f.values) and g.support == f.support


def test_tf_shift(psi_f):
    same = tf_shift(psi_f, 0.0, 0.0)
    assert np.array_equal(same.values, psi_f.values)
    moved = tf_shift(psi_f, 1.0, 0.0)
    assert moved.support == (0.5, 1.5)
    assert np.allclose(moved.values.real, build_wilson_window()(moved.points - 1.0))
    mod = tf_shift(psi_f, 0.0, 5.0)
    assert np.allclose(np.abs(mod.values), np.abs(psi_f.values), atol=1e-15)
    with pytest.raises(AlignmentError):
        tf_shift(psi_f, 0.3, 0.0)


def test_inner_product(psi_f):
    assert abs(inner_product(psi_f, psi_f) - 1.0) < 1e-10
    assert inner_product(psi_f, tf_shift(psi_f, 1.0, 0.0)) == 0
    zero = SampledFunction(-1.0, STEP, np.zeros(2049), (-1.0, 1.0))
    assert inner_product(zero, psi_f) == 0
    with pytest.raises(GridError):
        inner_product(psi_f, sampled(bump, -1.0, 1.0, 2.0**-9))
    # no hidden conjugation
    mod = tf_shift(psi_f, 0.0, 1.0)
    assert abs(inner_product(mod, mod) - inner_product(psi_f * 1.0, tf_shift(psi_f, 0.0, 2.0))) < 1e-14
    assert abs(inner_product(mod, mod.conj()) - 1.0) < 1e-10


def test_inner_product_odd_interval_count(psi):
    # a one-step offset leaves an odd number of overlap intervals
    f = sampled(bump, -1.0, 1.0)
    g = tf_shift(sampled(psi, -0.5, 0.5), STEP, 0.0)
    exact = inner_product(f, sampled(lambda t: psi(t - STEP), -0.5 + STEP, 0.5 + STEP))
    assert abs(inner_product(f, g) - exact) < 1e-13


def test_stft(psi, psi_f, bump_f):
    assert abs(stft(psi_f, psi, 0.0, 0.0) - 1.0) < 1e-10
    assert stft(psi_f, psi, 1.0, 0.0) == 0
    for x, xi in [(0.25, 1.5), (0.5, 3.0), (-0.125, 0.7)]:
        assert abs(stft(bump_f, psi, x, xi)) == pytest.approx(abs(stft(bump_f, psi, -x, -xi)), rel=1e-12)


def test_gabor_analysis_examples(psi, psi_f, bump_f):
    c = gabor_analysis(psi_f, psi, 0.5, 1.0, 0, 0)
    assert c.values.shape == (1, 1)
    assert abs(c[0, 0] - 1.0) < 1e-10
    cb = gabor_analysis(bump_f, psi, 0.5, 1.0, 6, 8)
    assert np.all(cb.values[np.abs(cb.k_range) > 3] == 0)
    zero = SampledFunction(-1.0, STEP, np.zeros(2049), (-1.0, 1.0))
    assert not gabor_analysis(zero, psi, 0.5, 1.0, 2, 2).values.any()
    with pytest.raises(AlignmentError):
        gabor_analysis(bump_f, psi, 0.3, 1.0, 1, 1)


def test_gabor_matches_stft(psi, bump_f):
    c = gabor_analysis(bump_f, psi, 0.5, 1.0, 3, 5)
    for k in (-3, 0, 2):
        for n in (-5, 1, 4):
            assert abs(c[k, n]) == pytest.approx(abs(stft(bump_f, psi, 0.5 * k, n)), rel=1e-12, abs=1e-15)


def test_gabor_synthesis_examples(psi, bump_f):
    unit = GaborCoeffs.zeros(0, 0)
    unit.values[0, 0] = 1.0
    s = gabor_synthesis(unit, psi)
    assert np.allclose(s.values, psi(s.points), atol=1e-15)
    c = GaborCoeffs.zeros(1, 0)
    c.values[2, 0] = 2.0
    s = gabor_synthesis(c, psi)
    assert np.allclose(s.values, 2 * psi(s.points - 0.5), atol=1e-15)
    cb = gabor_analysis(bump_f, psi, 0.5, 1.0, 3, 32)
    back = gabor_synthesis(cb, psi)
    assert (back - bump_f).l2_norm() > 1e-3
    with pytest.raises(CoverageError):
        gabor_synthesis(cb, psi, Grid.covering(-1.0, 1.0, STEP))


def test_gabor_json_roundtrip(psi, bump_f):
    c = gabor_analysis(bump_f, psi, 0.5, 1.0, 2, 3)
    d = json.loads(c.to_json())
    assert set(d) == {"a", "b", "K", "N", "values"}
    assert len(d["values"]) == 5 and len(d["values"][0]) == 7
    back = GaborCoeffs.from_dict(d)
    assert np.array_equal(back.values, c.values)


def _random_function(rng):
    # a few modulated, shifted bumps on a common grid
    parts = []
    for _ in range(rng.integers(1, 4)):
        x0 = rng.integers(-8, 9) * 0.125
        width = rng.choice([0.5, 1.0, 1.5])
        xi = rng.uniform(-3, 3)
        amp = complex(*rng.normal(size=2))
        parts.append((x0, width, xi, amp))

    def f(t):
        out = np.zeros_like(t, dtype=complex)
        for x0, width, xi, amp in parts:
            out += amp * bump((t - x0) / width) * np.exp(2j * np.pi * xi * t)
        return out

    return sampled(f, -3.0, 3.0)


def transpose_gap(f, c, psi):
    ca = gabor_analysis(f, psi, c.a, c.b, c.K, c.N)
    lhs = np.sum(ca.values * c.values)
    rhs = inner_product(f, gabor_synthesis(reindex_i2(c), psi))
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def test_transpose_identity_samples(psi):
    rng = np.random.default_rng(7)
    for _ in range(10):
        f = _random_function(rng)
        K, N = int(rng.integers(0, 6)), int(rng.integers(0, 9))
        c = GaborCoeffs(0.5, 1.0, K, N, rng.normal(size=(2 * K + 1, 2 * N + 1)) + 1j * rng.normal(size=(2 * K + 1, 2 * N + 1)))
        assert transpose_gap(f, c, psi) < 1e-8


def test_transpose_identity_other_lattice(psi):
    rng = np.random.default_rng(8)
    f = _random_function(rng)
    c = GaborCoeffs(0.25, 2.0, 5, 4, rng.normal(size=(11, 9)) + 0j)
    assert transpose_gap(f, c, psi) < 1e-8


@settings(max_examples=20, deadline=None)
@given(
    st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
)
def test_analysis_linearity(alpha, beta):
    psi = build_wilson_window()
    f = sampled(bump, -1.0, 1.0)
    g = sampled(lambda t: bump(2 * t - 0.5) * np.cos(3 * t), -0.25, 0.75)
    lhs = gabor_analysis(alpha * f + beta * g, psi, 0.5, 1.0, 3, 6).values
    rhs = alpha * gabor_analysis(f, psi, 0.5, 1.0, 3, 6).values + beta * gabor_analysis(g, psi, 0.5, 1.0, 3, 6).values
    scale = 1 + abs(alpha) + abs(beta)
    assert np.max(np.abs(lhs - rhs)) <= 1e-13 * scale


def _sup_derivatives(func, lo, hi, m, h=2.0**-12):
    # sup of |f^(j)|, j <= m, by repeated central differences on a fine grid
    t = np.arange(lo - 4 * h, hi + 4 * h + h / 2, h)
    vals = func(t)
    sups = [np.max(np.abs(vals))]
    d = vals
    for _ in range(m):
        d = np.gradient(d, h)
        sups.append(np.max(np.abs(d)))
    return max(sups)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_stft_decay_bound(psi, bump_f, m):
    support_length = 2.0  # bump lives on [-1, 1]
    xs = np.arange(-6, 7) * 0.25
    psi_norm = max(np.max(np.abs(psi.deriv(np.linspace(-0.5, 0.5, 4001), j))) for j in range(m + 1))
    f_norm = _sup_derivatives(bump, -1.0, 1.0, m)
    bound = 2**m * support_length * psi_norm * f_norm
    for x in xs:
        for xi in np.linspace(-40, 40, 33):
            assert abs(stft(bump_f, psi, x, xi)) * (1 + abs(xi)) ** m <= bound
