import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wilsonrep.timefreq import SampledFunction, inner_product
from wilsonrep.window import (
    Window,
    WindowError,
    build_wilson_window,
    check_symmetry,
    period_grid,
    smooth_step,
    wilson_condition_residual,
)


def test_smooth_step_limits():
    assert smooth_step(-1.0) == 0.0
    assert smooth_step(0.0) == 0.0
    assert smooth_step(1.0) == 1.0
    assert smooth_step(2.5) == 1.0
    assert smooth_step(0.5) == pytest.approx(0.5)
    x = np.linspace(0, 1, 101)
    assert np.allclose(smooth_step(x) + smooth_step(1 - x), 1.0)


@pytest.mark.parametrize("x0", [0.0, 1.0])
def test_smooth_step_flat_at_junctions(x0):
    h = 1e-3
    first = (smooth_step(x0 + h) - smooth_step(x0 - h)) / (2 * h)
    second = (smooth_step(x0 + h) - 2 * smooth_step(x0) + smooth_step(x0 - h)) / h**2
    assert abs(first) < 1e-8
    assert abs(second) < 1e-8


def test_canonical_support_and_positivity(psi):
    inside = np.linspace(-0.5, 0.5, 1001)[1:-1]
    assert np.all(psi(inside) > 0)
    assert psi(0.5) == 0.0 and psi(-0.5) == 0.0
    assert np.all(psi(np.array([0.51, -0.7, 3.0])) == 0.0)
    assert psi(0.0) == pytest.approx(math.sqrt(2), abs=1e-15)


def test_canonical_unit_norm(psi):
    f = SampledFunction.from_callable(psi, (-0.5, 0.5), psi.grid_step)
    assert abs(inner_product(f, f) - 1.0) < 1e-10


def test_residual_and_symmetry(psi):
    res = wilson_condition_residual(psi, 3)
    assert res.shape == (4,)
    assert res.max() <= 1e-10
    assert np.all(res[1:] == 0.0)
    assert check_symmetry(psi) <= 1e-15


def test_scaled_window_fails():
    res = wilson_condition_residual(build_wilson_window().scaled(1.1), 3)
    # (1.1^2 - 1) * 2
    assert res[0] == pytest.approx(0.42, abs=1e-12)


def test_broken_symmetry_detected(psi):
    broken = Window(lambda x: psi(x) + np.where((x >= 0) & (x <= 0.5), x, 0.0))
    assert check_symmetry(broken) > 0
    assert check_symmetry(Window(lambda x: np.zeros_like(x))) == 0.0


def test_noncompact_window_rejected():
    w = Window(lambda x: np.exp(-np.asarray(x) ** 2), support_radius=math.inf)
    with pytest.raises(WindowError):
        wilson_condition_residual(w)


def test_residual_invariant_under_half_period_shift(psi):
    a = wilson_condition_residual(psi, 3, period_grid(1e-3, 0.0))
    b = wilson_condition_residual(psi, 3, period_grid(1e-3, 0.5))
    assert np.max(np.abs(a - b)) <= 1e-14


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=-3.0, max_value=3.0))
def test_residual_invariant_under_any_half_shift(offset):
    psi = build_wilson_window()
    grid = period_grid(1e-2, offset)
    a = wilson_condition_residual(psi, 2, grid)
    b = wilson_condition_residual(psi, 2, grid + 0.5)
    assert np.max(np.abs(a - b)) <= 1e-14


def test_closed_form_derivatives_match_differences(psi):
    x = np.linspace(-0.45, 0.45, 37)
    h = 1e-5
    for order in (1, 2, 3):
        fd = (psi.deriv(x + h, order - 1) - psi.deriv(x - h, order - 1)) / (2 * h)
        assert np.allclose(psi.deriv(x, order), fd, rtol=1e-5, atol=1e-5)


def test_window_json(psi):
    w = build_wilson_window(2**-4)
    d = json.loads(w.to_json())
    assert d["support_radius"] == 0.5 and d["grid_step"] == 2**-4
    assert len(d["samples"]) == 17
    assert d["samples"][0] == 0.0 and d["samples"][8] == pytest.approx(math.sqrt(2))


def test_bad_window_parameters():
    with pytest.raises(WindowError):
        build_wilson_window(0.0)
    with pytest.raises(WindowError):
        build_wilson_window(0.3).sample()
