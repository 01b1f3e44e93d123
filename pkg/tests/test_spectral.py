import numpy as np
import pytest
from hypothesis import given, strategies as st

from pcflows.spectral import (
    Grid1D, lowpass_mask, periodic_integral, spectral_derivative, spectral_tail, trig_interpolate,
)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid1D(100)
    with pytest.raises(ValueError):
        Grid1D(64, -1.0)
    g = Grid1D(8, 4.0)
    assert g.dx == 0.5 and g.x[-1] == 3.5
    assert g.to_json() == {"N": 8, "L": 4.0}


@given(st.integers(1, 10), st.integers(1, 4), st.floats(0.5, 20.0))
def test_derivative_of_exponential_mode(n, order, L):
    g = Grid1D(64, L)
    kap = 2 * np.pi * n / L
    f = np.cos(kap * g.x)
    exact = np.real((1j * kap) ** order * np.exp(1j * kap * g.x))
    assert np.allclose(spectral_derivative(f, L, order), exact, atol=1e-9 * kap ** order)


def test_derivative_complex_and_axis():
    g = Grid1D(32)
    f = np.exp(1j * g.x)[None, :].repeat(3, axis=0)
    assert np.allclose(spectral_derivative(f, g.L, 1, axis=1), 1j * f)
    assert np.allclose(spectral_derivative(f.T, g.L, 2, axis=0), -f.T)


def test_integral_and_tail():
    g = Grid1D(64)
    assert periodic_integral(np.cos(g.x) ** 2, g.L) == pytest.approx(np.pi)
    assert spectral_tail(np.sin(g.x)) < 1e-14
    assert spectral_tail(np.sign(np.sin(g.x))) > 1e-3


@given(st.floats(0, 2 * np.pi))
def test_trig_interpolate_exact_for_band_limited(xq):
    g = Grid1D(16)
    f = 1 + np.sin(3 * g.x) - 0.5 * np.cos(5 * g.x)
    want = 1 + np.sin(3 * xq) - 0.5 * np.cos(5 * xq)
    assert trig_interpolate(f, g.L, np.array([xq]))[0] == pytest.approx(want, abs=1e-12)


def test_lowpass_mask():
    g = Grid1D(64)
    m = lowpass_mask(g)
    assert m.sum() == 64 // 3
    assert lowpass_mask(g, dealias=False, max_mode=8).sum() == 9
    assert lowpass_mask(g, dealias=False).all()
