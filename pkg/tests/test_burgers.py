import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from rarewave.burgers import (
    SmoothRarefaction,
    evaluate,
    initial_data,
    invert_characteristic,
    normalize_kq,
    normalized_primitive,
)
from rarewave.gaslaw import DomainError
from oracles import central_diff

# 20-digit references from arbitrary-precision quadrature and root finding
KQ_1_6 = 1.05978166786724242637
W0_AT_5 = 0.549815144247899086  # w0(5) for w = (-1, 1), eps = 0.1, q = 2
X0_T10_X3 = 1.32831729637265697825
W_T100_X50 = 0.460168233139512756


@pytest.fixture
def wave():
    return SmoothRarefaction(-1.0, 1.0, eps=0.1, q=2.0)


def test_kq_references():
    assert normalize_kq(2.0) == pytest.approx(4.0 / np.pi, rel=1e-13)
    assert normalize_kq(1.6) == pytest.approx(KQ_1_6, rel=1e-12)
    with pytest.raises(DomainError):
        normalize_kq(1.5)


@settings(max_examples=40, deadline=None)
@given(q=st.floats(1.55, 8.0), z=st.floats(-50.0, 50.0))
def test_normalized_primitive_matches_quadrature(q, z):
    kq = normalize_kq(q)
    val, _ = integrate.quad(lambda y: (1 + y * y) ** (-q), 0.0, z, epsabs=1e-14, epsrel=1e-12, limit=200)
    assert normalized_primitive(z, q) == pytest.approx(kq * val, abs=1e-11)


def test_initial_profile_reference(wave):
    w0, w1, _ = initial_data(wave, 5.0)
    assert float(w0) == pytest.approx(W0_AT_5, abs=1e-12)
    assert float(initial_data(wave, 0.0)[0]) == 0.0
    assert float(initial_data(wave, 0.0)[1]) == pytest.approx(wave.max_slope, rel=1e-15)
    assert wave.max_slope == pytest.approx(0.1 * 4 / np.pi, rel=1e-13)


def test_initial_profile_limits_and_monotonicity(wave):
    x = np.linspace(-1e5, 1e5, 20001)
    w0, w1, _ = initial_data(wave, x)
    assert np.all(np.diff(w0) >= 0)
    assert np.all(w1 > 0)
    assert w0[0] - (-1.0) < 1e-8 and 1.0 - w0[-1] < 1e-8
    assert np.all((w0 > -1) & (w0 < 1))


def test_initial_derivatives_by_finite_differences(wave):
    for x in (-30.0, -2.0, 0.3, 7.0, 25.0):
        h = 1e-4
        assert float(initial_data(wave, x)[1]) == pytest.approx(central_diff(lambda s: float(initial_data(wave, s)[0]), x, h), rel=1e-7)
        assert float(initial_data(wave, x)[2]) == pytest.approx(central_diff(lambda s: float(initial_data(wave, s)[1]), x, h), rel=1e-6, abs=1e-12)


def test_characteristic_foot_reference(wave):
    x0 = float(invert_characteristic(wave, 10.0, 3.0))
    assert x0 == pytest.approx(X0_T10_X3, abs=1e-9)
    w0 = float(initial_data(wave, x0)[0])
    assert x0 + 10.0 * w0 == pytest.approx(3.0, abs=1e-9)
    assert np.array_equal(invert_characteristic(wave, 0.0, np.array([1.0, 2.0])), [1.0, 2.0])
    with pytest.raises(DomainError):
        invert_characteristic(wave, -1.0, 0.0)


def test_large_time_value_approaches_fan(wave):
    w = float(evaluate(wave, 100.0, 50.0).w)
    assert w == pytest.approx(W_T100_X50, abs=1e-10)
    # the offset from the fan value x/t decays like 1/(eps t)
    for t in (1e3, 1e4):
        assert abs(float(evaluate(wave, t, 0.5 * t).w) - 0.5) < 4.0 / (wave.eps * t)


@settings(max_examples=40, deadline=None)
@given(
    wm=st.floats(-2.0, 1.0),
    width=st.floats(0.1, 3.0),
    eps=st.floats(0.01, 2.0),
    q=st.floats(1.6, 5.0),
    t=st.floats(0.0, 500.0),
    x=st.floats(-300.0, 300.0),
)
def test_solution_properties(wm, width, eps, q, t, x):
    wave = SmoothRarefaction(wm, wm + width, eps=eps, q=q)
    val = evaluate(wave, t, x)
    assert wm <= float(val.w) <= wm + width
    assert float(val.w_x) > 0
    assert float(val.w_x) <= wave.max_slope / (1 + t * wave.max_slope) * (1 + 1e-12)
    assert float(val.w_t) == pytest.approx(-float(val.w) * float(val.w_x), rel=1e-14)


def test_pde_residual_by_finite_differences(wave):
    x = np.linspace(-40, 40, 41)
    t, h = 7.0, 1e-4
    w_t = (evaluate(wave, t + h, x).w - evaluate(wave, t - h, x).w) / (2 * h)
    w_x = (evaluate(wave, t, x + h).w - evaluate(wave, t, x - h).w) / (2 * h)
    val = evaluate(wave, t, x)
    assert np.max(np.abs(w_t + val.w * w_x)) < 1e-8
    assert np.max(np.abs(w_x - val.w_x)) < 1e-8
    w_xx = (evaluate(wave, t, x + h).w_x - evaluate(wave, t, x - h).w_x) / (2 * h)
    assert np.max(np.abs(w_xx - val.w_xx)) < 1e-8


def test_invalid_wave():
    with pytest.raises(DomainError):
        SmoothRarefaction(1.0, 1.0, eps=0.1)
    with pytest.raises(DomainError):
        SmoothRarefaction(0.0, 1.0, eps=0.0)
    with pytest.raises(DomainError):
        SmoothRarefaction(0.0, 1.0, eps=1.0, q=1.2)
