import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rarewave.gaslaw import (
    DomainError,
    PressureLaw,
    inverse_lambda,
    lam,
    pressure_derivatives,
    relaxed_char_speed,
    wave_integral,
)
from oracles import central_diff, quad_wave_integral


def test_rejects_bad_parameters():
    with pytest.raises(DomainError):
        PressureLaw(a=0.0, gamma=2.0)
    with pytest.raises(DomainError):
        PressureLaw(a=1.0, gamma=1.0)


@pytest.mark.parametrize(
    "a, gamma, v, expected",
    [(1, 2, 2, (0.25, -0.25, 0.375)), (1, 2, 1, (1, -2, 6))],
)
def test_pressure_derivatives_closed_form(a, gamma, v, expected):
    assert pressure_derivatives(PressureLaw(a, gamma), v) == pytest.approx(expected, rel=1e-15)


def test_pressure_derivatives_against_finite_differences():
    law = PressureLaw(2.0, 1.4)
    p, dp, d2p = pressure_derivatives(law, 0.5)
    assert p == pytest.approx(5.278031643091577, rel=1e-14)
    h = 1e-5
    assert dp == pytest.approx(central_diff(law.p, 0.5, h), rel=1e-8)
    assert d2p == pytest.approx(central_diff(law.dp, 0.5, h), rel=1e-8)


def test_nonpositive_volume_is_a_domain_error(law):
    for fn in (law.p, law.dp, lambda v: lam(law, v, 2)):
        with pytest.raises(DomainError):
            fn(0.0)
    with pytest.raises(DomainError):
        pressure_derivatives(law, -1.0)


def test_pressure_monotone_convex_on_sample(law):
    for gamma in (1.2, 1.4, 2.0, 3.0):
        lw = PressureLaw(1.3, gamma)
        v = np.linspace(0.1, 10, 500)
        assert np.all(lw.dp(v) < 0)
        assert np.all(lw.d2p(v) > 0)


def test_lambda_examples(law):
    assert lam(law, 1.0, 2) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert lam(law, 1.0, 1) == pytest.approx(-math.sqrt(2), rel=1e-15)
    assert lam(law, 4.0, 2) == pytest.approx(math.sqrt(-law.dp(4.0)), rel=1e-15)
    assert lam(law, 4.0, 2) == pytest.approx(0.1767766952966369, rel=1e-14)


def test_wave_integral_examples(law):
    assert wave_integral(law, 1.0, 1.0, 2) == 0.0
    assert wave_integral(law, 1.0, 4.0, 2) == pytest.approx(math.sqrt(2), rel=1e-14)
    assert wave_integral(law, 1.0, 4.0, 2) == pytest.approx(quad_wave_integral(law, 1.0, 4.0, 2), abs=1e-10)
    assert wave_integral(law, 1.0, 4.0, 1) == pytest.approx(-math.sqrt(2), rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(
    v0=st.floats(0.2, 5.0),
    v1=st.floats(0.2, 5.0),
    gamma=st.floats(1.05, 4.0),
    family=st.sampled_from([1, 2]),
)
def test_wave_integral_matches_quadrature(v0, v1, gamma, family):
    law = PressureLaw(1.0, gamma)
    closed = wave_integral(law, v0, v1, family)
    assert closed == pytest.approx(quad_wave_integral(law, v0, v1, family), abs=1e-10)
    assert wave_integral(law, v1, v0, family) == pytest.approx(-closed, abs=1e-14)


def test_inverse_lambda_examples(law):
    assert inverse_lambda(law, math.sqrt(2), 2) == pytest.approx(1.0, rel=1e-15)
    assert inverse_lambda(law, lam(law, 4.0, 2), 2) == pytest.approx(4.0, rel=1e-14)
    assert inverse_lambda(law, -math.sqrt(2), 1) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(DomainError):
        inverse_lambda(law, -0.5, 2)
    with pytest.raises(DomainError):
        inverse_lambda(law, 0.5, 1)


@pytest.mark.parametrize("gamma", [1.2, 1.4, 2.0, 3.0])
@pytest.mark.parametrize("family", [1, 2])
def test_lambda_roundtrip_log_grid(gamma, family):
    law = PressureLaw(0.7, gamma)
    w = np.geomspace(1e-4, 1e4, 400) * (1 if family == 2 else -1)
    back = lam(law, inverse_lambda(law, w, family), family)
    assert np.all(np.abs(back - w) <= 1e-12 * np.abs(w))


def test_relaxed_char_speed_matches_eigenvalues(law):
    mu, tau, v = 1.0, 1.0, 1.0
    c = relaxed_char_speed(law, mu, tau, v)
    assert c == pytest.approx(math.sqrt(3), rel=1e-15)
    # quasilinear form q_t + A q_x = source for q = (v, u, S)
    A = np.array([[0.0, -1.0, 0.0], [law.dp(v), 0.0, -1.0], [0.0, -mu / (tau * v), 0.0]])
    eig = np.sort(np.linalg.eigvals(A).real)
    assert eig == pytest.approx([-c, 0.0, c], abs=1e-12)


def test_relaxed_char_speed_limits(law):
    assert relaxed_char_speed(law, 1e-12, 1.0, 1.0) == pytest.approx(math.sqrt(2), rel=1e-11)
    assert relaxed_char_speed(law, 3.0, 0.5, 2.0) == pytest.approx(relaxed_char_speed(law, 3.0 * 7, 0.5 * 7, 2.0), rel=1e-15)
    with pytest.raises(DomainError):
        relaxed_char_speed(law, 1.0, 0.0, 1.0)


@settings(max_examples=200, deadline=None)
@given(mu=st.floats(1e-3, 1e3), tau=st.floats(1e-3, 1e3), v=st.floats(0.05, 20.0), gamma=st.floats(1.05, 4.0))
def test_subcharacteristic_gap(mu, tau, v, gamma):
    law = PressureLaw(1.0, gamma)
    assert relaxed_char_speed(law, mu, tau, v) > lam(law, v, 2)
