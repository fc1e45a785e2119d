import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sint

from rarewave.approx_wave import ApproxWave, Bump, PerturbationSpec, build_initial_state, sample
from rarewave.diagnostics import (
    DiagnosticsSeries,
    PerturbationFields,
    coercivity_constant,
    config_hash,
    d1,
    d2,
    decay_fit,
    discrete_norm,
    energy_E1_E2,
    energy_series,
    joint_norm,
    perturbation_fields,
    rarefaction_error,
    record_for,
    theta,
)
from rarewave.gaslaw import DomainError, PressureLaw
from rarewave.riemann import RiemannData, exact_profile, solve_fan
from rarewave.solver import Grid1D, SolverConfig, State, run

GRID = Grid1D(12.0, 2400)


def _quad(f):
    return sint.quad(f, -12.0, 12.0, epsabs=1e-13, limit=200)[0]


def test_derivative_stencils_exact_on_polynomials():
    x = GRID.x
    assert np.max(np.abs(d1(x**2, GRID.dx) - 2 * x)) < 1e-9
    assert np.max(np.abs(d2(x**3, GRID.dx) - 6 * x)) < 1e-6


def test_gaussian_norms_against_quadrature():
    g = np.exp(-GRID.x**2)
    assert discrete_norm(g, GRID, "Linf") == pytest.approx(1.0, abs=1e-4)
    assert discrete_norm(g, GRID, "L1") == pytest.approx(np.sqrt(np.pi), rel=1e-10)
    l2sq = _quad(lambda x: np.exp(-2 * x * x))
    h1sq = l2sq + _quad(lambda x: 4 * x * x * np.exp(-2 * x * x))
    h2sq = h1sq + _quad(lambda x: (4 * x * x - 2) ** 2 * np.exp(-2 * x * x))
    assert discrete_norm(g, GRID, "L2") == pytest.approx(np.sqrt(l2sq), rel=1e-10)
    # derivative norms carry the O(dx^2) stencil error
    for kind, exact in (("H1", np.sqrt(h1sq)), ("H2", np.sqrt(h2sq))):
        coarse = abs(discrete_norm(np.exp(-Grid1D(12.0, 1200).x ** 2), Grid1D(12.0, 1200), kind) - exact)
        fine = abs(discrete_norm(g, GRID, kind) - exact)
        assert fine < 1e-4 * exact
        assert coarse / fine == pytest.approx(4.0, rel=0.05)
    with pytest.raises(ValueError):
        discrete_norm(g, GRID, "H3")


def test_joint_norm():
    a, b = np.ones(GRID.N), 2 * np.ones(GRID.N)
    assert joint_norm([a, b], GRID, "L2") == pytest.approx(np.sqrt(5 * 24.0))
    assert joint_norm([a, b], GRID, "Linf") == 2.0


@pytest.fixture
def setup(law, sym_fan):
    wave = ApproxWave(law, sym_fan, eps=1.0)
    grid = Grid1D(80.0, 800)
    return wave, grid


def test_zero_perturbation_has_zero_energy(setup):
    wave, grid = setup
    st0 = build_initial_state(wave, grid, PerturbationSpec(), mu=1.0)
    f = perturbation_fields(st0, wave, grid, 1.0)
    assert all(np.max(np.abs(a)) < 1e-14 for a in f)
    pair = energy_E1_E2(f, st0, wave, grid, tau=0.2, mu=1.0)
    assert abs(pair.E1) < 1e-14 and abs(pair.E2) < 1e-14


@settings(max_examples=30, deadline=None)
@given(a=st.floats(-0.3, 0.3), b=st.floats(-0.5, 0.5), c=st.floats(-0.5, 0.5))
def test_E1_coercive(a, b, c):
    law = PressureLaw(1.0, 2.0)
    wave = ApproxWave(law, solve_fan(law, RiemannData(1.0, 0.0, 1.0, 1.0)), eps=1.0)
    grid = Grid1D(80.0, 400)
    pert = PerturbationSpec(Bump(a, 0, 2), Bump(b, 1, 2), Bump(c, -1, 2))
    st0 = build_initial_state(wave, grid, pert, mu=1.0)
    f = perturbation_fields(st0, wave, grid, 1.0)
    pair = energy_E1_E2(f, st0, wave, grid, tau=0.2, mu=1.0)
    assert pair.E1 >= -1e-14
    if max(abs(a), abs(b), abs(c)) > 1e-3:
        assert coercivity_constant(f, pair.E1, grid) > 0.01


def test_energy_series_monotone_integral(setup):
    wave, grid = setup
    st0 = build_initial_state(wave, grid, PerturbationSpec(phi=Bump(0.05, 0, 2)), mu=1.0)
    cfg = SolverConfig(tau=0.2, mu=1.0, t_end=1.0, snapshot_times=(0.25, 0.5, 0.75))
    snaps = run(cfg, st0, grid)
    hist = [perturbation_fields(s, wave, grid, 1.0) for _, s in snaps]
    E = energy_series([t for t, _ in snaps], hist, wave, grid)
    assert np.all(np.diff(E) >= 0)
    assert E[0] == pytest.approx(joint_norm(hist[0], grid, "H2"))
    with pytest.raises(ValueError):
        energy_series([0.0], hist, wave, grid)


def test_rarefaction_error(setup, sym_fan):
    wave, grid = setup
    vr, ur = exact_profile(sym_fan, grid.x / 3.0)
    st = State(3.0, vr, ur, np.zeros(grid.N))
    assert tuple(rarefaction_error(st, sym_fan, grid)) == (0.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        rarefaction_error(State(0.0, vr, ur, np.zeros(grid.N)), sym_fan, grid)


def test_decay_fit_recovers_power_law():
    t = np.geomspace(10, 1000, 9)
    fit = decay_fit(t, 3.0 * t**-0.5)
    assert fit.slope == pytest.approx(-0.5, abs=1e-12)
    assert fit.intercept == pytest.approx(np.log(3.0), abs=1e-12)
    assert fit.r2 == pytest.approx(1.0)
    with pytest.raises(ValueError):
        decay_fit([1, 2], [1, 2])
    with pytest.raises(DomainError):
        decay_fit([1, 2, 3], [1, 0, 2])


def test_theta():
    assert theta(2.0) == 0.5
    assert theta(1.6) == 0.5


def test_config_hash_stable():
    assert config_hash({"a": 1, "b": 2}) == config_hash({"b": 2, "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})
    assert len(config_hash({})) == 16


def test_series_requires_increasing_time():
    s = DiagnosticsSeries("abc")
    s.append({"t": 0.0, "E": 1.0})
    s.append({"t": 1.0, "E": 2.0})
    with pytest.raises(ValueError):
        s.append({"t": 1.0, "E": 3.0})
    assert s.records[0]["config_hash"] == "abc"
    assert list(s.column("E")) == [1.0, 2.0] and len(s) == 2


def test_record_layout(setup):
    wave, grid = setup
    st0 = build_initial_state(wave, grid, PerturbationSpec(phi=Bump(0.05, 0, 2)), mu=1.0)
    cfg = SolverConfig(tau=0.2, mu=1.0)
    rec0 = record_for(st0, wave, grid, cfg, energy=0.0)
    assert rec0["err.sup_v"] is None
    keys = list(rec0)
    assert keys[0] == "t" and keys[-2:] == ["totals.mass", "totals.momentum"]
    assert {"E", "E1", "E2", "norms.H2_phi", "norms.Linf_S"} <= set(keys)
    st1 = State(1.0, st0.v, st0.u, st0.s)
    assert record_for(st1, wave, grid, cfg, energy=0.0)["err.sup_v"] > 0


def test_sample_reuse_matches(setup):
    wave, grid = setup
    st0 = build_initial_state(wave, grid, PerturbationSpec(psi=Bump(0.05, 0, 2)), mu=1.0)
    ws = sample(wave, 0.0, grid.x)
    a = perturbation_fields(st0, wave, grid, 1.0, ws)
    b = perturbation_fields(st0, wave, grid, 1.0)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert isinstance(a, PerturbationFields)
