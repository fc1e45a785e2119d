"""Discrete norms, perturbation fields, energy functionals and decay fits.

Integrals over the cell-centred grid are midpoint sums ``sum(f) * dx``; this is
the trapezoid rule on cell averages and matches the conserved totals.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import stats

from . import approx_wave as aw
from .gaslaw import DomainError, PressureLaw
from .riemann import WaveFan, exact_profile
from .solver import Grid1D, SolverConfig, State, centered_gradient

NORM_KINDS = ("L1", "L2", "Linf", "H1", "H2")


def d1(f: np.ndarray, dx: float) -> np.ndarray:
    """Second-order first derivative; one-sided at the ends."""
    return np.gradient(f, dx, edge_order=2)


def d2(f: np.ndarray, dx: float) -> np.ndarray:
    """Second-order second derivative; one-sided four-point stencils at the ends."""
    out = np.empty_like(f)
    out[1:-1] = f[2:] - 2.0 * f[1:-1] + f[:-2]
    out[0] = 2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]
    out[-1] = 2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]
    return out / (dx * dx)


def integrate(f: np.ndarray, grid: Grid1D) -> float:
    return float(np.sum(f) * grid.dx)


def discrete_norm(f, grid: Grid1D, kind: str) -> float:
    f = np.asarray(f, dtype=float)
    if kind == "Linf":
        return float(np.max(np.abs(f))) if f.size else 0.0
    if kind == "L1":
        return integrate(np.abs(f), grid)
    l2sq = integrate(f * f, grid)
    if kind == "L2":
        return float(np.sqrt(l2sq))
    if kind == "H1":
        fx = d1(f, grid.dx)
        return float(np.sqrt(l2sq + integrate(fx * fx, grid)))
    if kind == "H2":
        fx = d1(f, grid.dx)
        fxx = d2(f, grid.dx)
        return float(np.sqrt(l2sq + integrate(fx * fx, grid) + integrate(fxx * fxx, grid)))
    raise ValueError(f"unknown norm {kind!r}; expected one of {NORM_KINDS}")


def joint_norm(fields: Iterable[np.ndarray], grid: Grid1D, kind: str) -> float:
    """Norm of a vector of fields, ``sqrt(sum ||f_i||^2)`` (max for Linf)."""
    vals = [discrete_norm(f, grid, kind) for f in fields]
    if kind == "Linf":
        return max(vals)
    return float(np.sqrt(sum(v * v for v in vals)))


class PerturbationFields(NamedTuple):
    phi: np.ndarray
    psi: np.ndarray
    s_pert: np.ndarray


def _sample(wave, state, grid, ws):
    return ws if ws is not None else aw.sample(wave, state.t, grid.x)


def perturbation_fields(state: State, wave: aw.ApproxWave, grid: Grid1D, mu: float, ws=None) -> PerturbationFields:
    """Deviation of a state from the approximate wave at the state's time.

    ``ws`` optionally supplies a precomputed :func:`approx_wave.sample` at ``state.t``.
    """
    ws = _sample(wave, state, grid, ws)
    return PerturbationFields(state.v - ws.V, state.u - ws.U, state.s - mu * ws.d.U_x / ws.V)


def energy_series(times: Sequence[float], history: Sequence[PerturbationFields], wave: aw.ApproxWave, grid: Grid1D) -> np.ndarray:
    """``E(t_k)`` for every snapshot.

    ``E(t) = sup_{s<=t} ||(phi, psi, S)||_{H2} + int_0^t (||(phi_x, psi_x, S_x)||_{H1}^2
    + ||sqrt(V_t) phi||^2 + ||S||^2) ds`` with the time integral by the trapezoid rule.
    """
    if len(times) != len(history):
        raise ValueError("times and history differ in length")
    if len(times) == 0:
        return np.zeros(0)
    sup = np.zeros(len(times))
    dens = np.zeros(len(times))
    for k, (t, f) in enumerate(zip(times, history)):
        sup[k] = joint_norm(f, grid, "H2")
        derivs = [d1(a, grid.dx) for a in f]
        V_t = aw.derivatives(wave, t, grid.x).V_t
        dens[k] = (
            joint_norm(derivs, grid, "H1") ** 2
            + integrate(V_t * f.phi**2, grid)
            + integrate(f.s_pert**2, grid)
        )
    running_sup = np.maximum.accumulate(sup)
    dt = np.diff(np.asarray(times, dtype=float))
    integral = np.concatenate(([0.0], np.cumsum(0.5 * dt * (dens[1:] + dens[:-1]))))
    return running_sup + integral


def energy_E(times, history, wave, grid) -> float:
    """``E`` at the last snapshot of ``history``."""
    series = energy_series(times, history, wave, grid)
    return float(series[-1]) if series.size else 0.0


def _pressure_gap(law: PressureLaw, V, phi):
    """``p(V) phi - int_V^{V+phi} p``, convex in phi and >= 0."""
    vphi = V + phi
    if np.any(~(vphi > 0)):
        raise DomainError("V + phi must be positive")
    return law.p(V) * phi - (law.antiderivative(vphi) - law.antiderivative(V))


class EnergyPair(NamedTuple):
    E1: float
    E2: float
    E1_frozen_weight: float


def energy_E1_E2(
    fields: PerturbationFields,
    state: State,
    wave: aw.ApproxWave,
    grid: Grid1D,
    tau: float,
    mu: float,
    ws=None,
) -> EnergyPair:
    """The L2 energy ``E1`` and its dissipation ``E2``.

    ``E1 = int p(V) phi - int_V^{V+phi} p + psi^2/2 + tau v S^2/(2 mu)``,
    ``E2 = int v S^2/mu + V_t phi S/V + (p(V+phi) - p(V) - p'(V) phi) V_t``.
    ``E1_frozen_weight`` uses ``tau V`` in place of ``tau v`` in the stress term.
    """
    law = wave.law
    phi, psi, S = fields
    ws = _sample(wave, state, grid, ws)
    V, V_t = ws.V, ws.d.V_t
    base = _pressure_gap(law, V, phi) + 0.5 * psi**2
    e1 = integrate(base + tau * state.v * S**2 / (2.0 * mu), grid)
    e1_frozen = integrate(base + tau * V * S**2 / (2.0 * mu), grid)
    curv = law.p(V + phi) - law.p(V) - law.dp(V) * phi
    e2 = integrate(state.v * S**2 / mu + V_t * phi * S / V + curv * V_t, grid)
    return EnergyPair(e1, e2, e1_frozen)


def balance_forcing(
    fields: PerturbationFields, state: State, wave: aw.ApproxWave, grid: Grid1D, tau: float, mu: float, ws=None
) -> float:
    """Right-hand side of ``d/dt E1 + E2 = F``::

        F = int mu psi (U_x/V)_x - psi g_x - tau v S (U_x/V)_t + tau v_t S^2/(2 mu)

    with ``v_t = u_x`` from centred differences of the state.
    """
    phi, psi, S = fields
    ws = _sample(wave, state, grid, ws)
    V, d, g_x = ws.V, ws.d, ws.g_x
    ratio_x = d.U_xx / V - d.U_x * d.V_x / V**2
    ratio_t = d.U_xt / V - d.U_x * d.V_t / V**2
    (_, ul, _), (_, ur, _) = state.far_field
    v_t = centered_gradient(state.u, ul, ur, grid.dx)
    dens = mu * psi * ratio_x - psi * g_x - tau * state.v * S * ratio_t + tau * v_t * S**2 / (2.0 * mu)
    return integrate(dens, grid)


def dissipation_balance(history: Sequence[tuple[float, State]], wave: aw.ApproxWave, grid: Grid1D, config: SolverConfig):
    """Residual of the energy balance between consecutive snapshots.

    ``r = (E1(t+D) - E1(t))/D + avg(E2) - avg(F)``, where ``avg`` is the mean of the
    two endpoint values (midpoint value to second order). Returns ``(t_mid, r)``.
    """
    e1, e2, forcing, times = [], [], [], []
    for t, st in history:
        ws = aw.sample(wave, st.t, grid.x)
        f = perturbation_fields(st, wave, grid, config.mu, ws)
        pair = energy_E1_E2(f, st, wave, grid, config.tau, config.mu, ws)
        e1.append(pair.E1)
        e2.append(pair.E2)
        forcing.append(balance_forcing(f, st, wave, grid, config.tau, config.mu, ws))
        times.append(t)
    times, e1, e2, forcing = map(np.asarray, (times, e1, e2, forcing))
    dt = np.diff(times)
    r = np.diff(e1) / dt + 0.5 * (e2[1:] + e2[:-1]) - 0.5 * (forcing[1:] + forcing[:-1])
    return 0.5 * (times[1:] + times[:-1]), r


def coercivity_constant(fields: PerturbationFields, e1: float, grid: Grid1D) -> float:
    """Measured ``c`` in ``E1 >= c ||(phi, psi, S)||_{L2}^2``."""
    norm_sq = joint_norm(fields, grid, "L2") ** 2
    return e1 / norm_sq if norm_sq > 0 else float("inf")


class RarefactionError(NamedTuple):
    sup_v: float
    sup_u: float
    sup_s: float


def rarefaction_error(state: State, fan: WaveFan, grid: Grid1D) -> RarefactionError:
    """Sup-norm distance of the state from ``(v^r, u^r, 0)(x/t)``."""
    if not state.t > 0:
        raise DomainError("rarefaction error needs t > 0")
    vr, ur = exact_profile(fan, grid.x / state.t)
    return RarefactionError(
        float(np.max(np.abs(state.v - vr))),
        float(np.max(np.abs(state.u - ur))),
        float(np.max(np.abs(state.s))),
    )


class DecayFit(NamedTuple):
    slope: float
    intercept: float
    r2: float


def decay_fit(t, y) -> DecayFit:
    """Least-squares line through ``(log t, log y)``."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.size < 3 or t.size != y.size:
        raise ValueError("need at least 3 (t, y) pairs")
    if np.any(~(t > 0)) or np.any(~(y > 0)):
        raise DomainError("decay fit needs positive t and y")
    res = stats.linregress(np.log(t), np.log(y))
    return DecayFit(float(res.slope), float(res.intercept), float(res.rvalue**2))


class LedgerRow(NamedTuple):
    t: float
    mass: float
    momentum: float
    drift_mass: float
    drift_momentum: float
    rel_mass: float
    rel_momentum: float


def totals(state: State, grid: Grid1D) -> tuple[float, float]:
    return float(np.sum(state.v) * grid.dx), float(np.sum(state.u) * grid.dx)


def conservation_ledger(history: Sequence[tuple[float, State]], grid: Grid1D) -> list[LedgerRow]:
    """Totals of v and u against the initial totals plus accumulated boundary inflow."""
    if not history:
        return []
    _, first = history[0]
    m0, p0 = totals(first, grid)
    rows = []
    for t, st in history:
        m, p = totals(st, grid)
        dm = m - (m0 + st.flux_in[0] - first.flux_in[0])
        dp = p - (p0 + st.flux_in[1] - first.flux_in[1])
        scale_m = max(float(np.sum(np.abs(st.v)) * grid.dx), 1e-300)
        scale_p = max(float(np.sum(np.abs(st.u)) * grid.dx), float(np.sum(np.abs(st.v)) * grid.dx))
        rows.append(LedgerRow(t, m, p, dm, dp, abs(dm) / scale_m, abs(dp) / scale_p))
    return rows


def theta(q: float) -> float:
    """Decay exponent ``min(1/2, 3/2 - 1/q)`` of the forcing terms."""
    return min(0.5, 1.5 - 1.0 / q)


def config_hash(obj) -> str:
    """Stable short hash of a JSON-serializable description of a run."""
    text = json.dumps(obj, sort_keys=True, default=str)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class DiagnosticsSeries:
    """Time-indexed diagnostic records, each a flat dict keyed ``t``, ``norms.*``, ``E``, ..."""

    config_hash: str
    records: list[dict] = field(default_factory=list)

    def append(self, record: dict):
        t = float(record["t"])
        if self.records and not t > self.records[-1]["t"]:
            raise ValueError("diagnostic times must be strictly increasing")
        self.records.append({**record, "t": t, "config_hash": self.config_hash})

    def column(self, key: str) -> np.ndarray:
        return np.array([r[key] for r in self.records], dtype=float)

    def __len__(self):
        return len(self.records)


def record_for(
    state: State,
    wave: aw.ApproxWave,
    grid: Grid1D,
    config: SolverConfig,
    energy: float,
) -> dict:
    """One diagnostics record for ``state``."""
    ws = aw.sample(wave, state.t, grid.x)
    f = perturbation_fields(state, wave, grid, config.mu, ws)
    pair = energy_E1_E2(f, state, wave, grid, config.tau, config.mu, ws)
    rec = {"t": state.t}
    for name, arr in zip(("phi", "psi", "S"), f):
        for kind in ("L2", "Linf", "H2"):
            rec[f"norms.{kind}_{name}"] = discrete_norm(arr, grid, kind)
    rec["E"] = energy
    rec["E1"] = pair.E1
    rec["E2"] = pair.E2
    if state.t > 0:
        err = rarefaction_error(state, wave.fan, grid)
        rec["err.sup_v"], rec["err.sup_u"], rec["err.sup_s"] = err
    else:
        rec["err.sup_v"] = rec["err.sup_u"] = rec["err.sup_s"] = None
    rec["totals.mass"], rec["totals.momentum"] = totals(state, grid)
    return rec
