"""Finite-volume integrators for the relaxed system and its tau = 0 limit.

Relaxed system (Lagrangian coordinates)::

    v_t = u_x,   u_t + p(v)_x = s_x,   tau s_t + s = mu u_x / v

advanced by Strang splitting: an exact exponential relaxation half step for
``s`` (with ``u``, ``v`` frozen), a conservative Rusanov/MUSCL step for
``(v, u)`` (with ``s`` frozen), and another relaxation half step.
The classical system replaces the stress by ``mu u_x / v`` and adds it as an
explicit centred diffusion flux.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .gaslaw import PressureLaw, lam, relaxed_char_speed

NGHOST = 2


class PositivityError(RuntimeError):
    """Specific volume became nonpositive; the run is aborted."""

    def __init__(self, time: float, snapshots: Optional[list] = None):
        super().__init__(f"nonpositive specific volume at t = {time!r}")
        self.time = time
        self.snapshots = snapshots or []


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centred grid on ``[-L, L]``."""

    L: float
    N: int

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L!r}")
        if int(self.N) != self.N or self.N < 16:
            raise ValueError(f"N must be an integer >= 16, got {self.N!r}")

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def x(self) -> np.ndarray:
        return -self.L + (np.arange(self.N) + 0.5) * self.dx


@dataclass
class State:
    """One time level. ``flux_in`` is the time-integrated net boundary inflow of (v, u).

    ``far_field`` holds the ghost-cell values (v, u, s) on each side; it is taken
    from the end cells when not given and is carried unchanged by the integrators.
    """

    t: float
    v: np.ndarray
    u: np.ndarray
    s: np.ndarray
    flux_in: tuple[float, float] = (0.0, 0.0)
    far_field: Optional[tuple[tuple[float, float, float], tuple[float, float, float]]] = None

    def __post_init__(self):
        self.v = np.asarray(self.v, dtype=float)
        self.u = np.asarray(self.u, dtype=float)
        self.s = np.asarray(self.s, dtype=float)
        if not (self.v.shape == self.u.shape == self.s.shape) or self.v.ndim != 1:
            raise ValueError("v, u, s must be 1-D arrays of equal length")
        if self.far_field is None:
            self.far_field = (
                (float(self.v[0]), float(self.u[0]), float(self.s[0])),
                (float(self.v[-1]), float(self.u[-1]), float(self.s[-1])),
            )


@dataclass(frozen=True)
class SolverConfig:
    tau: float
    mu: float
    law: PressureLaw = field(default_factory=PressureLaw)
    cfl: float = 0.5
    t_end: float = 1.0
    snapshot_times: tuple[float, ...] = ()
    boundary: str = "far_field_fixed"
    order: int = 2

    def __post_init__(self):
        if not self.tau >= 0:
            raise ValueError(f"tau must be nonnegative, got {self.tau!r}")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu!r}")
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl!r}")
        if not self.t_end >= 0:
            raise ValueError(f"t_end must be nonnegative, got {self.t_end!r}")
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order!r}")
        if self.boundary != "far_field_fixed":
            raise ValueError(f"unsupported boundary {self.boundary!r}")
        times = tuple(float(t) for t in self.snapshot_times)
        if list(times) != sorted(times) or any(t < 0 or t > self.t_end for t in times):
            raise ValueError("snapshot_times must be sorted and lie in [0, t_end]")
        object.__setattr__(self, "snapshot_times", times)


def _pad(a: np.ndarray, left: float, right: float) -> np.ndarray:
    return np.concatenate(([left] * NGHOST, a, [right] * NGHOST))


def _minmod(a, b):
    return np.where(a * b > 0, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def _faces(q: np.ndarray, order: int):
    """Left/right states at the N+1 faces of a padded array."""
    if order == 1:
        return q[NGHOST - 1 : -NGHOST], q[NGHOST : -NGHOST + 1 or None]
    d = np.diff(q)
    slope = np.zeros_like(q)
    slope[1:-1] = _minmod(d[:-1], d[1:])
    left = (q + 0.5 * slope)[NGHOST - 1 : -NGHOST]
    right = (q - 0.5 * slope)[NGHOST : -NGHOST + 1 or None]
    return left, right


def centered_gradient(a: np.ndarray, left: float, right: float, dx: float) -> np.ndarray:
    """Centred difference of ``a`` using the far-field ghost values at the ends."""
    ap = np.concatenate(([left], a, [right]))
    return (ap[2:] - ap[:-2]) / (2.0 * dx)


def _speed(config: SolverConfig, v):
    if config.tau > 0:
        return relaxed_char_speed(config.law, config.mu, config.tau, v)
    return lam(config.law, v, 2)


def _fluxes(config: SolverConfig, v, u, s, far_field, dx):
    """Face fluxes ``(F_v, F_u)`` at the N+1 faces; ``s`` is ignored when tau = 0."""
    (vl, ul, sl), (vr, ur, sr) = far_field
    vp = _pad(v, vl, vr)
    up = _pad(u, ul, ur)
    vL, vR = _faces(vp, config.order)
    uL, uR = _faces(up, config.order)
    if np.any(~(vL > 0)) or np.any(~(vR > 0)):
        raise FloatingPointError("nonpositive reconstructed volume")
    law = config.law
    alpha = np.maximum(_speed(config, vL), _speed(config, vR))
    pL, pR = law.p(vL), law.p(vR)
    if config.tau > 0:
        sp = _pad(s, sl, sr)
        sL, sR = _faces(sp, config.order)
        pL = pL - sL
        pR = pR - sR
    fv = 0.5 * (-uL - uR) - 0.5 * alpha * (vR - vL)
    fu = 0.5 * (pL + pR) - 0.5 * alpha * (uR - uL)
    if config.tau == 0:
        inner_v = vp[NGHOST - 1 : -NGHOST]
        outer_v = vp[NGHOST : -NGHOST + 1 or None]
        du = up[NGHOST : -NGHOST + 1 or None] - up[NGHOST - 1 : -NGHOST]
        fu = fu - config.mu * (du / dx) / (0.5 * (inner_v + outer_v))
    return fv, fu


def _transport(config: SolverConfig, state: State, dt: float, dx: float):
    """Conservative update of (v, u) with frozen s; returns new arrays and boundary inflow."""

    def rhs(v, u):
        fv, fu = _fluxes(config, v, u, state.s, state.far_field, dx)
        return -np.diff(fv) / dx, -np.diff(fu) / dx, (fv[0] - fv[-1], fu[0] - fu[-1])

    v0, u0 = state.v, state.u
    dv, du, b0 = rhs(v0, u0)
    v1 = v0 + dt * dv
    u1 = u0 + dt * du
    if config.order == 1:
        return v1, u1, (dt * b0[0], dt * b0[1])
    if np.any(~(v1 > 0)):
        raise FloatingPointError("nonpositive stage volume")
    dv1, du1, b1 = rhs(v1, u1)
    v2 = 0.5 * v0 + 0.5 * (v1 + dt * dv1)
    u2 = 0.5 * u0 + 0.5 * (u1 + dt * du1)
    return v2, u2, (0.5 * dt * (b0[0] + b1[0]), 0.5 * dt * (b0[1] + b1[1]))


def equilibrium_stress(config: SolverConfig, state: State, dx: float) -> np.ndarray:
    """``mu (D_x u) / v`` with centred differences."""
    (_, ul, _), (_, ur, _) = state.far_field
    return config.mu * centered_gradient(state.u, ul, ur, dx) / state.v


def relax(config: SolverConfig, state: State, h: float, dx: float) -> State:
    """Exact solution over ``h`` of ``tau s_t + s = E`` with ``E = mu (D_x u)/v`` frozen."""
    E = equilibrium_stress(config, state, dx)
    s = E + (state.s - E) * math.exp(-h / config.tau)
    return replace(state, s=s)


def cfl_dt(config: SolverConfig, state: State, dx: float) -> float:
    """Largest stable time step for the current state."""
    if config.tau > 0:
        return config.cfl * dx / float(np.max(relaxed_char_speed(config.law, config.mu, config.tau, state.v)))
    hyper = config.cfl * dx / float(np.max(lam(config.law, state.v, 2)))
    diffusive = 0.25 * dx * dx * float(np.min(state.v)) / config.mu
    return min(hyper, diffusive)


def _check_positive(state: State):
    if np.any(~(state.v > 0)):
        raise PositivityError(state.t)


def _advance(config, state, dt, dx, v, u, inflow, s):
    fi = (state.flux_in[0] + inflow[0], state.flux_in[1] + inflow[1])
    return State(state.t + dt, v, u, s, fi, state.far_field)


def step(config: SolverConfig, state: State, dt: float, dx: float) -> State:
    """One Strang-split step of the relaxed system (tau > 0)."""
    if not config.tau > 0:
        raise ValueError("step requires tau > 0; use classical_step")
    half = relax(config, state, 0.5 * dt, dx)
    try:
        v, u, inflow = _transport(config, half, dt, dx)
    except FloatingPointError:
        raise PositivityError(state.t + dt) from None
    moved = _advance(config, state, dt, dx, v, u, inflow, half.s)
    _check_positive(moved)
    return relax(config, moved, 0.5 * dt, dx)


def classical_step(config: SolverConfig, state: State, dt: float, dx: float) -> State:
    """One step of the classical viscous system (tau = 0); ``s`` is recomputed as ``mu u_x / v``."""
    if config.tau != 0:
        raise ValueError("classical_step requires tau = 0")
    try:
        v, u, inflow = _transport(config, state, dt, dx)
    except FloatingPointError:
        raise PositivityError(state.t + dt) from None
    moved = _advance(config, state, dt, dx, v, u, inflow, state.s)
    _check_positive(moved)
    return replace(moved, s=equilibrium_stress(config, moved, dx))


Observer = Callable[[State], None]


def run(
    config: SolverConfig,
    initial: State,
    grid: Grid1D,
    observers: Iterable[Observer] = (),
) -> list[tuple[float, State]]:
    """March from ``initial`` to ``config.t_end``.

    Snapshots are taken at t = initial.t, at every snapshot time and at t_end,
    with the time step clipped so each lands exactly.
    """
    observers = list(observers)
    advance = step if config.tau > 0 else classical_step
    dx = grid.dx
    state = initial
    if config.tau == 0:
        state = replace(state, s=equilibrium_stress(config, state, dx))
    events = sorted({t for t in config.snapshot_times if t > state.t} | {config.t_end})
    snapshots = [(state.t, state)]
    for event in events:
        if event <= state.t:
            continue
        while state.t < event:
            dt = cfl_dt(config, state, dx)
            last = state.t + dt >= event
            if last:
                dt = event - state.t
            try:
                new = advance(config, state, dt, dx)
            except PositivityError as err:
                raise PositivityError(err.time, snapshots) from None
            if last:
                new.t = event
            state = new
            for obs in observers:
                obs(state)
        snapshots.append((state.t, state))
    return snapshots
