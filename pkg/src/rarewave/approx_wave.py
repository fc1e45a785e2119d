"""Smooth approximate rarefaction ``(V, U)`` built from two smoothed Burgers waves.

Each family ``i`` carries a Burgers solution ``w_i`` and ``lambda_i(V_i) = w_i``;
``(V_i, U_i)`` solves the p-system exactly and the composite
``(V, U) = (V_1 + V_2 - vbar, U_1 + U_2 - ubar)`` solves it up to the
interaction defect ``g(V) = p(V) - p(V_1) - p(V_2) + p(vbar)``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import burgers
from .gaslaw import DomainError, PressureLaw, d2lam, dlam, inverse_lambda, wave_integral
from .riemann import WaveFan
from .solver import Grid1D, State


class WaveDerivatives(NamedTuple):
    V_x: np.ndarray
    V_t: np.ndarray
    U_x: np.ndarray
    U_t: np.ndarray
    U_xx: np.ndarray
    V_xx: np.ndarray
    U_xt: np.ndarray


class _Family(NamedTuple):
    V: np.ndarray
    U: np.ndarray
    V_x: np.ndarray
    V_xx: np.ndarray
    U_x: np.ndarray
    U_xx: np.ndarray
    V_t: np.ndarray
    U_t: np.ndarray
    U_xt: np.ndarray


@dataclass(frozen=True)
class ApproxWave:
    law: PressureLaw
    fan: WaveFan
    eps: float
    q: float = 2.0

    def __post_init__(self):
        if not self.eps > 0:
            raise DomainError(f"eps must be positive, got {self.eps!r}")
        # zero-width fans (delta = 0, or data on a single wave curve) carry no Burgers wave
        w1 = burgers.SmoothRarefaction(self.fan.w1_minus, self.fan.w1_plus, self.eps, self.q) if self.fan.w1_minus < self.fan.w1_plus else None
        w2 = burgers.SmoothRarefaction(self.fan.w2_minus, self.fan.w2_plus, self.eps, self.q) if self.fan.w2_minus < self.fan.w2_plus else None
        object.__setattr__(self, "wave1", w1)
        object.__setattr__(self, "wave2", w2)

    def _family(self, family: int, t, x) -> _Family:
        fan, law = self.fan, self.law
        x = np.asarray(x, dtype=float)
        wave = self.wave1 if family == 1 else self.wave2
        if wave is None:
            zero = np.zeros_like(x)
            vbar = np.full_like(x, fan.vbar)
            ubar = np.full_like(x, fan.ubar)
            return _Family(vbar, ubar, *(zero,) * 7)
        b = burgers.evaluate(wave, t, x)
        V = inverse_lambda(law, b.w, family)
        dl = dlam(law, V, family)
        V_x = b.w_x / dl
        # V_i,t = w_i,t / lambda_i' with w_t = -w w_x; written to share U_i,x's arithmetic
        V_t = -b.w * V_x
        V_xx = b.w_xx / dl - b.w_x * d2lam(law, V, family) * V_x / dl**2
        w_xt = -b.w_x**2 - b.w * b.w_xx
        V_xt = w_xt / dl - b.w_x * d2lam(law, V, family) * V_t / dl**2
        if family == 1:
            U = fan.data.u_minus - wave_integral(law, fan.data.v_minus, V, 1)
        else:
            U = fan.ubar - wave_integral(law, fan.vbar, V, 2)
        # U_i,x = -lambda_i(V_i) V_i,x = -w_i V_i,x
        U_x = -b.w * V_x
        U_xx = -b.w_x * V_x - b.w * V_xx
        U_t = -b.w * V_t
        U_xt = -b.w_t * V_x - b.w * V_xt
        return _Family(V, U, V_x, V_xx, U_x, U_xx, V_t, U_t, U_xt)

    def families(self, t, x) -> tuple[_Family, _Family]:
        return self._family(1, t, x), self._family(2, t, x)


class WaveSample(NamedTuple):
    """Everything the solver diagnostics need from the wave at one time level."""

    V: np.ndarray
    U: np.ndarray
    d: WaveDerivatives
    g: np.ndarray
    g_x: np.ndarray


def sample(wave: ApproxWave, t, x) -> WaveSample:
    """Values, derivatives and defect from a single pass of characteristic inversion."""
    law, fan = wave.law, wave.fan
    f1, f2 = wave.families(t, x)
    V = f1.V + f2.V - fan.vbar
    U = f1.U + f2.U - fan.ubar
    d = WaveDerivatives(
        V_x=f1.V_x + f2.V_x,
        V_t=f1.V_t + f2.V_t,
        U_x=f1.U_x + f2.U_x,
        U_t=f1.U_t + f2.U_t,
        U_xx=f1.U_xx + f2.U_xx,
        V_xx=f1.V_xx + f2.V_xx,
        U_xt=f1.U_xt + f2.U_xt,
    )
    g = law.p(V) - law.p(f1.V) - law.p(f2.V) + law.p(fan.vbar)
    g_x = law.dp(V) * d.V_x - law.dp(f1.V) * f1.V_x - law.dp(f2.V) * f2.V_x
    return WaveSample(V, U, d, g, g_x)


def evaluate(wave: ApproxWave, t, x):
    """``(V, U)`` at ``(t, x)``."""
    s = sample(wave, t, x)
    return s.V, s.U


def derivatives(wave: ApproxWave, t, x) -> WaveDerivatives:
    """Analytic first derivatives of ``(V, U)`` plus ``V_xx``, ``U_xx`` and ``U_xt``.

    ``V_t`` is assembled from the same products as ``U_x`` (``V_i,t = -w_i V_i,x``
    and ``U_i,x = -w_i V_i,x``), so ``V_t == U_x`` holds exactly.
    """
    return sample(wave, t, x).d


def defect(wave: ApproxWave, t, x):
    """Interaction defect ``g(V)`` and its x-derivative."""
    s = sample(wave, t, x)
    return s.g, s.g_x


@dataclass(frozen=True)
class Bump:
    """Gaussian bump ``amplitude * exp(-((x - center)/width)^2)``."""

    amplitude: float = 0.0
    center: float = 0.0
    width: float = 1.0

    def __call__(self, x):
        if self.amplitude == 0.0:
            return np.zeros_like(np.asarray(x, dtype=float))
        return self.amplitude * np.exp(-(((np.asarray(x) - self.center) / self.width) ** 2))


@dataclass(frozen=True)
class PerturbationSpec:
    phi: Bump = Bump()
    psi: Bump = Bump()
    s: Bump = Bump()


# far-field deviation of (V, U) tolerated at the domain ends before warning
FAR_FIELD_TOL = 1e-6


def build_initial_state(wave: ApproxWave, grid: Grid1D, perturbation: PerturbationSpec, mu: float) -> State:
    """Approximate wave at ``t = 0`` plus the perturbation bumps.

    The stress is the equilibrium value ``mu U_x / V`` plus the stress bump.
    Warns when the domain is too short for ``(V, U)`` to reach the far field.
    """
    x = grid.x
    edges = np.array([-grid.L, grid.L])
    v, u, s = _initial_fields(wave, perturbation, mu, x)
    ends = _initial_fields(wave, perturbation, mu, edges)
    d = wave.fan.data
    dev = max(abs(ends[0][0] - d.v_minus), abs(ends[1][0] - d.u_minus), abs(ends[0][1] - d.v_plus), abs(ends[1][1] - d.u_plus))
    if dev > FAR_FIELD_TOL:
        warnings.warn(f"approximate wave deviates from far field by {dev:.2e} at the domain ends", stacklevel=2)
    if np.any(~(v > 0)):
        raise DomainError("perturbed initial volume is not positive")
    # ghost cells hold the initial data at x = -L, L so they do not depend on the resolution
    far = tuple((float(ends[0][i]), float(ends[1][i]), float(ends[2][i])) for i in (0, 1))
    return State(0.0, v, u, s, far_field=far)


def _initial_fields(wave: ApproxWave, perturbation: PerturbationSpec, mu: float, x):
    ws = sample(wave, 0.0, x)
    V, U, U_x = ws.V, ws.U, ws.d.U_x
    return V + perturbation.phi(x), U + perturbation.psi(x), mu * U_x / V + perturbation.s(x)
