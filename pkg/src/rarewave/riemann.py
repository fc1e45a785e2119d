"""Two-rarefaction Riemann problem for the p-system."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .gaslaw import DomainError, PressureLaw, inverse_lambda, lam, wave_integral

# absolute band (in u) for membership of the R1/R2 curves
CURVE_TOL = 1e-10


class Region(enum.Enum):
    ON_R1 = "ON_R1"
    ON_R2 = "ON_R2"
    INTERIOR_RR = "INTERIOR_RR"
    OUTSIDE = "OUTSIDE"


class ClassificationError(ValueError):
    """Riemann data has no two-rarefaction solution."""


@dataclass(frozen=True)
class RiemannData:
    v_minus: float
    u_minus: float
    v_plus: float
    u_plus: float

    def __post_init__(self):
        if not (self.v_minus > 0 and self.v_plus > 0):
            raise DomainError("far-field volumes must be positive")

    @property
    def delta(self) -> float:
        """Wave amplitude |v+ - v-| + |u+ - u-|."""
        return abs(self.v_plus - self.v_minus) + abs(self.u_plus - self.u_minus)


@dataclass(frozen=True)
class WaveFan:
    law: PressureLaw
    data: RiemannData
    vbar: float
    ubar: float
    w1_minus: float
    w1_plus: float
    w2_minus: float
    w2_plus: float

    @property
    def delta(self) -> float:
        return self.data.delta

    @property
    def edges(self) -> tuple[float, float, float, float]:
        return (self.w1_minus, self.w1_plus, self.w2_minus, self.w2_plus)


def _curve_gaps(law: PressureLaw, data: RiemannData) -> tuple[float, float]:
    """u+ minus the R1 / R2 curve through (v-, u-) evaluated at v+."""
    r1 = data.u_minus - wave_integral(law, data.v_minus, data.v_plus, 1)
    r2 = data.u_minus - wave_integral(law, data.v_minus, data.v_plus, 2)
    return data.u_plus - r1, data.u_plus - r2


def classify(law: PressureLaw, data: RiemannData) -> Region:
    """Locate ``(v+, u+)`` relative to the two-rarefaction region of ``(v-, u-)``.

    Data satisfying both inequalities but requiring a vacuum intermediate
    state (``u+ - u- >= phi(v-) + phi(v+)``) is reported as OUTSIDE.
    """
    g1, g2 = _curve_gaps(law, data)
    vacuum = data.u_plus - data.u_minus >= law.riemann_potential(data.v_minus) + law.riemann_potential(
        data.v_plus
    )
    if vacuum or g1 < -CURVE_TOL or g2 < -CURVE_TOL:
        return Region.OUTSIDE
    if data.u_plus >= data.u_minus:
        if abs(g1) <= CURVE_TOL:
            return Region.ON_R1
        if abs(g2) <= CURVE_TOL:
            return Region.ON_R2
    return Region.INTERIOR_RR


def solve_fan(law: PressureLaw, data: RiemannData) -> WaveFan:
    """Intermediate state and fan edges of the two-rarefaction solution.

    Along a 1-wave ``u + phi(v)`` is constant, along a 2-wave ``u - phi(v)``,
    so ``phi(vbar) = (u- + phi(v-) - u+ + phi(v+)) / 2`` in closed form.
    """
    region = classify(law, data)
    if region is Region.OUTSIDE:
        raise ClassificationError(f"no two-rarefaction solution for {data}")
    phi_m = law.riemann_potential(data.v_minus)
    phi_p = law.riemann_potential(data.v_plus)
    if region is Region.ON_R1:
        vbar = data.v_plus
    elif region is Region.ON_R2:
        vbar = data.v_minus
    else:
        vbar = law.inverse_riemann_potential(0.5 * (data.u_minus + phi_m - data.u_plus + phi_p))
    ubar = data.u_minus - wave_integral(law, data.v_minus, vbar, 1)
    return WaveFan(
        law=law,
        data=data,
        vbar=float(vbar),
        ubar=float(ubar),
        w1_minus=lam(law, data.v_minus, 1),
        w1_plus=lam(law, vbar, 1),
        w2_minus=lam(law, vbar, 2),
        w2_plus=lam(law, data.v_plus, 2),
    )


def fan_residuals(fan: WaveFan) -> tuple[float, float]:
    """Residuals of the R1 and R2 curve equations through the intermediate state."""
    law, d = fan.law, fan.data
    r1 = fan.ubar - (d.u_minus - wave_integral(law, d.v_minus, fan.vbar, 1))
    r2 = d.u_plus - (fan.ubar - wave_integral(law, fan.vbar, d.v_plus, 2))
    return r1, r2


def burgers_profile(w_minus: float, w_plus: float, xi):
    """Centered rarefaction of Burgers' equation in the similarity variable ``xi = x/t``."""
    if not w_minus < w_plus:
        raise DomainError(f"need w_minus < w_plus, got {w_minus!r} >= {w_plus!r}")
    out = np.clip(np.asarray(xi, dtype=float), w_minus, w_plus)
    return out.item() if out.ndim == 0 else out


def exact_profile(fan: WaveFan, xi):
    """Self-similar solution ``(v, u)(x/t)``; a 1-fan and a 2-fan glued at the intermediate state."""
    law, d = fan.law, fan.data
    xi = np.asarray(xi, dtype=float)
    # np.clip tolerates zero-width fans, burgers_profile does not
    w1 = np.clip(xi, fan.w1_minus, fan.w1_plus)
    w2 = np.clip(xi, fan.w2_minus, fan.w2_plus)
    v1 = inverse_lambda(law, w1, 1)
    v2 = inverse_lambda(law, w2, 2)
    # pin the constant states exactly instead of round-tripping through lambda
    v1 = np.where(xi <= fan.w1_minus, d.v_minus, np.where(xi >= fan.w1_plus, fan.vbar, v1))
    v2 = np.where(xi <= fan.w2_minus, fan.vbar, np.where(xi >= fan.w2_plus, d.v_plus, v2))
    u1 = d.u_minus - wave_integral(law, d.v_minus, v1, 1)
    u2 = fan.ubar - wave_integral(law, fan.vbar, v2, 2)
    u1 = np.where(xi <= fan.w1_minus, d.u_minus, u1)
    u2 = np.where(xi >= fan.w2_plus, d.u_plus, u2)
    v = v1 + v2 - fan.vbar
    u = u1 + u2 - fan.ubar
    if xi.ndim == 0:
        return float(v), float(u)
    return v, u
