"""Gamma-law pressure, characteristic speeds and wave-curve integrals.

All functions accept scalars or numpy arrays and are vectorized.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain of a formula (e.g. v <= 0)."""


def _positive(name: str, x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError(f"{name} must be positive, got min {np.min(x)!r}")
    return x


def _family(family: int) -> float:
    if family == 1:
        return -1.0
    if family == 2:
        return 1.0
    raise ValueError(f"family must be 1 or 2, got {family!r}")


def _out(x):
    return x.item() if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class PressureLaw:
    """Isentropic pressure ``p(v) = a * v**(-gamma)``."""

    a: float = 1.0
    gamma: float = 2.0

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError(f"a must be positive, got {self.a!r}")
        if not self.gamma > 1:
            raise DomainError(f"gamma must exceed 1, got {self.gamma!r}")

    @property
    def sound_scale(self) -> float:
        """sqrt(a * gamma), the sound speed at v = 1."""
        return float(np.sqrt(self.a * self.gamma))

    def p(self, v):
        v = _positive("v", v)
        return _out(self.a * v ** (-self.gamma))

    def dp(self, v):
        v = _positive("v", v)
        return _out(-self.a * self.gamma * v ** (-self.gamma - 1.0))

    def d2p(self, v):
        v = _positive("v", v)
        g = self.gamma
        return _out(self.a * g * (g + 1.0) * v ** (-g - 2.0))

    def antiderivative(self, v):
        """P(v) with P' = p."""
        v = _positive("v", v)
        return _out(self.a * v ** (1.0 - self.gamma) / (1.0 - self.gamma))

    def riemann_potential(self, v):
        """phi(v) = 2 sqrt(a gamma)/(gamma-1) * v**(-(gamma-1)/2).

        ``int_{v0}^{v1} lambda_2 = phi(v0) - phi(v1)``.
        """
        v = _positive("v", v)
        g = self.gamma
        return _out(2.0 * self.sound_scale / (g - 1.0) * v ** (-(g - 1.0) / 2.0))

    def inverse_riemann_potential(self, phi):
        phi = _positive("phi", phi)
        g = self.gamma
        return _out((phi * (g - 1.0) / (2.0 * self.sound_scale)) ** (-2.0 / (g - 1.0)))


def pressure_derivatives(law: PressureLaw, v):
    """Return ``(p, p', p'')`` at ``v``."""
    return law.p(v), law.dp(v), law.d2p(v)


def lam(law: PressureLaw, v, family: int):
    """Characteristic speed of the p-system, ``lambda_1 = -sqrt(-p')``, ``lambda_2 = +sqrt(-p')``."""
    sign = _family(family)
    v = _positive("v", v)
    return _out(sign * law.sound_scale * v ** (-(law.gamma + 1.0) / 2.0))


def dlam(law: PressureLaw, v, family: int):
    """d(lambda_family)/dv."""
    sign = _family(family)
    v = _positive("v", v)
    m = (law.gamma + 1.0) / 2.0
    return _out(-sign * m * law.sound_scale * v ** (-m - 1.0))


def d2lam(law: PressureLaw, v, family: int):
    sign = _family(family)
    v = _positive("v", v)
    m = (law.gamma + 1.0) / 2.0
    return _out(sign * m * (m + 1.0) * law.sound_scale * v ** (-m - 2.0))


def wave_integral(law: PressureLaw, v0, v1, family: int):
    """Closed form of ``int_{v0}^{v1} lambda_family(s) ds``."""
    sign = _family(family)
    v0 = _positive("v0", v0)
    v1 = _positive("v1", v1)
    return _out(sign * (np.asarray(law.riemann_potential(v0)) - np.asarray(law.riemann_potential(v1))))


def inverse_lambda(law: PressureLaw, w, family: int):
    """The unique ``v > 0`` with ``lambda_family(v) = w``."""
    sign = _family(family)
    w = np.asarray(w, dtype=float)
    if np.any(~(sign * w > 0)):
        raise DomainError(f"lambda_{family} takes only {'positive' if sign > 0 else 'negative'} values")
    return _out((np.abs(w) / law.sound_scale) ** (-2.0 / (law.gamma + 1.0)))


def relaxed_char_speed(law: PressureLaw, mu, tau, v):
    """Nonzero characteristic speed ``sqrt(mu/(tau v) - p'(v))`` of the relaxed system.

    The quasilinear (v, u, S) system has eigenvalues {0, -c, +c}.
    """
    mu = _positive("mu", mu)
    tau = _positive("tau", tau)
    v = _positive("v", v)
    return _out(np.sqrt(mu / (tau * v) - np.asarray(law.dp(v))))
