"""Smooth monotone solutions of the inviscid Burgers equation ``w_t + w w_x = 0``.

The initial profile is ``w0(x) = w_hat + w_tilde * k_q * int_0^{eps x} (1+y^2)^(-q) dy``,
which increases from ``w_minus`` to ``w_plus``. The normalized integral is an
incomplete beta function, so ``w0`` is evaluated in closed form for any ``q``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import integrate, special

from .gaslaw import DomainError


class NumericalError(RuntimeError):
    pass


def normalize_kq(q: float) -> float:
    """``k_q`` with ``k_q * int_0^inf (1+y^2)^(-q) dy = 1``.

    With ``y = tan(theta)`` the integral becomes ``int_0^{pi/2} cos(theta)^(2q-2) dtheta``.
    """
    if not q > 1.5:
        raise DomainError(f"q must exceed 3/2, got {q!r}")
    val, _ = integrate.quad(lambda th: np.cos(th) ** (2.0 * q - 2.0), 0.0, np.pi / 2, epsabs=0.0, epsrel=1e-13, limit=200)
    return 1.0 / val


def normalized_primitive(z, q: float):
    """``k_q * int_0^z (1+y^2)^(-q) dy``, odd in ``z`` with limits +-1."""
    z = np.asarray(z, dtype=float)
    az = np.abs(z)
    t = az * az / (1.0 + az * az)
    b = q - 0.5
    # for |z| > 1 use the complement so the approach to +-1 keeps relative accuracy in the tail
    near = special.betainc(0.5, b, np.minimum(t, 0.5))
    tail = 1.0 - special.betainc(b, 0.5, 1.0 / (1.0 + az * az))
    return np.sign(z) * np.where(az <= 1.0, near, tail)


def normalized_tail(z, q: float):
    """``1 - |normalized_primitive(z)|``, accurate for large ``|z|``."""
    az = np.abs(np.asarray(z, dtype=float))
    return special.betainc(q - 0.5, 0.5, 1.0 / (1.0 + az * az))


class BurgersValue(NamedTuple):
    w: np.ndarray
    w_x: np.ndarray
    w_xx: np.ndarray
    w_t: np.ndarray


@dataclass(frozen=True)
class SmoothRarefaction:
    w_minus: float
    w_plus: float
    eps: float
    q: float = 2.0
    k_q: float = field(init=False)

    def __post_init__(self):
        if not self.w_minus < self.w_plus:
            raise DomainError(f"need w_minus < w_plus, got {self.w_minus!r}, {self.w_plus!r}")
        if not self.eps > 0:
            raise DomainError(f"eps must be positive, got {self.eps!r}")
        object.__setattr__(self, "k_q", normalize_kq(self.q))

    @property
    def w_hat(self) -> float:
        return 0.5 * (self.w_plus + self.w_minus)

    @property
    def w_tilde(self) -> float:
        return 0.5 * (self.w_plus - self.w_minus)

    @property
    def max_slope(self) -> float:
        """max_x w0'(x), attained at x = 0."""
        return self.w_tilde * self.k_q * self.eps


def initial_data(wave: SmoothRarefaction, x):
    """Return ``(w0, w0', w0'')`` at ``x``."""
    x = np.asarray(x, dtype=float)
    z = wave.eps * x
    az = np.abs(z)
    head = wave.w_hat + wave.w_tilde * normalized_primitive(z, wave.q)
    tail_val = wave.w_tilde * normalized_tail(z, wave.q)
    tail = np.where(z > 0, wave.w_plus - tail_val, wave.w_minus + tail_val)
    w0 = np.where(az <= 1.0, head, tail)
    base = 1.0 + z * z
    w1 = wave.max_slope * base ** (-wave.q)
    w2 = -2.0 * wave.q * wave.eps * z * wave.max_slope * base ** (-wave.q - 1.0)
    return w0, w1, w2


def invert_characteristic(wave: SmoothRarefaction, t, x, *, tol: float = 1e-10, max_iter: int = 200):
    """Foot ``x0`` of the characteristic through ``(t, x)``: ``x0 + t w0(x0) = x``.

    Safeguarded Newton on the bracket ``[x - w_plus t, x - w_minus t]``; the map is
    strictly increasing in ``x0`` so the root is unique.
    """
    t = float(t)
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t!r}")
    x = np.asarray(x, dtype=float)
    if t == 0.0:
        return x.copy()
    lo = x - wave.w_plus * t
    hi = x - wave.w_minus * t
    # start from the rarefaction-fan foot, good for large t
    x0 = np.clip(x - np.clip(x / t, wave.w_minus, wave.w_plus) * t, lo, hi)
    scale = tol * (1.0 + np.abs(x))
    for _ in range(max_iter):
        w0, w1, _ = initial_data(wave, x0)
        f = x0 + t * w0 - x
        done = np.abs(f) <= scale
        if np.all(done):
            return x0
        lo = np.where(f < 0, x0, lo)
        hi = np.where(f > 0, x0, hi)
        newton = x0 - f / (1.0 + t * w1)
        bad = ~((newton > lo) & (newton < hi))
        x0 = np.where(done, x0, np.where(bad, 0.5 * (lo + hi), newton))
        if np.all(done | (hi - lo <= 4 * np.spacing(np.maximum(np.abs(lo), np.abs(hi))))):
            return x0
    raise NumericalError("characteristic inversion did not converge")


def evaluate(wave: SmoothRarefaction, t, x) -> BurgersValue:
    """Solution value and derivatives ``(w, w_x, w_xx, w_t)`` at time ``t``."""
    x0 = invert_characteristic(wave, t, x)
    w0, w1, w2 = initial_data(wave, x0)
    d = 1.0 + float(t) * w1
    w_x = w1 / d
    return BurgersValue(w0, w_x, w2 / d**3, -w0 * w_x)
