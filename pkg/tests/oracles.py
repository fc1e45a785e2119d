"""Independent reference computations used only by the tests."""
import numpy as np
from scipy import integrate

from rarewave.gaslaw import lam


def quad_wave_integral(law, v0, v1, family):
    val, _ = integrate.quad(lambda s: lam(law, s, family), v0, v1, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def bisect_vbar(law, data, iters=200):
    """Root of f(v) = u- - int_{v-}^v lam1 - int_v^{v+} lam2 - u+ by bisection with quadrature."""
    lo = min(data.v_minus, data.v_plus) / 10.0
    hi = 10.0 * max(data.v_minus, data.v_plus)

    def f(v):
        return (
            data.u_minus
            - quad_wave_integral(law, data.v_minus, v, 1)
            - quad_wave_integral(law, v, data.v_plus, 2)
            - data.u_plus
        )

    flo, fhi = f(lo), f(hi)
    assert flo < 0 < fhi, "bracket does not straddle the root"
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def central_diff(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def observed_order(e_coarse, e_fine, ratio=2.0):
    return np.log(e_coarse / e_fine) / np.log(ratio)
