"""Energy-balance residual under simultaneous grid and snapshot-cadence refinement.

Prints max |d/dt E1 + E2 - F| over [0, T] for each (N, cadence) pair.
"""
import argparse
from dataclasses import replace

import numpy as np

from rarewave.approx_wave import build_initial_state
from rarewave.config import load_config
from rarewave.diagnostics import dissipation_balance
from rarewave.solver import run


def residual(cfg, N, cadence, horizon):
    times = list(np.round(np.arange(0.0, horizon + 0.5 * cadence, cadence), 12))
    c = replace(cfg, solver=replace(cfg.solver, N=N, t_end=horizon, snapshot_times=times))
    wave, grid, scfg = c.approx_wave(), c.grid(), c.solver_config()
    hist = run(scfg, build_initial_state(wave, grid, c.perturbation_spec(), scfg.mu), grid)
    _, r = dissipation_balance(hist, wave, grid, scfg)
    return float(np.max(np.abs(r)))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default="configs/stability.toml")
    parser.add_argument("--horizon", type=float, default=5.0)
    parser.add_argument("--levels", type=int, default=4)
    args = parser.parse_args()
    cfg = load_config(args.config)
    prev = None
    print(f"{'N':>7} {'cadence':>9} {'max|r|':>11} {'ratio':>7}")
    for k in range(args.levels):
        N, cadence = 2000 * 2**k, 0.2 / 2**k
        r = residual(cfg, N, cadence, args.horizon)
        ratio = f"{prev / r:7.2f}" if prev else "       "
        print(f"{N:>7} {cadence:>9.4f} {r:>11.3e} {ratio}")
        prev = r


if __name__ == "__main__":
    main()
