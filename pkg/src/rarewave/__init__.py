"""Relaxed isentropic Navier-Stokes (Maxwell stress) in Lagrangian coordinates:
rarefaction-wave constructions, a split finite-volume solver and energy diagnostics."""

from .gaslaw import DomainError, PressureLaw
from .riemann import Region, RiemannData, WaveFan, classify, solve_fan
from .solver import Grid1D, PositivityError, SolverConfig, State

__version__ = "0.1.0"
