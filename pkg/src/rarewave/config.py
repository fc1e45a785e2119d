"""Experiment manifests: a sectioned TOML file mapped onto dataclasses.

Minimal manifest::

    [riemann]
    v_minus = 1.0
    u_minus = 0.0
    v_plus = 1.0
    u_plus = 1.0

Everything else has a default (q = 2, cfl = 0.5, order = 2, eps = delta**3).
"""
from __future__ import annotations

import dataclasses
import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import tomli
import tomli_w

from .approx_wave import ApproxWave, Bump, PerturbationSpec
from .gaslaw import DomainError, PressureLaw
from .riemann import Region, RiemannData, WaveFan, classify, solve_fan
from .solver import Grid1D, SolverConfig

KINDS = ("riemann", "approx-wave", "simulate", "verify-decay", "compare-limit", "convergence")


class ConfigError(ValueError):
    """Malformed or invalid experiment manifest."""


@dataclass
class LawBlock:
    a: float = 1.0
    gamma: float = 2.0


@dataclass
class RiemannBlock:
    v_minus: float = 1.0
    u_minus: float = 0.0
    v_plus: float = 1.0
    u_plus: float = 1.0


@dataclass
class SmoothingBlock:
    # None selects the coupling eps = delta**3
    eps: Optional[float] = None
    q: float = 2.0


@dataclass
class SolverBlock:
    tau: float = 0.2
    mu: float = 1.0
    cfl: float = 0.5
    L: float = 200.0
    N: int = 4000
    t_end: float = 1.0
    order: int = 2
    snapshot_times: list[float] = field(default_factory=list)


@dataclass
class PerturbationBlock:
    phi_amplitude: float = 0.0
    phi_center: float = 0.0
    phi_width: float = 1.0
    psi_amplitude: float = 0.0
    psi_center: float = 0.0
    psi_width: float = 1.0
    s_amplitude: float = 0.0
    s_center: float = 0.0
    s_width: float = 1.0


@dataclass
class StudyBlock:
    """Parameters of the multi-run experiments."""

    decay_times: list[float] = field(default_factory=lambda: [10.0, 17.78279410038923, 31.622776601683793, 56.23413251903491, 100.0, 177.82794100389228, 316.22776601683796, 562.341325190349, 1000.0])
    decay_points: int = 40001
    taus: list[float] = field(default_factory=lambda: [0.1, 0.05, 0.025])
    cells: list[int] = field(default_factory=lambda: [200, 400, 800])


@dataclass
class OutputBlock:
    dir: str = "out"


@dataclass
class ExperimentConfig:
    kind: str = "simulate"
    law: LawBlock = field(default_factory=LawBlock)
    riemann: RiemannBlock = field(default_factory=RiemannBlock)
    smoothing: SmoothingBlock = field(default_factory=SmoothingBlock)
    solver: SolverBlock = field(default_factory=SolverBlock)
    perturbation: PerturbationBlock = field(default_factory=PerturbationBlock)
    study: StudyBlock = field(default_factory=StudyBlock)
    output: OutputBlock = field(default_factory=OutputBlock)

    # derived objects

    def pressure_law(self) -> PressureLaw:
        return PressureLaw(self.law.a, self.law.gamma)

    def riemann_data(self) -> RiemannData:
        r = self.riemann
        return RiemannData(r.v_minus, r.u_minus, r.v_plus, r.u_plus)

    def fan(self) -> WaveFan:
        return solve_fan(self.pressure_law(), self.riemann_data())

    def eps(self) -> float:
        if self.smoothing.eps is not None:
            return self.smoothing.eps
        return self.riemann_data().delta ** 3

    def approx_wave(self) -> ApproxWave:
        return ApproxWave(self.pressure_law(), self.fan(), self.eps(), self.smoothing.q)

    def grid(self, N: Optional[int] = None) -> Grid1D:
        return Grid1D(self.solver.L, N or self.solver.N)

    def solver_config(self, tau: Optional[float] = None) -> SolverConfig:
        s = self.solver
        return SolverConfig(
            tau=s.tau if tau is None else tau,
            mu=s.mu,
            law=self.pressure_law(),
            cfl=s.cfl,
            t_end=s.t_end,
            snapshot_times=tuple(s.snapshot_times),
            order=s.order,
        )

    def perturbation_spec(self) -> PerturbationSpec:
        p = self.perturbation
        return PerturbationSpec(
            phi=Bump(p.phi_amplitude, p.phi_center, p.phi_width),
            psi=Bump(p.psi_amplitude, p.psi_center, p.psi_width),
            s=Bump(p.s_amplitude, p.s_center, p.s_width),
        )

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        if d["smoothing"]["eps"] is None:
            del d["smoothing"]["eps"]
        return d

    def dumps(self) -> str:
        return tomli_w.dumps(self.to_dict())

    def hash(self) -> str:
        """Hash of everything except the output location."""
        d = self.to_dict()
        del d["output"]
        return hashlib.sha256(tomli_w.dumps(d).encode()).hexdigest()[:16]


_BLOCK_TYPES = {
    "law": LawBlock,
    "riemann": RiemannBlock,
    "smoothing": SmoothingBlock,
    "solver": SolverBlock,
    "perturbation": PerturbationBlock,
    "study": StudyBlock,
    "output": OutputBlock,
}


def _coerce(section: str, name: str, value, default):
    where = f"{section}.{name}"
    if isinstance(default, bool):
        raise ConfigError(f"{where}: unsupported type")
    if isinstance(default, int) and not isinstance(default, bool):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return value
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string, got {value!r}")
        return value
    if isinstance(default, list):
        if not isinstance(value, list):
            raise ConfigError(f"{where}: expected a list, got {value!r}")
        item = int if section == "study" and name == "cells" else float
        return [_coerce(section, name, v, item()) for v in value]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def from_dict(raw: dict) -> ExperimentConfig:
    cfg = ExperimentConfig()
    for key, value in raw.items():
        if key == "kind":
            if value not in KINDS:
                raise ConfigError(f"kind: expected one of {KINDS}, got {value!r}")
            cfg.kind = value
            continue
        if key not in _BLOCK_TYPES:
            raise ConfigError(f"unknown section {key!r}")
        if not isinstance(value, dict):
            raise ConfigError(f"{key}: expected a table")
        block = getattr(cfg, key)
        names = {f.name for f in dataclasses.fields(block)}
        for name, v in value.items():
            if name not in names:
                raise ConfigError(f"{key}.{name}: unknown field")
            default = getattr(block, name)
            if key == "smoothing" and name == "eps":
                default = 0.0
            setattr(block, name, _coerce(key, name, v, default))
    return cfg


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    """Check module-level invariants up front; raises ConfigError naming the field."""
    try:
        law = cfg.pressure_law()
    except DomainError as err:
        name = "gamma" if "gamma" in str(err) else "a"
        raise ConfigError(f"law.{name}: {err}") from None
    if not cfg.smoothing.q > 1.5:
        raise ConfigError(f"smoothing.q: must exceed 3/2, got {cfg.smoothing.q!r}")
    if cfg.smoothing.eps is not None and not cfg.smoothing.eps > 0:
        raise ConfigError(f"smoothing.eps: must be positive, got {cfg.smoothing.eps!r}")
    try:
        data = cfg.riemann_data()
    except DomainError as err:
        raise ConfigError(f"riemann: {err}") from None
    if classify(law, data) is Region.OUTSIDE:
        raise ConfigError("riemann: data lies outside the two-rarefaction region (classify = OUTSIDE)")
    if cfg.kind in ("simulate", "approx-wave", "verify-decay", "compare-limit", "convergence") and not cfg.eps() > 0:
        raise ConfigError("smoothing.eps: delta = 0 makes the coupling eps = delta**3 vanish; set eps")
    try:
        cfg.grid()
        cfg.solver_config()
    except ValueError as err:
        raise ConfigError(f"solver: {err}") from None
    if len(cfg.study.decay_times) < 3 or any(not t > 0 for t in cfg.study.decay_times):
        raise ConfigError("study.decay_times: need at least 3 positive times")
    if len(cfg.study.cells) < 3:
        raise ConfigError("study.cells: need at least 3 resolutions")
    if len(cfg.study.taus) < 2 or any(not t > 0 for t in cfg.study.taus):
        raise ConfigError("study.taus: need at least 2 positive relaxation times")
    return cfg


def loads(text: str) -> ExperimentConfig:
    try:
        raw = tomli.loads(text)
    except tomli.TOMLDecodeError as err:
        raise ConfigError(f"parse error: {err}") from None
    return validate(from_dict(raw))


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise ConfigError(f"{path}: {err.strerror}") from None
    return loads(text)
