"""Run configuration: a flat key = value text format with per-problem defaults.

Defaults follow the reference experiment protocols: the blow-up problem runs
on [-1, 1] with Dirichlet walls, u0(x) = 10/(1 - 0.5 cos(pi x)) - 20/3,
dt0 = dx/8, 200 initial stages, stopping at max u = 1e30; the pinch-off
problem runs on [-2pi, 2pi] periodic, r0(x) = 0.75 - 0.45 cos(x/2),
dt0 = 1e-5, 70 initial stages, stopping at min r = 1e-10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .amr import RefinementPolicy
from .errors import ConfigError
from .grid import DIRICHLET, PERIODIC

SEMILINEAR = "semilinear_heat"
SURFACE_DIFFUSION = "surface_diffusion"

STS_SCHEMES = ("rkl1", "rkl2", "rkg1", "rkg2")
BASELINE_SCHEMES = ("semi_implicit", "backward_euler")

# Deep refinement keeps coordinates exact (dyadic ticks), so the run-level
# floor sits well below the per-call grid default; reaching the desk-scale
# thresholds needs ~35 levels past dx = 1/128.
RUN_FLOOR_SCALE = 2.0**-48


@dataclass
class RunConfig:
    problem: str = SEMILINEAR
    scheme: str = "rkl2"
    p: float = 3.0
    alpha: float = 1.0
    a: float = 1.0
    n_intervals: int = 256
    bc: str = DIRICHLET
    dt0: float = float("nan")       # nan -> problem default
    s0: int = 200
    threshold: float = 1e30
    n_initial_refinements: int = 0
    max_steps: int = 2_000_000
    snapshots_per_decade: int = 8
    resolution_floor: float = float("nan")  # nan -> RUN_FLOOR_SCALE * 2a
    dt_floor_cfl: float = float("nan")      # nan -> policy default
    reaction: bool = True
    horizon_fraction: float = 0.25
    baseline_solver: str = "dense_lu"   # the runtime-table comparator; or "banded"
    newton_tol: float = 1e-10
    newton_max_iters: int = 12
    heat_ic_scale: float = 10.0
    heat_ic_cos: float = 0.5
    heat_ic_offset: float = -20.0 / 3.0
    surf_ic_offset: float = 0.75
    surf_ic_amp: float = 0.45
    out_dir: str = ""

    def __post_init__(self):
        if self.problem not in (SEMILINEAR, SURFACE_DIFFUSION):
            raise ConfigError(f"unknown problem {self.problem!r}")
        if self.scheme not in STS_SCHEMES + BASELINE_SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if self.problem == SEMILINEAR and self.scheme == "backward_euler":
            raise ConfigError("backward_euler is the surface-diffusion baseline")
        if self.problem == SURFACE_DIFFUSION and self.scheme == "semi_implicit":
            raise ConfigError("semi_implicit is the semilinear-heat baseline")
        if self.problem == SEMILINEAR and self.reaction and self.p <= 1:
            raise ConfigError(f"p must exceed 1, got {self.p}")
        n = self.n_intervals
        if n < 4 or (n & (n - 1)) != 0:
            raise ConfigError(f"n_intervals must be a power of two >= 4, got {n}")
        if self.a <= 0:
            raise ConfigError(f"domain half-width must be positive, got {self.a}")
        if self.scheme in ("rkl2", "rkg2") and self.s0 < 2:
            raise ConfigError(f"{self.scheme} requires s0 >= 2, got {self.s0}")
        if self.s0 < 1:
            raise ConfigError(f"s0 must be >= 1, got {self.s0}")
        if self.threshold <= 0:
            raise ConfigError("termination threshold must be positive")
        if self.baseline_solver not in ("banded", "dense_lu"):
            raise ConfigError(f"unknown baseline_solver {self.baseline_solver!r}")
        if self.n_initial_refinements < 0:
            raise ConfigError("n_initial_refinements must be >= 0")
        if math.isnan(self.dt0):
            self.dt0 = self.default_dt0()
        if self.dt0 <= 0:
            raise ConfigError(f"dt0 must be positive, got {self.dt0}")
        if math.isnan(self.resolution_floor):
            self.resolution_floor = RUN_FLOOR_SCALE * 2.0 * self.a

    @property
    def dx(self) -> float:
        return 2.0 * self.a / self.n_intervals

    def default_dt0(self) -> float:
        if self.problem == SEMILINEAR:
            return self.dx / 8.0
        return 1e-5

    def initial_condition(self):
        if self.problem == SEMILINEAR:
            scale, cos_c, off = self.heat_ic_scale, self.heat_ic_cos, self.heat_ic_offset
            a = self.a
            return lambda x: scale / (1.0 - cos_c * np.cos(np.pi * x / a)) + off
        off, amp = self.surf_ic_offset, self.surf_ic_amp
        a = self.a
        return lambda x: off - amp * np.cos(np.pi * x / a)

    def refinement_policy(self) -> RefinementPolicy:
        if self.problem == SEMILINEAR:
            base = RefinementPolicy.semilinear()
        else:
            base = RefinementPolicy.surface_diffusion()
        if not math.isnan(self.dt_floor_cfl):
            base = RefinementPolicy(
                criterion=base.criterion,
                dt_divisor_small=base.dt_divisor_small,
                dt_divisor_large=base.dt_divisor_large,
                value_switch=base.value_switch,
                s_schedule=base.s_schedule,
                s_floor=base.s_floor,
                dt_floor_cfl=self.dt_floor_cfl,
                stability_safety=base.stability_safety,
            )
        return base


_DEFAULTS = {
    SEMILINEAR: {
        "a": 1.0,
        "bc": DIRICHLET,
        "n_intervals": 256,
        "s0": 200,
        "threshold": 1e30,
    },
    SURFACE_DIFFUSION: {
        "a": 2.0 * math.pi,
        "bc": PERIODIC,
        "n_intervals": 256,
        "s0": 70,
        "threshold": 1e-10,
    },
}

_BOOL_WORDS = {"true": True, "on": True, "yes": True, "false": False, "off": False, "no": False}


def _coerce(name: str, kind, raw: str):
    if kind is bool:
        if raw.lower() not in _BOOL_WORDS:
            raise ConfigError(f"invalid boolean for {name!r}: {raw!r}")
        return _BOOL_WORDS[raw.lower()]
    if kind is int:
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"invalid integer for {name!r}: {raw!r}") from exc
    if kind is float:
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"invalid number for {name!r}: {raw!r}") from exc
    return raw


def parse_config(text: str) -> RunConfig:
    """Parse the flat key = value document into a validated RunConfig.

    Unknown keys, malformed values, or inconsistent combinations raise
    ConfigError naming the offending key.  ``dx`` may be given instead of
    ``n_intervals``; it must equal 2a / 2^k exactly.
    """
    known = {f.name: f.type for f in fields(RunConfig)}
    kinds = {f.name: type(getattr(RunConfig(), f.name)) for f in fields(RunConfig)}
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key != "dx" and key not in known:
            raise ConfigError(f"unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"duplicate key {key!r}")
        raw[key] = value

    problem = raw.get("problem", SEMILINEAR)
    if problem not in _DEFAULTS:
        raise ConfigError(f"unknown problem {problem!r}")
    kwargs: dict = {"problem": problem}
    kwargs.update(_DEFAULTS[problem])

    dx_raw = raw.pop("dx", None)
    for key, value in raw.items():
        kwargs[key] = _coerce(key, kinds[key], value)

    if dx_raw is not None:
        if "n_intervals" in raw:
            raise ConfigError("give either dx or n_intervals, not both")
        dx = _coerce("dx", float, dx_raw)
        a = kwargs.get("a", _DEFAULTS[problem]["a"])
        n_exact = 2.0 * a / dx
        n = round(n_exact)
        if abs(n_exact - n) > 1e-9 * n_exact or n < 4 or (n & (n - 1)) != 0:
            raise ConfigError(f"dx must equal a/2^k (2a / power-of-two), got {dx!r}")
        kwargs["n_intervals"] = int(n)

    return RunConfig(**kwargs)
