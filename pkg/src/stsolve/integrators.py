"""Super-time-stepping one-step integrators built on shifted Legendre and
Gegenbauer (lambda = 3/2) polynomials.

One superstep applies the scheme's stability polynomial to the right-hand
side through a normalized three-term recurrence, so only three stage
vectors are ever alive.  The same recurrence evaluates the scalar stability
polynomial, keeping the two paths in lockstep.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InstabilityError
from .grid import Field

FAMILIES = ("rkl1", "rkl2", "rkg1", "rkg2")

# The Gegenbauer parameter is fixed; 3/2 is the value the second-order
# scheme's blend coefficients are derived for.
GEGENBAUER_LAMBDA = 1.5


@dataclass(frozen=True)
class SchemeSpec:
    """Scheme family plus stage count.

    Second-order families need s >= 2 (their internal shift weight has an
    (s-1) or (s^2+s-2) factor that vanishes at s = 1).
    """

    family: str
    s: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown scheme family {self.family!r}")
        if self.s < 1:
            raise ValueError(f"stage count must be >= 1, got {self.s}")
        if self.family in ("rkl2", "rkg2") and self.s < 2:
            raise ValueError(f"{self.family} requires s >= 2, got {self.s}")


def cfl_limit(family: str, s: int) -> float:
    """Largest monotone/stable CFL coefficient c = dt * lambda_max / 4."""
    if family == "rkl1":
        return (s * s + s) / 4.0
    if family == "rkl2":
        return (s * s + s - 2) / 8.0
    if family == "rkg1":
        return (s * s + 3 * s) / 8.0
    if family == "rkg2":
        return (s + 4) * (s - 1) / 12.0
    raise ValueError(f"unknown scheme family {family!r}")


def _w_factor(family: str, s: int) -> float:
    """Shift weight per unit dt: the scheme applies Q_s(I + w * M), w = factor * dt."""
    if family == "rkl1":
        return 2.0 / (s * s + s)
    if family == "rkl2":
        return 4.0 / (s * s + s - 2)
    if family == "rkg1":
        return 4.0 / (s * s + 3 * s)
    if family == "rkg2":
        return 6.0 / ((s + 4) * (s - 1))
    raise ValueError(f"unknown scheme family {family!r}")


def _blend(family: str, s: int) -> float:
    """Weight b of the polynomial term in (1-b) u + b Q_s(...) u."""
    if family in ("rkl1", "rkg1"):
        return 1.0
    if family == "rkl2":
        return (s * s + s - 2) / (2.0 * s * (s + 1))
    return 2.0 * (s - 1) * (s + 4) / (3.0 * s * (s + 3))


@lru_cache(maxsize=None)
def _recurrence_coeffs(family: str, s: int) -> np.ndarray:
    """a_j for the normalized recurrence Q_j = a_j y Q_{j-1} + (1 - a_j) Q_{j-2}.

    Q_j is P_j for the Legendre families and C_j^{(3/2)} / C_j^{(3/2)}(1) for
    the Gegenbauer families; both start Q_0 = 1, Q_1 = y.  1 - a_j is exact
    in floating point for these coefficient ranges, so consistency Q_j(1) = 1
    holds to the last bit.
    """
    j = np.arange(2, s + 1, dtype=np.float64)
    if family in ("rkl1", "rkl2"):
        return (2.0 * j - 1.0) / j
    return (2.0 * j + 1.0) / (j + 2.0)


def stability_limit(spec: SchemeSpec, lam_max: float) -> float:
    """Largest stable dt; equals dt_expl * 2 * c_max with dt_expl = 2/lambda_max."""
    if lam_max <= 0:
        raise ValueError(f"lambda_max must be positive, got {lam_max}")
    return 4.0 * cfl_limit(spec.family, spec.s) / lam_max


def stability_interval(spec: SchemeSpec) -> tuple[float, float]:
    """The z = dt*lambda interval [-4 c_max, 0] on which |R_s(z)| <= 1."""
    return (-4.0 * cfl_limit(spec.family, spec.s), 0.0)


def choose_stages(
    family: str, dt: float, lam_max: float, s_min: int, s_max: int
) -> tuple[int, float]:
    """Smallest stage count in [s_min, s_max] whose stability limit covers dt.

    Returns (s, dt); when even s_max cannot cover dt, returns s_max with dt
    reduced to its stability limit.
    """
    if s_min > s_max:
        raise ValueError(f"empty stage range [{s_min}, {s_max}]")
    if dt <= 0 or lam_max <= 0:
        raise ValueError("dt and lambda_max must be positive")
    lo = s_min
    if family in ("rkl2", "rkg2"):
        lo = max(lo, 2)
    if lo > s_max:
        raise ValueError(f"empty stage range [{lo}, {s_max}] for family {family}")
    for s in range(lo, s_max + 1):
        if stability_limit(SchemeSpec(family, s), lam_max) >= dt:
            return s, dt
    return s_max, stability_limit(SchemeSpec(family, s_max), lam_max)


def stability_polynomial_value(spec: SchemeSpec, z):
    """R_s(z), the scalar amplification factor of one superstep at dt*lambda = z."""
    z = np.asarray(z, dtype=np.float64)
    y = 1.0 + _w_factor(spec.family, spec.s) * z
    if spec.s == 1:
        q = y
    else:
        q_prev = np.ones_like(y)
        q = y
        for a in _recurrence_coeffs(spec.family, spec.s):
            q, q_prev = a * (y * q) + (1.0 - a) * q_prev, q
    b = _blend(spec.family, spec.s)
    if b == 1.0:
        out = q
    else:
        out = (1.0 - b) + b * q
    return float(out) if out.ndim == 0 else out


def superstep(spec: SchemeSpec, f: Field, rhs, dt: float) -> Field:
    """Advance a field by one superstep of the chosen scheme.

    ``rhs(grid, values) -> rates`` replaces every occurrence of M*v in the
    polynomial recurrence, which for a linear operator makes the result the
    exact polynomial-of-matrix product.  Storage: three stage vectors plus
    the immutable input.
    """
    if dt < 0:
        raise ValueError(f"dt must be non-negative, got {dt}")
    if dt == 0.0:
        return Field(grid=f.grid, values=f.values, time=f.time)
    w = _w_factor(spec.family, spec.s) * dt
    grid = f.grid
    u = f.values

    def _stage_check(vec: np.ndarray, stage: int) -> None:
        if not np.all(np.isfinite(vec)):
            raise InstabilityError(stage)

    # overflow mid-stage is reported via InstabilityError, not numpy warnings
    with np.errstate(over="ignore", invalid="ignore"):
        y = u + w * rhs(grid, u)
        _stage_check(y, 1)
        if spec.s > 1:
            y_prev = u
            for stage, a in enumerate(_recurrence_coeffs(spec.family, spec.s), start=2):
                y, y_prev = a * (y + w * rhs(grid, y)) + (1.0 - a) * y_prev, y
                _stage_check(y, stage)
    b = _blend(spec.family, spec.s)
    out = y if b == 1.0 else (1.0 - b) * u + b * y
    return Field(grid=grid, values=out, time=f.time + dt)
