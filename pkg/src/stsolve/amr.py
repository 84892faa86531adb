"""Time loop driver: refinement triggers, dt and stage schedules, termination.

The refinement criterion halves (half-width for blow-up, minimum radius for
pinch-off); each trigger bisects the middle half of the finest region,
divides dt per the policy, and decays the stage count, keeping dt inside
the scheme's stability limit at all times.

The dt divisors alone would shrink dt far faster than the singularity's own
time scale contracts (the divisor exceeds the per-refinement contraction of
the remaining time), so the policy also floors dt at a parabolic CFL level
dt >= dt_floor_cfl * dx_min^2 / alpha; without the floor, deep runs need a
step count growing geometrically in the refinement level.
"""

from __future__ import annotations

import time as _time
import warnings
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Callable

import numpy as np

from .diagnostics import DiagnosticsRecord, DiagnosticsSeries, cone_slope, half_width
from .errors import (
    InstabilityError,
    NonFiniteFieldError,
    PinchOffError,
    ReactionBlowUpError,
    ResolutionFloorError,
)
from .grid import DIRICHLET, Field, refine_middle_half, transfer, uniform_grid
from .integrators import SchemeSpec, stability_limit, superstep
from .operators import HeatLaplacian, SurfaceDiffusionRhs
from .splitting import strang_step
from .implicit import backward_euler_surfdiff_step, semiimplicit_heat_step

HALF_WIDTH = "half_width_halving"
MIN_VALUE = "min_value_halving"


@dataclass(frozen=True)
class RefinementPolicy:
    """Schedules applied at every refinement event."""

    criterion: str
    dt_divisor_small: float = 50.0
    dt_divisor_large: float = 700.0
    value_switch: float = 1000.0
    s_schedule: str = "scale45"     # "scale45": s <- max(5, floor(0.45 s)); "minus5": s <- max(5, s-5)
    s_floor: int = 5
    dt_floor_cfl: float | None = 0.5
    stability_safety: float = 0.95

    def __post_init__(self):
        if self.criterion not in (HALF_WIDTH, MIN_VALUE):
            raise ValueError(f"unknown refinement criterion {self.criterion!r}")
        if min(self.dt_divisor_small, self.dt_divisor_large) <= 1:
            raise ValueError("dt divisors must exceed 1")
        if self.s_floor < 1:
            raise ValueError("stage floor must be >= 1")

    @classmethod
    def semilinear(cls) -> "RefinementPolicy":
        return cls(criterion=HALF_WIDTH)

    @classmethod
    def surface_diffusion(cls) -> "RefinementPolicy":
        # a single divisor matching the h^-4 growth of the stiffness bound
        return cls(
            criterion=MIN_VALUE,
            dt_divisor_small=16.0,
            dt_divisor_large=16.0,
            s_schedule="minus5",
            dt_floor_cfl=None,
        )

    def dt_divisor(self, current_max: float) -> float:
        if current_max < self.value_switch:
            return self.dt_divisor_small
        return self.dt_divisor_large

    def next_s(self, s: int) -> int:
        if self.s_schedule == "scale45":
            return max(self.s_floor, int(0.45 * s))
        return max(self.s_floor, s - 5)


@dataclass
class RunState:
    """Mutable loop state; dt always satisfies the current stability limit."""

    field: Field
    dt: float
    s: int
    refinement_count: int = 0
    last_trigger_value: float = float("nan")
    steps: int = 0
    half_width_warned: bool = False


def criterion_value(state: RunState, policy: RefinementPolicy) -> float:
    if policy.criterion == MIN_VALUE:
        return float(state.field.values.min())
    return half_width(state.field)


def check_trigger(state: RunState, policy: RefinementPolicy) -> bool:
    """True when the criterion value fell to half its value at the last trigger."""
    value = criterion_value(state, policy)
    if not np.isfinite(value):
        if not state.half_width_warned:
            warnings.warn("refinement criterion undefined; treating as no-trigger")
            state.half_width_warned = True
        return False
    return value <= 0.5 * state.last_trigger_value


def apply_refinement(
    state: RunState,
    policy: RefinementPolicy,
    rhs,
    family: str,
    alpha: float = 1.0,
    min_spacing: float | None = None,
) -> RunState:
    """Refine the grid, transfer the field, and apply the dt/s schedules."""
    new_grid = refine_middle_half(state.field.grid, min_spacing=min_spacing)
    state.field = transfer(state.field, new_grid)
    current_max = float(np.abs(state.field.values).max())
    state.dt = state.dt / policy.dt_divisor(current_max)
    if policy.dt_floor_cfl is not None and alpha > 0:
        h = new_grid.min_spacing
        state.dt = max(state.dt, policy.dt_floor_cfl * h * h / alpha)
    state.s = policy.next_s(state.s)
    if rhs is not None:
        lam = rhs.max_eigenvalue(new_grid, state.field.values)
        limit = policy.stability_safety * stability_limit(SchemeSpec(family, state.s), lam)
        state.dt = min(state.dt, limit)
    state.refinement_count += 1
    state.last_trigger_value = criterion_value(state, policy)
    return state


@dataclass
class RunReport:
    problem: str
    scheme: str
    termination_reason: str
    final_time: float
    final_value: float
    steps: int
    refinement_count: int
    wall_time_s: float
    threshold: float
    refinement_times: list[float] = dataclass_field(default_factory=list)
    s_trajectory: list[tuple[float, int]] = dataclass_field(default_factory=list)
    dt_trajectory: list[tuple[float, float]] = dataclass_field(default_factory=list)
    trigger_values: list[float] = dataclass_field(default_factory=list)
    notes: str = ""


@dataclass
class RunResult:
    """Run outcome.

    Near the singularity the remaining time T - t drops below the floating
    point resolution of the absolute time, so the loop accumulates elapsed
    time exactly (every dt is a dyadic rational); ``exact_times`` aligns
    with the series records and ``time_to_end`` yields exact differences.
    """

    report: RunReport
    series: DiagnosticsSeries
    snapshots: list[Field]
    exact_times: list[Fraction] = dataclass_field(default_factory=list)
    exact_final_time: Fraction = Fraction(0)

    def time_to_end(self) -> np.ndarray:
        """T* - t per series record, differenced exactly before rounding."""
        return np.array(
            [float(self.exact_final_time - t) for t in self.exact_times],
            dtype=np.float64,
        )


def _threshold_reached(problem: str, value: float, threshold: float) -> bool:
    if problem == "semilinear_heat":
        return value >= threshold
    return value <= threshold


def run(config, initial_condition: Callable | None = None) -> RunResult:
    """Drive one run to its termination threshold, step budget, or failure.

    ``config`` is a RunConfig (see stsolve.config); ``initial_condition``
    overrides the configured one with a callable x -> values.
    """
    problem = config.problem
    explicit = config.scheme in ("rkl1", "rkl2", "rkg1", "rkg2")
    policy = config.refinement_policy()

    grid = uniform_grid(config.a, config.n_intervals, config.bc)
    for _ in range(config.n_initial_refinements):
        grid = refine_middle_half(grid, min_spacing=config.resolution_floor)
    ic = initial_condition if initial_condition is not None else config.initial_condition()
    values = np.asarray(ic(grid.nodes), dtype=np.float64)
    if grid.bc == DIRICHLET:
        values = values.copy()
        values[0] = 0.0
        values[-1] = 0.0
    field = Field(grid=grid, values=values, time=0.0)

    if problem == "semilinear_heat":
        rhs = HeatLaplacian(config.alpha)
        extremum = lambda f: float(f.values.max())
    else:
        # guard well below the termination threshold so stages never trip it early
        rhs = SurfaceDiffusionRhs(pinch_threshold=config.threshold * 1e-2)
        extremum = lambda f: float(f.values.min())

    state = RunState(field=field, dt=config.dt0, s=config.s0)
    if explicit:
        lam = rhs.max_eigenvalue(grid, field.values)
        limit = policy.stability_safety * stability_limit(
            SchemeSpec(config.scheme, state.s), lam
        )
        state.dt = min(state.dt, limit)
    state.last_trigger_value = criterion_value(state, policy)

    def stepper(f: Field, dt: float, s: int) -> Field:
        if config.scheme in ("rkl1", "rkl2", "rkg1", "rkg2"):
            spec = SchemeSpec(config.scheme, s)
            if problem == "semilinear_heat":
                p_eff = config.p if config.reaction else None
                return strang_step(f, spec, p_eff, config.alpha, dt)
            return superstep(spec, f, rhs, dt)
        if config.scheme == "semi_implicit":
            p_eff = config.p if config.reaction else None
            return semiimplicit_heat_step(
                f, p_eff, config.alpha, dt, solver=config.baseline_solver
            )
        return backward_euler_surfdiff_step(
            f, dt, newton_tol=config.newton_tol, max_iters=config.newton_max_iters
        )

    series = DiagnosticsSeries()
    snapshots: list[Field] = []
    report = RunReport(
        problem=problem,
        scheme=config.scheme,
        termination_reason="step_budget_exhausted",
        final_time=0.0,
        final_value=extremum(field),
        steps=0,
        refinement_count=0,
        wall_time_s=0.0,
        threshold=config.threshold,
        s_trajectory=[(0.0, state.s)],
        dt_trajectory=[(0.0, state.dt)],
    )

    decade_step = 10.0 ** (1.0 / config.snapshots_per_decade)
    value0 = extremum(field)
    if problem == "semilinear_heat":
        next_level = value0 * decade_step
    else:
        next_level = value0 / decade_step

    # elapsed time accumulated exactly: every dt is a dyadic rational, and
    # near the singularity T - t falls below eps * t in plain doubles
    exact_now = Fraction(0)
    exact_times: list[Fraction] = []

    def record(f: Field, nxt: Field | None, dt_step: float) -> None:
        value = extremum(f)
        dvdt = float("nan")
        if nxt is not None:
            dvdt = (nxt.center_value - f.center_value) / dt_step
        hw = half_width(f) if problem == "semilinear_heat" else float("nan")
        cs = float("nan")
        if problem == "surface_diffusion":
            cs = cone_slope(f).value
        series.append(
            DiagnosticsRecord(
                time=f.time,
                value=value,
                half_width=hw,
                dvdt=dvdt,
                cone_slope=cs,
                level=state.refinement_count,
            )
        )
        snapshots.append(f)
        exact_times.append(exact_now)

    t_start = _time.perf_counter()
    record(field, None, float("nan"))
    # the eigenvalue bound drifts slowly between refinements; refresh it on a
    # short cadence with a 10% inflation so every step stays inside the limit
    lam_cached = rhs.max_eigenvalue(field.grid, field.values) if explicit else 0.0
    lam_age = 0
    while state.steps < config.max_steps:
        value = extremum(state.field)
        if _threshold_reached(problem, value, config.threshold):
            report.termination_reason = "threshold_reached"
            break
        dt_eff = state.dt
        if explicit:
            if lam_age >= 16:
                lam_cached = rhs.max_eigenvalue(state.field.grid, state.field.values)
                lam_age = 0
            dt_eff = min(
                dt_eff,
                policy.stability_safety
                * stability_limit(SchemeSpec(config.scheme, state.s), 1.1 * lam_cached),
            )
        if problem == "semilinear_heat" and config.reaction:
            # keep the reaction half-step well inside its blow-up horizon
            horizon = value ** (1.0 - config.p) / (config.p - 1.0)
            dt_eff = min(dt_eff, config.horizon_fraction * horizon)
            # land just past the threshold instead of overshooting by a full
            # step, so terminal values are scheme-independent
            land = 1.002 * config.threshold
            if value < land:
                dt_hit = (value ** (1.0 - config.p) - land ** (1.0 - config.p)) / (
                    config.p - 1.0
                )
                if 0.0 < dt_hit < dt_eff:
                    dt_eff = dt_hit
        elif problem == "surface_diffusion":
            # pinch timescale ~ (min r)^4; stepping past it outruns the
            # refinement triggers and drives stages through zero
            dt_eff = min(dt_eff, config.horizon_fraction * value**4)
        try:
            new_field = stepper(state.field, dt_eff, state.s)
        except (ReactionBlowUpError, NonFiniteFieldError) as exc:
            report.termination_reason = "blow_up_reached"
            report.notes = str(exc)
            break
        except PinchOffError as exc:
            report.termination_reason = "pinch_off_reached"
            report.notes = str(exc)
            break
        except InstabilityError as exc:
            report.termination_reason = "instability"
            report.notes = str(exc)
            break

        crossed = (
            value >= next_level
            if problem == "semilinear_heat"
            else value <= next_level
        )
        if crossed:
            record(state.field, new_field, dt_eff)
            while (value >= next_level) if problem == "semilinear_heat" else (value <= next_level):
                next_level = (
                    next_level * decade_step
                    if problem == "semilinear_heat"
                    else next_level / decade_step
                )

        state.field = new_field
        exact_now += Fraction(dt_eff)
        state.steps += 1
        lam_age += 1

        if check_trigger(state, policy):
            try:
                apply_refinement(
                    state,
                    policy,
                    rhs if explicit else None,
                    config.scheme if explicit else "rkl2",
                    alpha=config.alpha if problem == "semilinear_heat" else 1.0,
                    min_spacing=config.resolution_floor,
                )
            except ResolutionFloorError as exc:
                report.termination_reason = "resolution_floor"
                report.notes = str(exc)
                break
            if explicit:
                lam_cached = rhs.max_eigenvalue(state.field.grid, state.field.values)
                lam_age = 0
            report.refinement_times.append(state.field.time)
            report.trigger_values.append(state.last_trigger_value)
            report.s_trajectory.append((state.field.time, state.s))
            report.dt_trajectory.append((state.field.time, state.dt))

    if not exact_times or exact_times[-1] < exact_now:
        record(state.field, None, float("nan"))
    report.final_time = state.field.time
    report.final_value = extremum(state.field)
    report.steps = state.steps
    report.refinement_count = state.refinement_count
    report.wall_time_s = _time.perf_counter() - t_start
    return RunResult(
        report=report,
        series=series,
        snapshots=snapshots,
        exact_times=exact_times,
        exact_final_time=exact_now,
    )
