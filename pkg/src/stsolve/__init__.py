"""Super-time-stepping explicit solvers for finite-time singularities in
1-D parabolic PDEs, with adaptive mesh refinement, scaling diagnostics, and
exact-rational monotone-stability certificates.
"""

from .amr import (
    RefinementPolicy,
    RunReport,
    RunResult,
    RunState,
    apply_refinement,
    check_trigger,
    run,
)
from .config import RunConfig, parse_config
from .diagnostics import (
    CONE_SLOPE,
    PINCH_RATE_CONSTANT,
    ConeSlopeResult,
    DiagnosticsRecord,
    DiagnosticsSeries,
    collapse_profile,
    cone_slope,
    half_width,
    loglog_slope,
    pinch_rate_fit,
    reference_profile,
)
from .errors import (
    ConfigError,
    InstabilityError,
    NewtonDivergenceError,
    NonFiniteFieldError,
    PinchOffError,
    ReactionBlowUpError,
    ResolutionFloorError,
    SolverError,
)
from .grid import (
    DIRICHLET,
    PERIODIC,
    Field,
    Grid1D,
    refine_middle_half,
    transfer,
    uniform_grid,
)
from .implicit import BandedSystem, backward_euler_surfdiff_step, semiimplicit_heat_step
from .integrators import (
    FAMILIES,
    SchemeSpec,
    cfl_limit,
    choose_stages,
    stability_interval,
    stability_limit,
    stability_polynomial_value,
    superstep,
)
from .monotone import (
    BandRational,
    MonotoneCertificate,
    RationalPoly,
    clausen_terminating_check,
    gegenbauer32_poly,
    gegenbauer_recurrence_check,
    legendre_poly,
    rkl1_coefficient_formula,
    scheme_band,
    stencil_of_poly,
    verify_monotone,
)
from .operators import (
    HeatLaplacian,
    SemilinearReaction,
    SurfaceDiffusionRhs,
    laplacian_nonuniform,
    max_eigenvalue_estimate,
    surface_diffusion_rhs,
)
from .splitting import reaction_exact, strang_step

__all__ = [name for name in dir() if not name.startswith("_")]
