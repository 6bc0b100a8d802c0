"""Generalized (Tsallis) logit dynamic on the action space [0, 1]."""

from .diagnostics import (
    DiagnosticsRecord,
    concentration_mass,
    l1_distance,
    mode_location,
    summarize,
    wasserstein1_to_point,
)
from .dynamics import (
    AsymptoticResult,
    SimulationResult,
    SolverConfig,
    asymptotic_limit,
    euler_step,
    simulate,
    stationarity_residual,
    steady_fixed_point,
)
from .equilibrium import NashResult, nash_foc_residual, solve_pure_nash
from .grid import (
    ActionGrid,
    DegenerateDensityError,
    Density,
    make_grid,
    mass_on_interval,
    normalize,
    point_mass_density,
    quadrature,
    uniform_density,
)
from .logit import (
    LogitSettings,
    VerificationReport,
    logit_map,
    logit_objective,
    q_exponential,
    relative_entropy,
    tsallis_divergence,
    verify_maximizer,
)
from .payoff import (
    PayoffParams,
    PayoffProfile,
    constant_payoff,
    exp_moment,
    expected_payoff,
    fishing_payoff,
    kernel_f,
)

__version__ = "0.1.0"
