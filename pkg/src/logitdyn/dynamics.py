"""Time integration and steady states of the generalized logit dynamic.

The dynamic ``dmu/dt = L(mu) - mu``, with ``L`` the q-logit response to the
population's own payoff, is integrated by forward Euler,

    mu <- (1 - dt) mu + dt L(mu),

which is a convex combination for ``dt <= 1``, so mass and nonnegativity
are preserved exactly.  Runs stop on the L1 stationarity residual
``||L(mu) - mu||_1``; the displacement per step is ``dt`` times that residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .grid import ActionGrid, Density, make_grid, normalize, uniform_density
from .logit import LogitSettings, logit_map
from .payoff import PayoffModel, PayoffParams, crowding_penalty, exp_moment, fishing_payoff


@dataclass(frozen=True)
class SolverConfig:
    settings: LogitSettings = field(default_factory=LogitSettings)
    params: PayoffParams = field(default_factory=PayoffParams)
    dt: float = 0.1
    max_steps: int = 1_000_000
    tol: float = 1e-10
    damping: float = 1.0
    # overrides the fishing payoff built from ``params`` when set
    payoff: Optional[PayoffModel] = field(default=None, compare=False)

    def __post_init__(self):
        if not (0.0 < self.dt <= 1.0):
            raise ValueError(f"dt must lie in (0, 1], got {self.dt!r}")
        if not (0.0 < self.damping <= 1.0):
            raise ValueError(f"damping must lie in (0, 1], got {self.damping!r}")
        if not (math.isfinite(self.tol) and self.tol > 0):
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if int(self.max_steps) != self.max_steps or self.max_steps < 1:
            raise ValueError(f"max_steps must be a positive integer, got {self.max_steps!r}")

    def payoff_model(self) -> PayoffModel:
        return self.payoff if self.payoff is not None else fishing_payoff(self.params)


@dataclass(frozen=True, eq=False)
class SimulationResult:
    final: Density
    steps_taken: int
    converged: bool
    residual: float
    trajectory_samples: Optional[List[Tuple[float, Density]]] = None


def l1_gap(a: Density, b: Density) -> float:
    if a.grid != b.grid:
        raise ValueError("densities live on different grids")
    return float(a.grid.cell_width * np.sum(np.abs(a.values - b.values)))


def response(d: Density, config: SolverConfig) -> Density:
    """The logit response L(d) to the payoff that ``d`` induces."""
    return logit_map(config.payoff_model()(d), config.settings)


def stationarity_residual(d: Density, config: SolverConfig) -> float:
    return l1_gap(response(d, config), d)


def _blend(d: Density, target: Density, weight: float) -> Density:
    if weight == 1.0:
        return target
    return Density(d.grid, (1.0 - weight) * d.values + weight * target.values)


def euler_step(d: Density, config: SolverConfig) -> Density:
    return _blend(d, response(d, config), config.dt)


def _relax(
    initial: Density,
    config: SolverConfig,
    weight: float,
    snapshot_every: Optional[int],
    time_step: float,
    on_step: Optional[Callable[[int, Density], None]],
) -> SimulationResult:
    model = config.payoff_model()
    settings = config.settings
    d = initial
    samples = [] if snapshot_every else None
    if samples is not None:
        samples.append((0.0, d))

    steps = 0
    converged = False
    while True:
        target = logit_map(model(d), settings)
        residual = l1_gap(target, d)
        if residual < config.tol:
            converged = True
            break
        if steps >= config.max_steps:
            break
        d = _blend(d, target, weight)
        steps += 1
        if on_step is not None:
            on_step(steps, d)
        if samples is not None and steps % snapshot_every == 0:
            samples.append((steps * time_step, d))
    return SimulationResult(d, steps, converged, residual, samples)


def simulate(
    initial: Density,
    config: SolverConfig,
    snapshot_every: Optional[int] = None,
    on_step: Optional[Callable[[int, Density], None]] = None,
) -> SimulationResult:
    """Forward-Euler integration until the stationarity residual drops below ``tol``.

    Non-convergence within ``max_steps`` is reported through
    ``converged=False``.  With ``snapshot_every=k`` the initial state and every
    k-th state are kept as ``(time, density)`` pairs.  ``on_step`` is called
    with every new state, which is how callers audit intermediate densities.
    """
    if snapshot_every is not None and snapshot_every < 1:
        raise ValueError("snapshot_every must be positive")
    return _relax(initial, config, config.dt, snapshot_every, config.dt, on_step)


def steady_fixed_point(
    initial: Density,
    config: SolverConfig,
    on_step: Optional[Callable[[int, Density], None]] = None,
) -> SimulationResult:
    """Damped iteration ``mu <- (1 - damping) mu + damping L(mu)`` of the steady equation."""
    return _relax(initial, config, config.damping, None, 1.0, on_step)


@dataclass(frozen=True, eq=False)
class AsymptoticResult:
    final: Density
    exp_moment: float
    steps_taken: int
    converged: bool
    residual: float


def moment_density(grid: ActionGrid, params: PayoffParams, q: float, moment: float) -> Density:
    """Density proportional to ``(-phi)**(-1/(q-1))`` for the payoff with moment ``moment``."""
    x = grid.centers
    neg_phi = crowding_penalty(x, params.gamma) + params.alpha * np.exp(-params.beta * x) * moment
    lw = -np.log(neg_phi) / (q - 1.0)
    return normalize(np.exp(lw - lw.max()), grid)


def asymptotic_limit(config: SolverConfig, grid: Optional[ActionGrid] = None) -> AsymptoticResult:
    """Small-eta limit of the q > 1 steady state, which does not depend on eta.

    For q > 1 and eta -> 0 the q-exponential weight behaves like
    ``(-phi / eta)**(-1/(q-1))`` and the eta factor cancels on
    normalization.  Since phi couples to the population only through the
    exponential moment C, the self-consistency condition is the scalar
    fixed point ``C = exp_moment(p_C)``, iterated from the uniform moment.
    ``config.damping`` relaxes the scalar update and ``config.tol`` bounds
    ``|C_{k+1} - C_k|``.  ``config.settings.eta`` is never read.
    """
    q = config.settings.q
    if config.settings.classical:
        raise ValueError("asymptotic_limit needs q > 1")
    if config.payoff is not None:
        raise ValueError("asymptotic_limit is only defined for the fishing payoff")
    if grid is None:
        grid = make_grid(200)
    params = config.params
    moment = exp_moment(uniform_density(grid), params.beta)
    d = moment_density(grid, params, q, moment)
    steps, converged, change = 0, False, math.inf
    while steps < config.max_steps:
        updated = exp_moment(d, params.beta)
        change = abs(updated - moment)
        moment = (1.0 - config.damping) * moment + config.damping * updated
        d = moment_density(grid, params, q, moment)
        steps += 1
        if change < config.tol:
            converged = True
            break
    return AsymptoticResult(d, moment, steps, converged, change)

