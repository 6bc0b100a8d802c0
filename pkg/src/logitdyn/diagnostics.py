"""How close a density is to the pure Nash point mass.

The point-mass limit is measured with the Wasserstein-1 distance, which on
[0, 1] is ``int |F(u) - 1{u >= x0}| du`` and is evaluated exactly here for
piecewise-constant densities (piecewise-linear CDF).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .dynamics import l1_gap
from .equilibrium import NashResult
from .grid import Density, mass_on_interval
from .logit import LogitSettings, logit_map, relative_entropy
from .payoff import PayoffModel, PayoffParams, fishing_payoff

NASH_HALFWIDTH = 0.05


@dataclass(frozen=True)
class DiagnosticsRecord:
    mode_x: float
    mean: float
    variance: float
    mass_near_nash: float
    wasserstein_to_nash: float
    l1_residual: float
    entropy: float

    def as_dict(self) -> dict:
        return asdict(self)


def mode_location(d: Density) -> float:
    # np.argmax returns the first maximum, i.e. the smallest tied index
    return float(d.grid.centers[int(np.argmax(d.values))])


def _cdf_integral(d: Density, c: float) -> float:
    """``int_0^c F(u) du`` for the piecewise-linear CDF F of ``d``."""
    h = d.grid.cell_width
    cdf = np.concatenate(([0.0], np.cumsum(d.values) * h))
    k = min(int(c / h), d.grid.n_cells - 1)
    full = h * np.sum(0.5 * (cdf[:k] + cdf[1 : k + 1]))
    s = c - k * h
    return float(full + cdf[k] * s + 0.5 * d.values[k] * s * s)


def wasserstein1_to_point(d: Density, x0: float) -> float:
    if not 0.0 <= x0 <= 1.0:
        raise ValueError(f"x0 must lie in [0, 1], got {x0}")
    # int_0^x0 F + int_x0^1 (1 - F) = 2 I(x0) + 1 - x0 - I(1)
    w = 2.0 * _cdf_integral(d, x0) + 1.0 - x0 - _cdf_integral(d, 1.0)
    return max(w, 0.0)


def l1_distance(d1: Density, d2: Density) -> float:
    return l1_gap(d1, d2)


def concentration_mass(d: Density, center: float, halfwidth: float) -> float:
    if halfwidth <= 0:
        raise ValueError("halfwidth must be positive")
    a = min(max(center - halfwidth, 0.0), 1.0)
    b = min(max(center + halfwidth, 0.0), 1.0)
    return mass_on_interval(d, a, b)


def summarize(
    d: Density,
    params: PayoffParams,
    settings: LogitSettings,
    nash: NashResult,
    halfwidth: float = NASH_HALFWIDTH,
    payoff: PayoffModel | None = None,
) -> DiagnosticsRecord:
    x = d.grid.centers
    h = d.grid.cell_width
    mean = float(h * np.sum(x * d.values))
    # exact second moment of a piecewise-constant density adds h^2/12 per cell
    variance = float(h * np.sum((x - mean) ** 2 * d.values)) + h * h / 12.0
    model = payoff if payoff is not None else fishing_payoff(params)
    residual = l1_gap(logit_map(model(d), settings), d)
    return DiagnosticsRecord(
        mode_x=mode_location(d),
        mean=mean,
        variance=variance,
        mass_near_nash=concentration_mass(d, nash.x_hat, halfwidth),
        wasserstein_to_nash=wasserstein1_to_point(d, nash.x_hat),
        l1_residual=residual,
        entropy=relative_entropy(d),
    )
