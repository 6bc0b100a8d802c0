"""Fishing-tourism payoff and its expected value under a density.

The kernel

    f(x, y) = -(1 / (x (1 - x)))**gamma - alpha * exp(-beta * (x - y))

penalizes too sparse or too dense activity (first term) and a lower
utility than the rest of the population (second term).  Because
``exp(-beta (x - y)) = exp(-beta x) exp(beta y)``, the expected payoff
depends on the population only through the scalar moment
``C = int exp(beta y) mu(dy)``, which lies in ``[1, exp(beta)]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .grid import ActionGrid, Density, quadrature


@dataclass(frozen=True)
class PayoffParams:
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True, eq=False)
class PayoffProfile:
    """Per-cell payoff values phi(x_i; mu).

    ``exp_moment`` is the population constant the fishing payoff factors
    through; plug-in payoffs that have no such constant leave it as None.
    """

    grid: ActionGrid
    values: np.ndarray
    exp_moment: Optional[float] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n_cells,):
            raise ValueError(
                f"expected {self.grid.n_cells} payoff values, got shape {values.shape}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


# A payoff model maps the current population density to a payoff profile.
PayoffModel = Callable[[Density], PayoffProfile]


def kernel_f(x: float, y: float, params: PayoffParams) -> float:
    if not 0.0 < x < 1.0:
        raise ValueError(f"kernel_f is singular at the boundary; need 0 < x < 1, got {x}")
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"y must lie in [0, 1], got {y}")
    crowding = (1.0 / (x * (1.0 - x))) ** params.gamma
    return -crowding - params.alpha * math.exp(-params.beta * (x - y))


def crowding_penalty(x, gamma: float) -> np.ndarray:
    """The ``(1 / (x (1 - x)))**gamma`` term, vectorized."""
    x = np.asarray(x, dtype=float)
    return (1.0 / (x * (1.0 - x))) ** gamma


def exp_moment(d: Density, beta: float) -> float:
    return quadrature(d, np.exp(beta * d.grid.centers))


def profile_from_moment(grid: ActionGrid, params: PayoffParams, moment: float) -> PayoffProfile:
    x = grid.centers
    values = -crowding_penalty(x, params.gamma) - params.alpha * np.exp(-params.beta * x) * moment
    return PayoffProfile(grid, values, moment)


def expected_payoff(d: Density, params: PayoffParams) -> PayoffProfile:
    """phi(x_i; d) for every cell centre, in O(n_cells)."""
    return profile_from_moment(d.grid, params, exp_moment(d, params.beta))


def fishing_payoff(params: PayoffParams) -> PayoffModel:
    def model(d: Density) -> PayoffProfile:
        return expected_payoff(d, params)

    return model


def constant_payoff(value: float) -> PayoffModel:
    """A population-independent flat payoff; handy as a degenerate test model."""

    def model(d: Density) -> PayoffProfile:
        return PayoffProfile(d.grid, np.full(d.grid.n_cells, float(value)))

    return model
