"""Cell-centred discretization of the action space [0, 1].

Probability measures are stored as piecewise-constant densities on a
uniform grid.  Cell ``i`` covers ``[i*h, (i+1)*h]`` and carries the density
value ``p_i``; its centre ``(i + 0.5)*h`` never touches 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Tolerance on |h * sum(p) - 1| accepted by the Density constructor.
MASS_TOL = 1e-12


class DegenerateDensityError(ValueError):
    """Raised when a density cannot be normalized (all weights are zero)."""


@dataclass(frozen=True)
class ActionGrid:
    n_cells: int
    cell_width: float = field(init=False, compare=False)
    centers: np.ndarray = field(init=False, compare=False, repr=False)
    edges: np.ndarray = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if int(self.n_cells) != self.n_cells or self.n_cells < 2:
            raise ValueError(f"n_cells must be an integer >= 2, got {self.n_cells!r}")
        n = int(self.n_cells)
        centers = (np.arange(n) + 0.5) / n
        edges = np.arange(n + 1) / n
        centers.setflags(write=False)
        edges.setflags(write=False)
        object.__setattr__(self, "n_cells", n)
        object.__setattr__(self, "cell_width", 1.0 / n)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "edges", edges)

    def cell_index(self, x: float) -> int:
        """Index of the cell containing ``x`` (right edge belongs to the last cell)."""
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"x must lie in [0, 1], got {x}")
        return min(int(x * self.n_cells), self.n_cells - 1)


def make_grid(n_cells: int) -> ActionGrid:
    return ActionGrid(n_cells)


@dataclass(frozen=True, eq=False)
class Density:
    """Nonnegative per-cell density with unit total mass.

    ``values`` is copied and frozen on construction, so a Density is an
    immutable value.  Construction fails if any entry is negative or
    non-finite, or if the mass is off by more than ``MASS_TOL``.
    """

    grid: ActionGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n_cells,):
            raise ValueError(
                f"expected {self.grid.n_cells} density values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("density values must be finite")
        if np.any(values < 0):
            raise ValueError("density values must be nonnegative")
        mass = self.grid.cell_width * values.sum()
        if abs(mass - 1.0) > MASS_TOL:
            raise ValueError(f"density mass is {mass!r}, expected 1")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def mass(self) -> float:
        return float(self.grid.cell_width * self.values.sum())

    def __len__(self):
        return self.grid.n_cells


def uniform_density(grid: ActionGrid) -> Density:
    return Density(grid, np.ones(grid.n_cells))


def point_mass_density(grid: ActionGrid, x: float) -> Density:
    """All mass in the single cell containing ``x``."""
    values = np.zeros(grid.n_cells)
    values[grid.cell_index(x)] = grid.n_cells
    return Density(grid, values)


def normalize(raw, grid: ActionGrid) -> Density:
    raw = np.asarray(raw, dtype=float)
    if raw.shape != (grid.n_cells,):
        raise ValueError(f"expected {grid.n_cells} entries, got shape {raw.shape}")
    if np.any(raw < 0) or not np.all(np.isfinite(raw)):
        raise ValueError("raw weights must be finite and nonnegative")
    total = grid.cell_width * raw.sum()
    if total <= 0.0:
        raise DegenerateDensityError(
            "all weights are zero; the logit weights underflowed completely"
        )
    values = raw / total
    # one correction pass keeps the mass error at rounding level for huge dynamic ranges
    values = values / (grid.cell_width * values.sum())
    return Density(grid, values)


def mass_on_interval(d: Density, a: float, b: float) -> float:
    """Mass of ``[a, b]`` with exact partial-cell overlap."""
    if a > b:
        raise ValueError(f"interval endpoints out of order: a={a} > b={b}")
    edges = d.grid.edges
    overlap = np.clip(np.minimum(b, edges[1:]) - np.maximum(a, edges[:-1]), 0.0, None)
    return float(np.clip(np.sum(overlap * d.values), 0.0, 1.0))


def quadrature(d: Density, integrand) -> float:
    """Midpoint rule for the integral of ``integrand`` against ``d``."""
    psi = np.asarray(integrand, dtype=float)
    if psi.shape != (d.grid.n_cells,):
        raise ValueError(
            f"integrand has shape {psi.shape}, expected ({d.grid.n_cells},)"
        )
    return float(d.grid.cell_width * np.sum(psi * d.values))
