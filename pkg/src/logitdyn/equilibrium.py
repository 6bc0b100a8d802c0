"""Pure Nash action of the fishing game.

Against a population concentrated at its own action x, an agent's payoff
derivative vanishes where ``d/dx (x (1 - x))**(-gamma) = alpha * beta``.
The left side is ``gamma (2x - 1) (x (1 - x))**(-gamma - 1)``: nonpositive on
(0, 0.5] and increasing to +inf as x -> 1, so the root lies in (0.5, 1).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .payoff import PayoffParams

BRACKET_EPS = 1e-12


@dataclass(frozen=True)
class NashResult:
    x_hat: float
    residual: float
    iterations: int
    sign_changes: int = 1


def nash_foc_residual(x: float, params: PayoffParams) -> float:
    if not 0.0 < x < 1.0:
        raise ValueError(f"need 0 < x < 1, got {x}")
    g = params.gamma
    x = np.float64(x)
    with np.errstate(over="ignore"):
        slope = g * (2.0 * x - 1.0) * (x * (1.0 - x)) ** (-g - 1.0)
    return float(slope - params.alpha * params.beta)


def count_sign_changes(params: PayoffParams, n_points: int = 4001) -> int:
    """Sign changes of the residual on a uniform grid over (0, 1)."""
    x = np.linspace(0.0, 1.0, n_points + 2)[1:-1]
    g = params.gamma
    with np.errstate(over="ignore"):
        r = g * (2.0 * x - 1.0) * (x * (1.0 - x)) ** (-g - 1.0) - params.alpha * params.beta
    s = np.sign(r)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def solve_pure_nash(
    params: PayoffParams = PayoffParams(), tol: float = 1e-10, check_unique: bool = True
) -> NashResult:
    """Bisection on ``[0.5 + eps, 1 - eps]`` until the bracket is shorter than ``tol``.

    With ``check_unique`` the residual is also scanned on a fine grid; more
    than one sign change triggers a RuntimeWarning and is recorded in the
    result instead of being assumed away.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = 0.5 + BRACKET_EPS, 1.0 - BRACKET_EPS
    r_lo = nash_foc_residual(lo, params)
    if r_lo >= 0 or nash_foc_residual(hi, params) <= 0:
        raise RuntimeError("first-order condition is not bracketed on (0.5, 1)")

    iterations = 0
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        r_mid = nash_foc_residual(mid, params)
        if (r_mid < 0) == (r_lo < 0):
            lo, r_lo = mid, r_mid
        else:
            hi = mid
        iterations += 1
    x_hat = 0.5 * (lo + hi)

    changes = count_sign_changes(params) if check_unique else 1
    if changes != 1:
        warnings.warn(
            f"first-order condition has {changes} sign changes on (0, 1) for {params}",
            RuntimeWarning,
        )
    return NashResult(x_hat, nash_foc_residual(x_hat, params), iterations, changes)
