"""Logit response maps, their entropic regularizers, and a maximizer check.

For a payoff profile phi and smoothing eta > 0 the (generalized) logit
response is the density proportional to ``exp_q(phi / eta)``, where
``exp_q`` is the Tsallis q-exponential (``exp`` itself at q = 1).  The
response maximizes the regularized objective

    q = 1:  int p phi dx - eta int p ln p dx
    q > 1:  int p**q phi dx - eta int (1 - q + q p - p**q) / (1 - q) dx

over densities on [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Density, normalize
from .payoff import PayoffProfile

# |q - 1| below this selects the classical exponential branch.
Q_ONE_TOL = 1e-12


def is_classical(q: float) -> bool:
    return abs(q - 1.0) < Q_ONE_TOL


@dataclass(frozen=True)
class LogitSettings:
    eta: float = 0.01
    q: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.eta) and self.eta > 0):
            raise ValueError(f"eta must be a positive finite number, got {self.eta!r}")
        if not (math.isfinite(self.q) and (self.q >= 1.0 or is_classical(self.q))):
            raise ValueError(f"q must be >= 1, got {self.q!r}")
        if is_classical(self.q):
            object.__setattr__(self, "q", 1.0)

    @property
    def classical(self) -> bool:
        return self.q == 1.0


def q_exponential(z, q: float):
    """Tsallis q-exponential ``(1 + (1 - q) z)**(-1 / (q - 1))``; ``exp(z)`` at q = 1.

    Accepts scalars or arrays.  For q > 1 the base must stay positive,
    i.e. ``z < 1 / (q - 1)``.
    """
    if q < 1.0 and not is_classical(q):
        raise ValueError(f"q must be >= 1, got {q}")
    z_arr = np.asarray(z, dtype=float)
    if not is_classical(q) and np.any(1.0 + (1.0 - q) * z_arr <= 0):
        raise ValueError(f"q-exponential undefined for z >= 1/(q-1) = {1.0 / (q - 1.0)}")
    # exp/log1p form keeps full precision as q -> 1, where the power form loses digits
    out = np.exp(_log_q_exponential(z_arr, q))
    return float(out) if np.ndim(out) == 0 else out


def _log_q_exponential(z: np.ndarray, q: float) -> np.ndarray:
    if is_classical(q):
        return z
    return -np.log1p((q - 1.0) * (-z)) / (q - 1.0)


def log_weights(phi, eta: float, q: float) -> np.ndarray:
    """``log exp_q(phi / eta)``, evaluated without forming the (tiny) weights."""
    return _log_q_exponential(np.asarray(phi, dtype=float) / eta, q)


def logit_map(profile: PayoffProfile, settings: LogitSettings) -> Density:
    phi = profile.values
    if not settings.classical and np.any(phi > 0):
        raise ValueError("payoff must be nonpositive for the q > 1 logit map")
    lw = log_weights(phi, settings.eta, settings.q)
    # max-shift leaves the normalized density unchanged and avoids total underflow
    weights = np.exp(lw - lw.max())
    return normalize(weights, profile.grid)


def _xlogx(p: np.ndarray) -> np.ndarray:
    safe = np.where(p > 0, p, 1.0)
    return np.where(p > 0, p * np.log(safe), 0.0)


def relative_entropy(d: Density) -> float:
    """Entropy of ``d`` relative to the uniform density (0 ln 0 = 0)."""
    return float(d.grid.cell_width * np.sum(_xlogx(d.values)))


def tsallis_divergence(d: Density, q: float) -> float:
    if q <= 1.0 or is_classical(q):
        raise ValueError(f"tsallis_divergence needs q > 1 (use relative_entropy at q = 1), got {q}")
    p = d.values
    # (1 - q + q p - p**q) / (1 - q) rewritten as (1 - p) + (p**q - p) / (q - 1)
    # so the q -> 1 limit does not cancel catastrophically
    safe = np.where(p > 0, p, 1.0)
    tail = np.where(p > 0, p * np.expm1((q - 1.0) * np.log(safe)) / (q - 1.0), 0.0)
    return float(d.grid.cell_width * np.sum((1.0 - p) + tail))


def logit_objective(candidate: Density, profile: PayoffProfile, settings: LogitSettings) -> float:
    if candidate.grid != profile.grid:
        raise ValueError("candidate density and payoff profile live on different grids")
    h = candidate.grid.cell_width
    p, phi = candidate.values, profile.values
    if settings.classical:
        return float(h * np.sum(p * phi)) - settings.eta * relative_entropy(candidate)
    return float(h * np.sum(p ** settings.q * phi)) - settings.eta * tsallis_divergence(
        candidate, settings.q
    )


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    trials: int
    seed: int
    objective: float
    worst_margin: float
    worst_trial: int


# Perturbed candidates may score above the map by this much before the check fails.
MARGIN_TOL = 1e-12


def verify_maximizer(
    profile: PayoffProfile, settings: LogitSettings, trials: int = 1000, seed: int = 0
) -> VerificationReport:
    """Check that ``logit_map(profile)`` beats random feasible perturbations.

    Each trial moves density from a random donor cell with positive mass to a
    different random receiver cell.  The moved amount (in density units) is
    ``u * min(p_donor, 0.5)`` with ``u`` uniform on (0, 1], so every candidate
    stays nonnegative with unit mass.  Randomness comes from
    ``numpy.random.default_rng(seed)`` (PCG64), which makes reports reproducible.

    A failed check is returned as ``passed=False``; it is never raised.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    best = logit_map(profile, settings)
    target = logit_objective(best, profile, settings)
    rng = np.random.default_rng(seed)
    p = best.values
    n = p.size
    donors = np.flatnonzero(p > 0)

    worst_margin, worst_trial = math.inf, -1
    for t in range(trials):
        i = int(donors[rng.integers(donors.size)])
        j = int(rng.integers(n - 1))
        j += j >= i
        amount = (1.0 - rng.random()) * min(p[i], 0.5)
        trial = p.copy()
        trial[i] = max(trial[i] - amount, 0.0)
        trial[j] += amount
        margin = target - logit_objective(Density(best.grid, trial), profile, settings)
        if margin < worst_margin:
            worst_margin, worst_trial = margin, t
    return VerificationReport(
        passed=worst_margin >= -MARGIN_TOL,
        trials=trials,
        seed=seed,
        objective=target,
        worst_margin=float(worst_margin),
        worst_trial=worst_trial,
    )
