"""Closed-form one-generation predictions for the projection-repaired ES.

Every quantity below is conditioned on a feasible parent at reduced position
``(x, r)`` with normalized mutation strength ``sigma_star = N * sigma / r``.
Two regimes are treated separately: offspring essentially always feasible
(the constraint is invisible, sphere-like behaviour) and offspring
essentially always infeasible (every offspring is projected).  Each
predictor returns the pair of per-regime values together with their
combination, weighted by the probability that a single offspring is feasible
before repair.

The infeasible-regime x progress rate is provided in two algebraically close
forms: the large-N simplified expression used throughout the dynamics
analysis (default) and the unsimplified expression that matches the centroid
moments exactly (``simplified=False``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from scipy.special import ndtr

from .coefficients import c_mu_mu_lambda, e11
from .errors import ContractViolationError, DegenerateStateError

__all__ = [
    "MicroInputs",
    "RApprox",
    "RegimeTriple",
    "MicroPrediction",
    "r_offspring_approx",
    "feasibility_probability",
    "progress_x",
    "progress_r",
    "sar",
    "micro_prediction",
    "expected_centroid_q",
    "expected_centroid_q_sq",
]


@dataclass(frozen=True)
class MicroInputs:
    """Parent state and strategy parameters entering the one-generation formulas.

    ``x`` and ``r`` are the parental axis position and axis distance (the
    parent is assumed feasible, ``x >= sqrt(xi) * r``), ``sigma_star`` the
    normalized mutation strength, ``dim`` the search-space dimension N,
    ``mu``/``lam`` the selection truncation, and ``tau`` the log-normal
    learning parameter (only the self-adaptation response depends on it).
    """

    x: float
    r: float
    sigma_star: float
    dim: int
    xi: float
    mu: int
    lam: int
    tau: float = 0.0

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ContractViolationError(f"dim must be >= 1, got {self.dim}")
        if not self.xi > 0.0:
            raise ContractViolationError(f"xi must be positive, got {self.xi}")
        if not 1 <= self.mu <= self.lam:
            raise ContractViolationError(
                f"need 1 <= mu <= lam, got mu={self.mu}, lam={self.lam}"
            )
        if self.sigma_star < 0.0 or self.tau < 0.0:
            raise ContractViolationError("sigma_star and tau must be nonnegative")

    @property
    def sigma(self) -> float:
        """Unnormalized mutation strength r * sigma_star / N."""
        return self.r * self.sigma_star / self.dim


class RApprox(NamedTuple):
    """Normal approximation of the offspring axis distance: mean and std."""

    r_bar: float
    sigma_r: float


class RegimeTriple(NamedTuple):
    """A per-regime prediction and its feasibility-weighted combination."""

    feas: float
    infeas: float
    combined: float


@dataclass(frozen=True)
class MicroPrediction:
    """Bundle of all one-generation predictions at a common parent state."""

    p_feas: float
    phi_x: RegimeTriple
    phi_r: RegimeTriple
    psi: RegimeTriple


def _require_positive_state(mi: MicroInputs) -> None:
    if mi.r <= 0.0:
        raise DegenerateStateError(f"r must be positive, got r={mi.r}")
    if mi.x <= 0.0:
        raise DegenerateStateError(f"x must be positive, got x={mi.x}")


def _combine(p: float, feas: float, infeas: float) -> RegimeTriple:
    return RegimeTriple(feas, infeas, p * feas + (1.0 - p) * infeas)


def r_offspring_approx(mi: MicroInputs) -> RApprox:
    """Mean and standard deviation of a single offspring's axis distance.

    For ``sigma_star = 0`` the offspring coincides with the parent, so the
    mean is r and the spread zero.
    """
    if mi.r <= 0.0:
        raise DegenerateStateError(f"r must be positive, got r={mi.r}")
    n = mi.dim
    s2 = mi.sigma_star**2
    growth = 1.0 + (s2 / n) * (1.0 - 1.0 / n)
    r_bar = mi.r * math.sqrt(growth)
    sigma_r = (
        mi.r
        * (mi.sigma_star / n)
        * math.sqrt((1.0 + (s2 / (2.0 * n)) * (1.0 - 1.0 / n)) / growth)
    )
    return RApprox(r_bar, sigma_r)


def feasibility_probability(mi: MicroInputs) -> float:
    """Probability that a single offspring is feasible before repair."""
    if mi.sigma_star == 0.0:
        # No mutation: the offspring equals the (feasible) parent.
        return 1.0 if mi.x >= math.sqrt(mi.xi) * mi.r else 0.0
    if mi.r <= 0.0:
        raise DegenerateStateError("r must be positive when sigma_star > 0")
    r_bar = r_offspring_approx(mi).r_bar
    return float(ndtr((mi.x / math.sqrt(mi.xi) - r_bar) / mi.sigma))


def _phi_x_infeas(mi: MicroInputs, simplified: bool) -> float:
    """Infeasible-regime normalized x progress rate."""
    n = mi.dim
    xi = mi.xi
    s = mi.sigma_star
    c = c_mu_mu_lambda(mi.mu, mi.lam)
    if simplified:
        # Large-N form: 1/N dropped against 1 inside the root factors.
        ratio = math.sqrt(xi) * mi.r / mi.x
        spread = math.sqrt(1.0 + (1.0 / xi) * (1.0 + s**2 / (2 * n)) / (1.0 + s**2 / n))
        return (
            n / (1.0 + xi) * (1.0 - ratio * math.sqrt(1.0 + s**2 / n))
            + math.sqrt(xi) / (1.0 + xi) * ratio * s * c * spread
        )
    r_bar, sigma_r = r_offspring_approx(mi)
    sigma = mi.sigma
    eff = math.sqrt(sigma**2 + sigma_r**2 / xi)
    return (n / (1.0 + xi)) * (
        1.0 - math.sqrt(xi) * r_bar / mi.x + (xi / mi.x) * eff * c
    )


def progress_x(mi: MicroInputs, *, simplified: bool = True) -> RegimeTriple:
    """Normalized x progress rate: N * E[x decrease] / x, per regime and combined."""
    _require_positive_state(mi)
    c = c_mu_mu_lambda(mi.mu, mi.lam)
    feas = (mi.r / mi.x) * mi.sigma_star * c
    infeas = _phi_x_infeas(mi, simplified)
    return _combine(feasibility_probability(mi), feas, infeas)


def progress_r(mi: MicroInputs, *, simplified: bool = True) -> RegimeTriple:
    """Normalized r progress rate: N * E[r decrease] / r, per regime and combined."""
    _require_positive_state(mi)
    n = mi.dim
    s2 = mi.sigma_star**2
    feas = n * (1.0 - math.sqrt(1.0 + s2 / (mi.mu * n)))
    selection_factor = math.sqrt((1.0 + s2 / (mi.mu * n)) / (1.0 + s2 / n))
    phi_x_inf = _phi_x_infeas(mi, simplified)
    infeas = n * (
        1.0
        - (mi.x / (math.sqrt(mi.xi) * mi.r))
        * (1.0 - phi_x_inf / n)
        * selection_factor
    )
    return _combine(feasibility_probability(mi), feas, infeas)


def sar(mi: MicroInputs) -> RegimeTriple:
    """Self-adaptation response: expected relative change of sigma in one generation."""
    base = mi.tau**2 * (0.5 + e11(mi.mu, mi.lam))
    feas = base
    infeas = base - mi.tau**2 * mi.sigma_star * c_mu_mu_lambda(mi.mu, mi.lam) / math.sqrt(
        1.0 + mi.xi
    )
    if mi.sigma_star == 0.0:
        return RegimeTriple(feas, infeas, feas)
    _require_positive_state(mi)
    return _combine(feasibility_probability(mi), feas, infeas)


def micro_prediction(mi: MicroInputs, *, simplified: bool = True) -> MicroPrediction:
    """All one-generation predictions at once (shared feasibility weight)."""
    return MicroPrediction(
        p_feas=feasibility_probability(mi),
        phi_x=progress_x(mi, simplified=simplified),
        phi_r=progress_r(mi, simplified=simplified),
        psi=sar(mi),
    )


def expected_centroid_q(mi: MicroInputs) -> tuple[float, float]:
    """Conditional expectations of the selected-centroid axis position.

    Returns the (feasible-regime, infeasible-regime) pair.  Both are exactly
    consistent with `progress_x` evaluated with ``simplified=False`` through
    phi_x = N * (x - E[<q>]) / x.
    """
    _require_positive_state(mi)
    c = c_mu_mu_lambda(mi.mu, mi.lam)
    sigma = mi.sigma
    feas = mi.x - sigma * c
    r_bar, sigma_r = r_offspring_approx(mi)
    xi = mi.xi
    shrink = xi / (1.0 + xi)
    eff = math.sqrt(sigma**2 + sigma_r**2 / xi)
    infeas = shrink * (mi.x + r_bar / math.sqrt(xi)) - shrink * eff * c
    return feas, infeas


def expected_centroid_q_sq(mi: MicroInputs) -> float:
    """Feasibility-weighted expectation of the mean squared selected axis position."""
    _require_positive_state(mi)
    c = c_mu_mu_lambda(mi.mu, mi.lam)
    e = e11(mi.mu, mi.lam)
    sigma = mi.sigma
    feas = sigma**2 * (1.0 + e) - 2.0 * sigma * mi.x * c + mi.x**2
    r_bar, sigma_r = r_offspring_approx(mi)
    xi = mi.xi
    eff_sq = sigma**2 + sigma_r**2 / xi
    shifted = mi.x + r_bar / math.sqrt(xi)
    infeas = (
        eff_sq * (1.0 + e) - 2.0 * math.sqrt(eff_sq) * shifted * c + shifted**2
    ) / (1.0 + 1.0 / xi) ** 2
    p = feasibility_probability(mi)
    return p * feas + (1.0 - p) * infeas
