"""Deterministic mean-value dynamics and steady-state predictions.

Iterating the expected one-generation changes

    x <- x (1 - phi_x / N),   r <- r (1 - phi_r / N),   sigma <- sigma (1 + psi)

turns the one-generation theory into a prediction of the whole trajectory.
In the stationary regime the normalized mutation strength and the distance
ratio sqrt(xi) * r / x become constant, which yields closed forms for the
steady-state mutation strength, the common progress rate of x and r, the
progress-maximizing mutation strength and the learning parameter attaining
it.  The closed forms use the large-N asymptotic algebra (sigma*^2 << N);
the iterator itself uses the full combined one-generation expressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .coefficients import c_mu_mu_lambda, e11
from .cone import ConeProblem, ReducedPoint, project_reduced
from .errors import ContractViolationError, DegenerateStateError
from .theory import MicroInputs, progress_r, progress_x, sar

__all__ = [
    "DeterministicState",
    "DeterministicRun",
    "SteadyStatePrediction",
    "iterate_deterministic",
    "steady_state_predict",
    "sphere_equivalence_factor",
]

# Below this sigma the iteration only produces NaN cascades.
_SIGMA_FLOOR = 1e-300


class DeterministicState(NamedTuple):
    x: float
    r: float
    sigma: float


@dataclass(frozen=True)
class DeterministicRun:
    """Iterated trajectory; ``halt_reason`` is None for a full-length run."""

    states: list[DeterministicState]
    halt_reason: str | None = None


def iterate_deterministic(
    init: DeterministicState,
    mu: int,
    lam: int,
    tau: float,
    problem: ConeProblem,
    generations: int,
) -> DeterministicRun:
    """Iterate the mean-value system for ``generations`` steps.

    The initial state must be feasible with positive x, r, sigma.  Whenever a
    step leaves the cone (possible because the expected changes are
    approximations) the state is projected back in the reduced plane.  The
    trace includes the initial state, so a full run has ``generations + 1``
    entries.
    """
    x, r, sigma = float(init.x), float(init.r), float(init.sigma)
    if r <= 0.0 or x <= 0.0:
        raise DegenerateStateError(f"initial state must have x, r > 0, got {init}")
    if x < problem.sqrt_xi * r:
        raise ContractViolationError(f"initial state must be feasible, got {init}")
    if generations < 0:
        raise ContractViolationError("generations must be >= 0")

    n = problem.dim
    states = [DeterministicState(x, r, sigma)]
    for _ in range(generations):
        if sigma < _SIGMA_FLOOR:
            return DeterministicRun(states, "sigma underflow")
        mi = MicroInputs(
            x=x, r=r, sigma_star=n * sigma / r, dim=n, xi=problem.xi,
            mu=mu, lam=lam, tau=tau,
        )
        x_new = x * (1.0 - progress_x(mi).combined / n)
        r_new = r * (1.0 - progress_r(mi).combined / n)
        sigma = sigma * (1.0 + sar(mi).combined)
        if x_new <= 0.0 or r_new <= 0.0 or not math.isfinite(x_new + r_new + sigma):
            return DeterministicRun(states, "state collapse")
        if x_new < problem.sqrt_xi * r_new:
            x_new, r_new = project_reduced(problem, ReducedPoint(x_new, r_new))
            if x_new <= 0.0 or r_new <= 0.0:
                return DeterministicRun(states, "state collapse")
        x, r = x_new, r_new
        states.append(DeterministicState(x, r, sigma))
    return DeterministicRun(states, None)


@dataclass(frozen=True)
class SteadyStatePrediction:
    """Closed-form stationary-regime quantities.

    ``sigma_star_ss`` and ``phi_star_ss`` describe the stationary regime for
    the given tau; ``boundary_ratio`` is sqrt(xi) * r / x there (1 exactly on
    the cone boundary), with ``boundary_ratio_linearized`` its first-order
    form at the progress-maximizing mutation strength.  ``sigma_star_max``
    and ``phi_star_max`` are the progress-maximizing mutation strength and
    the progress it attains; ``tau_opt`` is the learning parameter for which
    the stationary mutation strength equals ``sigma_star_max``.
    """

    mu: int
    lam: int
    tau: float
    xi: float
    dim: int
    sigma_star_ss: float
    phi_star_ss: float
    boundary_ratio: float
    boundary_ratio_linearized: float
    sigma_star_max: float
    phi_star_max: float
    tau_opt: float


def _phi_star_asymptotic(sigma_star: float, mu: int, xi: float, c: float) -> float:
    return -sigma_star**2 / (2.0 * mu * (1.0 + xi)) + sigma_star * c / math.sqrt(
        1.0 + xi
    )


def steady_state_predict(
    mu: int, lam: int, tau: float, xi: float, dim: int
) -> SteadyStatePrediction:
    """Evaluate all closed-form steady-state quantities."""
    if not 1 <= mu < lam:
        raise ContractViolationError(f"need 1 <= mu < lam, got mu={mu}, lam={lam}")
    if tau <= 0.0 or xi <= 0.0 or dim <= 0:
        raise ContractViolationError("tau, xi and dim must be positive")

    c = c_mu_mu_lambda(mu, lam)
    e = e11(mu, lam)
    u = dim * tau**2
    k = (0.5 + e) / (mu * c**2)

    sigma_star_max = math.sqrt(1.0 + xi) * mu * c
    sigma_star_ss = sigma_star_max * ((1.0 - u) + math.sqrt((1.0 - u) ** 2 + 2.0 * u * k))
    phi_star_ss = _phi_star_asymptotic(sigma_star_ss, mu, xi, c)
    phi_star_max = mu * c**2 / 2.0

    s2 = sigma_star_ss**2
    boundary_ratio = math.sqrt((1.0 + s2 / (mu * dim)) / (1.0 + s2 / dim))
    boundary_ratio_linearized = 1.0 + ((1.0 + xi) / dim) * (mu * c**2 / 2.0) * (1 - mu)

    denom = mu * c**2 - 0.5 - e
    if denom <= 0.0:
        raise DegenerateStateError(
            f"tau_opt undefined for (mu, lam)=({mu}, {lam}): "
            f"mu*c^2 = {mu * c**2:.6f} does not exceed 1/2 + e11 = {0.5 + e:.6f}"
        )
    tau_opt = math.sqrt(mu * c**2 / denom) / math.sqrt(2.0 * dim)

    return SteadyStatePrediction(
        mu=mu,
        lam=lam,
        tau=tau,
        xi=xi,
        dim=dim,
        sigma_star_ss=sigma_star_ss,
        phi_star_ss=phi_star_ss,
        boundary_ratio=boundary_ratio,
        boundary_ratio_linearized=boundary_ratio_linearized,
        sigma_star_max=sigma_star_max,
        phi_star_max=phi_star_max,
        tau_opt=tau_opt,
    )


def sphere_equivalence_factor(prediction: SteadyStatePrediction, xi: float) -> float:
    """Stationary mutation strength rescaled to the unconstrained sphere.

    ``sigma_star_ss / sqrt(1 + xi)`` does not depend on xi: in the stationary
    regime the strategy behaves as if it were descending a sphere, with the
    cone geometry entering only through the sqrt(1 + xi) enlargement.
    """
    return prediction.sigma_star_ss / math.sqrt(1.0 + xi)
