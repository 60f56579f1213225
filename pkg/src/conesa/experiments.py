"""Monte Carlo harness pairing simulation estimates with theory predictions.

Three experiment kinds, mirroring how the closed forms are validated:

* `one_generation_mc` repeats a single generation from a frozen parent and
  estimates the normalized progress rates and the self-adaptation response,
  with standard errors, next to their closed-form values.
* `dynamics_ensemble` averages full runs generation by generation and
  attaches the deterministic mean-value trajectory from the same start.
* `measure_steady_state` runs long traces, discards a burn-in window and
  measures the stationary mutation strength, progress and boundary-distance
  ratio, to be compared with `steady_state_predict`.

Every estimate is bit-reproducible for a fixed `RngSeed`: each trial or
replicate owns its own substream, so results do not depend on scheduling.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .cone import ConeProblem, ReducedPoint, embed_reduced, reduce_point
from .dynamics import DeterministicRun, DeterministicState, iterate_deterministic
from .errors import ContractViolationError
from .es import EsParams, GenerationRecord, RngSeed, run_es, run_generation
from .theory import MicroInputs, progress_r, progress_x, sar

__all__ = [
    "OneGenEstimate",
    "EnsembleResult",
    "SteadyStateMeasurement",
    "one_generation_mc",
    "dynamics_ensemble",
    "measure_steady_state",
]


@dataclass(frozen=True)
class OneGenEstimate:
    """One-generation Monte Carlo estimates with their theory counterparts."""

    sigma_star: float
    trials: int
    phi_x_mc: float
    phi_x_se: float
    phi_r_mc: float
    phi_r_se: float
    psi_mc: float
    psi_se: float
    phi_x_th: float
    phi_r_th: float
    psi_th: float


def _mean_se(samples: np.ndarray) -> tuple[float, float]:
    n = samples.size
    se = float(np.std(samples, ddof=1) / math.sqrt(n)) if n >= 2 else 0.0
    return float(np.mean(samples)), se


def one_generation_mc(
    parent: ReducedPoint,
    sigma_star: float,
    params: EsParams,
    problem: ConeProblem,
    trials: int,
    seed: RngSeed,
) -> OneGenEstimate:
    """Estimate phi_x*, phi_r* and psi by repeating one generation ``trials`` times.

    The parent is embedded as ``(x, r, 0, ..., 0)`` and kept fixed; only the
    strategy fields (mu, lam, tau) of ``params`` are read.  Requires a
    feasible parent with r > 0 and at least 100 trials.
    """
    x, r = float(parent[0]), float(parent[1])
    if trials < 100:
        raise ContractViolationError(f"trials must be >= 100, got {trials}")
    if r <= 0.0 or x < problem.sqrt_xi * r:
        raise ContractViolationError(f"parent must be feasible with r > 0, got {parent}")

    sigma = r * sigma_star / problem.dim
    parent_vec = embed_reduced(x, r, problem.dim)

    phi_x = np.empty(trials)
    phi_r = np.empty(trials)
    psi = np.empty(trials)
    for trial in range(trials):
        rng = seed.generator(trial)
        (_, new_sigma), rec = run_generation(
            (parent_vec, sigma), params, problem, rng
        )
        phi_x[trial] = problem.dim * (x - rec.q_centroid) / x
        phi_r[trial] = problem.dim * (r - rec.qr_centroid) / r
        psi[trial] = (new_sigma - sigma) / sigma if sigma > 0.0 else 0.0

    mi = MicroInputs(
        x=x, r=r, sigma_star=sigma_star, dim=problem.dim, xi=problem.xi,
        mu=params.mu, lam=params.lam, tau=params.tau,
    )
    phi_x_mc, phi_x_se = _mean_se(phi_x)
    phi_r_mc, phi_r_se = _mean_se(phi_r)
    psi_mc, psi_se = _mean_se(psi)
    return OneGenEstimate(
        sigma_star=sigma_star,
        trials=trials,
        phi_x_mc=phi_x_mc,
        phi_x_se=phi_x_se,
        phi_r_mc=phi_r_mc,
        phi_r_se=phi_r_se,
        psi_mc=psi_mc,
        psi_se=psi_se,
        phi_x_th=progress_x(mi).combined,
        phi_r_th=progress_r(mi).combined,
        psi_th=sar(mi).combined,
    )


@dataclass(frozen=True)
class EnsembleResult:
    """Generation-wise replicate averages plus the deterministic trajectory.

    Arrays cover the common prefix of all replicate traces (replicates that
    hit the objective target stop early).  ``deterministic`` is None when the
    initial state has r = 0, which the mean-value iteration cannot represent.
    """

    g: np.ndarray
    x: np.ndarray
    r: np.ndarray
    sigma: np.ndarray
    sigma_star: np.ndarray
    runs: int
    deterministic: DeterministicRun | None


def dynamics_ensemble(
    params: EsParams,
    problem: ConeProblem,
    runs: int,
    seed: RngSeed,
) -> EnsembleResult:
    """Average ``runs`` independent traces generation by generation."""
    if runs < 1:
        raise ContractViolationError(f"runs must be >= 1, got {runs}")

    traces: list[list[GenerationRecord]] = [
        run_es(params, problem, seed.generator(rep)) for rep in range(runs)
    ]
    length = min(len(t) for t in traces)

    def column(attr: str) -> np.ndarray:
        data = np.array(
            [[getattr(rec, attr) for rec in t[:length]] for t in traces]
        )
        return data.mean(axis=0)

    x0_reduced = reduce_point(np.asarray(params.x0, dtype=float))
    deterministic = None
    if x0_reduced.r > 0.0:
        deterministic = iterate_deterministic(
            DeterministicState(x0_reduced.x, x0_reduced.r, params.sigma0),
            params.mu,
            params.lam,
            params.tau,
            problem,
            generations=length - 1,
        )

    return EnsembleResult(
        g=np.arange(length),
        x=column("x"),
        r=column("r"),
        sigma=column("sigma"),
        sigma_star=column("sigma_star"),
        runs=runs,
        deterministic=deterministic,
    )


@dataclass(frozen=True)
class SteadyStateMeasurement:
    """Stationary-regime averages over post-burn-in windows.

    ``short_window`` flags replicates that stopped before the requested
    number of generations (objective target reached); the measurement then
    uses whatever post-burn-in window was available.
    """

    sigma_star_ss_mc: float
    phi_x_ss_mc: float
    phi_r_ss_mc: float
    ratio_mc: float
    replicates: int
    generations: int
    short_window: bool


def measure_steady_state(
    params: EsParams,
    problem: ConeProblem,
    generations: int,
    replicates: int,
    burn_in_fraction: float,
    seed: RngSeed,
) -> SteadyStateMeasurement:
    """Measure sigma*, per-generation progress and sqrt(xi) r / x in the steady state."""
    if replicates < 1:
        raise ContractViolationError(f"replicates must be >= 1, got {replicates}")
    if not 0.0 <= burn_in_fraction < 1.0:
        raise ContractViolationError(
            f"burn_in_fraction must be in [0, 1), got {burn_in_fraction}"
        )
    if generations < 2:
        raise ContractViolationError(f"generations must be >= 2, got {generations}")

    run_params = dataclasses.replace(params, max_generations=generations)
    sqrt_xi = problem.sqrt_xi
    n = problem.dim

    sigma_star_means = np.empty(replicates)
    phi_x_means = np.empty(replicates)
    phi_r_means = np.empty(replicates)
    ratio_means = np.empty(replicates)
    short_window = False
    for rep in range(replicates):
        records = run_es(run_params, problem, seed.generator(rep))[:-1]
        if len(records) < generations:
            short_window = True
        burn = int(burn_in_fraction * len(records))
        window = records[burn:]
        x = np.array([rec.x for rec in window])
        r = np.array([rec.r for rec in window])
        q = np.array([rec.q_centroid for rec in window])
        qr = np.array([rec.qr_centroid for rec in window])
        sigma_star_means[rep] = np.mean([rec.sigma_star for rec in window])
        phi_x_means[rep] = np.mean(n * (x - q) / x)
        phi_r_means[rep] = np.mean(n * (r - qr) / r)
        ratio_means[rep] = np.mean(sqrt_xi * r / x)

    return SteadyStateMeasurement(
        sigma_star_ss_mc=float(sigma_star_means.mean()),
        phi_x_ss_mc=float(phi_x_means.mean()),
        phi_r_ss_mc=float(phi_r_means.mean()),
        ratio_mc=float(ratio_means.mean()),
        replicates=replicates,
        generations=generations,
        short_window=short_window,
    )
