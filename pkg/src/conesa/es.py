"""The stochastic multi-recombinative self-adaptive ES with projection repair.

One generation: every one of ``lam`` offspring draws its own mutation
strength by log-normal perturbation of the parental sigma, samples an
isotropic Gaussian step with it, and is projected onto the cone if
infeasible.  The ``mu`` best offspring by objective value are averaged
(intermediate recombination) into the next parent, and their mutation
strengths are averaged into the next sigma.

Randomness is consumed in a fixed order, one ``(lam, dim + 1)`` standard
normal block per generation whose first column feeds the sigma mutations and
remaining columns the parameter mutations, row by row per offspring.  Runs
are bit-reproducible for a fixed `RngSeed` and independent across substreams,
so replicates can execute concurrently without coordination.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import numpy.typing as npt

from .cone import ConeProblem, is_feasible, project_onto_cone, reduce_point
from .errors import ContractViolationError

__all__ = [
    "RngSeed",
    "EsParams",
    "GenerationRecord",
    "run_generation",
    "run_es",
]

# Relative slack distinguishing rounding-level boundary violations (routine
# for projected offspring) from genuine convexity violations (a bug).
_CONVEXITY_WARN_RTOL = 1e-12


@dataclass(frozen=True)
class RngSeed:
    """Seed plus substream id; identical pairs give bit-identical runs."""

    seed: int
    stream: int = 0

    def generator(self, *subkey: int) -> np.random.Generator:
        """Independent generator for this (seed, stream) and optional sub-ids."""
        seq = np.random.SeedSequence(
            entropy=self.seed, spawn_key=(self.stream, *subkey)
        )
        return np.random.default_rng(seq)


@dataclass(frozen=True)
class EsParams:
    """Strategy parameters and termination settings.

    ``x0`` is the initial parameter vector; if infeasible it is projected
    when a run starts.  The run stops after ``max_generations`` or as soon as
    the objective reaches ``f_target``.
    """

    mu: int
    lam: int
    tau: float
    sigma0: float
    x0: npt.NDArray[np.floating]
    max_generations: int
    f_target: float = 1e-30

    def __post_init__(self) -> None:
        if not 1 <= self.mu < self.lam:
            raise ContractViolationError(
                f"need 1 <= mu < lam, got mu={self.mu}, lam={self.lam}"
            )
        if self.tau < 0.0:
            raise ContractViolationError(f"tau must be nonnegative, got {self.tau}")
        if not self.sigma0 > 0.0:
            raise ContractViolationError(f"sigma0 must be positive, got {self.sigma0}")
        if self.max_generations < 0:
            raise ContractViolationError("max_generations must be >= 0")
        object.__setattr__(self, "x0", np.asarray(self.x0, dtype=float))


@dataclass(frozen=True)
class GenerationRecord:
    """Per-generation trace entry.

    ``x``, ``r``, ``sigma`` describe the parent at generation ``g``;
    ``q_centroid`` and ``qr_centroid`` are the reduced coordinates of the new
    centroid produced by that generation, taken before any centroid repair
    (NaN on the terminal record, which only carries the final state).
    ``sigma_star`` is ``dim * sigma / r`` (NaN for r = 0).
    """

    g: int
    x: float
    r: float
    sigma: float
    sigma_star: float
    q_centroid: float = float("nan")
    qr_centroid: float = float("nan")


def _sigma_star(dim: int, sigma: float, r: float) -> float:
    return dim * sigma / r if r > 0.0 else float("nan")


def run_generation(
    state: tuple[npt.NDArray[np.floating], float],
    params: EsParams,
    problem: ConeProblem,
    rng: np.random.Generator,
    g: int = 0,
) -> tuple[tuple[np.ndarray, float], GenerationRecord]:
    """Advance the ES by one generation.

    Returns the new ``(parameter vector, sigma)`` state and the trace record
    for generation ``g``.  The parent must be feasible.
    """
    parent, sigma = state
    parent = np.asarray(parent, dtype=float)
    lam, mu = params.lam, params.mu

    draws = rng.standard_normal((lam, problem.dim + 1))
    offspring_sigmas = sigma * np.exp(params.tau * draws[:, 0])
    offspring = parent[None, :] + offspring_sigmas[:, None] * draws[:, 1:]

    first = offspring[:, 0]
    rest_sq = np.sum(offspring[:, 1:] ** 2, axis=1)
    feasible = (first >= 0.0) & (first**2 - problem.xi * rest_sq >= 0.0)
    for l in np.flatnonzero(~feasible):
        offspring[l] = project_onto_cone(problem, offspring[l])

    order = np.argsort(offspring[:, 0], kind="stable")
    selected = order[:mu]
    centroid = offspring[selected].mean(axis=0)
    new_sigma = float(offspring_sigmas[selected].mean())

    q, qr = reduce_point(centroid)
    if not is_feasible(problem, centroid):
        # Convexity makes the centroid of feasible points feasible; anything
        # beyond rounding-level boundary violation indicates a bug.
        violation = problem.xi * qr**2 - q**2
        scale = max(q**2, problem.xi * qr**2)
        if q < 0.0 or violation > _CONVEXITY_WARN_RTOL * scale:
            warnings.warn(
                f"centroid infeasible beyond rounding at generation {g} "
                f"(q={q}, qr={qr}); projecting",
                RuntimeWarning,
                stacklevel=2,
            )
        centroid = project_onto_cone(problem, centroid)

    px, pr = reduce_point(parent)
    record = GenerationRecord(
        g=g,
        x=px,
        r=pr,
        sigma=float(sigma),
        sigma_star=_sigma_star(problem.dim, sigma, pr),
        q_centroid=q,
        qr_centroid=qr,
    )
    return (centroid, new_sigma), record


def run_es(
    params: EsParams,
    problem: ConeProblem,
    rng: np.random.Generator,
) -> list[GenerationRecord]:
    """Run the ES until ``max_generations`` or ``f <= f_target``.

    The trace holds one record per executed generation plus a terminal record
    with the final state (NaN centroid fields); ``max_generations = 0`` or an
    initial point already at the target gives a single record.
    """
    x = np.asarray(params.x0, dtype=float)
    if x.shape != (problem.dim,):
        raise ContractViolationError(
            f"x0 has shape {x.shape}, expected ({problem.dim},)"
        )
    if not is_feasible(problem, x):
        x = project_onto_cone(problem, x)
    sigma = float(params.sigma0)

    records: list[GenerationRecord] = []
    g = 0
    while g < params.max_generations and x[0] > params.f_target:
        (x, sigma), record = run_generation((x, sigma), params, problem, rng, g=g)
        records.append(record)
        g += 1

    px, pr = reduce_point(x)
    records.append(
        GenerationRecord(
            g=g,
            x=px,
            r=pr,
            sigma=sigma,
            sigma_star=_sigma_star(problem.dim, sigma, pr),
        )
    )
    return records


def trace_arrays(records: Sequence[GenerationRecord]) -> dict[str, np.ndarray]:
    """Column view of a trace, convenient for analysis and CSV export."""
    return {
        "g": np.array([rec.g for rec in records]),
        "x": np.array([rec.x for rec in records]),
        "r": np.array([rec.r for rec in records]),
        "sigma": np.array([rec.sigma for rec in records]),
        "sigma_star": np.array([rec.sigma_star for rec in records]),
        "q_centroid": np.array([rec.q_centroid for rec in records]),
        "qr_centroid": np.array([rec.qr_centroid for rec in records]),
    }
