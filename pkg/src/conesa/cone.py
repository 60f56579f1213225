"""Geometry of the conically constrained problem.

The objective is the first coordinate, ``f(x) = x_1``, minimized subject to

    x_1 >= 0   and   x_1**2 - xi * (x_2**2 + ... + x_N**2) >= 0,

i.e. over a second-order cone whose axis is the first coordinate axis.  By
rotational symmetry around that axis every point is fully described by the
reduced pair ``(x, r)`` with ``x = x_1`` and ``r = ||(x_2, ..., x_N)||``; the
cone boundary is then the ray ``r = x / sqrt(xi)``, ``x >= 0``.

Repair of infeasible points is the Euclidean nearest-point projection onto
the cone, available both for full vectors (`project_onto_cone`) and for
reduced pairs (`project_reduced`).  All functions are pure and never modify
their inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from .errors import ContractViolationError

__all__ = [
    "ConeProblem",
    "ReducedPoint",
    "objective",
    "is_feasible",
    "reduce_point",
    "embed_reduced",
    "project_onto_cone",
    "project_reduced",
]


@dataclass(frozen=True)
class ConeProblem:
    """A problem instance: search-space dimension ``dim`` and opening ``xi``.

    Small ``xi`` gives a wide cone (weak constraint), large ``xi`` a narrow
    one.  ``dim`` must be at least 2 so that the axis distance r exists.
    """

    dim: int
    xi: float

    def __post_init__(self) -> None:
        if int(self.dim) != self.dim or self.dim < 2:
            raise ContractViolationError(f"dim must be an integer >= 2, got {self.dim}")
        if not self.xi > 0.0:
            raise ContractViolationError(f"xi must be positive, got {self.xi}")

    @property
    def sqrt_xi(self) -> float:
        return math.sqrt(self.xi)


class ReducedPoint(NamedTuple):
    """State in the rotationally reduced plane: axis position and axis distance."""

    x: float
    r: float


def _check_point(problem: ConeProblem, p: npt.NDArray[np.floating]) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.shape[0] != problem.dim:
        raise ContractViolationError(
            f"point has shape {p.shape}, expected ({problem.dim},)"
        )
    return p


def objective(problem: ConeProblem, p: npt.NDArray[np.floating]) -> float:
    """First coordinate of ``p`` (the quantity being minimized)."""
    p = _check_point(problem, p)
    return float(p[0])


def is_feasible(problem: ConeProblem, p: npt.NDArray[np.floating]) -> bool:
    """Exact feasibility test; no tolerance is applied."""
    p = _check_point(problem, p)
    if p[0] < 0.0:
        return False
    return p[0] ** 2 - problem.xi * float(np.sum(p[1:] ** 2)) >= 0.0


def reduce_point(p: npt.NDArray[np.floating]) -> ReducedPoint:
    """Map a full vector to the reduced ``(x, r)`` pair."""
    p = np.asarray(p, dtype=float)
    return ReducedPoint(float(p[0]), float(np.linalg.norm(p[1:])))


def embed_reduced(x: float, r: float, dim: int) -> np.ndarray:
    """Embed a reduced pair as ``(x, r, 0, ..., 0)`` in ``dim`` dimensions.

    Any embedding direction is equivalent by rotational symmetry; the second
    coordinate axis is the conventional choice.
    """
    if dim < 2:
        raise ContractViolationError(f"dim must be >= 2, got {dim}")
    if r < 0.0:
        raise ContractViolationError(f"r must be nonnegative, got {r}")
    p = np.zeros(dim)
    p[0] = x
    p[1] = r
    return p


def project_onto_cone(
    problem: ConeProblem, p: npt.NDArray[np.floating]
) -> np.ndarray:
    """Euclidean nearest feasible point to ``p``.

    Feasible points are returned unchanged.  An infeasible point is projected
    orthogonally onto the boundary ray inside the 2-D plane spanned by the
    cone axis and the point itself; when that projection would land at
    negative axis positions (the point "behind" the apex) the nearest
    feasible point is the apex, i.e. the zero vector.
    """
    p = _check_point(problem, p)
    if is_feasible(problem, p):
        return p

    xi = problem.xi
    r_norm = float(np.linalg.norm(p[1:]))
    if r_norm == 0.0:
        # Infeasible with r = 0 means p[0] < 0: nearest feasible point is the apex.
        return np.zeros_like(p)

    # Signed length of p along the boundary direction e_c; <= 0 projects to the apex.
    along_boundary = (problem.sqrt_xi * p[0] + r_norm) / math.sqrt(xi + 1.0)
    if along_boundary <= 0.0:
        return np.zeros_like(p)

    q = (xi / (xi + 1.0)) * (p[0] + r_norm / problem.sqrt_xi)
    out = np.empty_like(p)
    out[0] = q
    out[1:] = (q / (problem.sqrt_xi * r_norm)) * p[1:]
    return out


def project_reduced(problem: ConeProblem, rp: ReducedPoint) -> ReducedPoint:
    """Nearest feasible reduced pair; commutes with `project_onto_cone` via `reduce_point`."""
    x, r = float(rp[0]), float(rp[1])
    if r < 0.0:
        raise ContractViolationError(f"r must be nonnegative, got {r}")
    if x >= 0.0 and x >= problem.sqrt_xi * r:
        return ReducedPoint(x, r)
    q = (problem.xi / (problem.xi + 1.0)) * (x + r / problem.sqrt_xi)
    q = max(q, 0.0)
    return ReducedPoint(q, q / problem.sqrt_xi)
