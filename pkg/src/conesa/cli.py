"""Command-line front end emitting reproducible CSV tables.

Subcommands map one-to-one onto the experiment kinds: ``project`` (repair a
reduced point), ``onegen`` (one-generation Monte Carlo vs. theory over a
mutation-strength grid), ``dynamics`` (replicate-averaged runs next to the
deterministic iteration), ``steady`` (stationary-regime measurement vs.
prediction) and ``predict`` (closed-form steady-state table only).

Output is CSV preceded by ``#`` metadata lines recording the full
configuration, seed and package version; re-running the recorded command
reproduces the file byte for byte.  Floats are formatted with shortest
round-trip precision.  If ``--output`` is a relative path and the
``CONESA_OUTPUT_DIR`` environment variable is set, the file is written
inside that directory; without ``--output`` the table goes to stdout.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .cone import ConeProblem, ReducedPoint, embed_reduced, is_feasible, project_reduced
from .dynamics import steady_state_predict, sphere_equivalence_factor
from .es import EsParams, RngSeed
from .experiments import dynamics_ensemble, measure_steady_state, one_generation_mc

__all__ = ["RunConfig", "parse_config", "dispatch", "main"]

_COMMANDS = ("project", "onegen", "dynamics", "steady", "predict")
_DEFAULT_SIGMA_STAR_GRID = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
_PARENT_FACTORS = {"axis": 0.1, "mid": 0.5, "boundary": 1.0}
_OUTPUT_DIR_ENV = "CONESA_OUTPUT_DIR"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; 2 is reserved for runtime
    # failures here, so route parse errors through _UsageError instead.
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation: one command plus every knob it may read."""

    command: str
    dim: int = 1000
    xi: float = 20.0
    mu: int = 3
    lam: int = 10
    tau: float | None = None
    sigma0: float = 1e-4
    x0: float = 100.0
    r0: float | None = None
    f_target: float = 1e-30
    trials: int = 100000
    runs: int = 100
    generations: int | None = None
    burn_in: float = 0.5
    replicates: int = 20
    seed: int = 1
    stream: int = 0
    sigma_star_grid: tuple[float, ...] = _DEFAULT_SIGMA_STAR_GRID
    parent: str = "boundary"
    output: str | None = None

    @property
    def tau_value(self) -> float:
        return self.tau if self.tau is not None else 1.0 / math.sqrt(2.0 * self.dim)

    @property
    def r0_value(self) -> float:
        if self.r0 is not None:
            return self.r0
        return self.x0 / (100.0 * math.sqrt(self.xi))


def _build_parser() -> _Parser:
    parser = _Parser(prog="conesa", description=__doc__, add_help=True)
    sub = parser.add_subparsers(dest="command")

    def add_common(p: _Parser) -> None:
        p.add_argument("--dim", type=int, default=1000, help="search-space dimension N")
        p.add_argument("--xi", type=float, default=20.0, help="cone opening parameter")
        p.add_argument("--mu", type=int, default=3, help="number of selected parents")
        p.add_argument("--lambda", dest="lam", type=int, default=10,
                       help="number of offspring")
        p.add_argument("--tau", type=float, default=None,
                       help="learning parameter (default 1/sqrt(2N))")
        p.add_argument("--sigma0", type=float, default=1e-4, help="initial sigma")
        p.add_argument("--x0", type=float, default=100.0, help="initial axis position")
        p.add_argument("--r0", type=float, default=None,
                       help="initial axis distance (default x0/(100 sqrt(xi)))")
        p.add_argument("--f-target", type=float, default=1e-30,
                       help="stop when the objective reaches this value")
        p.add_argument("--seed", type=int, default=1, help="RNG seed")
        p.add_argument("--stream", type=int, default=0, help="RNG substream id")
        p.add_argument("--output", "-o", type=str, default=None,
                       help="output CSV path (default: stdout)")

    p_project = sub.add_parser("project", parents=[], help="repair a reduced point")
    add_common(p_project)

    p_onegen = sub.add_parser("onegen", help="one-generation Monte Carlo vs. theory")
    add_common(p_onegen)
    p_onegen.add_argument("--trials", type=int, default=100000,
                          help="one-generation repetitions per grid point")
    p_onegen.add_argument("--sigma-star", type=float, nargs="+",
                          default=list(_DEFAULT_SIGMA_STAR_GRID),
                          help="normalized mutation strengths to sweep")
    p_onegen.add_argument("--parent", choices=sorted(_PARENT_FACTORS), default="boundary",
                          help="parent anchor relative to the cone boundary")

    p_dynamics = sub.add_parser("dynamics", help="replicate-averaged dynamics")
    add_common(p_dynamics)
    p_dynamics.add_argument("--runs", type=int, default=100, help="number of replicates")
    p_dynamics.add_argument("--generations", type=int, default=10000,
                            help="generations per replicate")

    p_steady = sub.add_parser("steady", help="steady-state measurement vs. prediction")
    add_common(p_steady)
    p_steady.add_argument("--generations", type=int, default=None,
                          help="generations per replicate (default 50N)")
    p_steady.add_argument("--replicates", type=int, default=20,
                          help="number of replicates")
    p_steady.add_argument("--burn-in", type=float, default=0.5,
                          help="fraction of generations discarded as burn-in")

    p_predict = sub.add_parser("predict", help="closed-form steady-state table")
    add_common(p_predict)

    return parser


def parse_config(argv: list[str]) -> RunConfig:
    """Parse and validate; raises `_UsageError` listing every invalid field."""
    parser = _build_parser()
    ns = parser.parse_args(argv)
    if ns.command is None:
        raise _UsageError("a subcommand is required (project, onegen, dynamics, steady, predict)")

    fields = vars(ns).copy()
    fields["sigma_star_grid"] = tuple(fields.pop("sigma_star", _DEFAULT_SIGMA_STAR_GRID))
    for absent, default in (
        ("trials", 100000),
        ("runs", 100),
        ("generations", None),
        ("replicates", 20),
        ("burn_in", 0.5),
        ("parent", "boundary"),
    ):
        fields.setdefault(absent, default)

    config = RunConfig(**fields)
    problems = []
    if config.dim < 2:
        problems.append(f"--dim must be >= 2 (got {config.dim})")
    if not config.xi > 0:
        problems.append(f"--xi must be positive (got {config.xi})")
    if not 1 <= config.mu < config.lam:
        problems.append(f"need 1 <= mu < lambda (got mu={config.mu}, lambda={config.lam})")
    if config.tau is not None and config.tau < 0:
        problems.append(f"--tau must be nonnegative (got {config.tau})")
    if not config.sigma0 > 0:
        problems.append(f"--sigma0 must be positive (got {config.sigma0})")
    if config.command != "project" and not config.x0 > 0:
        problems.append(f"--x0 must be positive (got {config.x0})")
    if config.r0 is not None and config.r0 < 0:
        problems.append(f"--r0 must be nonnegative (got {config.r0})")
    if config.command == "onegen":
        if config.trials < 100:
            problems.append(f"--trials must be >= 100 (got {config.trials})")
        if any(s < 0 for s in config.sigma_star_grid):
            problems.append("--sigma-star values must be nonnegative")
    if config.command == "dynamics" and config.runs < 1:
        problems.append(f"--runs must be >= 1 (got {config.runs})")
    if config.command in ("dynamics", "steady") and config.generations is not None:
        if config.generations < 1:
            problems.append(f"--generations must be >= 1 (got {config.generations})")
    if config.command == "steady":
        if config.replicates < 1:
            problems.append(f"--replicates must be >= 1 (got {config.replicates})")
        if not 0.0 <= config.burn_in < 1.0:
            problems.append(f"--burn-in must be in [0, 1) (got {config.burn_in})")
    if config.seed < 0 or config.stream < 0:
        problems.append("--seed and --stream must be nonnegative")
    if problems:
        raise _UsageError("invalid configuration:\n  " + "\n  ".join(problems))
    return config


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _metadata_lines(config: RunConfig) -> list[str]:
    pairs = [
        ("version", __version__),
        ("command", config.command),
        ("dim", config.dim),
        ("xi", config.xi),
        ("mu", config.mu),
        ("lambda", config.lam),
        ("tau", config.tau_value),
        ("sigma0", config.sigma0),
        ("x0", config.x0),
        ("r0", config.r0_value),
        ("f_target", config.f_target),
        ("seed", config.seed),
        ("stream", config.stream),
    ]
    if config.command == "onegen":
        pairs += [
            ("trials", config.trials),
            ("parent", config.parent),
            ("sigma_star_grid", ";".join(_fmt(s) for s in config.sigma_star_grid)),
        ]
    if config.command == "dynamics":
        pairs += [("runs", config.runs), ("generations", config.generations)]
    if config.command == "steady":
        pairs += [
            ("generations", config.generations or 50 * config.dim),
            ("replicates", config.replicates),
            ("burn_in", config.burn_in),
        ]
    return [f"# {key}={_fmt(value)}" for key, value in pairs]


def _emit(config: RunConfig, header: list[str], rows: list[list]) -> None:
    lines = _metadata_lines(config)
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"

    if config.output is None:
        sys.stdout.write(text)
        return
    path = Path(config.output)
    out_dir = os.environ.get(_OUTPUT_DIR_ENV)
    if not path.is_absolute() and out_dir:
        path = Path(out_dir) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _es_params(config: RunConfig) -> EsParams:
    x0 = embed_reduced(config.x0, config.r0_value, config.dim)
    return EsParams(
        mu=config.mu,
        lam=config.lam,
        tau=config.tau_value,
        sigma0=config.sigma0,
        x0=x0,
        max_generations=config.generations or 0,
        f_target=config.f_target,
    )


def _cmd_project(config: RunConfig) -> tuple[list[str], list[list]]:
    problem = ConeProblem(config.dim, config.xi)
    r0 = config.r0 if config.r0 is not None else 0.0
    point = ReducedPoint(config.x0, r0)
    feasible = is_feasible(problem, embed_reduced(point.x, point.r, config.dim))
    projected = project_reduced(problem, point)
    return (
        ["x", "r", "feasible", "x_proj", "r_proj"],
        [[point.x, point.r, feasible, projected.x, projected.r]],
    )


def _cmd_predict(config: RunConfig) -> tuple[list[str], list[list]]:
    pred = steady_state_predict(
        config.mu, config.lam, config.tau_value, config.xi, config.dim
    )
    header = [
        "mu", "lambda", "tau", "xi", "dim",
        "sigma_star_ss", "phi_star_ss", "boundary_ratio", "boundary_ratio_linearized",
        "sigma_star_max", "phi_star_max", "tau_opt", "sphere_factor",
    ]
    row = [
        pred.mu, pred.lam, pred.tau, pred.xi, pred.dim,
        pred.sigma_star_ss, pred.phi_star_ss, pred.boundary_ratio,
        pred.boundary_ratio_linearized, pred.sigma_star_max, pred.phi_star_max,
        pred.tau_opt, sphere_equivalence_factor(pred, config.xi),
    ]
    return header, [row]


def _cmd_onegen(config: RunConfig) -> tuple[list[str], list[list]]:
    problem = ConeProblem(config.dim, config.xi)
    boundary_r = config.x0 / math.sqrt(config.xi)
    parent = ReducedPoint(config.x0, _PARENT_FACTORS[config.parent] * boundary_r)
    params = _es_params(config)
    seed = RngSeed(config.seed, config.stream)
    header = [
        "sigma_star",
        "phi_x_mc", "phi_x_se", "phi_x_th",
        "phi_r_mc", "phi_r_se", "phi_r_th",
        "psi_mc", "psi_se", "psi_th",
    ]
    rows = []
    for idx, sigma_star in enumerate(config.sigma_star_grid):
        est = one_generation_mc(
            parent, sigma_star, params, problem, config.trials,
            RngSeed(seed.seed, seed.stream + idx),
        )
        rows.append([
            est.sigma_star,
            est.phi_x_mc, est.phi_x_se, est.phi_x_th,
            est.phi_r_mc, est.phi_r_se, est.phi_r_th,
            est.psi_mc, est.psi_se, est.psi_th,
        ])
    return header, rows


def _cmd_dynamics(config: RunConfig) -> tuple[list[str], list[list]]:
    problem = ConeProblem(config.dim, config.xi)
    params = _es_params(config)
    result = dynamics_ensemble(
        params, problem, config.runs, RngSeed(config.seed, config.stream)
    )
    det = result.deterministic
    header = [
        "g", "x_mc", "r_mc", "sigma_mc", "sigma_star_mc",
        "x_det", "r_det", "sigma_det", "sigma_star_det",
    ]
    rows = []
    for i, g in enumerate(result.g):
        if det is not None and i < len(det.states):
            s = det.states[i]
            det_cols = [s.x, s.r, s.sigma, config.dim * s.sigma / s.r]
        else:
            det_cols = [float("nan")] * 4
        rows.append([
            int(g), result.x[i], result.r[i], result.sigma[i], result.sigma_star[i],
            *det_cols,
        ])
    return header, rows


def _cmd_steady(config: RunConfig) -> tuple[list[str], list[list]]:
    problem = ConeProblem(config.dim, config.xi)
    generations = config.generations or 50 * config.dim
    params = _es_params(config)
    measurement = measure_steady_state(
        params, problem, generations, config.replicates, config.burn_in,
        RngSeed(config.seed, config.stream),
    )
    pred = steady_state_predict(
        config.mu, config.lam, config.tau_value, config.xi, config.dim
    )
    header = [
        "sigma_star_ss_mc", "phi_x_ss_mc", "phi_r_ss_mc", "ratio_mc",
        "sigma_star_ss_pred", "phi_star_ss_pred", "ratio_pred",
        "replicates", "generations", "short_window",
    ]
    row = [
        measurement.sigma_star_ss_mc, measurement.phi_x_ss_mc,
        measurement.phi_r_ss_mc, measurement.ratio_mc,
        pred.sigma_star_ss, pred.phi_star_ss, pred.boundary_ratio,
        measurement.replicates, measurement.generations, measurement.short_window,
    ]
    return header, [row]


_DISPATCH = {
    "project": _cmd_project,
    "onegen": _cmd_onegen,
    "dynamics": _cmd_dynamics,
    "steady": _cmd_steady,
    "predict": _cmd_predict,
}


def dispatch(config: RunConfig) -> int:
    """Run the configured command and emit its CSV; returns the exit status."""
    try:
        header, rows = _DISPATCH[config.command](config)
        _emit(config, header, rows)
    except OSError as exc:
        print(f"conesa: I/O error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - runtime failures map to exit code 2
        print(f"conesa: error: {exc}", file=sys.stderr)
        return 2
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    if not argv:
        _build_parser().print_help()
        return 0
    try:
        config = parse_config(argv)
    except _UsageError as exc:
        print(f"conesa: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        # argparse exits directly for --help; preserve its status.
        return int(exc.code or 0)
    return dispatch(config)


if __name__ == "__main__":
    sys.exit(main())
