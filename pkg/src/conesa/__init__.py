"""Self-adaptive evolution strategy with projection repair on a conic feasible region.

The package bundles the stochastic strategy itself (`conesa.es`), the
geometry of the constraint and its nearest-point repair (`conesa.cone`), the
closed-form one-generation theory (`conesa.theory`, `conesa.coefficients`),
the deterministic mean-value dynamics with steady-state predictions
(`conesa.dynamics`), and a Monte Carlo harness comparing theory with
simulation (`conesa.experiments`).  The ``conesa`` command-line tool exposes
the experiments as CSV-emitting commands.
"""

__version__ = "0.1.0"

from .cone import (
    ConeProblem,
    ReducedPoint,
    embed_reduced,
    is_feasible,
    objective,
    project_onto_cone,
    project_reduced,
    reduce_point,
)
from .coefficients import (
    averaged_order_coefficients,
    c_mu_mu_lambda,
    e11,
    generalized_progress_coefficient,
)
from .dynamics import (
    DeterministicRun,
    DeterministicState,
    SteadyStatePrediction,
    iterate_deterministic,
    sphere_equivalence_factor,
    steady_state_predict,
)
from .errors import ContractViolationError, DegenerateStateError
from .es import EsParams, GenerationRecord, RngSeed, run_es, run_generation
from .experiments import (
    EnsembleResult,
    OneGenEstimate,
    SteadyStateMeasurement,
    dynamics_ensemble,
    measure_steady_state,
    one_generation_mc,
)
from .theory import (
    MicroInputs,
    MicroPrediction,
    RApprox,
    RegimeTriple,
    expected_centroid_q,
    expected_centroid_q_sq,
    feasibility_probability,
    micro_prediction,
    progress_r,
    progress_x,
    r_offspring_approx,
    sar,
)

__all__ = [
    "__version__",
    "ConeProblem",
    "ReducedPoint",
    "embed_reduced",
    "is_feasible",
    "objective",
    "project_onto_cone",
    "project_reduced",
    "reduce_point",
    "averaged_order_coefficients",
    "c_mu_mu_lambda",
    "e11",
    "generalized_progress_coefficient",
    "DeterministicRun",
    "DeterministicState",
    "SteadyStatePrediction",
    "iterate_deterministic",
    "sphere_equivalence_factor",
    "steady_state_predict",
    "ContractViolationError",
    "DegenerateStateError",
    "EsParams",
    "GenerationRecord",
    "RngSeed",
    "run_es",
    "run_generation",
    "EnsembleResult",
    "OneGenEstimate",
    "SteadyStateMeasurement",
    "dynamics_ensemble",
    "measure_steady_state",
    "one_generation_mc",
    "MicroInputs",
    "MicroPrediction",
    "RApprox",
    "RegimeTriple",
    "expected_centroid_q",
    "expected_centroid_q_sq",
    "feasibility_probability",
    "micro_prediction",
    "progress_r",
    "progress_x",
    "r_offspring_approx",
    "sar",
]
