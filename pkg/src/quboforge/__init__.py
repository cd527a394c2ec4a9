"""quboforge: multi-backend QUBO solvers with a reproducible benchmark harness.

Minimize x^T Q x over binary vectors with simulated annealing, sigmoid-
relaxed gradient descent (Adam/AdamW), or box-constrained limited-memory
BFGS, and sweep solver x size x threshold x seed grids with independent
energy verification.
"""

from .annealer import AnnealConfig, AnnealResult, AnnealSchedule, anneal, beta_schedule, flip_delta
from .bench import (
    DEFAULT_THRESHOLDS,
    BenchRecord,
    ExperimentSpec,
    read_records_csv,
    run_experiment,
    write_records_csv,
)
from .model import (
    NonBinaryError,
    QuboMatrix,
    brute_force_min,
    energy_binary,
    energy_relaxed,
    generate_qubo,
    local_fields,
    read_qbin,
    read_solution_json,
    verify_solution,
    write_qbin,
    write_solution_json,
)
from .optim import (
    AdamState,
    LbfgsResult,
    LbfgsState,
    NumericFailure,
    PlateauSchedulerState,
    StopState,
    adam_step,
    clamp_box,
    lbfgs_minimize,
    scheduler_observe,
    stop_observe,
)
from .plots import emit_plots
from .relaxation import DEFAULT_SLOPE, binarize, relaxed_loss_and_grad, sigmoid_project
from .solver import BACKENDS, SolverConfig, SolveResult, solve, solve_repeated

__version__ = "0.1.0"

__all__ = [
    "AdamState",
    "AnnealConfig",
    "AnnealResult",
    "AnnealSchedule",
    "BACKENDS",
    "BenchRecord",
    "DEFAULT_SLOPE",
    "DEFAULT_THRESHOLDS",
    "ExperimentSpec",
    "LbfgsResult",
    "LbfgsState",
    "NonBinaryError",
    "NumericFailure",
    "PlateauSchedulerState",
    "QuboMatrix",
    "SolveResult",
    "SolverConfig",
    "StopState",
    "adam_step",
    "anneal",
    "beta_schedule",
    "binarize",
    "brute_force_min",
    "clamp_box",
    "emit_plots",
    "energy_binary",
    "energy_relaxed",
    "flip_delta",
    "generate_qubo",
    "lbfgs_minimize",
    "local_fields",
    "read_qbin",
    "read_records_csv",
    "read_solution_json",
    "relaxed_loss_and_grad",
    "run_experiment",
    "scheduler_observe",
    "sigmoid_project",
    "solve",
    "solve_repeated",
    "stop_observe",
    "verify_solution",
    "write_qbin",
    "write_records_csv",
    "write_solution_json",
]
