"""Front steepest descent solvers for multi-objective optimization.

The numerics live in the compiled ``_core`` extension; this package only
re-exports it.
"""

from ._core import (
    ContractError,
    FormatError,
    InputError,
    LookupError,
    Problem,
    SolverError,
    UsageError,
    __version__,
    delta_spread,
    gamma_spread,
    get_problem,
    hypervolume,
    performance_profiles,
    problems,
    purity,
    read_front_csv,
    run,
    run_experiment,
    solve_direction,
    validate_front,
)

__all__ = [
    "ContractError",
    "FormatError",
    "InputError",
    "LookupError",
    "Problem",
    "SolverError",
    "UsageError",
    "__version__",
    "delta_spread",
    "gamma_spread",
    "get_problem",
    "hypervolume",
    "performance_profiles",
    "problems",
    "purity",
    "read_front_csv",
    "run",
    "run_experiment",
    "solve_direction",
    "validate_front",
]
