"""Linear and mixed-integer linear optimization.

A dense-tableau bounded-variable simplex plus best-first branch and bound,
written against the problem containers in `problem`.  The pivot kernel has
a compiled and a numpy backend selected at import (see `kernels`).
"""

from .branch_bound import solve_milp
from .kernels import kernel_backend
from .problem import (
    DEFAULT_TOLERANCES,
    CrashHint,
    LpBuilder,
    LpProblem,
    MilpProblem,
    MilpSolution,
    NumericalError,
    Status,
    Tolerances,
)
from .simplex import solve_lp
from .textio import FormatError, dump_problem, parse_problem, read_problem, write_problem
from .verify import check_solution, dual_bound

__all__ = [
    "DEFAULT_TOLERANCES",
    "CrashHint",
    "FormatError",
    "LpBuilder",
    "LpProblem",
    "MilpProblem",
    "MilpSolution",
    "NumericalError",
    "Status",
    "Tolerances",
    "check_solution",
    "dual_bound",
    "dump_problem",
    "kernel_backend",
    "parse_problem",
    "read_problem",
    "solve_lp",
    "solve_milp",
    "write_problem",
]
