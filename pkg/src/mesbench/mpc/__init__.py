"""Receding-horizon MILP dispatch: horizon model builder and run loop."""

from mesbench.mpc.model import (
    SERIES_NAMES,
    TIE_BREAK_MWH,
    VarMap,
    build_problem,
    extract_actions,
)
from mesbench.mpc.runner import (
    PERFECT,
    REALISTIC,
    MpcConfig,
    MpcPlan,
    MpcRunResult,
    SolverFailure,
    SolveStats,
    plan_horizon,
    receding_horizon_run,
)

__all__ = [
    "SERIES_NAMES",
    "TIE_BREAK_MWH",
    "VarMap",
    "build_problem",
    "extract_actions",
    "PERFECT",
    "REALISTIC",
    "MpcConfig",
    "MpcPlan",
    "MpcRunResult",
    "SolverFailure",
    "SolveStats",
    "plan_horizon",
    "receding_horizon_run",
]
