"""Benchmark orchestration: head-to-head runs, curves, search, timing."""

from mesbench.bench.controllers import (
    AgentController,
    MpcController,
    RandomController,
    ZeroController,
)
from mesbench.bench.curves import (
    EVAL_WEEKS,
    LearningCurve,
    case_action_mode,
    case_hyper,
    curve_csv,
    evaluate_policy,
    learning_curve,
    make_agent,
)
from mesbench.bench.runner import (
    BenchmarkReport,
    ControllerResult,
    DomainError,
    EmptyError,
    REFERENCE_NAME,
    RuntimeStats,
    default_mpc_controllers,
    relative_performance,
    report_csv,
    report_text,
    run_benchmark,
    runtime_stats,
    timing_csv,
)
from mesbench.bench.search import (
    HyperSpace,
    SearchResult,
    Trial,
    history_csv,
    random_search,
)

__all__ = [
    "EVAL_WEEKS",
    "REFERENCE_NAME",
    "AgentController",
    "BenchmarkReport",
    "ControllerResult",
    "DomainError",
    "EmptyError",
    "HyperSpace",
    "LearningCurve",
    "MpcController",
    "RandomController",
    "RuntimeStats",
    "SearchResult",
    "Trial",
    "ZeroController",
    "case_action_mode",
    "case_hyper",
    "curve_csv",
    "default_mpc_controllers",
    "evaluate_policy",
    "history_csv",
    "learning_curve",
    "make_agent",
    "random_search",
    "relative_performance",
    "report_csv",
    "report_text",
    "run_benchmark",
    "runtime_stats",
    "timing_csv",
]
