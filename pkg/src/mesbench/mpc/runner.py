"""Receding-horizon dispatch loop.

Every ``c_steps`` the runner measures the plant state, forecasts
``n_steps`` ahead (exactly, or through the calibrated noise model), solves
the horizon MILP and applies the first ``c_steps`` planned actions to the
plant -- then repeats from the freshly measured state, never from the
model's own prediction.  A thermally infeasible horizon is retried once
with penalized heat slack; anything else unusable raises SolverFailure.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from mesbench.data.forecast import ForecastSpec, RangeError, make_forecast
from mesbench.data.scenario import Scenario
from mesbench.milp.branch_bound import solve_milp
from mesbench.milp.problem import Status
from mesbench.model.actions import project_action
from mesbench.model.types import ControlAction, MesConfig, SystemState
from mesbench.mpc.model import SERIES_NAMES, build_problem, extract_actions
from mesbench.plant.sim import StepRecord, episode_objective, initial_state, step

PERFECT = "perfect"
REALISTIC = "realistic"


class SolverFailure(RuntimeError):
    """A horizon produced no usable plan; carries the failing cursor."""

    def __init__(self, cursor: int, status: str, detail: str):
        self.cursor = cursor
        self.status = status
        super().__init__(f"dispatch at step {cursor} failed ({status}): {detail}")


@dataclass(frozen=True)
class MpcConfig:
    """Horizon lengths and foresight mode of a receding-horizon run.

    Defaults are 72 h of prediction and 24 h of control at 15-minute
    steps.  ``foresight`` "perfect" feeds realized data to the optimizer;
    "realistic" injects calibrated forecast noise and then needs one
    ForecastSpec per exogenous series.  n_steps = c_steps = 1 degenerates
    to a greedy myopic dispatcher.
    """

    n_steps: int = 288
    c_steps: int = 96
    foresight: str = PERFECT
    forecast_specs: Mapping[str, ForecastSpec] | None = None
    #: solver budget per horizon.  The rounding heuristic lands the
    #: incumbent by the first nodes; what a tighter gap buys after that is
    #: bound *proof*, not better dispatch -- so stop at 0.2% relative and
    #: cap the node count (an exhausted budget still returns its incumbent).
    max_nodes: int = 400
    gap_tol: float | None = 2.0e-3

    def __post_init__(self):
        if not 1 <= self.c_steps <= self.n_steps:
            raise ValueError(
                f"need 1 <= c_steps <= n_steps, got C={self.c_steps} N={self.n_steps}"
            )
        if self.foresight not in (PERFECT, REALISTIC):
            raise ValueError(f"unknown foresight mode {self.foresight!r}")
        if self.foresight == REALISTIC:
            have = set() if self.forecast_specs is None else set(self.forecast_specs)
            missing = [s for s in SERIES_NAMES if s not in have]
            if missing:
                raise ValueError(f"realistic foresight needs specs for {missing}")


@dataclass(frozen=True)
class SolveStats:
    """Diagnostics of one horizon solve (timing data, not results data)."""

    t: int  # scenario cursor at solve time
    horizon: int
    applied: int  # actions actually sent to the plant
    wall_s: float
    status: str
    node_count: int
    iterations: int
    objective: float  # currency, economic cost of the planned horizon
    retried: bool


@dataclass(frozen=True)
class MpcPlan:
    """An open-loop plan: one action per horizon step, plus diagnostics."""

    actions: tuple[ControlAction, ...]
    objective: float  # currency over the horizon
    solve_stats: SolveStats


@dataclass(frozen=True)
class MpcRunResult:
    """Closed-loop trajectory of a receding-horizon run."""

    records: list[StepRecord]
    objective: float  # J = sum of a*l_cost + b*l_comfort
    solves: list[SolveStats]


def plan_horizon(
    cfg: MesConfig,
    forecasts: Mapping[str, np.ndarray],
    x0: SystemState | Mapping[str, float],
    n_steps: int,
    *,
    max_nodes: int = 10_000,
    gap_tol: float | None = None,
    cursor: int = 0,
) -> MpcPlan:
    """Solve one horizon against the given forecasts.

    Accepts the optimum, or a feasible incumbent when the node budget runs
    out.  An infeasible horizon (heat demand that no dispatch can meet) is
    rebuilt once with penalized heat slack.  Raises SolverFailure when the
    retry fails too, or on numerical breakdown; ``cursor`` only labels
    that failure and the stats.
    """
    t0 = time.perf_counter()
    nodes = iters = 0
    retried = False
    try:
        problem, vmap = build_problem(cfg, forecasts, x0, n_steps)
        sol = solve_milp(
            problem, max_nodes=max_nodes, gap_tol=gap_tol, crash=vmap.crash
        )
        nodes, iters = sol.node_count, sol.iterations
        if sol.x is None:
            retried = True
            problem, vmap = build_problem(
                cfg, forecasts, x0, n_steps, heat_slack=True
            )
            sol = solve_milp(
                problem, max_nodes=max_nodes, gap_tol=gap_tol, crash=vmap.crash
            )
            nodes += sol.node_count
            iters += sol.iterations
    except Exception as exc:
        if isinstance(exc, (ValueError, RangeError)):
            raise  # caller bugs (bad config/forecasts), not solver failures
        raise SolverFailure(cursor, "NumericalError", str(exc)) from exc
    if sol.x is None:
        raise SolverFailure(
            cursor,
            sol.status.value,
            f"no plan after heat-slack retry ({nodes} nodes, {iters} iterations)",
        )
    stats = SolveStats(
        t=cursor,
        horizon=n_steps,
        applied=0,
        wall_s=time.perf_counter() - t0,
        status=sol.status.value,
        node_count=nodes,
        iterations=iters,
        objective=vmap.true_objective(sol.x),
        retried=retried,
    )
    return MpcPlan(
        actions=extract_actions(cfg, vmap, sol.x),
        objective=stats.objective,
        solve_stats=stats,
    )


def _forecast_window(
    scenario: Scenario, mpc_cfg: MpcConfig, t0: int
) -> dict[str, np.ndarray]:
    series = scenario.series()
    n = mpc_cfg.n_steps
    if mpc_cfg.foresight == PERFECT:
        return {name: s.values[t0 : t0 + n].copy() for name, s in series.items()}
    specs = mpc_cfg.forecast_specs
    return {
        name: make_forecast(s, specs[name], t0, n).values
        for name, s in series.items()
    }


def receding_horizon_run(
    cfg: MesConfig,
    scenario: Scenario,
    mpc_cfg: MpcConfig | None = None,
    *,
    n_steps: int,
    start: int = 0,
    state0: SystemState | None = None,
    soc_frac: float | Mapping[str, float] = 0.5,
    log_path=None,
) -> MpcRunResult:
    """Run the dispatcher closed-loop for ``n_steps`` plant steps.

    The scenario must cover the run plus one full prediction horizon.
    ``state0`` overrides the default initial state (its cursor then
    replaces ``start``).  ``log_path``, when given, receives one CSV row
    per solve -- wall-clock diagnostics, kept out of the results files so
    reruns stay byte-identical.
    """
    mpc_cfg = MpcConfig() if mpc_cfg is None else mpc_cfg
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    if state0 is not None:
        start = state0.cursor
    if start < 0 or start + n_steps + mpc_cfg.n_steps > scenario.n_steps:
        raise RangeError(
            f"run [{start}, {start + n_steps}) + horizon {mpc_cfg.n_steps} "
            f"exceeds scenario of {scenario.n_steps} steps"
        )
    state = (
        initial_state(cfg, scenario, cursor=start, soc_frac=soc_frac)
        if state0 is None
        else state0
    )

    records: list[StepRecord] = []
    solves: list[SolveStats] = []
    applied = 0
    while applied < n_steps:
        t0 = state.cursor
        plan = plan_horizon(
            cfg,
            _forecast_window(scenario, mpc_cfg, t0),
            state,
            mpc_cfg.n_steps,
            max_nodes=mpc_cfg.max_nodes,
            gap_tol=mpc_cfg.gap_tol,
            cursor=t0,
        )
        k = min(mpc_cfg.c_steps, n_steps - applied)
        for i in range(k):
            act = project_action(cfg, plan.actions[i])
            exo = scenario.frame(state.cursor)
            has_next = state.cursor + 1 < scenario.n_steps
            exo_next = scenario.frame(state.cursor + 1) if has_next else None
            res = step(state, act, exo, cfg, exo_next=exo_next)
            records.append(
                StepRecord(
                    state=state,
                    action=act,
                    loss=res.loss,
                    dispatch=res.dispatch,
                    grid_import_el=res.grid_import_el,
                    gas_consumed=res.gas_consumed,
                )
            )
            state = res.next
        applied += k
        solves.append(replace(plan.solve_stats, applied=k))

    if log_path is not None:
        _write_solve_log(log_path, solves)
    return MpcRunResult(
        records=records,
        objective=episode_objective(records, cfg.reward_weights),
        solves=solves,
    )


def _write_solve_log(path, solves: list[SolveStats]) -> None:
    """Per-solve diagnostics CSV (wall-clock column: timing-class file)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            [
                "t",
                "horizon",
                "applied",
                "wall_s",
                "status",
                "node_count",
                "iterations",
                "objective",
                "retried",
            ]
        )
        for s in solves:
            w.writerow(
                [
                    s.t,
                    s.horizon,
                    s.applied,
                    f"{s.wall_s:.6f}",
                    s.status,
                    s.node_count,
                    s.iterations,
                    repr(s.objective),
                    int(s.retried),
                ]
            )
