"""The benchmark: same data, same start, every controller, several seeds.

For each seed a fresh year of synthetic data is generated and every
controller replays the identical evaluation window from the identical
initial state -- the comparison is over controllers only.  Objectives are
J = sum(a*l_cost + b*l_comfort), averaged over seeds; relative performance
is 100 * J_reference / J against the perfect-foresight planner.  Per-step
wall-clock times are collected around each act() call and reported
separately from the deterministic results so reruns stay byte-identical.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from mesbench.data.forecast import case_forecast_specs
from mesbench.data.scenario import Scenario, make_scenario
from mesbench.model.actions import project_action
from mesbench.model.presets import STEPS_PER_WEEK, case_config, with_default_weights
from mesbench.model.types import MesConfig, RewardWeights
from mesbench.mpc import PERFECT, REALISTIC, MpcConfig
from mesbench.plant import sim

from mesbench.bench.controllers import MpcController, RandomController

#: evaluation window: 4 weeks starting at week 10 of the synthetic year
EVAL_START_WEEK = 10
REFERENCE_NAME = "lmpc_perfect"


class DomainError(ValueError):
    """An objective outside the domain of the relative-performance map."""


class EmptyError(ValueError):
    """Statistics requested over zero samples."""


@dataclass(frozen=True)
class RuntimeStats:
    """Wall-clock summary of per-step controller work, seconds."""

    min: float
    mean: float
    std: float  # population std
    max: float
    total: float
    n: int


def runtime_stats(samples) -> RuntimeStats:
    arr = np.asarray(list(samples), dtype=np.float64)
    if arr.size == 0:
        raise EmptyError("no samples")
    return RuntimeStats(
        min=float(arr.min()),
        mean=float(arr.mean()),
        std=float(arr.std()),
        max=float(arr.max()),
        total=float(arr.sum()),
        n=int(arr.size),
    )


def relative_performance(j_ref: float, j: float) -> float:
    """100 * j_ref / j; above 100% means beating the reference."""
    if j_ref <= 0.0 or j <= 0.0:
        raise DomainError(
            f"objectives must be positive (got ref={j_ref}, j={j})"
        )
    return 100.0 * j_ref / j


@dataclass(frozen=True)
class ControllerResult:
    """One controller's line in the report."""

    name: str
    objective: float | None  # mean J over seeds; None if the controller failed
    cost: float | None  # mean cost component (currency)
    comfort: float | None  # mean comfort component (Wh)
    relative: float | None  # percent vs the reference
    per_seed: tuple[float, ...]
    error: str | None  # failure message, None on success
    step_times: RuntimeStats | None


@dataclass(frozen=True)
class BenchmarkReport:
    case_label: str
    n_steps: int
    seeds: tuple[int, ...]
    reference: str
    controllers: tuple[ControllerResult, ...]

    def result(self, name: str) -> ControllerResult:
        for c in self.controllers:
            if c.name == name:
                return c
        raise KeyError(name)


def _run_one(
    controller,
    cfg: MesConfig,
    scenario: Scenario,
    start: int,
    n_steps: int,
) -> tuple[float, float, float, list[float]]:
    """(J, cost, comfort, per-step wall times) for one controller run."""
    controller.reset(cfg, scenario)
    state = sim.initial_state(cfg, scenario, start, 0.5)
    cost = comfort = 0.0
    walls: list[float] = []
    w = cfg.reward_weights
    for _ in range(n_steps):
        tic = time.perf_counter()
        raw = controller.act(state)
        walls.append(time.perf_counter() - tic)
        action = project_action(cfg, raw)
        exo = scenario.frame(state.cursor)
        nxt = (
            scenario.frame(state.cursor + 1)
            if state.cursor + 1 < scenario.n_steps
            else None
        )
        res = sim.step(state, action, exo, cfg, exo_next=nxt)
        cost += res.loss.l_cost
        comfort += res.loss.l_comfort
        state = res.next
    return w.a * cost + w.b * comfort, cost, comfort, walls


def default_mpc_controllers(
    cfg: MesConfig, scenario: Scenario, seed: int
) -> list[MpcController]:
    """The two planners of the study: perfect and calibrated-noise foresight."""
    specs = case_forecast_specs(cfg.case_label, scenario.series(), seed)
    return [
        MpcController(MpcConfig(foresight=PERFECT), REFERENCE_NAME),
        MpcController(
            MpcConfig(foresight=REALISTIC, forecast_specs=specs),
            "lmpc_realistic",
        ),
    ]


def _seed_pass(
    case_label: str,
    seed: int,
    weeks: int,
    start_week: int,
    controllers,
    controller_factory,
):
    """Every controller over one seed's window; returns per-name outcomes."""
    n_steps = weeks * STEPS_PER_WEEK
    start = start_week * STEPS_PER_WEEK
    cfg = case_config(case_label)
    scenario = make_scenario(seed, cfg.grid, case_label)
    cfg = with_default_weights(cfg, scenario.x_el.values)
    if start + n_steps + MpcConfig().n_steps > scenario.n_steps:
        raise ValueError("window + horizon exceeds the scenario")

    lineup = list(controllers) if controllers else []
    if controller_factory is not None:
        lineup += list(controller_factory(cfg, scenario, seed))
    names = [c.name for c in lineup]
    if REFERENCE_NAME not in names:
        lineup += default_mpc_controllers(cfg, scenario, seed)
        names = [c.name for c in lineup]
    if "random" not in names:
        lineup.append(RandomController(seed=seed))
        names.append("random")
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate controller names: {sorted(names)}")

    order = []
    outcomes = {}
    for c in lineup:
        order.append(c.name)
        try:
            j, cost, comfort, w = _run_one(c, cfg, scenario, start, n_steps)
        except Exception as exc:  # a failed controller is reported
            outcomes[c.name] = f"{type(exc).__name__}: {exc}"
            continue
        outcomes[c.name] = (j, cost, comfort, w)
    return order, outcomes


def run_benchmark(
    case_label: str,
    controllers=None,
    weeks: int = 4,
    seeds: tuple[int, ...] = (0, 1, 2),
    controller_factory=None,
    start_week: int = EVAL_START_WEEK,
    jobs: int = 1,
) -> BenchmarkReport:
    """Evaluate controllers over ``weeks`` under each seed's scenario.

    ``controllers`` is a list reused across seeds.  Alternatively
    ``controller_factory(cfg, scenario, seed)`` builds the list per seed --
    that is how seed-specific planners (forecast noise is calibrated per
    scenario) and per-seed-trained agents enter.  A uniform-random baseline
    and the perfect-foresight reference are always included; duplicates by
    name are rejected.  ``jobs`` > 1 runs seeds in parallel processes
    (controllers and factory must then be picklable); results are merged
    in seed order, so the report is identical either way.
    """
    if weeks < 1 or not seeds:
        raise ValueError("need at least one week and one seed")
    n_steps = weeks * STEPS_PER_WEEK

    passes = []
    if jobs > 1 and len(seeds) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(jobs, len(seeds))) as pool:
            passes = list(
                pool.map(
                    _seed_pass,
                    [case_label] * len(seeds),
                    seeds,
                    [weeks] * len(seeds),
                    [start_week] * len(seeds),
                    [controllers] * len(seeds),
                    [controller_factory] * len(seeds),
                )
            )
    else:
        for seed in seeds:
            passes.append(
                _seed_pass(
                    case_label, seed, weeks, start_week,
                    controllers, controller_factory,
                )
            )

    per_seed: dict[str, list[float]] = {}
    comp: dict[str, list[tuple[float, float]]] = {}
    walls: dict[str, list[float]] = {}
    errors: dict[str, str] = {}
    order: list[str] = []
    for pass_order, outcomes in passes:
        for name in pass_order:
            if name not in order:
                order.append(name)
            got = outcomes[name]
            if isinstance(got, str):
                errors.setdefault(name, got)
                continue
            j, cost, comfort, w = got
            per_seed.setdefault(name, []).append(j)
            comp.setdefault(name, []).append((cost, comfort))
            walls.setdefault(name, []).extend(w)
    for name in errors:  # a controller that failed anywhere is failed
        per_seed.pop(name, None)

    ref_mean = None
    if REFERENCE_NAME not in errors and per_seed.get(REFERENCE_NAME):
        ref_mean = float(np.mean(per_seed[REFERENCE_NAME]))

    results = []
    for name in order:
        if name in errors:
            results.append(
                ControllerResult(
                    name, None, None, None, None, (), errors[name], None
                )
            )
            continue
        js = per_seed[name]
        j_mean = float(np.mean(js))
        cost_mean = float(np.mean([c for c, _ in comp[name]]))
        comfort_mean = float(np.mean([q for _, q in comp[name]]))
        rel = (
            relative_performance(ref_mean, j_mean)
            if ref_mean is not None
            else None
        )
        results.append(
            ControllerResult(
                name=name,
                objective=j_mean,
                cost=cost_mean,
                comfort=comfort_mean,
                relative=rel,
                per_seed=tuple(js),
                error=None,
                step_times=runtime_stats(walls[name]),
            )
        )
    return BenchmarkReport(
        case_label=case_label,
        n_steps=n_steps,
        seeds=tuple(seeds),
        reference=REFERENCE_NAME,
        controllers=tuple(results),
    )


# ----------------------------------------------------------------- output
def report_csv(report: BenchmarkReport) -> str:
    """Deterministic results table (no timing columns)."""
    lines = ["controller,objective,cost,comfort_wh,relative_pct,seeds,error"]
    for c in report.controllers:
        if c.error is not None:
            lines.append(f"{c.name},,,,,{len(report.seeds)},{c.error!r}")
            continue
        rel = "" if c.relative is None else f"{c.relative:.4f}"
        lines.append(
            f"{c.name},{c.objective!r},{c.cost!r},{c.comfort!r},"
            f"{rel},{len(report.seeds)},"
        )
    return "\n".join(lines) + "\n"


def timing_csv(report: BenchmarkReport) -> str:
    """Per-step wall-time statistics (machine-dependent, kept separate)."""
    lines = ["controller,min_s,mean_s,std_s,max_s,total_s,n_steps"]
    for c in report.controllers:
        if c.step_times is None:
            continue
        t = c.step_times
        lines.append(
            f"{c.name},{t.min:.6g},{t.mean:.6g},{t.std:.6g},"
            f"{t.max:.6g},{t.total:.6g},{t.n}"
        )
    return "\n".join(lines) + "\n"


def report_text(report: BenchmarkReport) -> str:
    """Human-readable summary table."""
    head = (
        f"case {report.case_label}, {report.n_steps} steps, "
        f"seeds {list(report.seeds)}, reference {report.reference}"
    )
    rows = [head, "-" * len(head)]
    rows.append(
        f"{'controller':<16} {'objective':>14} {'relative':>9} "
        f"{'mean step':>10}"
    )
    for c in report.controllers:
        if c.error is not None:
            rows.append(f"{c.name:<16} FAILED: {c.error}")
            continue
        rel = f"{c.relative:7.1f}%" if c.relative is not None else "      --"
        ms = f"{1e3 * c.step_times.mean:8.2f}ms" if c.step_times else ""
        rows.append(f"{c.name:<16} {c.objective:>14.2f} {rel:>9} {ms:>10}")
    return "\n".join(rows) + "\n"
