"""Command-line front end: every artifact of the study from one program.

Eight subcommands cover the pipeline end to end -- synthetic data
emission, single closed-loop runs (fixed controller or receding-horizon
planner), agent training with a learning curve, checkpoint evaluation,
the full multi-controller benchmark, random hyper-parameter search, and
SVG plots rendered strictly from previously written CSVs.

Every run writes its outputs under one chosen directory and finishes
with a ``manifest.json`` naming the command, the config files consulted,
the seeds, and a sha256 per artifact -- rerunning a command and
comparing hashes is the reproducibility check.  Timing files (solve logs
and the benchmark timing table) are the documented exception: they hold
wall-clock measurements and differ between reruns by nature.

Configuration is layered: command-line flags override a ``--config``
INI file, which overrides the built-in per-case presets shipped with
the package.  Exit codes: 0 success, 1 usage error (synopsis goes to
stderr, nothing is written), 2 runtime failure.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from importlib import resources

from mesbench import __version__

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2

#: accepted spellings of the two study cases -> internal label
CASE_KEYS = {
    "case1": "simple",
    "case2": "complex",
    "simple": "simple",
    "complex": "complex",
}

#: env var pointing at a directory of previously emitted scenario CSVs
#: (layout: <root>/<label>/seed<NNN>/<series>.csv); when set and the
#: directory exists, commands load series from disk instead of
#: regenerating them.
DATA_DIR_VAR = "MESBENCH_DATA_DIR"


class UsageError(Exception):
    """Bad arguments detected after parsing (unknown case, missing file)."""


@dataclass(frozen=True)
class RunManifest:
    """What a run did and what it left behind.

    ``artifacts`` maps each output file (relative to ``out_dir``) to its
    sha256; the manifest itself is excluded.  ``wall_clock_s`` is
    measurement, not result -- two otherwise identical runs differ here.
    """

    command: str
    config_paths: tuple[str, ...]
    seeds: tuple[int, ...]
    out_dir: str
    artifacts: dict[str, str]
    wall_clock_s: float
    tool_version: str


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_text(path: str, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _finish(args, out_dir, files, seeds, config_paths, t0) -> int:
    manifest = RunManifest(
        command=" ".join(args._argv),
        config_paths=tuple(config_paths),
        seeds=tuple(int(s) for s in seeds),
        out_dir=out_dir,
        artifacts={f: _sha256(os.path.join(out_dir, f)) for f in sorted(files)},
        wall_clock_s=round(time.perf_counter() - t0, 3),
        tool_version=__version__,
    )
    _write_text(
        os.path.join(out_dir, "manifest.json"),
        json.dumps(asdict(manifest), indent=2, sort_keys=True) + "\n",
    )
    print(f"wrote {len(files)} artifact(s) + manifest.json under {out_dir}")
    return EXIT_OK


def _out_dir(args, command: str) -> str:
    out = args.out if args.out else os.path.join("runs", command)
    os.makedirs(out, exist_ok=True)
    return out


def _case_label(key: str) -> str:
    try:
        return CASE_KEYS[key]
    except KeyError:
        raise UsageError(
            f"unknown case {key!r} (expected one of {sorted(CASE_KEYS)})"
        ) from None


def _settings(label: str, config_path: str | None):
    """Preset INI overlaid with the user's file; returns (parser, paths)."""
    cp = configparser.ConfigParser()
    preset = resources.files("mesbench").joinpath(f"configs/{label}.cfg")
    cp.read_string(preset.read_text(), source=f"preset:{label}.cfg")
    paths = [f"preset:{label}.cfg"]
    if config_path is not None:
        if not os.path.isfile(config_path):
            raise UsageError(f"config file not found: {config_path}")
        with open(config_path) as fh:
            cp.read_file(fh, source=config_path)
        paths.append(config_path)
    return cp, paths


def _pick(flag, cp, section: str, key: str, cast):
    """Flag wins; otherwise the layered config supplies the value."""
    if flag is not None:
        return flag
    try:
        raw = cp.get(section, key)
    except (configparser.NoSectionError, configparser.NoOptionError):
        raise UsageError(f"missing config entry [{section}] {key}") from None
    try:
        return cast(raw)
    except ValueError:
        raise UsageError(f"bad config entry [{section}] {key} = {raw!r}") from None


def _gap(raw: str):
    return None if raw.strip().lower() in ("none", "") else float(raw)


def _load_case(label: str, seed: int):
    """Config and scenario for one case/seed, honoring MESBENCH_DATA_DIR."""
    from mesbench.data.scenario import load_scenario, make_scenario
    from mesbench.model.presets import case_config, with_default_weights

    cfg = case_config(label)
    root = os.environ.get(DATA_DIR_VAR)
    scenario = None
    if root:
        d = os.path.join(root, label, f"seed{seed:03d}")
        if os.path.isdir(d):
            scenario = load_scenario(d, cfg.grid)
    if scenario is None:
        scenario = make_scenario(seed, cfg.grid, label)
    return with_default_weights(cfg, scenario.x_el.values), scenario


# ---------------------------------------------------------------------------
# trajectory plumbing shared by simulate and mpc-run


def _rollout(controller, cfg, scenario, start: int, n: int, soc: float):
    """Closed loop under a per-step controller; returns the step records."""
    from mesbench.model.actions import project_action
    from mesbench.plant.sim import StepRecord, initial_state, step

    state = initial_state(cfg, scenario, cursor=start, soc_frac=soc)
    controller.reset(cfg, scenario)
    records = []
    for _ in range(n):
        act = project_action(cfg, controller.act(state))
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
    return records


def _trajectory_csv(cfg, records) -> str:
    """One row per plant step: observation, setpoints, SoC, losses."""
    from mesbench.model.actions import controllable_channels
    from mesbench.model.types import FIELD_ORDER

    keys = [ch.key for ch in controllable_channels(cfg)]
    stos = sorted(records[0].state.soc) if records else []
    head = (
        ["t", "cursor"]
        + [f"obs_{n}" for n in FIELD_ORDER]
        + [f"sp_{k}" for k in keys]
        + [f"soc_{s}" for s in stos]
        + ["l_cost", "l_comfort", "grid_import_el_w", "gas_w"]
    )
    lines = [",".join(head)]
    for r in records:
        obs = r.state.obs.as_array()
        vals = (
            [str(r.state.t_index), str(r.state.cursor)]
            + [repr(float(v)) for v in obs]
            + [repr(float(r.action.setpoints.get(k, 0.0))) for k in keys]
            + [repr(float(r.state.soc[s])) for s in stos]
            + [
                repr(float(r.loss.l_cost)),
                repr(float(r.loss.l_comfort)),
                repr(float(r.grid_import_el)),
                repr(float(r.gas_consumed)),
            ]
        )
        lines.append(",".join(vals))
    return "\n".join(lines) + "\n"


def _summary_json(cfg, records) -> str:
    from mesbench.plant.sim import episode_objective

    cost = sum(r.loss.l_cost for r in records)
    comfort = sum(r.loss.l_comfort for r in records)
    doc = {
        "steps": len(records),
        "objective": episode_objective(records, cfg.reward_weights),
        "cost": cost,
        "comfort_wh": comfort,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_data_gen(args) -> int:
    from mesbench.data.scenario import make_scenario, save_scenario
    from mesbench.model.presets import case_config

    t0 = time.perf_counter()
    label = _case_label(args.case)
    _, paths = _settings(label, args.config)
    out = _out_dir(args, "data-gen")
    cfg = case_config(label)
    scenario = make_scenario(args.seed, cfg.grid, label)
    dest = os.path.join(out, label, f"seed{args.seed:03d}")
    written = save_scenario(scenario, dest)
    rel = [os.path.relpath(p, out) for p in written]
    print(f"{label} seed {args.seed}: {scenario.n_steps} steps x {len(rel)} series")
    return _finish(args, out, rel, [args.seed], paths, t0)


def _make_controller(name: str, seed: int):
    from mesbench.bench.controllers import (
        AgentController,
        RandomController,
        ZeroController,
    )

    if name == "zero":
        return ZeroController()
    if name == "random":
        return RandomController(seed=seed)
    if not os.path.isfile(name):
        raise UsageError(
            f"controller must be 'zero', 'random', or a checkpoint path; "
            f"got {name!r}"
        )
    from mesbench.rl import load_agent

    agent = load_agent(name)
    stem = os.path.splitext(os.path.basename(name))[0]
    return AgentController(agent, name=stem)


def cmd_simulate(args) -> int:
    from mesbench.model.presets import STEPS_PER_WEEK

    t0 = time.perf_counter()
    label = _case_label(args.case)
    cp, paths = _settings(label, args.config)
    weeks = _pick(args.weeks, cp, "bench", "weeks", int)
    start_week = _pick(args.start_week, cp, "bench", "start_week", int)
    controller = _make_controller(args.controller, args.seed)
    out = _out_dir(args, "simulate")

    cfg, scenario = _load_case(label, args.seed)
    n = weeks * STEPS_PER_WEEK
    start = start_week * STEPS_PER_WEEK
    if start < 0 or start + n > scenario.n_steps:
        raise UsageError(
            f"window [{start}, {start + n}) exceeds scenario "
            f"of {scenario.n_steps} steps"
        )
    records = _rollout(controller, cfg, scenario, start, n, args.soc)
    _write_text(os.path.join(out, "trajectory.csv"), _trajectory_csv(cfg, records))
    summary = _summary_json(cfg, records)
    _write_text(os.path.join(out, "summary.json"), summary)
    obj = json.loads(summary)["objective"]
    print(f"{controller.name} on {label}: J = {obj:.4f} over {n} steps")
    return _finish(
        args, out, ["trajectory.csv", "summary.json"], [args.seed], paths, t0
    )


def cmd_mpc_run(args) -> int:
    import dataclasses

    from mesbench.data.forecast import case_forecast_specs
    from mesbench.model.presets import STEPS_PER_WEEK
    from mesbench.mpc import MpcConfig, receding_horizon_run
    from mesbench.mpc.runner import PERFECT, REALISTIC

    t0 = time.perf_counter()
    label = _case_label(args.case)
    cp, paths = _settings(label, args.config)
    weeks = _pick(args.weeks, cp, "bench", "weeks", int)
    start_week = _pick(args.start_week, cp, "bench", "start_week", int)
    horizon = _pick(args.horizon, cp, "mpc", "horizon", int)
    commit = _pick(args.commit, cp, "mpc", "commit", int)
    max_nodes = _pick(args.max_nodes, cp, "mpc", "max_nodes", int)
    gap_tol = _pick(args.gap_tol, cp, "mpc", "gap_tol", _gap)
    out = _out_dir(args, "mpc-run")

    cfg, scenario = _load_case(label, args.seed)
    if args.model_equals_plant:
        cfg = dataclasses.replace(cfg, linear_plant=True)
    specs = None
    if args.foresight == REALISTIC:
        specs = case_forecast_specs(label, scenario.series(), args.seed)
    mpc_cfg = MpcConfig(
        n_steps=horizon,
        c_steps=commit,
        foresight=PERFECT if args.foresight == PERFECT else REALISTIC,
        forecast_specs=specs,
        max_nodes=max_nodes,
        gap_tol=gap_tol,
    )
    n_steps = args.steps if args.steps is not None else weeks * STEPS_PER_WEEK
    result = receding_horizon_run(
        cfg,
        scenario,
        mpc_cfg,
        n_steps=n_steps,
        start=start_week * STEPS_PER_WEEK,
        soc_frac=args.soc,
        log_path=os.path.join(out, "solve_timing.csv"),
    )
    _write_text(
        os.path.join(out, "trajectory.csv"), _trajectory_csv(cfg, result.records)
    )
    _write_text(os.path.join(out, "summary.json"), _summary_json(cfg, result.records))
    worst = max(s.wall_s for s in result.solves)
    print(
        f"{args.foresight} planner on {label}: J = {result.objective:.4f}, "
        f"{len(result.solves)} solves, worst {worst:.2f} s"
    )
    files = ["trajectory.csv", "summary.json", "solve_timing.csv"]
    return _finish(args, out, files, [args.seed], paths, t0)


def cmd_train(args) -> int:
    from mesbench.bench.curves import LearningCurve, curve_csv, train_with_curve
    from mesbench.rl import save_agent

    t0 = time.perf_counter()
    label = _case_label(args.case)
    cp, paths = _settings(label, args.config)
    steps = _pick(args.steps, cp, "train", "steps", int)
    eval_every = _pick(args.eval_every, cp, "train", "eval_every", int)
    tau = _pick(args.tau, cp, "train", "tau", int)
    out = _out_dir(args, "train")

    grid, returns, agent = train_with_curve(
        args.agent,
        label,
        steps,
        eval_every,
        args.seed,
        scenario_seed=args.scenario_seed,
        tau=tau,
    )
    save_agent(agent, os.path.join(out, "checkpoint.npz"))
    curve = LearningCurve(
        agent_kind=args.agent,
        case_label=label,
        steps=grid,
        returns=(returns,),
        seeds=(args.seed,),
    )
    _write_text(os.path.join(out, "curve.csv"), curve_csv(curve))
    print(
        f"{args.agent} on {label}, seed {args.seed}: {agent.env_steps} env steps, "
        f"eval return {returns[0]:.1f} -> {returns[-1]:.1f}"
    )
    files = ["checkpoint.npz", "curve.csv"]
    return _finish(args, out, files, [args.seed, args.scenario_seed], paths, t0)


def cmd_evaluate(args) -> int:
    from mesbench.bench.curves import EVAL_WEEKS, evaluate_policy
    from mesbench.model.presets import STEPS_PER_WEEK
    from mesbench.rl import MesEnv, load_agent

    t0 = time.perf_counter()
    if not os.path.isfile(args.ckpt):
        raise UsageError(f"checkpoint not found: {args.ckpt}")
    agent = load_agent(args.ckpt)
    label = agent.spec.case_label
    _, paths = _settings(label, args.config)
    out = _out_dir(args, "evaluate")

    cfg, scenario = _load_case(label, args.scenario_seed)
    env = MesEnv(cfg, scenario, agent.spec)
    weeks = tuple(args.weeks) if args.weeks else EVAL_WEEKS
    lines = ["week,eval_return"]
    total = 0.0
    for w in weeks:
        r = evaluate_policy(agent, env, week_starts=[w * STEPS_PER_WEEK])
        lines.append(f"{w},{float(r)!r}")
        total += r
    _write_text(os.path.join(out, "eval.csv"), "\n".join(lines) + "\n")
    print(
        f"{agent.algo} checkpoint on {label}: mean eval return "
        f"{total / len(weeks):.1f} over weeks {list(weeks)}"
    )
    return _finish(args, out, ["eval.csv"], [args.scenario_seed], paths, t0)


def cmd_benchmark(args) -> int:
    from mesbench.bench import (
        report_csv,
        report_text,
        run_benchmark,
        timing_csv,
    )

    t0 = time.perf_counter()
    label = _case_label(args.case)
    cp, paths = _settings(label, args.config)
    weeks = _pick(args.weeks, cp, "bench", "weeks", int)
    n_seeds = _pick(args.seeds, cp, "bench", "seeds", int)
    start_week = _pick(args.start_week, cp, "bench", "start_week", int)
    out = _out_dir(args, "benchmark")

    extra = [_make_controller(p, args.seed) for p in args.ckpt]
    report = run_benchmark(
        label,
        controllers=extra or None,
        weeks=weeks,
        seeds=tuple(range(args.seed, args.seed + n_seeds)),
        start_week=start_week,
        jobs=args.jobs,
    )
    _write_text(os.path.join(out, "report.csv"), report_csv(report))
    _write_text(os.path.join(out, "report_timing.csv"), timing_csv(report))
    text = report_text(report)
    _write_text(os.path.join(out, "report.txt"), text)
    print(text, end="")
    files = ["report.csv", "report_timing.csv", "report.txt"]
    return _finish(args, out, files, report.seeds, paths, t0)


#: default search spaces; field names match the agents' hyper dataclasses
HPO_SPACES = {
    "ppo": {
        "learning_rate": ("log", 1e-5, 1e-2),
        "ent_coef": ("log", 1e-8, 1e-2),
        "gamma": ("choice", (0.9, 0.95, 0.99)),
    },
    "td3": {
        "learning_rate": ("log", 1e-5, 1e-2),
        "noise_std": ("uniform", 0.05, 0.5),
        "gamma": ("choice", (0.9, 0.95, 0.99)),
    },
}


def cmd_hpo(args) -> int:
    from mesbench.bench import HyperSpace, history_csv, random_search

    t0 = time.perf_counter()
    label = _case_label(args.case)
    cp, paths = _settings(label, args.config)
    trials = _pick(args.trials, cp, "hpo", "trials", int)
    budget = _pick(args.train_steps, cp, "hpo", "train_steps", int)
    out = _out_dir(args, "hpo")

    result = random_search(
        args.agent,
        label,
        HyperSpace(HPO_SPACES[args.agent]),
        trials,
        budget,
        seed=args.seed,
        jobs=args.jobs,
    )
    _write_text(os.path.join(out, "history.csv"), history_csv(result))
    best = {"best_params": result.best_params, "best_score": result.best_score}
    _write_text(
        os.path.join(out, "best.json"),
        json.dumps(best, indent=2, sort_keys=True) + "\n",
    )
    print(
        f"{args.agent} on {label}: best score {result.best_score:.1f} "
        f"after {trials} trial(s)"
    )
    return _finish(args, out, ["history.csv", "best.json"], [args.seed], paths, t0)


def _read_csv_columns(path: str) -> dict[str, list]:
    """Header-keyed columns; numeric where possible, strings otherwise."""
    import csv as _csv

    with open(path, newline="") as fh:
        rows = list(_csv.reader(fh))
    if len(rows) < 2:
        raise ValueError(f"{path}: need a header and at least one row")
    head = rows[0]
    cols: dict[str, list] = {h: [] for h in head}
    for row in rows[1:]:
        for h, v in zip(head, row):
            try:
                cols[h].append(float(v))
            except ValueError:
                cols[h].append(v)
    return cols


def cmd_plot(args) -> int:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    t0 = time.perf_counter()
    if not os.path.isfile(args.csv):
        raise UsageError(f"CSV not found: {args.csv}")
    out = _out_dir(args, "plot")
    cols = _read_csv_columns(args.csv)
    name = f"{args.kind}.svg"

    if args.kind == "dispatch":
        needed = [c for c in cols if c.startswith("sp_")]
        if not needed or "t" not in cols:
            raise UsageError(f"{args.csv} is not a trajectory CSV")
        t = [v / 96.0 for v in cols["t"]]  # 15-min steps -> days
        fig, axes = plt.subplots(3, 1, figsize=(9, 7), sharex=True)
        for c in ("obs_e_el", "obs_e_th", "obs_p_wind", "obs_p_solar"):
            if c in cols:
                axes[0].plot(t, [v / 1e6 for v in cols[c]], label=c[4:], lw=0.8)
        axes[0].set_ylabel("demand / renewables [MW]")
        axes[0].legend(fontsize=7, ncol=4)
        for c in needed:
            axes[1].plot(t, [v / 1e6 for v in cols[c]], label=c[3:], lw=0.8)
        axes[1].set_ylabel("setpoints [MW]")
        axes[1].legend(fontsize=7, ncol=3)
        for c in [c for c in cols if c.startswith("soc_")]:
            axes[2].plot(t, [v / 1e6 for v in cols[c]], label=c[4:], lw=0.8)
        axes[2].set_ylabel("storage [MWh]")
        axes[2].set_xlabel("time [days]")
        axes[2].legend(fontsize=7)
    elif args.kind == "curve":
        if "step" not in cols or "mean" not in cols:
            raise UsageError(f"{args.csv} is not a learning-curve CSV")
        fig, ax = plt.subplots(figsize=(7, 4.5))
        step, mean = cols["step"], cols["mean"]
        ax.plot(step, mean, marker="o", ms=3, label="mean")
        if "std" in cols:
            lo = [m - s for m, s in zip(mean, cols["std"])]
            hi = [m + s for m, s in zip(mean, cols["std"])]
            ax.fill_between(step, lo, hi, alpha=0.25, label="±1 std")
        for c in cols:
            if c.startswith("seed"):
                ax.plot(step, cols[c], lw=0.6, alpha=0.6)
        ax.set_xlabel("environment steps")
        ax.set_ylabel("evaluation return")
        ax.legend(fontsize=8)
    else:  # argparse choices already guard this
        raise UsageError(f"unknown plot kind {args.kind!r}")

    fig.tight_layout()
    fig.savefig(os.path.join(out, name), format="svg")
    plt.close(fig)
    print(f"rendered {name} from {args.csv}")
    return _finish(args, out, [name], [], [], t0)


# ---------------------------------------------------------------------------
# parser / dispatch


class _Parser(argparse.ArgumentParser):
    """argparse with the documented exit code for usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p, case: bool = True):
    if case:
        p.add_argument(
            "--case",
            default="case1",
            help="study case: case1/simple or case2/complex (default case1)",
        )
    p.add_argument("--config", default=None, help="INI file overriding the preset")
    p.add_argument("--seed", type=int, default=0, help="base random seed")
    p.add_argument("--out", default=None, help="output directory (default runs/<cmd>)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="mesbench",
        description="multi-energy dispatch benchmark: planners vs learned agents",
    )
    ap.add_argument("--version", action="version", version=f"mesbench {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("data-gen", help="emit one case/seed's scenario CSVs")
    _add_common(p)
    p.set_defaults(func=cmd_data_gen)

    p = sub.add_parser("simulate", help="run one controller over one window")
    _add_common(p)
    p.add_argument(
        "--controller",
        default="zero",
        help="'zero', 'random', or a checkpoint .npz path",
    )
    p.add_argument("--weeks", type=int, default=None)
    p.add_argument("--start-week", type=int, default=None)
    p.add_argument("--soc", type=float, default=0.5, help="initial storage fraction")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mpc-run", help="closed-loop receding-horizon planner run")
    _add_common(p)
    p.add_argument("--foresight", choices=("perfect", "realistic"), default="perfect")
    p.add_argument("--weeks", type=int, default=None)
    p.add_argument("--start-week", type=int, default=None)
    p.add_argument("--steps", type=int, default=None,
                   help="run length in steps (overrides --weeks)")
    p.add_argument(
        "--model-equals-plant",
        action="store_true",
        help="run the plant with flat efficiencies and no derating, "
        "matching the planner's linear model exactly",
    )
    p.add_argument("--soc", type=float, default=0.5)
    p.add_argument("--horizon", type=int, default=None, help="prediction steps N")
    p.add_argument("--commit", type=int, default=None, help="applied steps C per solve")
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--gap-tol", type=_gap, default=None)
    p.set_defaults(func=cmd_mpc_run)

    p = sub.add_parser("train", help="train an agent; checkpoint + learning curve")
    p.add_argument("agent", choices=("ppo", "td3"))
    _add_common(p)
    p.add_argument("--steps", type=int, default=None, help="environment-step budget")
    p.add_argument("--eval-every", type=int, default=None)
    p.add_argument("--tau", type=int, default=None, help="levels per discrete dim")
    p.add_argument("--scenario-seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="deterministic eval of a saved checkpoint")
    p.add_argument("--ckpt", required=True, help="checkpoint .npz path")
    p.add_argument("--config", default=None)
    p.add_argument("--scenario-seed", type=int, default=0)
    p.add_argument("--weeks", type=int, nargs="*", default=None, help="week indices")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("benchmark", help="all controllers, multi-seed report")
    _add_common(p)
    p.add_argument("--weeks", type=int, default=None)
    p.add_argument("--seeds", type=int, default=None, help="number of seeds")
    p.add_argument("--start-week", type=int, default=None)
    p.add_argument(
        "--ckpt",
        action="append",
        default=[],
        help="agent checkpoint to include (repeatable)",
    )
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("hpo", help="random hyper-parameter search")
    p.add_argument("agent", choices=("ppo", "td3"))
    _add_common(p)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--train-steps", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_hpo)

    p = sub.add_parser("plot", help="SVG figure from a previously written CSV")
    p.add_argument("kind", choices=("dispatch", "curve"))
    p.add_argument("--csv", required=True, help="input CSV")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_plot)

    return ap


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage/help
        return int(exc.code or 0)
    args._argv = ["mesbench"] + argv
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"mesbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        print(f"mesbench: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
