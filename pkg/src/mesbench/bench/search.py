"""Random hyper-parameter search with a held-out evaluation score.

Each trial draws one candidate from the space (log-uniform, uniform, or
categorical per field), trains a fresh agent for the trial budget, and
scores it by the deterministic-policy return on the fixed evaluation
weeks.  Failures are recorded and skipped, never fatal.  The history keeps
a best-so-far column, monotone by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from mesbench.bench.curves import (
    case_action_mode,
    case_hyper,
    evaluate_policy,
    make_agent,
)
from mesbench.data.scenario import make_scenario
from mesbench.model.presets import case_config, with_default_weights
from mesbench.rl import MesEnv, make_env_spec

LOG_UNIFORM = "log"
UNIFORM = "uniform"
CHOICE = "choice"


@dataclass(frozen=True)
class HyperSpace:
    """Per-field sampling ranges over an agent's hyper dataclass.

    ``fields`` maps a hyper-parameter name to a spec tuple:
    ("log", lo, hi) or ("uniform", lo, hi) with lo < hi, or
    ("choice", (options...)) with at least one option.
    """

    fields: dict

    def __post_init__(self):
        if not self.fields:
            raise ValueError("empty search space")
        for name, spec in self.fields.items():
            kind = spec[0]
            if kind in (LOG_UNIFORM, UNIFORM):
                _, lo, hi = spec
                if not lo < hi:
                    raise ValueError(f"{name}: need lo < hi, got {spec}")
                if kind == LOG_UNIFORM and lo <= 0:
                    raise ValueError(f"{name}: log range needs lo > 0")
            elif kind == CHOICE:
                if not spec[1]:
                    raise ValueError(f"{name}: no options")
            else:
                raise ValueError(f"{name}: unknown spec kind {kind!r}")

    def sample(self, rng: np.random.Generator) -> dict:
        draw = {}
        for name, spec in self.fields.items():
            kind = spec[0]
            if kind == LOG_UNIFORM:
                draw[name] = float(
                    np.exp(rng.uniform(np.log(spec[1]), np.log(spec[2])))
                )
            elif kind == UNIFORM:
                draw[name] = float(rng.uniform(spec[1], spec[2]))
            else:
                options = spec[1]
                draw[name] = options[int(rng.integers(0, len(options)))]
        return draw


@dataclass(frozen=True)
class Trial:
    index: int
    params: dict
    score: float | None  # eval return; None if the trial failed
    best: float  # best score so far (NaN until one succeeds)
    error: str | None


@dataclass(frozen=True)
class SearchResult:
    best_params: dict | None
    best_score: float
    trials: tuple[Trial, ...]


def _run_trial(
    agent_kind: str,
    case_label: str,
    params: dict,
    train_budget: int,
    agent_seed: int,
    scenario_seed: int,
    tau: int,
):
    """One draw trained and scored from scratch; returns score or error text."""
    cfg = case_config(case_label)
    scenario = make_scenario(scenario_seed, cfg.grid, case_label)
    cfg = with_default_weights(cfg, scenario.x_el.values)
    spec = make_env_spec(
        cfg, scenario, case_action_mode(agent_kind, case_label), tau
    )
    try:
        hyper = replace(case_hyper(agent_kind, case_label), **params)
        agent = make_agent(agent_kind, spec, agent_seed, hyper)
        if train_budget > 0:
            agent.train(
                MesEnv(cfg, scenario, spec), train_budget, env_seed=agent_seed
            )
        return evaluate_policy(agent, MesEnv(cfg, scenario, spec))
    except Exception as exc:
        return f"{type(exc).__name__}: {exc}"


def random_search(
    agent_kind: str,
    case_label: str,
    space: HyperSpace,
    trials: int,
    train_budget: int,
    seed: int = 0,
    scenario_seed: int = 0,
    agent_seed: int = 0,
    tau: int = 5,
    jobs: int = 1,
) -> SearchResult:
    """Draw, train, score, repeat; returns the best draw and full history.

    All draws come from one generator up front, so the candidate list --
    and hence the whole history -- is the same whether trials run
    sequentially or across ``jobs`` worker processes.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    draws = [space.sample(rng) for _ in range(trials)]

    if jobs > 1 and trials > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(jobs, trials)) as pool:
            outcomes = list(
                pool.map(
                    _run_trial,
                    [agent_kind] * trials,
                    [case_label] * trials,
                    draws,
                    [train_budget] * trials,
                    [agent_seed] * trials,
                    [scenario_seed] * trials,
                    [tau] * trials,
                )
            )
    else:
        outcomes = [
            _run_trial(
                agent_kind, case_label, params, train_budget,
                agent_seed, scenario_seed, tau,
            )
            for params in draws
        ]

    history: list[Trial] = []
    best_params, best_score = None, float("-inf")
    for i, (params, got) in enumerate(zip(draws, outcomes)):
        if isinstance(got, str):
            history.append(Trial(i, params, None, best_score, got))
            continue
        if got > best_score:
            best_params, best_score = params, got
        history.append(Trial(i, params, got, best_score, None))
    return SearchResult(
        best_params=best_params, best_score=best_score, trials=tuple(history)
    )


def history_csv(result: SearchResult) -> str:
    """trial, each searched field, score, best_so_far, error."""
    names = sorted({k for t in result.trials for k in t.params})
    head = "trial," + ",".join(names) + ",score,best_so_far,error"
    lines = [head]
    for t in result.trials:
        vals = ",".join(repr(t.params.get(n, "")) for n in names)
        score = "" if t.score is None else repr(t.score)
        best = "" if t.best == float("-inf") else repr(t.best)
        err = "" if t.error is None else t.error.replace(",", ";")
        lines.append(f"{t.index},{vals},{score},{best},{err}")
    return "\n".join(lines) + "\n"
