"""The plant's one-step transition and episode driver.

Dispatch ordering within a step is fixed: renewables, controllable
converters, the simple case's heat-following boiler, storages, then the
electric balance closes through the grid at the day-ahead price and the
gas balance through the gas connection at the gas price.  Any thermal
mismatch that remains becomes discomfort — heat has no grid to fall back
on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from mesbench.data.scenario import ExogenousFrame, Scenario
from mesbench.model.actions import controllable_channels, project_action
from mesbench.model.types import (
    STORAGE_KINDS,
    AssetKind,
    AssetSpec,
    Carrier,
    ControlAction,
    LossTerms,
    MesConfig,
    Observation,
    RewardWeights,
    SystemState,
)
from mesbench.plant.assets import (
    converter_step,
    pv_power,
    storage_step,
    wind_power,
)

#: tolerance for SoC bound violations on entry [J]
_SOC_SLACK = 1e-9


class StateError(ValueError):
    """The incoming state violates a physical bound (SoC outside store)."""


@dataclass(frozen=True)
class AssetFlows:
    """Realized power of one asset in one step, by carrier."""

    inputs: Mapping[Carrier, float] = field(default_factory=dict)
    outputs: Mapping[Carrier, float] = field(default_factory=dict)


@dataclass(frozen=True)
class StepResult:
    next: SystemState
    loss: LossTerms
    dispatch: Mapping[str, AssetFlows]
    grid_import_el: float  # W, positive = import, negative = export
    gas_consumed: float  # W


@dataclass(frozen=True)
class StepRecord:
    """One trajectory row: the state a controller saw and what followed."""

    state: SystemState
    action: ControlAction
    loss: LossTerms
    dispatch: Mapping[str, AssetFlows]
    grid_import_el: float
    gas_consumed: float


def initial_state(
    cfg: MesConfig,
    scenario: Scenario,
    cursor: int = 0,
    soc_frac: Mapping[str, float] | float = 0.5,
) -> SystemState:
    """State at grid index ``cursor`` with storages at the given fill level."""
    soc = {}
    for a in cfg.storages:
        frac = soc_frac if isinstance(soc_frac, (int, float)) else soc_frac[a.id]
        soc[a.id] = float(frac) * a.e_nom
    return SystemState(
        t_index=0,
        cursor=cursor,
        obs=observe(cfg, scenario.frame(cursor), 0.0),
        soc=soc,
    )


def observe(cfg: MesConfig, exo: ExogenousFrame, c_e: float) -> Observation:
    """Controller-facing observation: demands, *electric* in-feeds, cost, price."""
    p_wind = sum(wind_power(exo.wind_speed, a) for a in cfg.by_kind(AssetKind.WIND))
    p_solar = sum(pv_power(exo.irradiance, a) for a in cfg.by_kind(AssetKind.PV))
    return Observation(
        e_th=exo.e_th_demand,
        e_el=exo.e_el_demand,
        p_wind=p_wind,
        p_solar=p_solar,
        c_e=c_e,
        x_el=exo.x_el,
    )


def _snap_min_load(v: float, p_min: float, p_max: float) -> float:
    if v < 0.5 * p_min or v <= 0.0:
        return 0.0
    if v < p_min:
        return p_min
    return min(v, p_max)


def step(
    state: SystemState,
    action: ControlAction,
    exo: ExogenousFrame,
    cfg: MesConfig,
    exo_next: ExogenousFrame | None = None,
) -> StepResult:
    """Advance the plant one step under an already-projected action.

    ``exo_next`` feeds the returned state's observation; when omitted (end
    of data) the outgoing observation keeps the current frame's values.
    """
    for a in cfg.storages:
        s = state.soc.get(a.id, 0.0)
        if s < -_SOC_SLACK or s > a.e_nom + _SOC_SLACK:
            raise StateError(f"{a.id}: SoC {s} J outside [0, {a.e_nom}] J")

    kappa = 0.0 if cfg.linear_plant else None
    derate = not cfg.linear_plant
    dt = cfg.grid.step_s
    dt_h = cfg.grid.step_h
    simple = cfg.case_label == "simple"

    dispatch: dict[str, AssetFlows] = {}
    prod_el = 0.0
    cons_el = exo.e_el_demand
    heat = 0.0
    gas = 0.0

    # (1) renewables
    for a in cfg.by_kind(AssetKind.WIND):
        p = wind_power(exo.wind_speed, a)
        dispatch[a.id] = AssetFlows(outputs={Carrier.ELECTRICITY: p})
        prod_el += p
    for a in cfg.by_kind(AssetKind.PV):
        p = pv_power(exo.irradiance, a)
        dispatch[a.id] = AssetFlows(outputs={Carrier.ELECTRICITY: p})
        prod_el += p

    # (2) controllable converters
    channels = controllable_channels(cfg)
    per_asset: dict[str, dict[Carrier, float]] = {}
    for ch in channels:
        a = cfg.asset(ch.asset_id)
        if a.kind in STORAGE_KINDS:
            continue
        per_asset.setdefault(ch.asset_id, {})[ch.carrier] = action.get(ch.key, 0.0)
    for asset_id, setpoints in per_asset.items():
        a = cfg.asset(asset_id)
        outputs, fuel = converter_step(a, setpoints, kappa=kappa)
        flows_in = {a.inputs[0]: fuel}
        dispatch[asset_id] = AssetFlows(inputs=flows_in, outputs=outputs)
        heat += outputs.get(Carrier.HEAT, 0.0)
        prod_el += outputs.get(Carrier.ELECTRICITY, 0.0)
        if a.inputs[0] is Carrier.NATURAL_GAS:
            gas += fuel
        else:
            cons_el += fuel

    # (3) heat-following boiler (simple case only)
    if simple:
        for a in cfg.by_kind(AssetKind.BOILER):
            p_nom = a.p_nom(Carrier.HEAT)
            want = min(max(exo.e_th_demand - heat, 0.0), p_nom)
            want = _snap_min_load(want, a.p_min_frac * p_nom, p_nom)
            outputs, fuel = converter_step(a, {Carrier.HEAT: want}, kappa=kappa)
            dispatch[a.id] = AssetFlows(
                inputs={Carrier.NATURAL_GAS: fuel}, outputs=outputs
            )
            heat += outputs[Carrier.HEAT]
            gas += fuel

    # (4) storages
    new_soc = dict(state.soc)
    for a in cfg.storages:
        soc, realized = storage_step(
            state.soc.get(a.id, 0.0), action.get(a.id, 0.0), dt, a, derate=derate
        )
        new_soc[a.id] = soc
        carrier = a.outputs[0][0]
        if realized >= 0.0:
            dispatch[a.id] = AssetFlows(outputs={carrier: realized})
        else:
            dispatch[a.id] = AssetFlows(inputs={carrier: -realized})
        if carrier is Carrier.ELECTRICITY:
            if realized >= 0.0:
                prod_el += realized
            else:
                cons_el += -realized
        else:
            heat += realized  # signed: discharge adds, charge removes

    # (5) electric balance via the grid connection
    grid_import = cons_el - prod_el
    grid_el = cfg.by_kind(AssetKind.GRID_ELECTRIC)[0]
    if grid_import >= 0.0:
        dispatch[grid_el.id] = AssetFlows(outputs={Carrier.ELECTRICITY: grid_import})
    else:
        dispatch[grid_el.id] = AssetFlows(inputs={Carrier.ELECTRICITY: -grid_import})

    # (6) gas balance via the gas connection
    grid_gas = cfg.by_kind(AssetKind.GRID_GAS)[0]
    dispatch[grid_gas.id] = AssetFlows(outputs={Carrier.NATURAL_GAS: gas})

    # (7) losses
    l_cost = (grid_import * exo.x_el + gas * cfg.gas_price) * dt_h
    l_comfort = abs(exo.e_th_demand - heat) * dt_h  # Wh
    loss = LossTerms(l_cost=l_cost, l_comfort=l_comfort, q_produced=heat)

    c_e = state.obs.c_e + l_cost
    next_obs = (
        observe(cfg, exo_next, c_e)
        if exo_next is not None
        else observe(cfg, exo, c_e)
    )
    next_state = SystemState(
        t_index=state.t_index + 1,
        cursor=state.cursor + 1,
        obs=next_obs,
        soc=new_soc,
    )
    return StepResult(
        next=next_state,
        loss=loss,
        dispatch=dispatch,
        grid_import_el=grid_import,
        gas_consumed=gas,
    )


def run_episode(
    controller: Callable[[Observation], ControlAction],
    start: SystemState,
    n: int,
    scenario: Scenario,
    cfg: MesConfig,
) -> list[StepRecord]:
    """Run ``n`` steps, projecting every controller output before applying."""
    if start.cursor + n > scenario.n_steps:
        raise IndexError(
            f"episode [{start.cursor}, {start.cursor + n}) exceeds scenario "
            f"of {scenario.n_steps} steps"
        )
    trajectory: list[StepRecord] = []
    state = start
    for _ in range(n):
        act = project_action(cfg, controller(state.obs))
        exo = scenario.frame(state.cursor)
        has_next = state.cursor + 1 < scenario.n_steps
        exo_next = scenario.frame(state.cursor + 1) if has_next else None
        res = step(state, act, exo, cfg, exo_next=exo_next)
        trajectory.append(
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
    return trajectory


def episode_objective(
    trajectory: list[StepRecord], weights: RewardWeights
) -> float:
    """J = Σ a·l_cost + b·l_comfort over the trajectory (lower is better)."""
    return sum(
        weights.a * r.loss.l_cost + weights.b * r.loss.l_comfort for r in trajectory
    )
