"""Linear MILP model of a MesConfig over a dispatch horizon.

The model is the plant at kappa = 0 with derating disabled: flat
conversion efficiencies, storage linking SoC_{t+1} = SoC_t +
(eta_c * ch - dis / eta_d) * dt, and one hard equality balance per carrier
per step.  Heat in particular is balanced exactly -- the dispatcher treats
comfort as a constraint, not a loss term.  When a horizon turns out
thermally infeasible the run loop rebuilds it with ``heat_slack=True``,
which adds shortfall/surplus slack priced at ten times the comfort weight.

Internally everything is scaled to MW / MWh / currency-per-MWh (the rest
of the package is W / J / currency-per-Wh); the index map converts back on
extraction.  Charge, discharge, import and export carry a tiny tie-break
cost so the optimizer never parks on a degenerate co-flow (charging while
discharging, importing while exporting) that a single signed plant
setpoint cannot express.  Reported objectives always use the undistorted
economic cost vector, not the tie-broken one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from mesbench.data.forecast import RangeError
from mesbench.milp.problem import CrashHint, LpBuilder, MilpProblem
from mesbench.model.actions import STORAGE, controllable_channels
from mesbench.model.types import (
    CONVERTER_KINDS,
    GRID_KINDS,
    RENEWABLE_KINDS,
    STORAGE_KINDS,
    AssetKind,
    AssetSpec,
    Carrier,
    ConfigError,
    ControlAction,
    MesConfig,
    SystemState,
)
from mesbench.plant.assets import CHP_Q_SLACK, pv_power, wind_power

MW = 1.0e6  # W
MWH = 3.6e9  # J

#: the exogenous series a horizon needs, by name
SERIES_NAMES = ("e_th_demand", "e_el_demand", "wind_speed", "irradiance", "x_el")

#: co-flow tie-break, currency/MWh.  Large against solver tolerances
#: (1e-7), negligible against energy prices (tens of currency/MWh).
TIE_BREAK_MWH = 1.0e-4

#: heat-slack price on retry builds: this multiple of the comfort weight
SLACK_PRICE_FACTOR = 10.0


@dataclass(frozen=True)
class VarMap:
    """Column layout of a built horizon problem.

    All index arrays have shape (n_steps,).  ``out`` and ``on`` are keyed
    by (asset id, carrier value); ``on`` only holds converters with a
    minimum stable load (the ones that got a binary).  ``soc[a][t]`` is
    the column of the state of charge *after* step t, in MWh.
    ``true_cost`` is the economic cost vector -- the objective without
    tie-breaks and slack penalties -- so reported objectives are exact.
    """

    n_steps: int
    dt_h: float
    out: Mapping[tuple[str, str], np.ndarray]
    on: Mapping[tuple[str, str], np.ndarray]
    charge: Mapping[str, np.ndarray]
    discharge: Mapping[str, np.ndarray]
    soc: Mapping[str, np.ndarray]
    grid_import: np.ndarray
    grid_export: np.ndarray
    gas: np.ndarray
    heat_slack_pos: np.ndarray | None
    heat_slack_neg: np.ndarray | None
    crash: CrashHint
    true_cost: np.ndarray

    def true_objective(self, x: np.ndarray) -> float:
        """Economic cost of a solution vector, currency."""
        return float(self.true_cost @ x)


def _check_supported(cfg: MesConfig) -> None:
    bad: list[str] = []
    if not cfg.by_kind(AssetKind.GRID_ELECTRIC):
        bad.append("no grid_electric asset to close the electric balance")
    if not cfg.by_kind(AssetKind.GRID_GAS):
        bad.append("no grid_gas asset to close the gas balance")
    for a in cfg.assets:
        if a.kind in RENEWABLE_KINDS or a.kind in GRID_KINDS:
            continue
        if a.kind in STORAGE_KINDS:
            if a.outputs[0][0] not in (Carrier.ELECTRICITY, Carrier.HEAT):
                bad.append(f"{a.id}: cannot model a {a.outputs[0][0].value} store")
        elif a.kind in CONVERTER_KINDS:
            if a.inputs[0] not in (Carrier.NATURAL_GAS, Carrier.ELECTRICITY):
                bad.append(f"{a.id}: unsupported input carrier {a.inputs[0].value}")
            for carrier, _ in a.outputs:
                if carrier not in a.eta.nominal:
                    bad.append(f"{a.id}: missing efficiency for {carrier.value}")
        else:
            bad.append(f"{a.id}: unsupported asset kind {a.kind.value}")
    if bad:
        raise ConfigError(bad)


def _renewable_infeed(cfg: MesConfig, speed: np.ndarray, irr: np.ndarray):
    """Non-controllable electric in-feed per step, MW."""
    n = speed.size
    wind = np.zeros(n)
    solar = np.zeros(n)
    for a in cfg.by_kind(AssetKind.WIND):
        wind += np.array([wind_power(float(s), a) for s in speed])
    for a in cfg.by_kind(AssetKind.PV):
        solar += np.array([pv_power(float(g), a) for g in irr])
    return wind / MW, solar / MW


def build_problem(
    cfg: MesConfig,
    forecasts: Mapping[str, np.ndarray],
    x0: SystemState | Mapping[str, float],
    n_steps: int,
    *,
    heat_slack: bool = False,
) -> tuple[MilpProblem, VarMap]:
    """Assemble the horizon MILP for ``n_steps`` steps.

    ``forecasts`` maps the five series names to arrays of at least
    ``n_steps`` values in plant units (W, W/m², m/s, currency/Wh).  ``x0``
    provides the measured storage contents (a SystemState, or a plain
    asset-id -> J mapping); it enters only the t=0 SoC linking rows as a
    constant.  Returns the problem plus the column map, whose crash hint
    starts the simplex from the boiler-led, storage-idle dispatch.
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    _check_supported(cfg)
    missing = [s for s in SERIES_NAMES if s not in forecasts]
    if missing:
        raise ValueError(f"forecasts missing series {missing}")
    series = {s: np.asarray(forecasts[s], dtype=np.float64) for s in SERIES_NAMES}
    for name, arr in series.items():
        if arr.ndim != 1 or arr.size < n_steps:
            raise RangeError(
                f"forecast {name!r} covers {arr.size} steps, horizon needs {n_steps}"
            )
    soc_map = x0.soc if isinstance(x0, SystemState) else x0

    n = n_steps
    dt_h = cfg.grid.step_h
    simple = cfg.case_label == "simple"
    e_th = series["e_th_demand"][:n] / MW
    e_el = series["e_el_demand"][:n] / MW
    price = series["x_el"][:n] * MW  # currency/Wh -> currency/MWh
    gas_price = cfg.gas_price * MW
    wind_mw, solar_mw = _renewable_infeed(
        cfg, series["wind_speed"][:n], series["irradiance"][:n]
    )
    slack_price = SLACK_PRICE_FACTOR * cfg.reward_weights.b * MW * dt_h

    b = LpBuilder()
    out: dict[tuple[str, str], np.ndarray] = {}
    on: dict[tuple[str, str], np.ndarray] = {}
    charge: dict[str, np.ndarray] = {}
    discharge: dict[str, np.ndarray] = {}
    soc: dict[str, np.ndarray] = {}
    converters = [a for a in cfg.assets if a.kind in CONVERTER_KINDS]
    storages = cfg.storages
    for a in converters:
        if simple and a.kind is AssetKind.CHP:
            for carrier, _ in a.outputs:
                out[(a.id, carrier.value)] = np.empty(n, dtype=np.int64)
                on[(a.id, carrier.value)] = np.empty(n, dtype=np.int64)
        else:
            carrier = _primary_carrier(a)
            out[(a.id, carrier.value)] = np.empty(n, dtype=np.int64)
            if a.p_min_frac > 0.0:
                on[(a.id, carrier.value)] = np.empty(n, dtype=np.int64)
    for a in storages:
        charge[a.id] = np.empty(n, dtype=np.int64)
        discharge[a.id] = np.empty(n, dtype=np.int64)
        soc[a.id] = np.empty(n, dtype=np.int64)
    grid_import = np.empty(n, dtype=np.int64)
    grid_export = np.empty(n, dtype=np.int64)
    gas = np.empty(n, dtype=np.int64)
    slack_pos = np.empty(n, dtype=np.int64) if heat_slack else None
    slack_neg = np.empty(n, dtype=np.int64) if heat_slack else None

    imp_cap = cfg.by_kind(AssetKind.GRID_ELECTRIC)[0].outputs[0][1] / MW
    gas_cap = cfg.by_kind(AssetKind.GRID_GAS)[0].outputs[0][1] / MW

    crash_cols: list[int] = []
    crash_upper: list[int] = []

    for t in range(n):
        elec: list[tuple[int, float]] = []  # + production, - consumption
        heat: list[tuple[int, float]] = []
        fuel: list[tuple[int, float]] = []  # gas drawn, MW
        extra_rows: list[tuple[list[tuple[int, float]], str, float]] = []
        boiler_col = -1

        for a in converters:
            if simple and a.kind is AssetKind.CHP:
                p_col, q_col = _add_chp_pq(b, a, t, out, on, extra_rows)
                elec.append((p_col, 1.0))
                heat.append((q_col, 1.0))
                fuel.append((p_col, 1.0 / a.eta.nominal[Carrier.ELECTRICITY]))
                fuel.append((q_col, 1.0 / a.eta.nominal[Carrier.HEAT]))
                continue
            carrier = _primary_carrier(a)
            p_nom = a.p_nom(carrier) / MW
            eta = a.eta.nominal[carrier]
            col = b.add_var(f"{a.id}.q{t}", 0.0, p_nom)
            out[(a.id, carrier.value)][t] = col
            if a.kind is AssetKind.CHP:  # heat-led, electricity follows
                ratio = a.p_nom(Carrier.ELECTRICITY) / a.p_nom(Carrier.HEAT)
                elec.append((col, ratio))
                heat.append((col, 1.0))
                fuel.append(
                    (col, ratio / a.eta.nominal[Carrier.ELECTRICITY] + 1.0 / eta)
                )
            elif a.kind is AssetKind.HEAT_PUMP:
                heat.append((col, 1.0))
                elec.append((col, -1.0 / eta))  # draws q/COP of electricity
            elif a.kind is AssetKind.BOILER:
                heat.append((col, 1.0))
                fuel.append((col, 1.0 / eta))
                boiler_col = col
            else:  # genset
                elec.append((col, 1.0))
                fuel.append((col, 1.0 / eta))
            if a.p_min_frac > 0.0:
                d = b.add_var(f"{a.id}.on{t}", 0.0, 1.0, integer=True)
                on[(a.id, carrier.value)][t] = d
                extra_rows.append(
                    ([(col, 1.0), (d, -a.p_min_frac * p_nom)], ">=", 0.0)
                )
                extra_rows.append(([(col, 1.0), (d, -p_nom)], "<=", 0.0))
                if a.kind is AssetKind.BOILER:
                    crash_upper.append(d)

        for a in storages:
            rate = a.outputs[0][1] / MW
            ch = b.add_var(f"{a.id}.ch{t}", 0.0, rate, cost=TIE_BREAK_MWH * dt_h)
            dis = b.add_var(f"{a.id}.dis{t}", 0.0, rate, cost=TIE_BREAK_MWH * dt_h)
            sc = b.add_var(f"{a.id}.soc{t + 1}", 0.0, a.e_nom / MWH)
            charge[a.id][t], discharge[a.id][t], soc[a.id][t] = ch, dis, sc
            if a.outputs[0][0] is Carrier.ELECTRICITY:
                elec.append((dis, 1.0))
                elec.append((ch, -1.0))
            else:
                heat.append((dis, 1.0))
                heat.append((ch, -1.0))

        imp = b.add_var(f"imp{t}", 0.0, imp_cap, cost=(price[t] + TIE_BREAK_MWH) * dt_h)
        exp = b.add_var(
            f"exp{t}", 0.0, imp_cap, cost=(-price[t] + TIE_BREAK_MWH) * dt_h
        )
        g = b.add_var(f"gas{t}", 0.0, gas_cap, cost=gas_price * dt_h)
        grid_import[t], grid_export[t], gas[t] = imp, exp, g
        elec.append((imp, 1.0))
        elec.append((exp, -1.0))
        fuel.append((g, -1.0))
        if heat_slack:
            sp = b.add_var(f"sh+{t}", 0.0, cost=slack_price)
            sn = b.add_var(f"sh-{t}", 0.0, cost=slack_price)
            slack_pos[t], slack_neg[t] = sp, sn
            heat.append((sp, 1.0))
            heat.append((sn, -1.0))

        rhs_el = e_el[t] - wind_mw[t] - solar_mw[t]
        b.add_row(elec, "=", rhs_el)
        crash_cols.append(imp if rhs_el >= 0.0 else exp)
        b.add_row(heat, "=", e_th[t])
        if boiler_col >= 0:
            crash_cols.append(boiler_col)
        elif heat_slack:
            crash_cols.append(slack_pos[t])
        else:
            crash_cols.append(heat[0][0] if heat else -1)
        b.add_row(fuel, "=", 0.0)
        crash_cols.append(g)
        for a in storages:
            coeffs = [
                (soc[a.id][t], 1.0),
                (charge[a.id][t], -a.eta.charge * dt_h),
                (discharge[a.id][t], dt_h / a.eta.discharge),
            ]
            rhs = 0.0
            if t == 0:
                rhs = float(soc_map.get(a.id, 0.0)) / MWH
            else:
                coeffs.append((soc[a.id][t - 1], -1.0))
            b.add_row(coeffs, "=", rhs)
            crash_cols.append(soc[a.id][t])
        for coeffs, sense, rhs in extra_rows:
            b.add_row(coeffs, sense, rhs)
            crash_cols.append(-1)

    problem = b.build_milp()
    true_cost = np.zeros(problem.base.n_vars)
    true_cost[gas] = gas_price * dt_h
    true_cost[grid_import] = price * dt_h
    true_cost[grid_export] = -price * dt_h
    vmap = VarMap(
        n_steps=n,
        dt_h=dt_h,
        out=out,
        on=on,
        charge=charge,
        discharge=discharge,
        soc=soc,
        grid_import=grid_import,
        grid_export=grid_export,
        gas=gas,
        heat_slack_pos=slack_pos,
        heat_slack_neg=slack_neg,
        crash=CrashHint(
            basic_cols=np.asarray(crash_cols, dtype=np.int64),
            at_upper=np.asarray(crash_upper, dtype=np.int64),
        ),
        true_cost=true_cost,
    )
    return problem, vmap


def _primary_carrier(a: AssetSpec) -> Carrier:
    """The carrier a single-setpoint converter is dispatched on."""
    return Carrier.HEAT if a.kind is AssetKind.CHP else a.outputs[0][0]


def _add_chp_pq(b, a, t, out, on, extra_rows):
    """Variables and coupling rows of a PQ-dispatched (two-setpoint) CHP.

    Mirrors the plant's feasible region exactly: electricity is
    semi-continuous, heat is semi-continuous and only available while the
    electric side runs, and heat is capped by the coupling line
    q <= (q_nom/p_nom) p + slack.
    """
    p_nom = a.p_nom(Carrier.ELECTRICITY) / MW
    q_nom = a.p_nom(Carrier.HEAT) / MW
    p = b.add_var(f"{a.id}.p{t}", 0.0, p_nom)
    q = b.add_var(f"{a.id}.q{t}", 0.0, q_nom)
    dp = b.add_var(f"{a.id}.onp{t}", 0.0, 1.0, integer=True)
    dq = b.add_var(f"{a.id}.onq{t}", 0.0, 1.0, integer=True)
    out[(a.id, Carrier.ELECTRICITY.value)][t] = p
    out[(a.id, Carrier.HEAT.value)][t] = q
    on[(a.id, Carrier.ELECTRICITY.value)][t] = dp
    on[(a.id, Carrier.HEAT.value)][t] = dq
    extra_rows.append(([(p, 1.0), (dp, -a.p_min_frac * p_nom)], ">=", 0.0))
    extra_rows.append(([(p, 1.0), (dp, -p_nom)], "<=", 0.0))
    extra_rows.append(([(q, 1.0), (dq, -a.p_min_frac * q_nom)], ">=", 0.0))
    extra_rows.append(([(q, 1.0), (dq, -q_nom)], "<=", 0.0))
    extra_rows.append(([(dq, 1.0), (dp, -1.0)], "<=", 0.0))
    extra_rows.append(
        ([(q, 1.0), (p, -q_nom / p_nom), (dq, -CHP_Q_SLACK * q_nom)], "<=", 0.0)
    )
    return p, q


def extract_actions(
    cfg: MesConfig, vmap: VarMap, x: np.ndarray
) -> tuple[ControlAction, ...]:
    """Turn a solution vector into one ControlAction per step.

    The result is already feasible: binaries off force exact zeros,
    running converters clamp into their semi-continuous band, storage
    setpoints (discharge minus charge, signed) clamp to the power rating.
    ``project_action`` on any returned action is a no-op.
    """
    channels = controllable_channels(cfg)
    actions = []
    for t in range(vmap.n_steps):
        sp: dict[str, float] = {}
        for ch in channels:
            if ch.kind == STORAGE:
                v = float(
                    x[vmap.discharge[ch.asset_id][t]]
                    - x[vmap.charge[ch.asset_id][t]]
                ) * MW
                sp[ch.key] = min(max(v, -ch.p_max), ch.p_max)
            else:
                key = (ch.asset_id, ch.carrier.value)
                v = float(x[vmap.out[key][t]]) * MW
                cols = vmap.on.get(key)
                if cols is not None and x[cols[t]] < 0.5:
                    sp[ch.key] = 0.0
                elif cols is not None:
                    sp[ch.key] = min(max(v, ch.p_min), ch.p_max)
                else:
                    sp[ch.key] = min(max(v, 0.0), ch.p_max)
        actions.append(ControlAction(sp))
    return tuple(actions)
