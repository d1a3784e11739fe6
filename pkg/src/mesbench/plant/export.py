"""Trajectory CSV export (MW / MWh units, one row per step)."""

from __future__ import annotations

from mesbench.data.timeseries import format_float, iso_utc
from mesbench.model.types import GRID_KINDS, Carrier, MesConfig
from mesbench.plant.sim import StepRecord

_MW = 1.0e6  # W per MW
_MWH_J = 3.6e9  # J per MWh
_MWH_WH = 1.0e6  # Wh per MWh


def _columns(cfg: MesConfig) -> list[tuple[str, str, Carrier, str]]:
    """(header, asset_id, carrier, side) for every dispatch column."""
    cols = []
    for a in cfg.assets:
        if a.kind in GRID_KINDS:
            continue  # grid flows get dedicated columns
        for carrier, _ in a.outputs:
            cols.append((f"{a.id}_{carrier.value}_out_mw", a.id, carrier, "out"))
        for carrier in a.inputs:
            cols.append((f"{a.id}_{carrier.value}_in_mw", a.id, carrier, "in"))
    return cols


def trajectory_csv(cfg: MesConfig, trajectory: list[StepRecord], path) -> None:
    """Write one row per step: timestamp, dispatch, SoCs, grid flows, losses.

    Row t reports the state *at* time t (pre-step SoC) together with the
    dispatch and losses realized during [t, t+1).
    """
    cols = _columns(cfg)
    storages = [a.id for a in cfg.storages]
    header = (
        ["timestamp"]
        + [c[0] for c in cols]
        + [f"{s}_soc_mwh" for s in storages]
        + [
            "grid_import_el_mw",
            "gas_mw",
            "x_el_per_mwh",
            "l_cost",
            "l_comfort_mwh",
        ]
    )
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for rec in trajectory:
            row = [iso_utc(cfg.grid.timestamp(rec.state.cursor))]
            for _, asset_id, carrier, side in cols:
                flows = rec.dispatch.get(asset_id)
                if flows is None:
                    row.append("0")
                    continue
                source = flows.outputs if side == "out" else flows.inputs
                row.append(format_float(source.get(carrier, 0.0) / _MW))
            for s in storages:
                row.append(format_float(rec.state.soc.get(s, 0.0) / _MWH_J))
            row.append(format_float(rec.grid_import_el / _MW))
            row.append(format_float(rec.gas_consumed / _MW))
            row.append(format_float(rec.state.obs.x_el * _MWH_WH))
            row.append(format_float(rec.loss.l_cost))
            row.append(format_float(rec.loss.l_comfort / _MWH_WH))
            fh.write(",".join(row) + "\n")
