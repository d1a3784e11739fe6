"""Structural validation of a MesConfig.

``validate_config`` collects *every* violation before raising so a bad
config file produces one actionable error instead of a fix-one-rerun loop.
"""

from __future__ import annotations

import math

from mesbench.model.types import (
    CONVERTER_KINDS,
    GRID_KINDS,
    RENEWABLE_KINDS,
    STORAGE_KINDS,
    AssetKind,
    Carrier,
    ConfigError,
    MesConfig,
)

#: required input carrier per converter kind
_CONVERTER_INPUT = {
    AssetKind.BOILER: Carrier.NATURAL_GAS,
    AssetKind.CHP: Carrier.NATURAL_GAS,
    AssetKind.GENSET: Carrier.NATURAL_GAS,
    AssetKind.HEAT_PUMP: Carrier.ELECTRICITY,
}

_STORAGE_CARRIER = {AssetKind.BESS: Carrier.ELECTRICITY, AssetKind.TESS: Carrier.HEAT}


def validate_config(cfg: MesConfig) -> None:
    """Raise ConfigError listing all violations; return None if valid."""
    bad: list[str] = []

    if cfg.grid.step_s <= 0:
        bad.append(f"time grid step must be positive, got {cfg.grid.step_s}")
    if cfg.grid.n_steps < 1:
        bad.append(f"time grid needs at least one step, got {cfg.grid.n_steps}")
    if cfg.case_label not in ("simple", "complex"):
        bad.append(f"case_label must be 'simple' or 'complex', got {cfg.case_label!r}")
    if not (cfg.gas_price >= 0 and math.isfinite(cfg.gas_price)):
        bad.append(f"gas_price must be finite and >= 0, got {cfg.gas_price}")
    if cfg.reward_weights.a <= 0:
        bad.append(f"reward weight a must be > 0, got {cfg.reward_weights.a}")
    if cfg.reward_weights.b <= 0:
        bad.append(f"reward weight b must be > 0, got {cfg.reward_weights.b}")

    seen: set[str] = set()
    for a in cfg.assets:
        if not a.id:
            bad.append("asset with empty id")
        elif a.id in seen:
            bad.append(f"duplicate asset id {a.id!r}")
        seen.add(a.id)

    n_grid_el = len(cfg.by_kind(AssetKind.GRID_ELECTRIC))
    n_grid_gas = len(cfg.by_kind(AssetKind.GRID_GAS))
    if n_grid_el != 1:
        bad.append(f"need exactly one grid_electric asset, got {n_grid_el}")
    if n_grid_gas != 1:
        bad.append(f"need exactly one grid_gas asset, got {n_grid_gas}")

    for a in cfg.assets:
        tag = f"asset {a.id!r}"
        for carrier, p_nom in a.outputs:
            if not (p_nom > 0 and math.isfinite(p_nom)):
                bad.append(f"{tag}: {carrier.value} p_nom must be > 0, got {p_nom}")
        if not 0.0 <= a.p_min_frac < 1.0:
            bad.append(f"{tag}: p_min_frac must be in [0, 1), got {a.p_min_frac}")

        if a.kind in STORAGE_KINDS:
            if a.e_nom <= 0:
                bad.append(f"{tag}: storage needs e_nom > 0, got {a.e_nom}")
            if len(a.outputs) != 1:
                bad.append(f"{tag}: storage must have exactly one output carrier")
            elif a.outputs[0][0] is not _STORAGE_CARRIER[a.kind]:
                bad.append(
                    f"{tag}: {a.kind.value} must act on "
                    f"{_STORAGE_CARRIER[a.kind].value}"
                )
            if not 0.0 < a.eta.charge <= 1.0 or not 0.0 < a.eta.discharge <= 1.0:
                bad.append(f"{tag}: charge/discharge efficiency must be in (0, 1]")
        elif a.e_nom != 0:
            bad.append(f"{tag}: e_nom is reserved for storages, got {a.e_nom}")

        if a.kind in CONVERTER_KINDS:
            want = _CONVERTER_INPUT[a.kind]
            if tuple(a.inputs) != (want,):
                bad.append(f"{tag}: {a.kind.value} must consume exactly ({want.value})")
            for carrier in a.output_carriers:
                eff = a.eta.nominal.get(carrier)
                if eff is None or not (0.0 < eff <= 10.0):
                    bad.append(
                        f"{tag}: needs a nominal efficiency in (0, 10] for "
                        f"{carrier.value} output"
                    )
            if not 0.0 <= a.eta.kappa < 1.0:
                bad.append(f"{tag}: part-load kappa must be in [0, 1)")

        if a.kind in RENEWABLE_KINDS and a.inputs:
            bad.append(f"{tag}: weather-driven assets take no carrier input")

        if a.kind in GRID_KINDS:
            if Carrier.HEAT in a.output_carriers:
                bad.append(f"{tag}: the heat carrier has no grid connection")
            want_grid = (
                Carrier.ELECTRICITY
                if a.kind is AssetKind.GRID_ELECTRIC
                else Carrier.NATURAL_GAS
            )
            if a.output_carriers != (want_grid,):
                bad.append(f"{tag}: {a.kind.value} must expose ({want_grid.value})")

    # the heat carrier is balanced only by local assets; if anything can
    # produce heat the case is heat-capable, otherwise thermal demand must
    # be zero -- flag configs that declare heat storages without producers.
    heat_producers = [
        a
        for a in cfg.assets
        if a.kind in CONVERTER_KINDS and Carrier.HEAT in a.output_carriers
    ]
    if cfg.by_kind(AssetKind.TESS) and not heat_producers:
        bad.append("thermal storage present but no asset can produce heat")

    if bad:
        raise ConfigError(bad)
