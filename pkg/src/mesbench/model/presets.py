"""Built-in system configurations: the simple and the complex case.

Ratings and minimum stable loads follow the two benchmark systems; nominal
efficiencies, grid connection sizes and the default gas price are design
values chosen so every technology has an operating regime in which it is
the economic choice (heat pump at low prices, CHP/genset at price peaks,
boiler as backstop).  Grid connections are sized to never bind.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from mesbench.model.types import (
    AssetKind,
    AssetSpec,
    Carrier,
    Efficiency,
    MesConfig,
    RewardWeights,
    TimeGrid,
)

MW = 1.0e6  # W
MWH = 3.6e9  # J

#: 2018-01-01 00:00:00 UTC; the synthetic year starts on a Monday
DEFAULT_START_EPOCH = 1514764800.0
STEP_S = 900.0
STEPS_PER_DAY = 96
STEPS_PER_WEEK = 7 * STEPS_PER_DAY
YEAR_STEPS = 365 * STEPS_PER_DAY

#: default price of natural gas, currency/Wh (= 20 currency/MWh)
DEFAULT_GAS_PRICE = 2.0e-5

_ROUND_TRIP = math.sqrt(0.9)  # one-way storage efficiency
_KAPPA = 0.1  # part-load curvature of the true plant


def year_grid(start_epoch: float = DEFAULT_START_EPOCH) -> TimeGrid:
    return TimeGrid(start_epoch=start_epoch, n_steps=YEAR_STEPS, step_s=STEP_S)


def _storage_eta() -> Efficiency:
    return Efficiency(charge=_ROUND_TRIP, discharge=_ROUND_TRIP)


def _simple_assets() -> tuple[AssetSpec, ...]:
    return (
        AssetSpec("wind", AssetKind.WIND, ((Carrier.ELECTRICITY, 5.0 * MW),)),
        AssetSpec("pv", AssetKind.PV, ((Carrier.ELECTRICITY, 3.0 * MW),)),
        AssetSpec(
            "boiler",
            AssetKind.BOILER,
            ((Carrier.HEAT, 8.0 * MW),),
            (Carrier.NATURAL_GAS,),
            p_min_frac=0.0,
            eta=Efficiency({Carrier.HEAT: 0.92}, kappa=_KAPPA),
        ),
        AssetSpec(
            "chp",
            AssetKind.CHP,
            ((Carrier.ELECTRICITY, 6.0 * MW), (Carrier.HEAT, 6.0 * MW)),
            (Carrier.NATURAL_GAS,),
            p_min_frac=0.25,
            eta=Efficiency(
                {Carrier.ELECTRICITY: 0.38, Carrier.HEAT: 0.45}, kappa=_KAPPA
            ),
        ),
        AssetSpec(
            "bess",
            AssetKind.BESS,
            ((Carrier.ELECTRICITY, 2.5 * MW),),
            e_nom=10.0 * MWH,
            eta=_storage_eta(),
        ),
        AssetSpec(
            "grid_el", AssetKind.GRID_ELECTRIC, ((Carrier.ELECTRICITY, 10.0 * MW),)
        ),
        AssetSpec("grid_gas", AssetKind.GRID_GAS, ((Carrier.NATURAL_GAS, 40.0 * MW),)),
    )


def _complex_assets() -> tuple[AssetSpec, ...]:
    return (
        AssetSpec(
            "wind",
            AssetKind.WIND,
            ((Carrier.ELECTRICITY, 0.8 * MW),),
            p_min_frac=0.015,
        ),
        AssetSpec("pv", AssetKind.PV, ((Carrier.ELECTRICITY, 1.0 * MW),)),
        AssetSpec(
            "boiler",
            AssetKind.BOILER,
            ((Carrier.HEAT, 2.0 * MW),),
            (Carrier.NATURAL_GAS,),
            p_min_frac=0.10,
            eta=Efficiency({Carrier.HEAT: 0.92}, kappa=_KAPPA),
        ),
        AssetSpec(
            "heat_pump",
            AssetKind.HEAT_PUMP,
            ((Carrier.HEAT, 1.0 * MW),),
            (Carrier.ELECTRICITY,),
            p_min_frac=0.25,
            eta=Efficiency({Carrier.HEAT: 3.5}, kappa=_KAPPA),
        ),
        AssetSpec(
            "chp",
            AssetKind.CHP,
            ((Carrier.ELECTRICITY, 0.8 * MW), (Carrier.HEAT, 1.0 * MW)),
            (Carrier.NATURAL_GAS,),
            p_min_frac=0.50,
            eta=Efficiency(
                {Carrier.ELECTRICITY: 0.32, Carrier.HEAT: 0.40}, kappa=_KAPPA
            ),
        ),
        AssetSpec(
            "genset",
            AssetKind.GENSET,
            ((Carrier.ELECTRICITY, 0.5 * MW),),
            (Carrier.NATURAL_GAS,),
            p_min_frac=0.50,
            eta=Efficiency({Carrier.ELECTRICITY: 0.35}, kappa=_KAPPA),
        ),
        AssetSpec(
            "tess",
            AssetKind.TESS,
            ((Carrier.HEAT, 0.5 * MW),),
            e_nom=3.5 * MWH,
            eta=_storage_eta(),
        ),
        AssetSpec(
            "bess",
            AssetKind.BESS,
            ((Carrier.ELECTRICITY, 0.5 * MW),),
            e_nom=2.0 * MWH,
            eta=_storage_eta(),
        ),
        AssetSpec(
            "grid_el", AssetKind.GRID_ELECTRIC, ((Carrier.ELECTRICITY, 3.0 * MW),)
        ),
        AssetSpec("grid_gas", AssetKind.GRID_GAS, ((Carrier.NATURAL_GAS, 10.0 * MW),)),
    )


def case_config(case_label: str, grid: TimeGrid | None = None) -> MesConfig:
    """Build the 'simple' or 'complex' benchmark system on a time grid.

    Reward weight b starts at twice the synthetic price cap; call
    ``with_default_weights`` once scenario data exists to pin it to twice
    the actual maximum day-ahead price.
    """
    if case_label == "simple":
        assets = _simple_assets()
    elif case_label == "complex":
        assets = _complex_assets()
    else:
        raise ValueError(f"unknown case label {case_label!r}")
    return MesConfig(
        assets=assets,
        grid=grid if grid is not None else year_grid(),
        gas_price=DEFAULT_GAS_PRICE,
        reward_weights=RewardWeights(a=1.0, b=2.4e-4),
        case_label=case_label,
    )


def with_default_weights(cfg: MesConfig, x_el_values) -> MesConfig:
    """Return cfg with b = 2 x the maximum day-ahead price of the scenario.

    Discomfort then always outprices serving heat from the most expensive
    source, so cost can never buy its way out of the comfort constraint.
    """
    b = 2.0 * float(np.max(np.asarray(x_el_values, dtype=np.float64)))
    if not b > 0:
        raise ValueError("price series must contain positive prices")
    weights = dataclasses.replace(cfg.reward_weights, b=b)
    return dataclasses.replace(cfg, reward_weights=weights)
