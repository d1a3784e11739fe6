"""Value types shared by the plant, the MPC and the RL layer.

Unit conventions (everywhere inside the package):

* power        W        (1 MW = 1e6 W)
* energy       J        (1 MWh = 3.6e9 J); storage SoC is energy in J
* time         s        (epoch seconds; step length in seconds)
* prices       currency per Wh (so 50 currency/MWh = 5.0e-5 currency/Wh)
* comfort loss Wh       (unserved/overserved thermal energy)

Public reports and CSV headers convert to MW / MWh where noted; the types
below never do.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping


class Carrier(enum.Enum):
    """Energy carriers that can be balanced in the system."""

    ELECTRICITY = "electricity"
    HEAT = "heat"
    NATURAL_GAS = "natural_gas"


class AssetKind(enum.Enum):
    WIND = "wind"
    PV = "pv"
    BOILER = "boiler"
    HEAT_PUMP = "heat_pump"
    CHP = "chp"
    GENSET = "genset"
    BESS = "bess"
    TESS = "tess"
    GRID_ELECTRIC = "grid_electric"
    GRID_GAS = "grid_gas"


#: kinds that store energy (have e_nom, signed power setpoint)
STORAGE_KINDS = frozenset({AssetKind.BESS, AssetKind.TESS})
#: kinds that exchange with the outside world (balance-closing, not dispatched)
GRID_KINDS = frozenset({AssetKind.GRID_ELECTRIC, AssetKind.GRID_GAS})
#: kinds converting a fuel/input carrier into output carriers
CONVERTER_KINDS = frozenset(
    {AssetKind.BOILER, AssetKind.HEAT_PUMP, AssetKind.CHP, AssetKind.GENSET}
)
#: weather-driven, non-controllable producers
RENEWABLE_KINDS = frozenset({AssetKind.WIND, AssetKind.PV})


class ConfigError(ValueError):
    """Raised by validate_config; carries the full list of violations."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__(
            "invalid system configuration:\n  - " + "\n  - ".join(self.violations)
        )


class UnknownAssetError(KeyError):
    """An action references a setpoint channel the configuration lacks."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time axis: ``n_steps`` steps of ``step_s`` seconds."""

    start_epoch: float  # s, UTC epoch of step 0
    n_steps: int
    step_s: float = 900.0  # s, 15-minute default

    @property
    def step_h(self) -> float:
        return self.step_s / 3600.0

    def timestamp(self, i: int) -> float:
        """Epoch seconds of step ``i``."""
        return self.start_epoch + i * self.step_s


@dataclass(frozen=True)
class Efficiency:
    """Conversion/storage efficiency parameters of one asset.

    ``nominal`` maps output carrier -> nominal efficiency (for a heat pump
    this is the COP, so values > 1 are legal).  ``kappa`` bends the
    part-load curve, eta(load) = eta_nom * (1 - kappa * (1 - load)^2); the
    linear MPC model always assumes kappa = 0.  ``charge``/``discharge``
    split a storage's round-trip efficiency.
    """

    nominal: Mapping[Carrier, float] = field(default_factory=dict)
    kappa: float = 0.0
    charge: float = 1.0
    discharge: float = 1.0


@dataclass(frozen=True)
class AssetSpec:
    """Static description of one energy asset.

    ``outputs`` lists (carrier, p_nom W) pairs; converters with several
    outputs (the CHP) list them all.  ``p_min_frac`` is the minimum stable
    load as a fraction of p_nom (semi-continuous assets snap below it).
    ``e_nom`` is the storage capacity in J and must be 0 for non-storages.
    For storages, p_nom of the single output is the symmetric charge and
    discharge power limit.
    """

    id: str
    kind: AssetKind
    outputs: tuple[tuple[Carrier, float], ...] = ()
    inputs: tuple[Carrier, ...] = ()
    p_min_frac: float = 0.0
    e_nom: float = 0.0  # J
    eta: Efficiency = field(default_factory=Efficiency)

    def p_nom(self, carrier: Carrier) -> float:
        """Nominal power of the given output carrier [W]."""
        for c, p in self.outputs:
            if c is carrier:
                return p
        raise KeyError(f"asset {self.id!r} has no {carrier.value} output")

    @property
    def output_carriers(self) -> tuple[Carrier, ...]:
        return tuple(c for c, _ in self.outputs)


@dataclass(frozen=True)
class RewardWeights:
    """Scalarization weights: reward = -(a * cost + b * discomfort)."""

    a: float = 1.0  # 1/currency
    b: float = 1.0  # 1/Wh


@dataclass(frozen=True)
class MesConfig:
    """A complete multi-energy-system case."""

    assets: tuple[AssetSpec, ...]
    grid: TimeGrid
    gas_price: float  # currency/Wh of gas
    reward_weights: RewardWeights
    case_label: str  # "simple" | "complex"
    #: when True the plant itself becomes the linear model the MPC uses:
    #: flat efficiencies (kappa treated as 0) and no SoC-dependent derating.
    linear_plant: bool = False

    def asset(self, asset_id: str) -> AssetSpec:
        for a in self.assets:
            if a.id == asset_id:
                return a
        raise UnknownAssetError(asset_id)

    def by_kind(self, kind: AssetKind) -> tuple[AssetSpec, ...]:
        return tuple(a for a in self.assets if a.kind is kind)

    @property
    def storages(self) -> tuple[AssetSpec, ...]:
        return tuple(a for a in self.assets if a.kind in STORAGE_KINDS)


@dataclass(frozen=True)
class ControlAction:
    """Setpoints for the controllable assets, keyed by channel.

    Channel keys are the asset id, except for multi-output converters
    controlled per carrier, which use ``"<asset>.<carrier>"`` (the simple
    case's CHP exposes ``chp.electricity`` and ``chp.heat``).  Converter
    setpoints are output power in W (>= 0).  Storage setpoints are signed:
    positive discharges into the carrier, negative charges.
    """

    setpoints: Mapping[str, float]

    def get(self, key: str, default: float = 0.0) -> float:
        return self.setpoints.get(key, default)

    def __getitem__(self, key: str) -> float:
        return self.setpoints[key]


@dataclass(frozen=True)
class Observation:
    """What a controller sees at one step (raw engineering units)."""

    e_th: float  # W, thermal demand
    e_el: float  # W, electrical demand
    p_wind: float  # W, available wind in-feed
    p_solar: float  # W, available PV in-feed
    c_e: float  # currency, cost accumulated since episode start
    x_el: float  # currency/Wh, day-ahead electricity price

    def as_array(self):
        import numpy as np

        return np.array(
            [self.e_th, self.e_el, self.p_wind, self.p_solar, self.c_e, self.x_el],
            dtype=np.float64,
        )


FIELD_ORDER = ("e_th", "e_el", "p_wind", "p_solar", "c_e", "x_el")


@dataclass(frozen=True)
class SystemState:
    """Full plant state: step counter, observation, storage contents.

    ``t_index`` counts steps since the start of the current run/episode;
    ``cursor`` indexes into the exogenous data (they differ when an episode
    starts mid-year).
    """

    t_index: int
    cursor: int
    obs: Observation
    soc: Mapping[str, float]  # asset id -> J


@dataclass(frozen=True)
class LossTerms:
    """Per-step loss decomposition returned by the plant."""

    l_cost: float  # currency (can be negative when exporting)
    l_comfort: float  # Wh of thermal mismatch
    q_produced: float  # W, thermal power delivered this step

    def __post_init__(self):
        if not (math.isfinite(self.l_cost) and math.isfinite(self.l_comfort)):
            raise ValueError("loss terms must be finite")
