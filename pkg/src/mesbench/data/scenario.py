"""Bundled exogenous data for one simulation run."""

from __future__ import annotations

import os
from dataclasses import dataclass

from mesbench.data.synth import synth_profiles
from mesbench.data.timeseries import (
    TimeSeries,
    load_timeseries_csv,
    write_timeseries_csv,
)
from mesbench.model.types import TimeGrid

#: expected unit per series file, also the schema of a scenario directory
SERIES_UNITS = {
    "wind_speed": "m/s",
    "irradiance": "W/m2",
    "e_th_demand": "W",
    "e_el_demand": "W",
    "x_el": "currency/Wh",
}


@dataclass(frozen=True)
class ExogenousFrame:
    """Realized exogenous quantities at a single step."""

    wind_speed: float  # m/s
    irradiance: float  # W/m²
    e_th_demand: float  # W
    e_el_demand: float  # W
    x_el: float  # currency/Wh

    def __post_init__(self):
        if self.wind_speed < 0 or self.irradiance < 0:
            raise ValueError("weather quantities must be non-negative")
        if self.e_th_demand < 0 or self.e_el_demand < 0:
            raise ValueError("demands must be non-negative")


@dataclass(frozen=True)
class Scenario:
    """The five exogenous series a run consumes, on a common grid."""

    grid: TimeGrid
    wind_speed: TimeSeries
    irradiance: TimeSeries
    e_th_demand: TimeSeries
    e_el_demand: TimeSeries
    x_el: TimeSeries

    def __post_init__(self):
        for name in ("wind_speed", "irradiance", "e_th_demand", "e_el_demand", "x_el"):
            if getattr(self, name).grid != self.grid:
                raise ValueError(f"series {name} is on a different grid")

    @property
    def n_steps(self) -> int:
        return self.grid.n_steps

    def frame(self, cursor: int) -> ExogenousFrame:
        """Exogenous data realized at grid index ``cursor``."""
        return ExogenousFrame(
            wind_speed=float(self.wind_speed.values[cursor]),
            irradiance=float(self.irradiance.values[cursor]),
            e_th_demand=float(self.e_th_demand.values[cursor]),
            e_el_demand=float(self.e_el_demand.values[cursor]),
            x_el=float(self.x_el.values[cursor]),
        )

    def series(self) -> dict[str, TimeSeries]:
        return {
            "wind_speed": self.wind_speed,
            "irradiance": self.irradiance,
            "e_th_demand": self.e_th_demand,
            "e_el_demand": self.e_el_demand,
            "x_el": self.x_el,
        }


def make_scenario(seed: int, grid: TimeGrid, case_label: str) -> Scenario:
    """Synthesize a full scenario; deterministic in (seed, grid, case)."""
    profiles = synth_profiles(seed, grid, case_label)
    return Scenario(
        grid=grid,
        wind_speed=profiles["wind_speed"],
        irradiance=profiles["irradiance"],
        e_th_demand=profiles["e_th_demand"],
        e_el_demand=profiles["e_el_demand"],
        x_el=profiles["x_el"],
    )


def save_scenario(scenario: Scenario, directory) -> list[str]:
    """Write the five series as ``<name>.csv`` files; returns the paths."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name, series in scenario.series().items():
        path = os.path.join(directory, f"{name}.csv")
        write_timeseries_csv(path, series)
        paths.append(path)
    return paths


def load_scenario(directory, grid: TimeGrid) -> Scenario:
    """Read a scenario directory written by :func:`save_scenario`."""
    loaded = {
        name: load_timeseries_csv(
            os.path.join(directory, f"{name}.csv"), unit, grid
        )
        for name, unit in SERIES_UNITS.items()
    }
    return Scenario(grid=grid, **loaded)
