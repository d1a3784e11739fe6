"""Exogenous data: ingestion, synthesis, forecasts and accuracy metrics."""

from mesbench.data.forecast import (
    ForecastSpec,
    NoConvergenceError,
    RangeError,
    calibrate_noise_sigma,
    case_forecast_specs,
    forecast_targets,
    make_forecast,
)
from mesbench.data.metrics import DegenerateError, mape, mape_excluding_zeros, r2_score
from mesbench.data.scenario import (
    SERIES_UNITS,
    ExogenousFrame,
    Scenario,
    load_scenario,
    make_scenario,
    save_scenario,
)
from mesbench.data.synth import synth_profiles
from mesbench.data.timeseries import (
    GapError,
    ParseError,
    TimeSeries,
    UnitError,
    load_timeseries_csv,
    write_timeseries_csv,
)

__all__ = [
    "SERIES_UNITS",
    "DegenerateError",
    "ExogenousFrame",
    "ForecastSpec",
    "GapError",
    "NoConvergenceError",
    "ParseError",
    "RangeError",
    "Scenario",
    "TimeSeries",
    "UnitError",
    "calibrate_noise_sigma",
    "case_forecast_specs",
    "forecast_targets",
    "load_scenario",
    "load_timeseries_csv",
    "make_forecast",
    "make_scenario",
    "mape",
    "mape_excluding_zeros",
    "r2_score",
    "save_scenario",
    "synth_profiles",
    "write_timeseries_csv",
]
