"""Power curves and conversion physics of the individual assets.

All converters share one part-load efficiency shape,

    eta(load) = eta_nom * (1 - kappa * (1 - load)^2),

with load the output power as a fraction of that output's rating.  The
true plant runs kappa = 0.1; a controller that assumes flat efficiencies
(kappa = 0) therefore works with a slightly optimistic model -- that
mismatch is deliberate.
"""

from __future__ import annotations

from mesbench.model.types import AssetKind, AssetSpec, Carrier

# wind turbine curve anchors [m/s]
CUT_IN = 3.0
RATED = 12.0
CUT_OUT = 25.0

#: irradiance at which a PV plant reaches nominal power [W/m²]
PV_RATING_IRR = 1000.0

#: CHP back-pressure slack: extra heat above the PQ line, fraction of q_nom
CHP_Q_SLACK = 0.2


def wind_power(speed: float, spec: AssetSpec) -> float:
    """Electric output of a turbine at the given hub wind speed."""
    if speed < 0:
        raise ValueError(f"wind speed must be >= 0, got {speed}")
    p_nom = spec.p_nom(Carrier.ELECTRICITY)
    if speed < CUT_IN or speed > CUT_OUT:
        return 0.0
    if speed >= RATED:
        return p_nom
    return p_nom * (speed**3 - CUT_IN**3) / (RATED**3 - CUT_IN**3)


def pv_power(irradiance: float, spec: AssetSpec) -> float:
    """Electric output of a PV plant, linear up to the 1000 W/m² rating."""
    if irradiance < 0:
        raise ValueError(f"irradiance must be >= 0, got {irradiance}")
    p_nom = spec.p_nom(Carrier.ELECTRICITY)
    return min(p_nom, p_nom * irradiance / PV_RATING_IRR)


def part_load_eta(eta_nom: float, load: float, kappa: float) -> float:
    return eta_nom * (1.0 - kappa * (1.0 - load) ** 2)


def chp_feasible_pq(spec: AssetSpec, p: float, q: float) -> tuple[float, float]:
    """Project a CHP (electric, heat) request onto the feasible PQ region.

    The region is {(0, 0)} plus the patch p_min <= P <= P_nom, 0 <= Q <=
    (Q_nom/P_nom)·P + 0.2·Q_nom.  Points above the coupling line are
    projected orthogonally onto it, then clamped back into the power
    bounds.  Setpoints arrive already snapped per channel, so P is either
    0 or within its semi-continuous band.
    """
    p_nom = spec.p_nom(Carrier.ELECTRICITY)
    q_nom = spec.p_nom(Carrier.HEAT)
    if p <= 0.0:
        return 0.0, 0.0
    ratio = q_nom / p_nom
    slack = CHP_Q_SLACK * q_nom
    q = min(max(q, 0.0), q_nom)
    if q > ratio * p + slack:
        # orthogonal projection onto q = ratio*p + slack
        p = (p + ratio * (q - slack)) / (1.0 + ratio * ratio)
        p = min(max(p, spec.p_min_frac * p_nom), p_nom)
        q = min(ratio * p + slack, q_nom)
    return p, q


def converter_step(
    spec: AssetSpec,
    setpoints: dict[Carrier, float],
    kappa: float | None = None,
) -> tuple[dict[Carrier, float], float]:
    """Realized outputs and carrier input of one converter for one step.

    ``setpoints`` maps output carrier to requested power.  A CHP given
    only a heat setpoint is heat-led: its electric output follows at the
    nominal power ratio.  Returns (outputs per carrier, input power); the
    input carrier is spec.inputs[0] (gas, or electricity for a heat pump).
    """
    k = spec.eta.kappa if kappa is None else kappa
    outputs: dict[Carrier, float] = {}
    if spec.kind is AssetKind.CHP:
        q_nom = spec.p_nom(Carrier.HEAT)
        p_nom = spec.p_nom(Carrier.ELECTRICITY)
        if Carrier.ELECTRICITY in setpoints:
            p, q = chp_feasible_pq(
                spec,
                setpoints.get(Carrier.ELECTRICITY, 0.0),
                setpoints.get(Carrier.HEAT, 0.0),
            )
        else:  # heat-led
            q = min(max(setpoints.get(Carrier.HEAT, 0.0), 0.0), q_nom)
            p = p_nom * q / q_nom
        outputs[Carrier.ELECTRICITY] = p
        outputs[Carrier.HEAT] = q
    else:
        carrier, p_nom = spec.outputs[0]
        v = min(max(setpoints.get(carrier, 0.0), 0.0), p_nom)
        outputs[carrier] = v

    fuel = 0.0
    for carrier, value in outputs.items():
        if value <= 0.0:
            continue
        p_nom = spec.p_nom(carrier)
        eta = part_load_eta(spec.eta.nominal[carrier], value / p_nom, k)
        fuel += value / eta
    return outputs, fuel


def storage_step(
    soc: float,
    power: float,
    dt: float,
    spec: AssetSpec,
    derate: bool = True,
) -> tuple[float, float]:
    """Advance a storage by one step; returns (new_soc, realized_power).

    ``power`` > 0 discharges into the carrier, < 0 charges.  The available
    rate derates linearly to zero across the top 10% of capacity when
    charging and the bottom 10% when discharging, then the request is
    clipped so the state of charge stays within [0, e_nom] exactly.
    """
    rate = spec.outputs[0][1]
    e_nom = spec.e_nom
    band = 0.1 * e_nom
    soc = min(max(soc, 0.0), e_nom)
    if power < 0.0:  # charging
        limit = rate * min(1.0, (e_nom - soc) / band) if derate else rate
        p = max(power, -limit)
        p = max(p, -(e_nom - soc) / (spec.eta.charge * dt))
        return soc + spec.eta.charge * (-p) * dt, p
    if power > 0.0:  # discharging
        limit = rate * min(1.0, soc / band) if derate else rate
        p = min(power, limit)
        p = min(p, soc * spec.eta.discharge / dt)
        return soc - p * dt / spec.eta.discharge, p
    return soc, 0.0
