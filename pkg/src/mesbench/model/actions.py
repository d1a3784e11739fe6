"""The action contract: which setpoints exist, and projection onto them.

A controller (MPC, RL agent, random baseline) emits a raw ControlAction;
``project_action`` maps it onto the feasible set so the plant never sees an
illegal setpoint.  Semi-continuous converters snap: values below half the
minimum stable load switch the unit off, values between half and full
minimum stick at the minimum, and anything above nominal clips to nominal.
Storage setpoints clamp to the symmetric power rating.  The projection is
idempotent, so feeding an already-feasible action through it is a no-op.
"""

from __future__ import annotations

from dataclasses import dataclass

from mesbench.model.types import (
    CONVERTER_KINDS,
    STORAGE_KINDS,
    AssetKind,
    Carrier,
    ControlAction,
    LossTerms,
    MesConfig,
    RewardWeights,
    UnknownAssetError,
)

SEMICONT = "semicont"
STORAGE = "storage"


@dataclass(frozen=True)
class Channel:
    """One controllable scalar setpoint.

    kind "semicont": feasible set {0} U [p_min, p_max] (p_min may be 0,
    which degenerates to the box [0, p_max]).  kind "storage": [-p_max,
    p_max], signed (+ discharge / - charge).
    """

    key: str
    asset_id: str
    carrier: Carrier
    kind: str
    p_min: float  # W (0 for storages)
    p_max: float  # W


def controllable_channels(cfg: MesConfig) -> tuple[Channel, ...]:
    """Enumerate the setpoint channels of a case, in declared asset order.

    Case rules: in the simple case the boiler is run by the plant's
    internal heat-following controller (so it is not a channel) and the CHP
    exposes its electric and thermal outputs as two channels.  In the
    complex case every converter is one channel on its primary output --
    the CHP is heat-led there, its electric output follows at the nominal
    power ratio.
    """
    simple = cfg.case_label == "simple"
    channels: list[Channel] = []
    for a in cfg.assets:
        if a.kind in STORAGE_KINDS:
            rate = a.outputs[0][1]
            channels.append(
                Channel(a.id, a.id, a.outputs[0][0], STORAGE, 0.0, rate)
            )
        elif a.kind in CONVERTER_KINDS:
            if simple and a.kind is AssetKind.BOILER:
                continue  # heat-following, set by the plant itself
            if simple and a.kind is AssetKind.CHP:
                for carrier, p_nom in a.outputs:
                    channels.append(
                        Channel(
                            f"{a.id}.{carrier.value}",
                            a.id,
                            carrier,
                            SEMICONT,
                            a.p_min_frac * p_nom,
                            p_nom,
                        )
                    )
                continue
            if a.kind is AssetKind.CHP:
                carrier = Carrier.HEAT  # heat-led, electricity follows
            else:
                carrier = a.outputs[0][0]
            p_nom = a.p_nom(carrier)
            channels.append(
                Channel(a.id, a.id, carrier, SEMICONT, a.p_min_frac * p_nom, p_nom)
            )
    return tuple(channels)


def _snap_semicont(v: float, p_min: float, p_max: float) -> float:
    if v < 0.5 * p_min or v <= 0.0:
        return 0.0
    if v < p_min:
        return p_min
    return min(v, p_max)


def project_action(cfg: MesConfig, raw: ControlAction) -> ControlAction:
    """Project arbitrary controller output onto the feasible action set.

    Unknown channel keys raise UnknownAssetError; channels missing from
    ``raw`` are treated as 0 (off / idle).
    """
    channels = controllable_channels(cfg)
    known = {ch.key for ch in channels}
    unknown = sorted(set(raw.setpoints) - known)
    if unknown:
        raise UnknownAssetError(
            f"action references unknown channels {unknown}; known: {sorted(known)}"
        )
    out: dict[str, float] = {}
    for ch in channels:
        v = float(raw.get(ch.key, 0.0))
        if ch.kind == STORAGE:
            out[ch.key] = min(max(v, -ch.p_max), ch.p_max)
        else:
            out[ch.key] = _snap_semicont(v, ch.p_min, ch.p_max)
    return ControlAction(out)


def reward(loss: LossTerms, weights: RewardWeights) -> float:
    """Scalar reward of one step: -(a * cost + b * thermal discomfort)."""
    return -(weights.a * loss.l_cost + weights.b * loss.l_comfort)
