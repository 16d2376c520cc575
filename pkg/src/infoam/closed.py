"""Sealed skeleton: statics coupled to an isothermal ideal gas.

The skeleton is inflated to ``initial_dP1`` with no skin vacuum, sealed,
and then the skin vacuum is applied. Along the sweep the skeleton gauge
pressure is an extra unknown closed by ``P1_abs * (V + V_dead) = const``.
"""

from dataclasses import dataclass
from typing import Optional

from .errors import InputError, VolumeCollapse
from .model import P_ATM, ActuatorSpec, PressureCondition, Regime, ResistanceModel
from .solver import (Curve, SolverSettings, DEFAULT_SETTINGS, blocked_state, skeleton_volume,
                     _continue)
from .resistance import DEFAULT_RESISTANCE

MIN_VOLUME = 1e-9


@dataclass(frozen=True)
class GasState:
    trapped_moles_proxy: float
    sealed_volume_V0: float
    sealed_absolute_P1: float
    dead_volume: float = 0.0

    def __post_init__(self):
        if min(self.trapped_moles_proxy, self.sealed_volume_V0, self.sealed_absolute_P1) <= 0:
            raise InputError("GasState fields must be > 0")
        if self.dead_volume < 0:
            raise InputError("dead_volume must be >= 0")

    @classmethod
    def seal(cls, absolute_P1, volume, dead_volume=0.0):
        V0 = volume + dead_volume
        if V0 < MIN_VOLUME:
            raise VolumeCollapse(f"sealed volume {V0:.3e} m^3 below {MIN_VOLUME:g}")
        return cls(absolute_P1 * V0, V0, absolute_P1, dead_volume)

    def pressure_at(self, volume):
        """Absolute pressure after an isothermal change to ``volume`` (pouches only)."""
        V = volume + self.dead_volume
        if V < MIN_VOLUME:
            raise VolumeCollapse(f"gas volume {V:.3e} m^3 below {MIN_VOLUME:g}")
        return self.trapped_moles_proxy / V


def closed_condition(initial_dP1, dP2, P0=P_ATM):
    return PressureCondition(initial_dP1, dP2, Regime.CLOSED, initial_dP1, P0)


def seal_state(spec: ActuatorSpec, initial_dP1, P0=P_ATM, dead_volume=0.0,
               settings: Optional[SolverSettings] = None):
    """Blocked state at the sealing pressure and the resulting GasState."""
    if initial_dP1 <= 0:
        raise InputError("initial_dP1 must be > 0")
    state = blocked_state(spec, PressureCondition(initial_dP1, 0.0, atmospheric_P0=P0), settings)
    gas = GasState.seal(P0 + initial_dP1, skeleton_volume(spec, state), dead_volume)
    return state, gas


def trace_curve_closed(spec: ActuatorSpec, initial_dP1, dP2,
                       resistance: Optional[ResistanceModel] = None,
                       settings: Optional[SolverSettings] = None,
                       P0=P_ATM, dead_volume=0.0) -> Curve:
    """Force-contraction curve of a sealed skeleton under skin vacuum ``dP2``."""
    settings = DEFAULT_SETTINGS if settings is None else settings
    resistance = DEFAULT_RESISTANCE if resistance is None else resistance
    cond = closed_condition(initial_dP1, dP2, P0)
    sealed, gas = seal_state(spec, initial_dP1, P0, dead_volume, settings)
    closure = (gas.trapped_moles_proxy, P0, dead_volume)
    if dP2 == 0.0:
        start = sealed
    else:
        start = blocked_state(spec, cond, settings, gas=closure)
    curve = _continue(spec, cond, resistance, settings, start, gas=closure)
    for p in curve.points:
        gas.pressure_at(skeleton_volume(spec, p.state))
    curve.gas = gas
    return curve
