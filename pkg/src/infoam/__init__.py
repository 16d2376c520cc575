"""Statics and tooling for hybrid positive/negative-pressure pouch muscles."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .model import (ActuatorSpec, CrossSectionState, CurvePoint, PressureCondition, Regime,
                    ResistanceModel, TimeSeries, Variant, flat_state, reference_spec)
from .solver import (Curve, SolverSettings, blocked_force, blocked_state, classify_variant,
                     force_at_state, force_decomposition, skeleton_volume, solve_at_contraction,
                     solve_equilibrium, trace_curve)
from .closed import GasState, trace_curve_closed
from .resistance import DEFAULT_RESISTANCE, build_resistance_model, fit_kr
