"""Domain types, unit conventions and JSON loading.

Everything inside the package is SI (m, Pa, N, kg, s). Files and CLI flags
use the units the actuator literature quotes: lengths in mm, pressures in
kPa. Conversion happens only in the ``*_from_json`` / ``to_json`` helpers.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, fields, replace
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from . import geometry as geo
from .errors import InputError, DuplicatePressure, EmptyTrace, NonMonotonicTime

P_ATM = 101325.0
DEFAULT_E = 400e6
DEFAULT_DELTA = 0.04

MM = 1e-3
KPA = 1e3


def mm_to_m(x):
    return x * MM


def m_to_mm(x):
    return x / MM


def kpa_to_pa(x):
    return x * KPA


def pa_to_kpa(x):
    return x / KPA


class Variant(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"

    @property
    def wrapped(self):
        """Skin wraps the pouch below its boundary (B, D)."""
        return self in (Variant.B, Variant.D)

    @property
    def skin_contact(self):
        """Upper and lower skin touch between columns (C, D)."""
        return self in (Variant.C, Variant.D)


@dataclass(frozen=True)
class ActuatorSpec:
    pouch_length_L10: float
    gap_length_L20: float
    width_W: float
    columns_n: int
    layers_m: int = 2
    skeleton_thickness_t1: float = 0.09e-3
    skin_thickness_t2: float = 0.17e-3
    elastic_modulus_E: float = DEFAULT_E
    prestrain_delta: float = DEFAULT_DELTA
    actuator_mass: Optional[float] = None
    flat_volume_Vflat: Optional[float] = None

    def __post_init__(self):
        checks = [
            (self.pouch_length_L10 > 0, "pouch_length_L10 must be > 0"),
            (self.gap_length_L20 >= 0, "gap_length_L20 must be >= 0"),
            (self.width_W > 0, "width_W must be > 0"),
            (int(self.columns_n) == self.columns_n and self.columns_n >= 1,
             "columns_n must be a positive integer"),
            (int(self.layers_m) == self.layers_m and self.layers_m >= 1,
             "layers_m must be a positive integer"),
            (self.skeleton_thickness_t1 > 0, "skeleton_thickness_t1 must be > 0"),
            (self.skin_thickness_t2 > 0, "skin_thickness_t2 must be > 0"),
            (self.elastic_modulus_E > 0, "elastic_modulus_E must be > 0"),
            (self.prestrain_delta >= 0, "prestrain_delta must be >= 0"),
        ]
        for ok, msg in checks:
            if not ok:
                raise InputError(msg)
        if self.actuator_mass is not None and self.actuator_mass <= 0:
            raise InputError("actuator_mass must be > 0 when given")
        if self.flat_volume_Vflat is not None and self.flat_volume_Vflat <= 0:
            raise InputError("flat_volume_Vflat must be > 0 when given")

    # rest lengths carry the fabrication slack uniformly
    @property
    def rest_L1(self):
        return (1.0 + self.prestrain_delta) * self.pouch_length_L10

    @property
    def rest_L2(self):
        return (1.0 + self.prestrain_delta) * self.gap_length_L20

    @property
    def rest_L3(self):
        return (1.0 + self.prestrain_delta) * self.pouch_length_L10

    @property
    def stiffness(self) -> Tuple[float, float, float]:
        """Tensile stiffness K_i = E t_i W / L_i0 of the three sheets.

        The pouch surfaces (C1, C3) are skeleton sheet; the gap sheet (C2)
        uses the skin thickness.
        """
        E, W = self.elastic_modulus_E, self.width_W
        t_skel, t_skin = self.skeleton_thickness_t1, self.skin_thickness_t2
        K2 = E * t_skin * W / self.rest_L2 if self.rest_L2 > 0 else math.inf
        return (E * t_skel * W / self.rest_L1, K2, E * t_skel * W / self.rest_L3)

    @property
    def initial_length(self):
        """S_sum,0 = n L10 + (n - 1) L20."""
        n = self.columns_n
        return n * self.pouch_length_L10 + (n - 1) * self.gap_length_L20

    @property
    def max_single_layer_gap(self):
        return 2.0 * self.pouch_length_L10 / math.pi

    @property
    def complete_contraction_feasible(self):
        """True when L20 <= 2 L10 / pi (no residual skin contact at full stroke)."""
        return self.gap_length_L20 <= self.max_single_layer_gap

    def actuator_length(self, S1, S2):
        n = self.columns_n
        return n * S1 + (n - 1) * S2

    def contraction_ratio(self, S1, S2):
        S0 = self.initial_length
        return (S0 - self.actuator_length(S1, S2)) / S0


def reference_spec(**overrides) -> ActuatorSpec:
    """The two-layer, seven-column sample characterised on the test machine."""
    base = dict(
        pouch_length_L10=20e-3,
        gap_length_L20=10e-3,
        width_W=80e-3,
        columns_n=7,
        layers_m=2,
        skeleton_thickness_t1=0.09e-3,
        skin_thickness_t2=0.17e-3,
        elastic_modulus_E=DEFAULT_E,
        prestrain_delta=DEFAULT_DELTA,
        actuator_mass=24.6e-3,
    )
    base.update(overrides)
    return ActuatorSpec(**base)


class Regime(str, enum.Enum):
    CONSTANT = "ConstantPressure"
    CLOSED = "ClosedChamber"


@dataclass(frozen=True)
class PressureCondition:
    positive_gauge_dP1: float = 0.0
    negative_gauge_dP2: float = 0.0
    skeleton_regime: Regime = Regime.CONSTANT
    initial_dP1: Optional[float] = None
    atmospheric_P0: float = P_ATM

    def __post_init__(self):
        if self.positive_gauge_dP1 < 0:
            raise InputError("positive_gauge_dP1 must be >= 0")
        if self.negative_gauge_dP2 > 0:
            raise InputError("negative_gauge_dP2 must be <= 0")
        if self.atmospheric_P0 <= 0:
            raise InputError("atmospheric_P0 must be > 0")
        if -self.negative_gauge_dP2 >= self.atmospheric_P0:
            raise InputError("vacuum cannot exceed atmospheric pressure")
        if self.skeleton_regime == Regime.CLOSED:
            if self.initial_dP1 is None or self.initial_dP1 <= 0:
                raise InputError("ClosedChamber needs initial_dP1 > 0")

    @property
    def dP1(self):
        return self.positive_gauge_dP1

    @property
    def dP2(self):
        return self.negative_gauge_dP2

    @property
    def closed(self):
        return self.skeleton_regime == Regime.CLOSED


@dataclass(frozen=True)
class CrossSectionState:
    """One solved cross-section.

    Arcs are stored as (curved length ``ell_i``, half-angle ``theta_i``).
    For B/D the C2/C3 lengths are the free parts only; the wrapped overlap
    of angle ``theta4`` lies on the C1 circle.
    """

    variant: Variant
    theta1: float
    theta2: float
    theta3: float
    theta4: float
    ell1: float
    ell2: float
    ell3: float
    w1: float
    w2: float
    T1: float
    T2: float
    T3: float
    dP1: float
    dP2: float

    # --- curvature / radii -------------------------------------------------
    @property
    def kappa1(self):
        return geo.curvature(self.ell1, self.theta1)

    @property
    def kappa2(self):
        return geo.curvature(self.ell2, self.theta2)

    @property
    def kappa3(self):
        return geo.curvature(self.ell3, self.theta3)

    @property
    def R1(self):
        return geo.radius(self.ell1, self.theta1)

    @property
    def R2(self):
        return geo.radius(self.ell2, self.theta2)

    @property
    def R3(self):
        return geo.radius(self.ell3, self.theta3)

    # --- wrapped overlap ----------------------------------------------------
    @property
    def overlap_length(self):
        if not self.variant.wrapped:
            return 0.0
        return 2.0 * self.R1 * self.theta4

    @property
    def overlap_offset(self):
        """Horizontal shift of the detachment point beyond point A."""
        if not self.variant.wrapped:
            return 0.0
        return self.R1 * (math.sin(self.theta3) - math.sin(self.theta1))

    @property
    def overlap_drop(self):
        """Vertical drop from point A to the detachment point."""
        if not self.variant.wrapped:
            return 0.0
        return self.R1 * (math.cos(self.theta1) + math.cos(self.theta3))

    # --- lengths and spans --------------------------------------------------
    @property
    def L1(self):
        return self.ell1

    @property
    def L2(self):
        return self.overlap_length + self.ell2 + self.w2

    @property
    def L3(self):
        return self.ell3 + self.overlap_length + self.w1

    @property
    def S1(self):
        return geo.span_from_length(self.ell1, self.theta1)

    @property
    def S2(self):
        return 2.0 * self.overlap_offset + geo.span_from_length(self.ell2, self.theta2) + self.w2

    @property
    def S3(self):
        return geo.span_from_length(self.ell3, self.theta3) - 2.0 * self.overlap_offset + self.w1

    # --- heights ------------------------------------------------------------
    @property
    def skeleton_rise(self):
        """R3 (1 - cos theta3): height of the free C3 end above the mid-plane."""
        return geo.sagitta_from_length(self.ell3, self.theta3)

    @property
    def skin_sag(self):
        """R2 (1 - cos theta2)."""
        return geo.sagitta_from_length(self.ell2, self.theta2)

    @property
    def H(self):
        if self.variant.skin_contact:
            return 0.0
        return 2.0 * (self.skeleton_rise - self.skin_sag)

    @property
    def pouch_height(self):
        """Mid-plane to C1 apex height of one skeleton layer."""
        return self.skeleton_rise + self.overlap_drop + geo.sagitta_from_length(self.ell1, self.theta1)

    @property
    def tensions(self):
        return (self.T1, self.T2, self.T3)

    def pouch_area(self):
        """Cross-section area of one inflated pouch (one layer, one column)."""
        half_S1 = 0.5 * self.S1
        off = self.overlap_offset
        h3 = self.skeleton_rise
        yA = h3 + self.overlap_drop
        half_w1 = 0.5 * self.w1
        pts = [(-half_w1, 0.0), (half_w1, 0.0), (half_S1 + off, h3), (half_S1, yA),
               (-half_S1, yA), (-half_S1 - off, h3)]
        area = geo.polygon_area(pts)
        area += geo.segment_area_from_length(self.ell1, self.theta1)
        area += 2.0 * geo.segment_area_from_length(0.5 * self.ell3, 0.5 * self.theta3)
        if self.variant.wrapped:
            area += 2.0 * geo.segment_area_from_length(self.R1 * self.theta4, 0.5 * self.theta4)
        return area

    def with_(self, **kw):
        return replace(self, **kw)


def flat_state(spec: ActuatorSpec, dP1=0.0, dP2=0.0) -> CrossSectionState:
    """Unpressurised identity: straight sheets at their designed spans."""
    L10, L20 = spec.pouch_length_L10, spec.gap_length_L20
    return CrossSectionState(
        variant=Variant.A, theta1=0.0, theta2=0.0, theta3=0.0, theta4=0.0,
        ell1=L10, ell2=L20, ell3=0.0, w1=L10, w2=0.0,
        T1=0.0, T2=0.0, T3=0.0, dP1=dP1, dP2=dP2,
    )


@dataclass(frozen=True)
class CurvePoint:
    contraction_ratio_CR: float
    output_force_F: float
    resistance_Fr: float
    actuator_length_Ssum: float
    state: CrossSectionState
    skeleton_gauge_dP1: float

    @property
    def CR(self):
        return self.contraction_ratio_CR

    @property
    def F(self):
        return self.output_force_F


@dataclass(frozen=True)
class ResistanceModel:
    """Resistance stiffness kr(dP1), linear between samples, clamped outside."""

    samples: Tuple[Tuple[float, float], ...] = ((0.0, 0.0),)

    def __post_init__(self):
        if not self.samples:
            raise InputError("ResistanceModel needs at least one sample")
        p = [s[0] for s in self.samples]
        for a, b in zip(p, p[1:]):
            if b == a:
                raise DuplicatePressure(f"duplicate pressure sample {a!r} Pa")
            if b < a:
                raise InputError("resistance samples must be sorted by dP1")
        if any(k < 0 for _, k in self.samples):
            raise InputError("kr must be >= 0")

    def kr(self, dP1):
        p = np.array([s[0] for s in self.samples])
        k = np.array([s[1] for s in self.samples])
        return float(np.interp(dP1, p, k))

    def to_json(self):
        return {"samples": [{"dP1_kPa": pa_to_kpa(p), "kr_N_per_m": k} for p, k in self.samples]}

    @classmethod
    def from_json(cls, data):
        try:
            rows = [(kpa_to_pa(float(r["dP1_kPa"])), float(r["kr_N_per_m"])) for r in data["samples"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad resistance model JSON: {exc}") from exc
        return cls(tuple(rows))


ZERO_RESISTANCE = ResistanceModel(((0.0, 0.0),))


@dataclass(frozen=True)
class TimeSeries:
    time: np.ndarray
    channels: Dict[str, np.ndarray] = field(default_factory=dict)

    KNOWN = ("displacement_x", "load_height_h", "flow_q", "pressure_dP", "force_F")

    def __post_init__(self):
        t = np.asarray(self.time, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise EmptyTrace("time series needs at least two samples")
        if np.any(np.diff(t) <= 0):
            raise NonMonotonicTime("time must be strictly increasing")
        chans = {}
        for name, col in self.channels.items():
            if name not in self.KNOWN:
                raise InputError(f"unknown channel {name!r}")
            col = np.asarray(col, dtype=float)
            if col.shape != t.shape:
                raise InputError(f"channel {name!r} length {col.size} != time length {t.size}")
            chans[name] = col
        object.__setattr__(self, "time", t)
        object.__setattr__(self, "channels", chans)

    def __contains__(self, name):
        return name in self.channels

    def __getitem__(self, name):
        return self.channels[name]

    def resampled(self, grid: Sequence[float]) -> "TimeSeries":
        grid = np.asarray(grid, dtype=float)
        return TimeSeries(grid, {k: np.interp(grid, self.time, v) for k, v in self.channels.items()})


# --- JSON boundary (mm, kPa) ------------------------------------------------

_SPEC_LENGTHS = ("pouch_length_L10", "gap_length_L20", "width_W",
                 "skeleton_thickness_t1", "skin_thickness_t2")


def spec_from_json(data: dict) -> ActuatorSpec:
    """Build an ActuatorSpec from file units (mm, kPa, kg, mm^3)."""
    known = {f.name for f in fields(ActuatorSpec)}
    unknown = set(data) - known
    if unknown:
        raise InputError(f"unknown ActuatorSpec keys: {sorted(unknown)}")
    kw = {}
    try:
        for key, value in data.items():
            if value is None:
                kw[key] = None
            elif key in _SPEC_LENGTHS:
                kw[key] = mm_to_m(float(value))
            elif key == "elastic_modulus_E":
                kw[key] = kpa_to_pa(float(value))
            elif key == "flat_volume_Vflat":
                kw[key] = float(value) * MM ** 3
            elif key in ("columns_n", "layers_m"):
                if float(value) != int(value):
                    raise InputError(f"{key} must be an integer")
                kw[key] = int(value)
            else:
                kw[key] = float(value)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad ActuatorSpec value: {exc}") from exc
    for key in ("pouch_length_L10", "gap_length_L20", "width_W", "columns_n"):
        if key not in kw:
            raise InputError(f"ActuatorSpec missing required key {key!r}")
    return ActuatorSpec(**kw)


def spec_to_json(spec: ActuatorSpec) -> dict:
    out = {}
    for f in fields(ActuatorSpec):
        v = getattr(spec, f.name)
        if v is None:
            out[f.name] = None
        elif f.name in _SPEC_LENGTHS:
            out[f.name] = m_to_mm(v)
        elif f.name == "elastic_modulus_E":
            out[f.name] = pa_to_kpa(v)
        elif f.name == "flat_volume_Vflat":
            out[f.name] = v / MM ** 3
        else:
            out[f.name] = v
    return out


def condition_from_json(data: dict) -> PressureCondition:
    """Keys: positive_gauge_dP1, negative_gauge_dP2 (kPa), skeleton_regime,
    atmospheric_P0 (kPa). ``skeleton_regime`` is ``"ConstantPressure"`` or
    ``{"ClosedChamber": {"initial_dP1": <kPa>}}``."""
    allowed = {"positive_gauge_dP1", "negative_gauge_dP2", "skeleton_regime", "atmospheric_P0"}
    unknown = set(data) - allowed
    if unknown:
        raise InputError(f"unknown PressureCondition keys: {sorted(unknown)}")
    regime = data.get("skeleton_regime", Regime.CONSTANT.value)
    initial = None
    try:
        if isinstance(regime, dict):
            if set(regime) != {Regime.CLOSED.value}:
                raise InputError(f"bad skeleton_regime {regime!r}")
            initial = kpa_to_pa(float(regime[Regime.CLOSED.value]["initial_dP1"]))
            regime = Regime.CLOSED
        else:
            regime = Regime(regime)
        return PressureCondition(
            positive_gauge_dP1=kpa_to_pa(float(data.get("positive_gauge_dP1", 0.0))),
            negative_gauge_dP2=kpa_to_pa(float(data.get("negative_gauge_dP2", 0.0))),
            skeleton_regime=regime,
            initial_dP1=initial,
            atmospheric_P0=kpa_to_pa(float(data.get("atmospheric_P0", P_ATM / KPA))),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad PressureCondition: {exc}") from exc


def condition_to_json(cond: PressureCondition) -> dict:
    regime = cond.skeleton_regime.value
    if cond.closed:
        regime = {Regime.CLOSED.value: {"initial_dP1": pa_to_kpa(cond.initial_dP1)}}
    return {
        "positive_gauge_dP1": pa_to_kpa(cond.dP1),
        "negative_gauge_dP2": pa_to_kpa(cond.dP2),
        "skeleton_regime": regime,
        "atmospheric_P0": pa_to_kpa(cond.atmospheric_P0),
    }


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
