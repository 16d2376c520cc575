"""Performance metrics from measured traces.

Strain, rates, stresses, force/power/work densities and the mechanical
energy conversion efficiency. Inputs are SI; ``read_trace_csv`` converts
the usual mm/kPa logger columns.
"""

import csv
import json
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import EmptyTrace, InputError, ZeroInputEnergy
from .model import ActuatorSpec, TimeSeries

G = 9.81


@dataclass
class MetricsReport:
    strain: Optional[float] = None
    peak_strain_rate: Optional[float] = None
    actuation_stress: Optional[float] = None
    force_to_weight: Optional[float] = None
    specific_force_to_weight: Optional[float] = None
    force_to_volume: Optional[float] = None
    specific_force_to_volume: Optional[float] = None
    peak_power: Optional[float] = None
    peak_power_density: Optional[float] = None
    peak_power_to_volume: Optional[float] = None
    specific_work: Optional[float] = None
    work_density: Optional[float] = None
    efficiency_eta: Optional[float] = None
    efficiency_trace: List[Tuple[float, float]] = field(default_factory=list)

    def to_json(self):
        d = asdict(self)
        d["efficiency_trace"] = [list(p) for p in self.efficiency_trace]
        return json.dumps(d, indent=2)

    def to_text(self):
        units = {
            "strain": "-", "peak_strain_rate": "1/s", "actuation_stress": "Pa",
            "force_to_weight": "N/kg", "specific_force_to_weight": "N/(kg Pa)",
            "force_to_volume": "N/m^3", "specific_force_to_volume": "N/(m^3 Pa)",
            "peak_power": "W", "peak_power_density": "W/kg", "peak_power_to_volume": "W/m^3",
            "specific_work": "J/kg", "work_density": "J/m^3", "efficiency_eta": "-",
        }
        width = max(len(k) for k in units)
        lines = []
        for k, u in units.items():
            v = getattr(self, k)
            txt = "n/a" if v is None else f"{v:.6g}"
            lines.append(f"{k.ljust(width)}  {txt:>14}  {u}")
        return "\n".join(lines) + "\n"


def moving_average(y, window=5):
    """Centred moving average; the window shrinks at both ends."""
    y = np.asarray(y, dtype=float)
    half = window // 2
    c = np.concatenate([[0.0], np.cumsum(y)])
    idx = np.arange(y.size)
    lo = np.maximum(idx - half, 0)
    hi = np.minimum(idx + half + 1, y.size)
    return (c[hi] - c[lo]) / (hi - lo)


def _peak_rate(t, y):
    return float(np.max(np.diff(y) / np.diff(t)))


def compute_metrics(spec: ActuatorSpec, meta: dict, trace: TimeSeries, g=G, smooth=False):
    """Metrics for one test.

    ``meta`` keys (all optional): ``load_mass`` (kg), ``cross_area_A`` (m^2),
    ``pressure_dP`` (Pa), ``force_F`` (N), ``initial_length`` (m, defaults
    to the skeleton length of ``spec``). Metrics whose inputs are missing
    stay ``None``.
    """
    if "displacement_x" not in trace and "load_height_h" not in trace:
        raise EmptyTrace("trace needs displacement_x or load_height_h")
    t = trace.time
    rep = MetricsReport()
    L0 = meta.get("initial_length", spec.initial_length)
    mL = meta.get("load_mass")
    A = meta.get("cross_area_A")
    dP = meta.get("pressure_dP")
    mass = spec.actuator_mass
    Vflat = spec.flat_volume_Vflat

    def chan(name):
        y = trace[name]
        return moving_average(y) if smooth else y

    if "displacement_x" in trace:
        x = chan("displacement_x")
        rep.strain = float(np.max(x - x[0])) / L0
        rep.peak_strain_rate = _peak_rate(t, x) / L0

    F = meta.get("force_F")
    if F is None and "force_F" in trace:
        F = float(np.max(trace["force_F"]))
    if F is None and mL is not None:
        F = mL * g
    if F is not None:
        if A:
            rep.actuation_stress = F / A
        if mass:
            rep.force_to_weight = F / mass
            if dP:
                rep.specific_force_to_weight = F / (mass * dP)
        if Vflat:
            rep.force_to_volume = F / Vflat
            if dP:
                rep.specific_force_to_volume = F / (Vflat * dP)

    if "load_height_h" in trace and mL is not None:
        h = chan("load_height_h")
        lift = mL * g
        rep.peak_power = lift * _peak_rate(t, h)
        work = lift * float(np.max(h - h[0]))
        if mass:
            rep.peak_power_density = rep.peak_power / mass
            rep.specific_work = work / mass
        if Vflat:
            rep.peak_power_to_volume = rep.peak_power / Vflat
            rep.work_density = work / Vflat
        if "flow_q" in trace and "pressure_dP" in trace:
            try:
                rep.efficiency_eta, rep.efficiency_trace = energy_efficiency(trace, mL, trace, g)
            except ZeroInputEnergy:
                pass
    return rep


def energy_efficiency(flow_pressure: TimeSeries, load_mass, height: TimeSeries, g=G):
    """Total efficiency and its evolution against normalised stroke.

    E_in is the trapezoid integral of q*dP; E_out = m_L g (h - h0). Traces
    on different time bases are resampled onto the union grid.
    """
    for name in ("flow_q", "pressure_dP"):
        if name not in flow_pressure:
            raise InputError(f"flow/pressure trace lacks {name}")
    if "load_height_h" not in height:
        raise InputError("height trace lacks load_height_h")
    t1, t2 = flow_pressure.time, height.time
    if t1.shape == t2.shape and np.array_equal(t1, t2):
        grid = t1
    else:
        lo, hi = max(t1[0], t2[0]), min(t1[-1], t2[-1])
        grid = np.union1d(t1, t2)
        grid = grid[(grid >= lo) & (grid <= hi)]
        if grid.size < 2:
            raise EmptyTrace("traces do not overlap in time")
    q = np.interp(grid, t1, flow_pressure["flow_q"])
    dP = np.interp(grid, t1, flow_pressure["pressure_dP"])
    h = np.interp(grid, t2, height["load_height_h"])
    E_in = cumulative_trapezoid(q * dP, grid, initial=0.0)
    if E_in[-1] == 0.0:
        raise ZeroInputEnergy("input energy is zero")
    E_out = load_mass * g * (h - h[0])
    stroke = h - h[0]
    span = stroke[-1] if stroke[-1] != 0 else 1.0
    curve = [(float(s / span), float(eo / ei)) for s, eo, ei in zip(stroke, E_out, E_in) if ei > 0]
    return float(E_out[-1] / E_in[-1]), curve


# --- CSV --------------------------------------------------------------------

_COLUMNS = {
    "x_mm": ("displacement_x", 1e-3), "x_m": ("displacement_x", 1.0),
    "h_mm": ("load_height_h", 1e-3), "h_m": ("load_height_h", 1.0),
    "q_m3s": ("flow_q", 1.0),
    "dP_kPa": ("pressure_dP", 1e3), "dP_Pa": ("pressure_dP", 1.0),
    "F_N": ("force_F", 1.0),
}


def read_trace_csv(path) -> TimeSeries:
    """Header ``t_s`` plus any of x_mm, h_mm, q_m3s, dP_kPa, F_N (or SI x_m, h_m, dP_Pa)."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise EmptyTrace(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if "t_s" not in header:
        raise InputError(f"{path}: missing t_s column")
    for h in header:
        if h != "t_s" and h not in _COLUMNS:
            raise InputError(f"{path}: unknown column {h!r}")
    values = []
    for line, r in enumerate(rows[1:], start=2):
        if not r:
            continue
        if len(r) != len(header):
            raise InputError(f"{path}:{line}: expected {len(header)} columns, got {len(r)}")
        row = []
        for col, v in zip(header, r):
            try:
                row.append(float(v))
            except ValueError:
                raise InputError(f"{path}:{line}: column {col!r}: bad number {v!r}") from None
        values.append(row)
    if len(values) < 2:
        raise EmptyTrace(f"{path}: need at least two samples")
    data = np.array(values, dtype=float)
    chans = {}
    for i, h in enumerate(header):
        if h == "t_s":
            continue
        name, scale = _COLUMNS[h]
        if name in chans:
            raise InputError(f"{path}: channel {name} given twice")
        chans[name] = data[:, i] * scale
    return TimeSeries(data[:, header.index("t_s")], chans)
