"""Contraction-resistance coefficient from compression tests."""

import csv
import math

import numpy as np

from .errors import DegenerateFit, InputError, InsufficientData
from .model import ActuatorSpec, ResistanceModel

LINEAR_THRESHOLD = 0.009

# kr per unit skeleton pressure, N/m per Pa. Chosen so the reference
# actuator stops at ~43 % contraction at +90/-60 kPa; no compression data
# ships with the package. Replace with fitted samples when available.
DEFAULT_KR_PER_PA = 2.8e-3


def max_contraction_displacement(spec: ActuatorSpec):
    """n (1 - 2/pi) L10 + (n - 1) L20."""
    n = spec.columns_n
    return n * (1.0 - 2.0 / math.pi) * spec.pouch_length_L10 + (n - 1) * spec.gap_length_L20


def fit_kr(measurements, spec: ActuatorSpec, dP1=None, linear_threshold=LINEAR_THRESHOLD):
    """Fit kr from (displacement m, force N) samples.

    OLS on the samples beyond ``linear_threshold``. The slope times the
    total gap length gives the maximum resistance, which is spread over the
    theoretical maximum contraction. Returns (kr, slope, r2).
    """
    data = np.asarray(measurements, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise InputError("measurements must be (displacement, force) pairs")
    d, F = data[:, 0], data[:, 1]
    if np.any(np.diff(d) <= 0):
        raise InputError("displacements must be strictly increasing")
    keep = d > linear_threshold
    if keep.sum() < 2:
        raise InsufficientData(f"need >= 2 samples above {linear_threshold * 1e3:g} mm, got {int(keep.sum())}")
    x, y = d[keep], F[keep]
    xm = x.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0.0:
        raise DegenerateFit("zero displacement variance")
    slope = float(np.sum((x - xm) * (y - y.mean())) / sxx)
    intercept = float(y.mean() - slope * xm)
    resid = y - (slope * x + intercept)
    sst = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / sst if sst > 0 else 1.0
    Fr_max = slope * (spec.columns_n - 1) * spec.gap_length_L20
    kr = Fr_max / max_contraction_displacement(spec)
    return kr, slope, r2


def build_resistance_model(fits) -> ResistanceModel:
    """Piecewise-linear kr(dP1) from (dP1 Pa, kr N/m) pairs."""
    fits = sorted((float(p), float(k)) for p, k in fits)
    if not fits:
        raise InsufficientData("need at least one (dP1, kr) fit")
    return ResistanceModel(tuple(fits))


def default_resistance() -> ResistanceModel:
    """Calibrated kr at the three usual test pressures (30/60/90 kPa)."""
    return ResistanceModel(tuple((p, DEFAULT_KR_PER_PA * p) for p in (30e3, 60e3, 90e3)))


DEFAULT_RESISTANCE = default_resistance()


def read_measurements_csv(path):
    """Rows of ``d_mm,F_N``; returns [(d m, F N), ...]."""
    rows = []
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"d_mm", "F_N"} <= set(reader.fieldnames):
                raise InputError(f"{path}: expected header d_mm,F_N")
            for i, row in enumerate(reader, start=2):
                try:
                    rows.append((float(row["d_mm"]) * 1e-3, float(row["F_N"])))
                except (TypeError, ValueError) as exc:
                    raise InputError(f"{path}:{i}: {exc}") from exc
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return rows
