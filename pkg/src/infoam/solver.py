"""Cross-section statics: equilibrium solves, continuation and forces.

The primary solver is a damped Newton iteration with a forward-difference
Jacobian on the full residual vector of each contact regime. Unknowns are
arc lengths, half-angles, contact lengths and tensions; Laplace's law is
written as ``2*theta*T = p*W*ell`` so a straight sheet (``theta = 0``) is a
regular point rather than an infinite radius.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from . import geometry as geo
from .errors import (InvalidVariant, NoBlockedState, NoConvergence, SolverError,
                     UnsupportedVariant, InputError)
from .model import (ActuatorSpec, CrossSectionState, CurvePoint, PressureCondition,
                    ResistanceModel, Variant, flat_state)
from .resistance import DEFAULT_RESISTANCE

log = logging.getLogger(__name__)

PI = math.pi


@dataclass(frozen=True)
class SolverSettings:
    theta2_step: float = 0.01
    residual_tol: float = 1e-10
    max_newton_iters: int = 100
    newton_damping: float = 1.0
    zero_force_interp: bool = True
    fd_step: float = 1e-8
    # contraction step used only when the skin carries no pressure (dP2 == 0)
    cr_step: float = 0.005
    max_steps: int = 2000

    def __post_init__(self):
        if self.theta2_step <= 0 or self.residual_tol <= 0 or self.max_newton_iters < 1:
            raise InputError("invalid solver settings")
        if not 0 < self.newton_damping <= 1:
            raise InputError("newton_damping must be in (0, 1]")


DEFAULT_SETTINGS = SolverSettings()


# ---------------------------------------------------------------------------
# residual systems


_BASE = {
    Variant.A: ("ell1", "ell2", "ell3", "theta1", "theta3", "w1", "T1", "T2", "T3"),
    Variant.B: ("ell1", "ell2", "ell3", "theta1", "w1", "T1", "T2", "T3"),
    Variant.C: ("ell1", "ell2", "ell3", "theta1", "theta3", "w1", "w2", "T1", "T2", "T3"),
    Variant.D: ("ell1", "ell2", "ell3", "theta1", "w1", "w2", "T1", "T2", "T3"),
}


class EquilibriumSystem:
    """Residual vector of one contact regime.

    ``theta2`` is either prescribed (continuation parameter) or, when
    ``target_cr`` is given, an unknown closed by the contraction equation.
    With no skin pressure the skin is straight, ``theta2`` is pinned at 0
    and its (vacuous) Laplace equation is replaced by the contraction
    equation. ``gas`` adds the skeleton gauge pressure as an unknown closed
    by Boyle's law: ``gas = (trapped P*V, P0, dead_volume)``.
    """

    def __init__(self, spec: ActuatorSpec, dP1, dP2, variant: Variant, theta2=None,
                 target_cr=None, gas=None):
        if (theta2 is None) == (target_cr is None):
            raise ValueError("give exactly one of theta2 / target_cr")
        self.spec = spec
        self.dP1 = float(dP1)
        self.dP2 = float(dP2)
        self.variant = Variant(variant)
        self.theta2 = theta2
        self.target_cr = target_cr
        self.gas = gas
        self.straight_skin = self.dP2 == 0.0
        if self.straight_skin and self.variant != Variant.A:
            raise InvalidVariant("a skin without pressure difference stays in variant A")
        names = list(_BASE[self.variant])
        if target_cr is not None and not self.straight_skin:
            names.append("theta2")
        if gas is not None:
            names.append("dP1")
        self.names = tuple(names)
        self.index = {n: i for i, n in enumerate(names)}
        K = spec.stiffness
        self.K = K
        self.rest = (spec.rest_L1, spec.rest_L2, spec.rest_L3)
        self.W = spec.width_W
        self.L10 = spec.pouch_length_L10
        p_ref = max(self.dP1, -self.dP2, 1e3)
        if gas is not None:
            p_ref = max(p_ref, 1e5)
        self.force_scale = self.W * self.L10 * p_ref
        self.typical = np.array([self._typical(n) for n in names])

    def _typical(self, name):
        if name.startswith("ell") or name.startswith("w"):
            return self.L10
        if name.startswith("theta"):
            return 1.0
        if name.startswith("T"):
            return self.force_scale
        if name == "dP1":
            return 1e5
        raise KeyError(name)

    # -- vector <-> state -------------------------------------------------------
    def state(self, x) -> CrossSectionState:
        g = dict(zip(self.names, (float(v) for v in x)))
        v = self.variant
        if self.straight_skin:
            theta2 = 0.0
        elif self.theta2 is not None:
            theta2 = float(self.theta2)
        else:
            theta2 = g["theta2"]
        theta1 = g["theta1"]
        if v.wrapped:
            theta3 = PI - theta2
            theta4 = theta2 - theta1
        else:
            theta3 = g["theta3"]
            theta4 = 0.0
        return CrossSectionState(
            variant=v, theta1=theta1, theta2=theta2, theta3=theta3, theta4=theta4,
            ell1=g["ell1"], ell2=g["ell2"], ell3=g["ell3"],
            w1=g["w1"], w2=g.get("w2", 0.0),
            T1=g["T1"], T2=g["T2"], T3=g["T3"],
            dP1=g.get("dP1", self.dP1), dP2=self.dP2,
        )

    def vector(self, s: CrossSectionState) -> np.ndarray:
        src = {
            "ell1": s.ell1, "ell2": s.ell2, "ell3": s.ell3, "theta1": s.theta1,
            "theta3": s.theta3, "w1": s.w1, "w2": s.w2, "T1": s.T1, "T2": s.T2,
            "T3": s.T3, "theta2": s.theta2, "dP1": s.dP1,
        }
        return np.array([src[n] for n in self.names], dtype=float)

    def in_domain(self, x) -> bool:
        g = dict(zip(self.names, x))
        if not all(math.isfinite(v) for v in x):
            return False
        if not 0.0 < g["theta1"] < PI:
            return False
        if "theta3" in g and not 0.0 < g["theta3"] < PI:
            return False
        if "theta2" in g and not 0.0 < g["theta2"] < PI:
            return False
        if g["ell1"] <= 0.0 or g["ell3"] <= 0.0 or g["ell2"] < 0.0:
            return False
        if "dP1" in g and g["dP1"] <= -self.gas[1]:
            return False
        return True

    # -- residuals ----------------------------------------------------------------
    def residuals(self, x) -> np.ndarray:
        s = self.state(x)
        return self.residuals_of(s)

    def residuals_of(self, s: CrossSectionState) -> np.ndarray:
        W, Fs, L = self.W, self.force_scale, self.L10
        K1, K2, K3 = self.K
        r1, r2, r3 = self.rest
        p1, p2 = s.dP1, self.dP2
        out = [
            (2.0 * s.theta1 * s.T1 - p1 * W * s.ell1) / Fs,
            (2.0 * s.theta3 * s.T3 - (p1 - p2) * W * s.ell3) / Fs,
            (s.T1 - K1 * (s.L1 - r1)) / Fs,
            (s.T2 - K2 * (s.L2 - r2)) / Fs,
            (s.T3 - K3 * (s.L3 - r3)) / Fs,
            (s.S1 - s.S3) / L,
        ]
        if not self.straight_skin:
            out.append((2.0 * s.theta2 * s.T2 + p2 * W * s.ell2) / Fs)
        if self.variant.wrapped:
            out.append((s.T1 - s.T2 - s.T3) / Fs)
        else:
            out.append((s.T1 * math.cos(s.theta1) + s.T3 * math.cos(s.theta3)
                        - s.T2 * math.cos(s.theta2)) / Fs)
            out.append((s.T1 * math.sin(s.theta1) - s.T2 * math.sin(s.theta2)
                        - s.T3 * math.sin(s.theta3)) / Fs)
        if self.variant.skin_contact:
            out.append((s.skin_sag - s.skeleton_rise) / L)
        if self.target_cr is not None:
            S0 = self.spec.initial_length
            out.append((self.spec.actuator_length(s.S1, s.S2) - S0 * (1.0 - self.target_cr)) / L)
        if self.gas is not None:
            trapped, P0, dead = self.gas
            V = skeleton_volume(self.spec, s) + dead
            out.append(((P0 + s.dP1) * V - trapped) / trapped)
        return np.array(out)


def skeleton_volume(spec: ActuatorSpec, state: CrossSectionState) -> float:
    """Gas volume of all pouches: layers x columns x width x (C1 + C3 segments).

    Each pouch section is taken as the two circular segments cut off by the
    chords of C1 and C3; end effects are neglected.
    """
    area = geo.segment_area_from_length(state.ell1, state.theta1)
    area += geo.segment_area_from_length(state.ell3, state.theta3)
    return spec.layers_m * spec.columns_n * spec.width_W * area


# ---------------------------------------------------------------------------
# Newton


def newton(system: EquilibriumSystem, x0, settings: SolverSettings = DEFAULT_SETTINGS):
    """Damped Newton with forward-difference Jacobian. Returns the solution vector."""
    x = np.array(x0, dtype=float)
    if not system.in_domain(x):
        raise NoConvergence("initial guess outside the admissible domain")
    r = system.residuals(x)
    n = x.size
    for _ in range(settings.max_newton_iters):
        err = float(np.max(np.abs(r)))
        if not math.isfinite(err):
            break
        if err < settings.residual_tol:
            return x
        J = np.empty((r.size, n))
        for j in range(n):
            h = settings.fd_step * max(abs(x[j]), system.typical[j])
            xp = x.copy()
            xp[j] += h
            if not system.in_domain(xp):
                xp[j] = x[j] - h
                h = -h
            J[:, j] = (system.residuals(xp) - r) / h
        try:
            dx = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            dx = np.linalg.lstsq(J, -r, rcond=None)[0]
        lam = settings.newton_damping
        norm0 = float(np.linalg.norm(r))
        while lam > 1e-8:
            xn = x + lam * dx
            if system.in_domain(xn):
                rn = system.residuals(xn)
                if np.all(np.isfinite(rn)) and np.linalg.norm(rn) < norm0:
                    x, r = xn, rn
                    break
            lam *= 0.5
        else:
            break
    err = float(np.max(np.abs(r)))
    if err < settings.residual_tol:
        return x
    raise NoConvergence(f"Newton failed for variant {system.variant.value}", err)


def max_residual(spec: ActuatorSpec, state: CrossSectionState, theta2_given=True) -> float:
    """Independent re-evaluation of every active equation at ``state``."""
    if state.dP2 == 0.0 and state.theta2 == 0.0:
        sys_ = EquilibriumSystem(spec, state.dP1, state.dP2, state.variant,
                                 target_cr=spec.contraction_ratio(state.S1, state.S2))
    else:
        sys_ = EquilibriumSystem(spec, state.dP1, state.dP2, state.variant, theta2=state.theta2)
    return float(np.max(np.abs(sys_.residuals_of(state))))


# ---------------------------------------------------------------------------
# seeds and variant changes


def _seed_states(spec: ActuatorSpec, dP1, dP2):
    """Rough inflated-pouch guesses for a cold start of variant A."""
    W = spec.width_W
    L1, L3 = spec.rest_L1, spec.rest_L3
    L2 = spec.rest_L2
    for th1, th3, wfrac, th2 in ((0.8, 0.9, 0.4, 0.3), (0.6, 0.5, 0.6, 0.15),
                                 (1.0, 1.3, 0.3, 0.5), (1.2, 1.6, 0.2, 0.8),
                                 (0.5, 0.3, 0.7, 0.08)):
        w1 = wfrac * L3
        ell3 = L3 - w1
        T1 = max(dP1, 1.0) * W * L1 / (2 * th1)
        T3 = max(dP1 - dP2, 1.0) * W * ell3 / (2 * th3)
        if dP2 == 0.0:
            th2 = 0.0
        Tx = T1 * math.cos(th1) + T3 * math.cos(th3)
        T2 = max(Tx / max(math.cos(th2), 0.2), 1.0)
        ell2 = L2 * (1.0 + 0.02)
        yield CrossSectionState(Variant.A, th1, th2, th3, 0.0, L1, ell2, ell3, w1, 0.0,
                                T1, T2, T3, dP1, dP2)


def convert_state(state: CrossSectionState, variant: Variant) -> CrossSectionState:
    """Map a converged state into the unknowns of another regime (warm start)."""
    variant = Variant(variant)
    s = state
    if variant == s.variant:
        return s
    kw = {}
    if variant.wrapped and not s.variant.wrapped:
        # overlap starts empty: theta4 = 0, theta3 continues C1's circle
        kw.update(theta4=max(s.theta2 - s.theta1, 0.0), theta3=PI - s.theta2)
    if variant.skin_contact and not s.variant.skin_contact:
        kw.update(w2=max(s.w2, 1e-6 * s.ell1))
    return s.with_(variant=variant, **kw)


def classify_variant(state: CrossSectionState) -> Variant:
    """Regime the next continuation step must use (transitions only go forward)."""
    v = state.variant
    wraps = state.theta1 <= state.theta2
    contacts = state.skin_sag > state.skeleton_rise
    if v == Variant.A:
        if wraps and contacts:
            return Variant.D
        if wraps:
            return Variant.B
        if contacts:
            return Variant.C
        return Variant.A
    if v == Variant.B:
        return Variant.D if contacts else Variant.B
    if v == Variant.C:
        return Variant.D if wraps else Variant.C
    return Variant.D


def check_state(state: CrossSectionState, tol=1e-9):
    """Raise InvalidVariant if the regime's closure conditions are violated."""
    scale = max(state.ell1, 1e-12)
    if state.w1 < -tol * scale:
        raise InvalidVariant(f"negative mid-plane contact w1 = {state.w1:.3e} m", "w1")
    if state.variant.skin_contact and state.w2 < -tol * scale:
        raise InvalidVariant(f"negative skin contact w2 = {state.w2:.3e} m", "w2")
    if state.variant.wrapped and state.theta4 < -1e-9:
        raise InvalidVariant(f"negative wrap angle theta4 = {state.theta4:.3e}", "theta4")
    if state.variant.wrapped and state.ell2 < 0:
        raise InvalidVariant("skin fully wrapped onto the pouch", "ell2")


# ---------------------------------------------------------------------------
# public operations


def _settings(settings):
    return DEFAULT_SETTINGS if settings is None else settings


def _is_flat(dP1, dP2):
    return dP1 == 0.0 and dP2 == 0.0


def solve_equilibrium(spec: ActuatorSpec, cond: PressureCondition, theta2, variant=Variant.A,
                      warm_start: Optional[CrossSectionState] = None,
                      settings: Optional[SolverSettings] = None,
                      allow_slack=False) -> CrossSectionState:
    """Equilibrium cross-section at a prescribed skin half-angle ``theta2``."""
    settings = _settings(settings)
    dP1, dP2 = cond.dP1, cond.dP2
    if _is_flat(dP1, dP2):
        return flat_state(spec)
    if dP2 == 0.0:
        raise InvalidVariant("with dP2 = 0 the skin is straight; use solve_at_contraction")
    if not 0.0 < theta2 < PI:
        raise InputError("theta2 must lie in (0, pi)")
    system = EquilibriumSystem(spec, dP1, dP2, variant, theta2=theta2)
    seeds = [warm_start] if warm_start is not None else []
    if warm_start is None:
        seeds = [convert_state(s.with_(theta2=theta2), variant) for s in _seed_states(spec, dP1, dP2)]
    return _solve_from(system, seeds, settings, allow_slack)


def solve_at_contraction(spec: ActuatorSpec, cond: PressureCondition, cr, variant=Variant.A,
                         warm_start: Optional[CrossSectionState] = None,
                         settings: Optional[SolverSettings] = None, gas=None,
                         allow_slack=False) -> CrossSectionState:
    """Equilibrium at a prescribed contraction ratio (theta2 becomes unknown)."""
    settings = _settings(settings)
    dP1, dP2 = cond.dP1, cond.dP2
    if _is_flat(dP1, dP2) and gas is None:
        raise NoBlockedState("no pressure applied: the actuator stays flat")
    system = EquilibriumSystem(spec, dP1, dP2, variant, target_cr=cr, gas=gas)
    if warm_start is not None:
        seeds = [warm_start]
    else:
        seeds = [convert_state(s, variant) for s in _seed_states(spec, dP1, dP2)]
    return _solve_from(system, seeds, settings, allow_slack)


def _solve_from(system, seeds, settings, allow_slack=False):
    last = None
    for seed in seeds:
        x0 = system.vector(seed)
        try:
            x = newton(system, x0, settings)
        except NoConvergence as exc:
            last = exc
            continue
        state = system.state(x)
        if not allow_slack and min(state.T1, state.T2, state.T3) < -1e-9:
            last = NoConvergence("converged to a compressive (unphysical) root", 0.0)
            continue
        return state
    raise last if last is not None else NoConvergence("no seed available")


def _skeleton_pressure(cond: PressureCondition, state=None):
    return cond.dP1 if state is None else state.dP1


def force_at_state(spec: ActuatorSpec, cond: PressureCondition, state: CrossSectionState,
                   resistance: Optional[ResistanceModel] = None):
    """Output force F and contraction resistance Fr at a solved state."""
    resistance = DEFAULT_RESISTANCE if resistance is None else resistance
    Ssum = spec.actuator_length(state.S1, state.S2)
    shortening = spec.initial_length - Ssum
    Fr = resistance.kr(state.dP1) * shortening
    if abs(shortening) <= 1e-12 * spec.initial_length:
        Fr = 0.0
    if state.variant.skin_contact:
        F = 2.0 * state.T2 - Fr
    else:
        F = 2.0 * state.T2 + (-state.dP2) * state.H * spec.width_W - Fr
    return F, Fr


def make_point(spec, cond, state, resistance) -> CurvePoint:
    F, Fr = force_at_state(spec, cond, state, resistance)
    Ssum = spec.actuator_length(state.S1, state.S2)
    cr = (spec.initial_length - Ssum) / spec.initial_length
    return CurvePoint(cr, F, Fr, Ssum, state, state.dP1)


def _blocked_in_variant(spec, cond, variant, warm, settings, gas=None):
    if warm is not None:
        try:
            return solve_at_contraction(spec, cond, 0.0, variant, convert_state(warm, variant),
                                        settings, gas=gas)
        except SolverError:
            pass
    return solve_at_contraction(spec, cond, 0.0, variant, None, settings, gas=gas)


def is_consistent(state: CrossSectionState) -> bool:
    """True when ``state`` satisfies its own regime's closure and switch conditions."""
    try:
        check_state(state)
    except InvalidVariant:
        return False
    return classify_variant(state) == state.variant


def blocked_state(spec: ActuatorSpec, cond: PressureCondition,
                  settings: Optional[SolverSettings] = None, gas=None,
                  warm_start: Optional[CrossSectionState] = None) -> CrossSectionState:
    """State at zero contraction.

    Variant A is solved first. If it already violates the switch rules, the
    remaining regimes are tried (the classifier's pick first) and the first
    self-consistent one is kept.
    """
    settings = _settings(settings)
    if _is_flat(cond.dP1, cond.dP2) and gas is None:
        raise NoBlockedState("no pressure applied: the actuator stays flat")
    try:
        base = _blocked_in_variant(spec, cond, Variant.A, warm_start, settings, gas)
    except SolverError as exc:
        if gas is not None or warm_start is not None:
            raise NoBlockedState(f"blocked state not found: {exc}") from exc
        try:
            base = _blocked_by_bisection(spec, cond, settings)
        except SolverError:
            raise NoBlockedState(f"blocked state not found: {exc}") from exc
    first = classify_variant(base)
    if first == Variant.A:
        return base
    order = [first] + [v for v in (Variant.C, Variant.B, Variant.D) if v != first]
    for v in order:
        try:
            state = _blocked_in_variant(spec, cond, v, base, settings, gas)
        except SolverError:
            continue
        if is_consistent(state):
            return state
    raise NoBlockedState("no contact regime is self-consistent at zero contraction")


def _blocked_by_bisection(spec, cond, settings):
    """Fallback: bracket CR(theta2) = 0 by marching theta2, then bisect."""
    if cond.dP2 == 0.0:
        raise NoBlockedState("bisection on theta2 needs a skin pressure difference")
    K2 = spec.stiffness[1]
    th_min = -cond.dP2 * spec.width_W / (2.0 * K2)
    th = max(2.0 * th_min, 0.02)
    prev = None
    state = None
    while th < PI - 0.05:
        state = solve_equilibrium(spec, cond, th, Variant.A, state, settings)
        cr = spec.contraction_ratio(state.S1, state.S2)
        if prev is not None and prev[1] < 0.0 <= cr:
            lo, hi, s_lo = prev[0], th, prev[2]
            for _ in range(100):
                mid = 0.5 * (lo + hi)
                s_mid = solve_equilibrium(spec, cond, mid, Variant.A, s_lo, settings)
                c = spec.contraction_ratio(s_mid.S1, s_mid.S2)
                if abs(c) < 1e-12 or hi - lo < 1e-14:
                    return s_mid
                if c < 0:
                    lo, s_lo = mid, s_mid
                else:
                    hi = mid
            return s_mid
        prev = (th, cr, state)
        th += 0.02
    raise NoBlockedState("CR = 0 is not bracketed along theta2")


def blocked_force(spec: ActuatorSpec, cond: PressureCondition,
                  resistance: Optional[ResistanceModel] = None,
                  settings: Optional[SolverSettings] = None):
    """(F, state) at zero contraction; resistance vanishes there."""
    state = blocked_state(spec, cond, settings)
    F, _ = force_at_state(spec, cond, state, resistance)
    return F, state


@dataclass
class Curve:
    points: List[CurvePoint]
    spec: ActuatorSpec
    condition: PressureCondition
    terminal_CR_max: float = float("nan")
    truncated: bool = False
    message: str = ""
    theta2_values: List[float] = field(default_factory=list)
    gas: Optional[object] = None

    @property
    def cr(self):
        return np.array([p.CR for p in self.points])

    @property
    def force(self):
        return np.array([p.F for p in self.points])

    @property
    def blocked_force(self):
        return self.points[0].F


def _interp_zero(p_prev: CurvePoint, p_next: CurvePoint) -> CurvePoint:
    f0, f1 = p_prev.F, p_next.F
    t = f0 / (f0 - f1) if f0 != f1 else 1.0
    cr = p_prev.CR + t * (p_next.CR - p_prev.CR)
    Fr = p_prev.resistance_Fr + t * (p_next.resistance_Fr - p_prev.resistance_Fr)
    S = p_prev.actuator_length_Ssum + t * (p_next.actuator_length_Ssum - p_prev.actuator_length_Ssum)
    dP1 = p_prev.skeleton_gauge_dP1 + t * (p_next.skeleton_gauge_dP1 - p_prev.skeleton_gauge_dP1)
    # keep a converged state with non-negative tensions for the end point
    state = p_next.state if min(p_next.state.tensions) >= -1e-9 else p_prev.state
    return CurvePoint(cr, 0.0, Fr, S, state, dP1)


def trace_curve(spec: ActuatorSpec, cond: PressureCondition,
                resistance: Optional[ResistanceModel] = None,
                settings: Optional[SolverSettings] = None) -> Curve:
    """Force-contraction curve from the blocked state to zero force."""
    settings = _settings(settings)
    resistance = DEFAULT_RESISTANCE if resistance is None else resistance
    start = blocked_state(spec, cond, settings)
    return _continue(spec, cond, resistance, settings, start, gas=None)


def _continue(spec, cond, resistance, settings, start, gas):
    first = make_point(spec, cond, start, resistance)
    curve = Curve([first], spec, cond, theta2_values=[start.theta2])
    if first.F <= 0.0:
        curve.terminal_CR_max = first.CR
        return curve
    straight = cond.dP2 == 0.0
    state = start
    prev_state = None
    variant = classify_variant(state)
    theta2 = state.theta2
    cr = 0.0
    for _ in range(settings.max_steps):
        if straight:
            cr += settings.cr_step
            if cr >= 1.0:
                curve.truncated, curve.message = True, "contraction reached 100 %"
                break
        else:
            theta2 += settings.theta2_step
            if theta2 >= PI - 1e-6:
                curve.truncated, curve.message = True, "theta2 reached pi"
                break
        try:
            state_new = _step(spec, cond, variant, theta2, cr, state, prev_state, settings, gas,
                              straight)
        except SolverError as exc:
            curve.truncated = True
            curve.message = f"step {len(curve.points)}: {exc}"
            log.warning("curve truncated: %s", curve.message)
            break
        pt = make_point(spec, cond, state_new, resistance)
        if pt.CR <= curve.points[-1].CR:
            curve.truncated, curve.message = True, "contraction stopped increasing"
            break
        if pt.F <= 0.0:
            th_end = theta2
            if settings.zero_force_interp:
                prev_pt = curve.points[-1]
                frac = prev_pt.F / (prev_pt.F - pt.F) if prev_pt.F != pt.F else 1.0
                th_end = curve.theta2_values[-1] + frac * (theta2 - curve.theta2_values[-1])
                pt = _interp_zero(prev_pt, pt)
            curve.points.append(pt)
            curve.theta2_values.append(th_end)
            break
        curve.points.append(pt)
        curve.theta2_values.append(theta2)
        prev_state, state = (state if state.variant == state_new.variant else None), state_new
        variant = classify_variant(state)
    else:
        curve.truncated, curve.message = True, "step limit reached"
    curve.terminal_CR_max = curve.points[-1].CR
    return curve


def _step(spec, cond, variant, theta2, cr, state, prev_state, settings, gas, straight):
    guesses = []
    warm = convert_state(state, variant)
    if prev_state is not None and prev_state.variant == variant:
        sysv = EquilibriumSystem(spec, cond.dP1, cond.dP2, variant, theta2=0.1)
        # secant predictor from the last two converged states
        a, b = sysv.vector(prev_state), sysv.vector(state)
        pred = sysv.state(2.0 * b - a)
        guesses.append(pred)
    guesses.append(warm)
    last = None
    for g in guesses:
        try:
            return _step_one(spec, cond, variant, theta2, cr, g, settings, gas, straight)
        except InvalidVariant as exc:
            last = exc
            released = _RELEASE.get((variant, exc.reason))
            if released is None:
                continue
            try:
                return _step_one(spec, cond, released, theta2, cr, convert_state(g, released),
                                 settings, gas, straight)
            except SolverError as exc2:
                last = exc2
        except SolverError as exc:
            last = exc
    raise last


# a contact that would need a negative length opens again
_RELEASE = {
    (Variant.C, "w2"): Variant.A,
    (Variant.D, "w2"): Variant.B,
    (Variant.B, "theta4"): Variant.A,
    (Variant.D, "theta4"): Variant.C,
}


def _step_one(spec, cond, variant, theta2, cr, g, settings, gas, straight):
    if straight:
        s = solve_at_contraction(spec, cond, cr, variant, g, settings, gas=gas, allow_slack=True)
    elif gas is not None:
        system = EquilibriumSystem(spec, cond.dP1, cond.dP2, variant, theta2=theta2, gas=gas)
        s = _solve_from(system, [g.with_(theta2=theta2)], settings, allow_slack=True)
    else:
        s = solve_equilibrium(spec, cond, theta2, variant, g.with_(theta2=theta2), settings,
                              allow_slack=True)
    check_state(s)
    return s


# ---------------------------------------------------------------------------
# force decomposition


def force_decomposition(spec: ActuatorSpec, cond: PressureCondition, state: CrossSectionState,
                        resistance: Optional[ResistanceModel] = None):
    """Two free-body cuts through one repeating unit.

    Cut I runs through the skin mid-gap: skin tension 2*T2 plus the suction
    (P0 - P2) H W. Cut II runs through the pouch centre: sheet tensions
    2*T1 + 2*T3 minus the inflation push 2 (P1 - P0) H1 W, with H1 the
    mid-plane to apex height of one layer.
    """
    if state.variant.skin_contact:
        raise UnsupportedVariant("cut II needs a free skin gap (variants A/B)")
    W = spec.width_W
    push_I = (-state.dP2) * state.H * W
    push_II = 2.0 * state.dP1 * state.pouch_height * W
    return {
        "cut_I": {"tension_2T2": 2.0 * state.T2, "push_P0P2HW": push_I},
        "cut_II": {"tension_2T1_2T3": 2.0 * state.T1 + 2.0 * state.T3, "push_2P1P0H1W": push_II},
    }


def decomposition_totals(parts):
    cut1 = parts["cut_I"]["tension_2T2"] + parts["cut_I"]["push_P0P2HW"]
    cut2 = parts["cut_II"]["tension_2T1_2T3"] - parts["cut_II"]["push_2P1P0H1W"]
    return cut1, cut2
