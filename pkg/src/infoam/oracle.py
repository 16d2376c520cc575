"""Reference solutions by nested bisection.

Written independently of the Newton path: at fixed theta2 every regime
reduces to one (A, B) or two (C, D) scalar unknowns once the closed-form
relations between radii, tensions and lengths are substituted. Each
scalar root is bracketed by a coarse scan and refined by bisection. The
blocked state adds an outer bisection on theta2 (or on theta1 when the
skin carries no pressure and stays straight).

Slow and simple on purpose; use it for cross-checks only.
"""

import math

from .model import CrossSectionState, Variant

PI = math.pi


class Undefined(ArithmeticError):
    """The reduced function has no value inside a bracket."""


def bisect(f, a, b, fa=None, iters=200, xtol=1e-15):
    fa = f(a) if fa is None else fa
    for _ in range(iters):
        m = 0.5 * (a + b)
        fm = f(m)
        for frac in (0.3, 0.7):
            if fm is not None and math.isfinite(fm):
                break
            m = a + frac * (b - a)
            fm = f(m)
        if fm is None or not math.isfinite(fm):
            raise Undefined(m)
        if fm == 0.0:
            return m
        if (fm < 0.0) == (fa < 0.0):
            a, fa = m, fm
        else:
            b = m
        if abs(b - a) <= xtol * max(1.0, abs(a)):
            break
    return 0.5 * (a + b)


def scan_roots(f, grid):
    """All sign-change brackets of ``f`` on ``grid`` (NaN entries break brackets)."""
    out = []
    prev = None
    for x in grid:
        v = f(x)
        if v is None or not math.isfinite(v):
            prev = None
            continue
        if prev is not None and (prev[1] < 0.0) != (v < 0.0):
            out.append((prev[0], x, prev[1]))
        prev = (x, v)
    return out


def _linspace(a, b, n):
    return [a + (b - a) * i / (n - 1) for i in range(n)]


def _logspace(a, b, n):
    la, lb = math.log(a), math.log(b)
    return [math.exp(la + (lb - la) * i / (n - 1)) for i in range(n)]


class _Consts:
    def __init__(self, spec, dP1, dP2):
        E, W = spec.elastic_modulus_E, spec.width_W
        self.W = W
        self.p1, self.p2 = dP1, dP2
        self.L1a = spec.rest_L1
        self.L2a = spec.rest_L2
        self.L3a = spec.rest_L3
        self.K1 = E * spec.skeleton_thickness_t1 * W / self.L1a
        self.K2 = E * spec.skin_thickness_t2 * W / self.L2a
        self.K3 = E * spec.skeleton_thickness_t1 * W / self.L3a
        self.n = spec.columns_n
        self.L10, self.L20 = spec.pouch_length_L10, spec.gap_length_L20

    def c1(self, th1):
        """Radius and tension of C1 from Laplace + Hooke."""
        den = 2.0 * self.K1 * th1 - self.p1 * self.W
        if den <= 0.0:
            return None
        R1 = self.K1 * self.L1a / den
        return R1, self.p1 * self.W * R1

    def cr(self, S1, S2):
        S0 = self.n * self.L10 + (self.n - 1) * self.L20
        return (S0 - (self.n * S1 + (self.n - 1) * S2)) / S0


def _rec(variant, th1, th2, th3, th4, R1, R2, R3, w1, w2, T1, T2, T3, k):
    return dict(variant=variant, theta1=th1, theta2=th2, theta3=th3, theta4=th4,
                R1=R1, R2=R2, R3=R3, w1=w1, w2=w2, T1=T1, T2=T2, T3=T3, k=k)


# --- fixed theta2, per regime ------------------------------------------------

def _a_given(k, th2, th1, R2):
    c1 = k.c1(th1)
    if c1 is None:
        return None
    R1, T1 = c1
    T2 = -k.p2 * k.W * R2
    a = T2 * math.cos(th2) - T1 * math.cos(th1)
    b = T1 * math.sin(th1) - T2 * math.sin(th2)
    T3 = math.hypot(a, b)
    th3 = math.atan2(b, a)
    if not 0.0 < th3 < PI:
        return None
    R3 = T3 / ((k.p1 - k.p2) * k.W)
    w1 = 2.0 * R1 * math.sin(th1) - 2.0 * R3 * math.sin(th3)
    return _rec(Variant.A, th1, th2, th3, 0.0, R1, R2, R3, w1, 0.0, T1, T2, T3, k)


def _b_given(k, th2, th1, R2):
    c1 = k.c1(th1)
    if c1 is None:
        return None
    R1, T1 = c1
    th3, th4 = PI - th2, th2 - th1
    T2 = -k.p2 * k.W * R2
    T3 = T1 - T2
    if T3 <= 0.0:
        return None
    R3 = T3 / ((k.p1 - k.p2) * k.W)
    S1 = 2.0 * R1 * math.sin(th1)
    w1 = S1 - 2.0 * R3 * math.sin(th3) + 2.0 * R1 * (math.sin(th3) - math.sin(th1))
    return _rec(Variant.B, th1, th2, th3, th4, R1, R2, R3, w1, 0.0, T1, T2, T3, k)


def _c3_residual(r):
    k = r["k"]
    L3 = 2.0 * r["R3"] * r["theta3"] + 2.0 * r["R1"] * r["theta4"] + r["w1"]
    return (r["T3"] - k.K3 * (L3 - k.L3a)) / (k.K3 * k.L3a)


def _height_residual(r):
    return (r["R2"] * (1.0 - math.cos(r["theta2"])) - r["R3"] * (1.0 - math.cos(r["theta3"]))) / r["k"].L10


def _free_skin_R2(k, th2, overlap):
    den = 2.0 * k.K2 * th2 + k.p2 * k.W
    if den <= 0.0:
        return None
    R2 = k.K2 * (k.L2a - overlap) / den
    return R2 if R2 > 0.0 else None


def _row_A(k, th2, th1):
    R2 = _free_skin_R2(k, th2, 0.0)
    return None if R2 is None else _a_given(k, th2, th1, R2)


def _row_B(k, th2, th1):
    c1 = k.c1(th1)
    if c1 is None:
        return None
    R2 = _free_skin_R2(k, th2, 2.0 * c1[0] * (th2 - th1))
    return None if R2 is None else _b_given(k, th2, th1, R2)


def _skin_contact_row(k, th2, th1, base):
    """Solve the height condition for R2; w2 then follows from Hooke on C2."""
    def h(R2):
        r = base(k, th2, th1, R2)
        return None if r is None else _height_residual(r)

    grid = _logspace(1e-3 * k.L10, 1e2 * k.L10, 40)
    for a, b, fa in scan_roots(h, grid):
        try:
            R2 = bisect(h, a, b, fa)
        except Undefined:
            continue
        r = base(k, th2, th1, R2)
        if r is None:
            continue
        overlap = 2.0 * r["R1"] * r["theta4"]
        w2 = r["T2"] / k.K2 + k.L2a - overlap - 2.0 * R2 * th2
        r["w2"] = w2
        r["variant"] = Variant.C if base is _a_given else Variant.D
        return r
    return None


def _row(k, variant, th2, th1):
    if variant == Variant.A:
        return _row_A(k, th2, th1)
    if variant == Variant.B:
        return _row_B(k, th2, th1)
    if variant == Variant.C:
        return _skin_contact_row(k, th2, th1, _a_given)
    return _skin_contact_row(k, th2, th1, _b_given)


def _th1_range(k, variant, th2):
    lo = 0.5 * k.p1 * k.W / k.K1
    hi = th2 if variant.wrapped else PI
    return lo, hi


def solve_at_theta2(spec, dP1, dP2, theta2, variant, n_scan=None):
    """Reference state at prescribed theta2 (requires dP2 < 0)."""
    k = _Consts(spec, dP1, dP2)
    variant = Variant(variant)
    if n_scan is None:
        n_scan = 120

    def f(th1):
        r = _row(k, variant, theta2, th1)
        return None if r is None else _c3_residual(r)

    lo, hi = _th1_range(k, variant, theta2)
    grid = _linspace(lo * (1.0 + 1e-9), hi * (1.0 - 1e-12), n_scan)
    for a, b, fa in scan_roots(f, grid):
        try:
            th1 = bisect(f, a, b, fa)
        except Undefined:
            continue
        r = _row(k, variant, theta2, th1)
        if r is not None and _admissible(r):
            return _to_state(r)
    return None


def _admissible(r):
    tol = 1e-9 * r["k"].L10
    if r["w1"] < -tol or r["w2"] < -tol:
        return False
    if r["theta4"] < -1e-12 or min(r["T1"], r["T2"], r["T3"]) < 0.0:
        return False
    return True


def _to_state(r):
    R1, R2, R3 = r["R1"], r["R2"], r["R3"]
    th1, th2, th3 = r["theta1"], r["theta2"], r["theta3"]
    return CrossSectionState(
        variant=r["variant"], theta1=th1, theta2=th2, theta3=th3, theta4=r["theta4"],
        ell1=2.0 * R1 * th1, ell2=2.0 * R2 * th2, ell3=2.0 * R3 * th3,
        w1=r["w1"], w2=r["w2"], T1=r["T1"], T2=r["T2"], T3=r["T3"],
        dP1=r["k"].p1, dP2=r["k"].p2,
    )


# --- blocked state ----------------------------------------------------------

def _cr_of(spec, s):
    return spec.contraction_ratio(s.S1, s.S2)


def _self_consistent(s):
    wraps = s.theta1 <= s.theta2
    contacts = s.skin_sag > s.skeleton_rise
    return {
        Variant.A: not wraps and not contacts,
        Variant.B: wraps and not contacts,
        Variant.C: not wraps,
        Variant.D: True,
    }[s.variant]


def blocked_in_variant(spec, dP1, dP2, variant, n_scan=90):
    k = _Consts(spec, dP1, dP2)
    th_min = -k.p2 * k.W / (2.0 * k.K2)
    cache = {}

    def g(th2):
        s = solve_at_theta2(spec, dP1, dP2, th2, variant)
        cache[th2] = s
        return None if s is None else _cr_of(spec, s)

    # log-spaced near the lower bound, where small vacua put the root
    near = [th_min + x for x in _logspace(1e-5 * th_min + 1e-9, 0.1, 25)]
    grid = sorted(set(near + _linspace(th_min * (1.0 + 1e-6), PI - 1e-3, n_scan)))
    for a, b, fa in scan_roots(g, grid):
        try:
            th2 = bisect(g, a, b, fa, xtol=1e-14)
        except Undefined:
            continue
        s = solve_at_theta2(spec, dP1, dP2, th2, variant)
        if s is not None and _admissible_state(s):
            return s
    return None


def _admissible_state(s):
    tol = 1e-9 * s.ell1
    return s.w1 >= -tol and s.w2 >= -tol and s.theta4 >= -1e-12


def _blocked_straight_skin(spec, dP1):
    """dP2 = 0: theta2 = 0, solve (theta1, theta3) for CR = 0 and C3 Hooke."""
    k = _Consts(spec, dP1, 0.0)

    def inner(th1):
        c1 = k.c1(th1)
        if c1 is None:
            return None
        R1, T1 = c1

        def build(th3):
            T3 = T1 * math.sin(th1) / math.sin(th3)
            R3 = T3 / (k.p1 * k.W)
            w1 = 2.0 * R1 * math.sin(th1) - 2.0 * R3 * math.sin(th3)
            T2 = T1 * math.cos(th1) + T3 * math.cos(th3)
            return _rec(Variant.A, th1, 0.0, th3, 0.0, R1, math.inf, R3, w1, 0.0, T1, T2, T3, k)

        def h(th3):
            return _c3_residual(build(th3))

        grid = _linspace(1e-6, PI - 1e-6, 200)
        for a, b, fa in scan_roots(h, grid):
            try:
                r = build(bisect(h, a, b, fa))
            except Undefined:
                continue
            if r["w1"] >= -1e-9 * k.L10 and r["T2"] > 0.0:
                return r
        return None

    def f(th1):
        r = inner(th1)
        if r is None:
            return None
        S2 = r["T2"] / k.K2 + k.L2a
        return k.cr(2.0 * r["R1"] * math.sin(th1), S2)

    lo = 0.5 * k.p1 * k.W / k.K1
    for a, b, fa in scan_roots(f, _linspace(lo * (1 + 1e-9), PI - 1e-6, 120)):
        try:
            th1 = bisect(f, a, b, fa)
        except Undefined:
            continue
        r = inner(th1)
        R1 = r["R1"]
        return CrossSectionState(
            variant=Variant.A, theta1=th1, theta2=0.0, theta3=r["theta3"], theta4=0.0,
            ell1=2.0 * R1 * th1, ell2=r["T2"] / k.K2 + k.L2a, ell3=2.0 * r["R3"] * r["theta3"],
            w1=r["w1"], w2=0.0, T1=r["T1"], T2=r["T2"], T3=r["T3"], dP1=dP1, dP2=0.0,
        )
    return None


def oracle_blocked_state(spec, dP1, dP2):
    """Reference blocked state; picks the first self-consistent regime."""
    if dP2 == 0.0:
        return _blocked_straight_skin(spec, dP1)
    for v in (Variant.A, Variant.C, Variant.B, Variant.D):
        s = blocked_in_variant(spec, dP1, dP2, v)
        if s is not None and _self_consistent(s):
            return s
    return None


def oracle_force(spec, s):
    """Blocked force (no resistance at zero contraction)."""
    if s.variant.skin_contact:
        return 2.0 * s.T2
    return 2.0 * s.T2 + (-s.dP2) * s.H * spec.width_W
