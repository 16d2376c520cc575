"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

import math
import os
import sys
import time

import numpy as np
import pytest

from infoam.closed import trace_curve_closed
from infoam.metrics import compute_metrics, energy_efficiency
from infoam.model import PressureCondition, TimeSeries, reference_spec
from infoam.modes import FunctionalClass, enumerate_modes, parse_code, render_code
from infoam.multilayer import (TABLE_M, TABLE_N, MultilayerSpec, max_contraction_split, percent,
                               table_II, zigzag_max_contraction)
from infoam.oracle import oracle_blocked_state, oracle_force
from infoam.solver import (Variant, blocked_force, blocked_state, decomposition_totals,
                           force_decomposition, solve_equilibrium, trace_curve)

KPA = 1e3
GRID = [(a, b) for a in (30, 60, 90) for b in (-10, -40, -60)]
RESULTS = []

# expected maximum contraction (%), rows m = 2..6, +inf; columns n = 1..5
TABLE_II_EXPECTED = [
    [36.3, 51.7, 55.3, 56.9, 57.8],
    [36.3, 61.1, 65.6, 67.4, 68.5],
    [36.3, 67.4, 72.0, 73.8, 74.8],
    [36.3, 72.0, 76.4, 78.1, 79.0],
    [36.3, 75.4, 79.6, 81.2, 82.1],
    [36.3, 100.0, 100.0, 100.0, 100.0],
]


def report(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_table_ii():
    t0 = time.perf_counter()
    table = table_II(TABLE_M, TABLE_N)
    elapsed = time.perf_counter() - t0
    misses = []
    for i, row in enumerate(table):
        for j, cr in enumerate(row):
            got = float(percent(cr))
            if abs(got - TABLE_II_EXPECTED[i][j]) > 0.05 + 1e-9:
                misses.append(f"m={TABLE_M[i]},n={TABLE_N[j]}: {100 * cr:.3f} -> {got} "
                              f"vs {TABLE_II_EXPECTED[i][j]}")
    ok = not misses and elapsed < 1.0
    detail = f"30 entries, {30 - len(misses)} match, {elapsed * 1e3:.1f} ms"
    if misses:
        detail += "; mismatches: " + "; ".join(misses)
    report("Table II reproduction (+-0.05 pp, < 1 s)", ok, detail)


def test_zigzag_example():
    cr = zigzag_max_contraction(0.200, 8, 0.010)
    report("Zigzag example 74.5 %", percent(cr) == "74.5", f"{100 * cr:.4f} %")


def test_pouch_motor_limit():
    split = max_contraction_split(MultilayerSpec(2, 7, 0.02, 1e-9))
    got = 100 * split.CR_total
    report("Pouch-motor limit 36.34 % (+-0.01 pp)", abs(got - 36.34) <= 0.01, f"{got:.4f} %")


def test_reference_terminal_contraction():
    t0 = time.perf_counter()
    curve = trace_curve(reference_spec(), PressureCondition(90 * KPA, -60 * KPA))
    elapsed = time.perf_counter() - t0
    cr = curve.terminal_CR_max
    ok = 0.38 <= cr <= 0.48 and elapsed < 5.0 and not curve.truncated
    report("Terminal CR at +90/-60 kPa in [38, 48] % (< 5 s)", ok,
           f"{100 * cr:.2f} %, {elapsed:.2f} s")


def test_blocked_force_anchor():
    F, _ = blocked_force(reference_spec(), PressureCondition(90 * KPA, 0.0))
    lo, hi = 0.7 * 236.9, 1.3 * 236.9
    report("Blocked force at +90/0 kPa within 30 % of 236.9 N", lo <= F <= hi,
           f"{F:.2f} N (window {lo:.1f}-{hi:.1f} N)")


def test_monotonicity_suite():
    spec = reference_spec()
    t0 = time.perf_counter()
    opened = {k: trace_curve(spec, PressureCondition(k[0] * KPA, k[1] * KPA)) for k in GRID}
    closed = {k: trace_curve_closed(spec, k[0] * KPA, k[1] * KPA) for k in GRID}
    elapsed = time.perf_counter() - t0
    problems = []
    for tag, curves in (("open", opened), ("closed", closed)):
        for k, c in curves.items():
            if c.truncated:
                problems.append(f"{tag} {k} truncated")
            if np.any(np.diff(c.force) > 1e-6):
                problems.append(f"{tag} {k} F increases")
    for b in (-10, -40, -60):
        f = [opened[(a, b)].blocked_force for a in (30, 60, 90)]
        if not f[0] < f[1] < f[2]:
            problems.append(f"blocked force not increasing in dP1 at dP2={b}")
    for a in (30, 60, 90):
        f = [opened[(a, b)].blocked_force for b in (-10, -40, -60)]
        if not f[0] >= f[1] >= f[2]:
            problems.append(f"open blocked force rises with |dP2| at dP1={a}")
        fc = [closed[(a, b)].blocked_force for b in (-10, -40, -60)]
        pc = [closed[(a, b)].points[0].skeleton_gauge_dP1 for b in (-10, -40, -60)]
        if not (fc[0] <= fc[1] <= fc[2] and pc[0] <= pc[1] <= pc[2]):
            problems.append(f"closed blocked force or dP1 falls with |dP2| at dP1={a}")
        t = [opened[(a, b)].terminal_CR_max for b in (-10, -40, -60)]
        if not t[0] < t[1] < t[2]:
            problems.append(f"terminal CR not increasing in |dP2| at dP1={a}")
    ok = not problems and elapsed < 60.0
    report("Monotonicity suite on the 3x3 grid (< 60 s)", ok,
           f"18 curves, {elapsed:.2f} s" + ("; " + "; ".join(problems) if problems else ""))


def test_oracle_equivalence():
    spec = reference_spec()
    worst = 0.0
    missing = []
    for a, b in GRID:
        cond = PressureCondition(a * KPA, b * KPA)
        F, s = blocked_force(spec, cond)
        o = oracle_blocked_state(spec, cond.dP1, cond.dP2)
        if o is None:
            missing.append((a, b))
            continue
        pairs = [(s.theta1, o.theta1), (s.theta3, o.theta3), (s.w1, o.w1),
                 (F, oracle_force(spec, o))]
        worst = max(worst, max(abs(x - y) / abs(y) for x, y in pairs))
    ok = not missing and worst < 1e-6
    report("Oracle equivalence on the 3x3 grid (1e-6 rel)", ok,
           f"max rel diff {worst:.2e}" + (f"; oracle failed at {missing}" if missing else ""))


def test_cut_consistency():
    spec = reference_spec()
    worst = 0.0
    count = 0
    for dp1 in np.linspace(40, 100, 5):
        for dp2 in np.linspace(-5, -30, 5):
            cond = PressureCondition(dp1 * KPA, dp2 * KPA)
            s0 = blocked_state(spec, cond)
            for th2 in (s0.theta2, s0.theta2 + 0.1, s0.theta2 + 0.3):
                s = solve_equilibrium(spec, cond, th2, Variant.A, s0)
                if s.theta1 <= s.theta2:
                    continue
                one, two = decomposition_totals(force_decomposition(spec, cond, s))
                worst = max(worst, abs(one - two) / abs(one))
                count += 1
    report("Cut I / cut II consistency on a 5x5 grid (1e-6 rel)", worst < 1e-6 and count >= 25,
           f"{count} A states, max rel diff {worst:.2e}")


def test_metrics_anchors():
    spec = reference_spec(flat_volume_Vflat=200e-3 * 70e-3 * 0.70e-3)
    lift = TimeSeries([0.0, 1.0], {"load_height_h": [0.0, 33.57e-3]})
    wd = compute_metrics(spec, {"load_mass": 1.0}, lift).work_density / 1e3
    move = TimeSeries([0.0, 1.0], {"displacement_x": [0.0, 0.01]})
    sfw = compute_metrics(reference_spec(), {"force_F": 236.9, "pressure_dP": 90e3},
                          move).specific_force_to_weight
    t = np.linspace(0.0, 1.0, 11)
    fp = TimeSeries(t, {"flow_q": np.full(11, 1e-4), "pressure_dP": np.full(11, 1e5)})
    eta, _ = energy_efficiency(fp, 1.0, TimeSeries(t, {"load_height_h": 0.05 * t}))
    ok = abs(wd - 33.6) <= 0.1 and abs(sfw - 0.107) <= 0.001 and abs(100 * eta - 4.905) <= 0.001
    report("Metrics anchors", ok,
           f"work density {wd:.3f} kJ/m^3, specific F/W {sfw:.5f} kN/(kg kPa), eta {100 * eta:.4f} %")


def test_modes():
    modes = enumerate_modes()
    studied = sum(m.functional_class == FunctionalClass.STUDIED for m in modes)
    round_trip = all(render_code(parse_code(m.code)) == m.code and parse_code(m.code) == m
                     for m in modes)
    distinct = len({m.code for m in modes})
    ok = len(modes) == 150 and distinct == 150 and studied == 6 and round_trip
    report("Modes: 150 enumerated, 6 Studied, round trip", ok,
           f"{len(modes)} modes, {distinct} distinct, {studied} Studied, round trip {round_trip}")


def test_sweep_determinism(tmp_path):
    from infoam.cli import main
    serial, parallel = str(tmp_path / "serial"), str(tmp_path / "parallel")
    rc1 = main(["sweep", "--out", serial])
    rc2 = main(["sweep", "--jobs", "4", "--out", parallel])

    def tree(p):
        return {n: open(os.path.join(p, n), "rb").read() for n in sorted(os.listdir(p))}

    a, b = tree(serial), tree(parallel)
    ok = rc1 == rc2 == 0 and a == b
    report("Sweep parallel vs serial byte-identical", ok, f"{len(a)} files, identical={a == b}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
