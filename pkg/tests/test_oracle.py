import math

import pytest

from infoam.model import PressureCondition, Variant
from infoam.oracle import bisect, oracle_blocked_state, oracle_force, solve_at_theta2
from infoam.solver import blocked_force, solve_equilibrium

from conftest import GRID_DP1, GRID_DP2, KPA

GRID = [(a, b) for a in GRID_DP1 for b in GRID_DP2]


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_bisect_finds_known_root():
    assert bisect(lambda x: x * x - 2.0, 0.0, 2.0) == pytest.approx(math.sqrt(2.0), rel=1e-14)


@pytest.mark.parametrize("dp1,dp2", GRID)
def test_blocked_state_matches_oracle(spec, dp1, dp2):
    cond = PressureCondition(dp1 * KPA, dp2 * KPA)
    F, s = blocked_force(spec, cond)
    o = oracle_blocked_state(spec, cond.dP1, cond.dP2)
    assert o is not None
    assert s.variant == o.variant
    assert rel(s.theta1, o.theta1) < 1e-6
    assert rel(s.theta3, o.theta3) < 1e-6
    assert rel(s.w1, o.w1) < 1e-6
    assert rel(F, oracle_force(spec, o)) < 1e-6


@pytest.mark.parametrize("dp1", GRID_DP1)
def test_straight_skin_blocked_state_matches_oracle(spec, dp1):
    cond = PressureCondition(dp1 * KPA, 0.0)
    F, s = blocked_force(spec, cond)
    o = oracle_blocked_state(spec, cond.dP1, 0.0)
    assert rel(s.theta1, o.theta1) < 1e-6
    assert rel(s.theta3, o.theta3) < 1e-6
    # w1 is ~0 (symmetric lens) so compare on the pouch length scale
    assert abs(s.w1 - o.w1) < 1e-6 * spec.pouch_length_L10
    assert rel(F, oracle_force(spec, o)) < 1e-6


@pytest.mark.parametrize("theta2", [0.2, 0.5, 0.9])
def test_fixed_theta2_matches_oracle(spec, theta2):
    cond = PressureCondition(60 * KPA, -40 * KPA)
    s = solve_equilibrium(spec, cond, theta2, Variant.A)
    o = solve_at_theta2(spec, cond.dP1, cond.dP2, theta2, Variant.A)
    assert o is not None
    for name in ("theta1", "theta3", "w1", "T1", "T2", "T3"):
        assert rel(getattr(s, name), getattr(o, name)) < 1e-6, name
