import numpy as np
import pytest

from infoam.errors import UnsupportedVariant
from infoam.model import PressureCondition, Variant, flat_state
from infoam.solver import (blocked_state, decomposition_totals, force_at_state,
                           force_decomposition, solve_equilibrium)

from conftest import KPA

DP1 = np.linspace(40, 100, 5)
DP2 = np.linspace(-5, -30, 5)


def test_flat_state_has_no_components(spec):
    parts = force_decomposition(spec, PressureCondition(0.0, 0.0), flat_state(spec))
    assert [v for cut in parts.values() for v in cut.values()] == [0.0] * 4


@pytest.mark.parametrize("dp1", DP1)
@pytest.mark.parametrize("dp2", DP2)
def test_both_cuts_give_the_same_force(spec, dp1, dp2):
    cond = PressureCondition(dp1 * KPA, dp2 * KPA)
    s = blocked_state(spec, cond)
    assert s.variant == Variant.A
    for theta2 in (s.theta2, s.theta2 + 0.1, s.theta2 + 0.3):
        st = solve_equilibrium(spec, cond, theta2, Variant.A, s)
        if st.variant != Variant.A or st.theta1 <= st.theta2:
            continue
        F, Fr = force_at_state(spec, cond, st)
        one, two = decomposition_totals(force_decomposition(spec, cond, st))
        assert (one - Fr) == pytest.approx(F, rel=1e-12)
        assert abs((one - Fr) - (two - Fr)) <= 1e-6 * abs(one - Fr)


def test_wrapped_state_closes_balance(spec, open_curves):
    c = open_curves[(60, -60)]
    b_states = [p.state for p in c.points[:-1] if p.state.variant == Variant.B]
    assert b_states
    for st in b_states[::5]:
        one, two = decomposition_totals(force_decomposition(spec, c.condition, st))
        assert two == pytest.approx(one, rel=1e-6)


def test_contact_states_unsupported(spec, open_curves):
    st = open_curves[(30, -60)].points[0].state
    assert st.variant == Variant.C
    with pytest.raises(UnsupportedVariant):
        force_decomposition(spec, open_curves[(30, -60)].condition, st)
