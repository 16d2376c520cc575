import math

import pytest

from infoam.closed import GasState, seal_state, trace_curve_closed
from infoam.errors import InputError, VolumeCollapse
from infoam.model import P_ATM, CrossSectionState, PressureCondition, Variant, flat_state
from infoam.model import reference_spec
from infoam.solver import blocked_state, skeleton_volume

from conftest import GRID_DP1, GRID_DP2, KPA


def test_boyle_halving_volume_doubles_pressure():
    gas = GasState.seal(2e5, 1e-5)
    assert gas.trapped_moles_proxy == pytest.approx(2.0)
    assert gas.pressure_at(0.5e-5) == pytest.approx(4e5, rel=1e-15)


def test_dead_volume_softens_compression():
    stiff = GasState.seal(2e5, 1e-5)
    soft = GasState.seal(2e5, 1e-5, dead_volume=1e-5)
    assert soft.pressure_at(0.5e-5) < stiff.pressure_at(0.5e-5)
    assert soft.pressure_at(1e-5) == pytest.approx(2e5)


def test_volume_collapse():
    with pytest.raises(VolumeCollapse):
        GasState.seal(2e5, 1e-12)
    with pytest.raises(VolumeCollapse):
        GasState.seal(2e5, 1e-5).pressure_at(0.0)
    with pytest.raises(InputError):
        GasState(-1.0, 1.0, 1.0)


def test_flat_volume_is_zero(spec):
    assert skeleton_volume(spec, flat_state(spec)) == 0.0


def test_semicircle_volume():
    spec = reference_spec(columns_n=1, layers_m=2, width_W=0.08)
    R = 0.01
    half = math.pi / 2
    s = CrossSectionState(Variant.A, half, 0.1, half, 0.0, math.pi * R, 0.01, math.pi * R,
                          0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0)
    assert skeleton_volume(spec, s) == pytest.approx(2 * 1 * 0.08 * math.pi * R * R, rel=1e-12)
    assert skeleton_volume(spec, s) == pytest.approx(5.03e-5, rel=1e-3)


def test_volume_matches_radius_form(spec):
    s = blocked_state(spec, PressureCondition(60 * KPA, 0.0))

    def seg(R, th):
        return R * R * (th - math.sin(th) * math.cos(th))

    expected = spec.layers_m * spec.columns_n * spec.width_W * (
        seg(s.R1, s.theta1) + seg(s.R3, s.theta3))
    assert skeleton_volume(spec, s) == pytest.approx(expected, rel=1e-12)


def test_seal_state(spec):
    state, gas = seal_state(spec, 60 * KPA)
    assert gas.sealed_absolute_P1 == P_ATM + 60 * KPA
    assert gas.sealed_volume_V0 == pytest.approx(skeleton_volume(spec, state))
    with pytest.raises(InputError):
        seal_state(spec, 0.0)


def test_gas_is_conserved(spec, closed_curves):
    for key, c in closed_curves.items():
        assert not c.truncated, (key, c.message)
        gas = c.gas
        for p in c.points[:-1]:
            V = skeleton_volume(spec, p.state) + gas.dead_volume
            err = abs((P_ATM + p.skeleton_gauge_dP1) * V - gas.trapped_moles_proxy)
            assert err / gas.trapped_moles_proxy < 1e-8


def test_no_vacuum_keeps_sealing_pressure(spec):
    c = trace_curve_closed(spec, 60 * KPA, 0.0)
    assert c.points[0].skeleton_gauge_dP1 == pytest.approx(60 * KPA, rel=1e-3)
    open_F = blocked_state(spec, PressureCondition(60 * KPA, 0.0))
    from infoam.solver import force_at_state
    F, _ = force_at_state(spec, PressureCondition(60 * KPA, 0.0), open_F)
    assert c.blocked_force == pytest.approx(F, rel=0.01)


def test_closed_regime_orderings(open_curves, closed_curves):
    for a in GRID_DP1:
        forces = [closed_curves[(a, b)].blocked_force for b in GRID_DP2]
        pressures = [closed_curves[(a, b)].points[0].skeleton_gauge_dP1 for b in GRID_DP2]
        assert forces[0] <= forces[1] <= forces[2]
        assert pressures[0] <= pressures[1] <= pressures[2]
        for b in GRID_DP2:
            assert closed_curves[(a, b)].blocked_force >= open_curves[(a, b)].blocked_force


def test_closed_curves_monotone(closed_curves):
    for c in closed_curves.values():
        F = c.force
        assert all(F[i + 1] <= F[i] + 1e-6 for i in range(len(F) - 1))
        assert c.points[-1].F == pytest.approx(0.0, abs=1e-9)
