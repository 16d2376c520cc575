import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from infoam.errors import DuplicatePressure, EmptyTrace, InputError, NonMonotonicTime
from infoam.model import (ActuatorSpec, CrossSectionState, PressureCondition, Regime,
                          ResistanceModel, TimeSeries, Variant, condition_from_json,
                          condition_to_json, flat_state, kpa_to_pa, mm_to_m, m_to_mm,
                          pa_to_kpa, reference_spec, spec_from_json, spec_to_json)


def arc_state(variant, R2, th2, R3, th3, **kw):
    base = dict(theta1=1.0, theta4=0.0, ell1=0.02, w1=0.0, w2=0.0,
                T1=1.0, T2=1.0, T3=1.0, dP1=0.0, dP2=0.0)
    base.update(kw)
    return CrossSectionState(variant=variant, theta2=th2, theta3=th3,
                             ell2=2 * R2 * th2, ell3=2 * R3 * th3, **base)


def test_section_height_example():
    s = arc_state(Variant.A, 0.005, math.pi / 3, 0.01, math.pi / 2)
    assert s.H == pytest.approx(0.015, rel=1e-12)


def test_section_height_contact_and_flat():
    s = arc_state(Variant.C, 0.005, math.pi / 3, 0.01, math.pi / 2)
    assert s.H == 0.0
    assert flat_state(reference_spec()).H == 0.0


def test_flat_state_identity():
    spec = reference_spec()
    s = flat_state(spec)
    assert s.S1 == pytest.approx(spec.pouch_length_L10)
    assert s.S2 == pytest.approx(spec.gap_length_L20)
    assert s.S3 == pytest.approx(s.S1)
    assert s.tensions == (0.0, 0.0, 0.0)
    assert s.kappa1 == s.kappa2 == s.kappa3 == 0.0


def test_feasibility_flag_flips_at_boundary():
    bound = 2 * 20e-3 / math.pi
    assert bound == pytest.approx(12.732e-3, abs=1e-6)
    assert reference_spec(gap_length_L20=bound).complete_contraction_feasible
    assert not reference_spec(gap_length_L20=bound * (1 + 1e-12)).complete_contraction_feasible


def test_reference_lengths():
    spec = reference_spec()
    assert spec.initial_length == pytest.approx(7 * 20e-3 + 6 * 10e-3)
    assert spec.rest_L1 == pytest.approx(1.04 * 20e-3)
    K1, K2, K3 = spec.stiffness
    assert K1 == pytest.approx(400e6 * 0.09e-3 * 0.08 / (1.04 * 0.02))
    assert K2 == pytest.approx(400e6 * 0.17e-3 * 0.08 / (1.04 * 0.01))
    assert K3 == K1


@pytest.mark.parametrize("bad", [
    dict(pouch_length_L10=0.0), dict(gap_length_L20=-1e-3), dict(columns_n=0),
    dict(columns_n=2.5), dict(elastic_modulus_E=0.0), dict(skin_thickness_t2=-1.0),
])
def test_spec_validation(bad):
    with pytest.raises(InputError):
        reference_spec(**bad)


@pytest.mark.parametrize("kw", [
    dict(positive_gauge_dP1=-1.0), dict(negative_gauge_dP2=1.0),
    dict(skeleton_regime=Regime.CLOSED), dict(negative_gauge_dP2=-2e5),
])
def test_condition_validation(kw):
    with pytest.raises(InputError):
        PressureCondition(**kw)


@given(st.floats(-1e6, 1e6, allow_nan=False))
def test_unit_round_trip(x):
    assert pa_to_kpa(kpa_to_pa(x)) == pytest.approx(x, rel=2.3e-16, abs=1e-300)
    assert m_to_mm(mm_to_m(x)) == pytest.approx(x, rel=2.3e-16, abs=1e-300)


def test_spec_json_round_trip():
    spec = reference_spec(flat_volume_Vflat=9.8e-6)
    data = json.loads(json.dumps(spec_to_json(spec)))
    assert data["pouch_length_L10"] == pytest.approx(20.0)
    assert data["elastic_modulus_E"] == pytest.approx(400000.0)
    back = spec_from_json(data)
    for k, v in spec_to_json(back).items():
        assert v == pytest.approx(data[k])


def test_spec_json_rejects_unknown_and_missing():
    with pytest.raises(InputError):
        spec_from_json({"pouch_length_L10": 20, "gap_length_L20": 10, "width_W": 80,
                        "columns_n": 7, "colour": "red"})
    with pytest.raises(InputError):
        spec_from_json({"pouch_length_L10": 20})


def test_condition_json_round_trip():
    cond = PressureCondition(60e3, -40e3, Regime.CLOSED, 60e3)
    back = condition_from_json(condition_to_json(cond))
    assert back == cond
    c2 = condition_from_json({"positive_gauge_dP1": 90, "negative_gauge_dP2": -60})
    assert (c2.dP1, c2.dP2, c2.closed) == (90e3, -60e3, False)


def test_resistance_model_interpolation():
    rm = ResistanceModel(((30e3, 40.0), (90e3, 80.0)))
    assert rm.kr(60e3) == pytest.approx(60.0)
    assert rm.kr(120e3) == 80.0
    assert rm.kr(0.0) == 40.0
    assert ResistanceModel.from_json(rm.to_json()) == rm
    with pytest.raises(DuplicatePressure):
        ResistanceModel(((30e3, 1.0), (30e3, 2.0)))
    with pytest.raises(InputError):
        ResistanceModel(((30e3, -1.0),))


def test_time_series_validation():
    ts = TimeSeries([0, 1, 2], {"displacement_x": [0, 1, 2]})
    assert "displacement_x" in ts
    np.testing.assert_allclose(ts.resampled([0.5, 1.5])["displacement_x"], [0.5, 1.5])
    with pytest.raises(EmptyTrace):
        TimeSeries([0.0])
    with pytest.raises(NonMonotonicTime):
        TimeSeries([0, 1, 1])
    with pytest.raises(InputError):
        TimeSeries([0, 1], {"speed": [0, 1]})
    with pytest.raises(InputError):
        TimeSeries([0, 1], {"flow_q": [0, 1, 2]})
