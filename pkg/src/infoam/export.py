"""Curve serialisation."""

import io
import json

from .model import pa_to_kpa, spec_to_json, condition_to_json

CURVE_HEADER = ("theta2_rad,variant,CR,F_N,Fr_N,dP1_Pa,dP2_Pa,R1_m,R2_m,R3_m,"
                "theta1,theta3,theta4,w1_m,w2_m,H_m")


def _num(v):
    return repr(float(v))


def curve_rows(curve):
    thetas = curve.theta2_values or [p.state.theta2 for p in curve.points]
    for th2, p in zip(thetas, curve.points):
        s = p.state
        yield [_num(th2), s.variant.value, _num(p.CR), _num(p.F), _num(p.resistance_Fr),
               _num(p.skeleton_gauge_dP1), _num(s.dP2), _num(s.R1), _num(s.R2), _num(s.R3),
               _num(s.theta1), _num(s.theta3), _num(s.theta4), _num(s.w1), _num(s.w2), _num(s.H)]


def curve_to_csv(curve) -> str:
    buf = io.StringIO()
    buf.write(CURVE_HEADER + "\n")
    for row in curve_rows(curve):
        buf.write(",".join(row) + "\n")
    if curve.truncated:
        msg = curve.message.replace("\n", " ")
        buf.write(f"# truncated=true {msg}\n")
    return buf.getvalue()


def read_curve_csv(text):
    """Parse rows written by ``curve_to_csv`` (comment lines skipped)."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    head = lines[0].split(",")
    out = []
    for ln in lines[1:]:
        vals = ln.split(",")
        out.append({k: (v if k == "variant" else float(v)) for k, v in zip(head, vals)})
    return out


def state_to_json(state):
    return {
        "variant": state.variant.value,
        "theta1": state.theta1, "theta2": state.theta2, "theta3": state.theta3, "theta4": state.theta4,
        "R1_m": state.R1, "R2_m": state.R2, "R3_m": state.R3,
        "L1_m": state.L1, "L2_m": state.L2, "L3_m": state.L3,
        "S1_m": state.S1, "S2_m": state.S2, "S3_m": state.S3,
        "w1_m": state.w1, "w2_m": state.w2,
        "T1_N": state.T1, "T2_N": state.T2, "T3_N": state.T3,
        "H_m": state.H, "dP1_kPa": pa_to_kpa(state.dP1), "dP2_kPa": pa_to_kpa(state.dP2),
    }


def dumps(obj):
    """Deterministic JSON; infinities become strings."""
    def fix(o):
        if isinstance(o, float) and (o != o or o in (float("inf"), float("-inf"))):
            return str(o)
        if isinstance(o, dict):
            return {k: fix(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [fix(v) for v in o]
        return o
    return json.dumps(fix(obj), indent=2, sort_keys=True) + "\n"


def run_header(spec, cond):
    return {"spec": spec_to_json(spec), "condition": condition_to_json(cond)}
