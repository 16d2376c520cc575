"""Command-line front end.

Files and flags use mm, kPa and N; everything is converted to SI on entry.
Exit codes: 0 success, 1 solver failure, 2 input error.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .closed import trace_curve_closed
from .errors import InputError, SolverError
from .export import curve_to_csv, dumps, state_to_json
from .metrics import compute_metrics, read_trace_csv
from .model import (KPA, MM, PressureCondition, ResistanceModel, load_json, reference_spec,
                    spec_from_json)
from .modes import FunctionalClass, enumerate_modes, modes_json, modes_table, parse_code
from .multilayer import INF, table_csv, table_text
from .plot import curve_svg
from .resistance import (DEFAULT_RESISTANCE, LINEAR_THRESHOLD, build_resistance_model, fit_kr,
                         read_measurements_csv)
from .solver import SolverSettings, blocked_force, trace_curve

log = logging.getLogger("infoam")

EXIT_OK, EXIT_SOLVER, EXIT_INPUT = 0, 1, 2


# --- shared loading -----------------------------------------------------------

def load_spec(path):
    if path is None:
        return reference_spec()
    return spec_from_json(load_json(path))


def load_resistance(path):
    if path is None:
        return DEFAULT_RESISTANCE
    return ResistanceModel.from_json(load_json(path))


def settings_from(args):
    return SolverSettings(theta2_step=args.theta2_step)


def _write(path, text):
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _cond(dp1_kpa, dp2_kpa):
    return PressureCondition(dp1_kpa * KPA, dp2_kpa * KPA)


def run_curve(spec, dp1, dp2, resistance, settings, closed=False, initial_dp1=None):
    if closed:
        init = dp1 if initial_dp1 is None else initial_dp1
        return trace_curve_closed(spec, init * KPA, dp2 * KPA, resistance, settings)
    return trace_curve(spec, _cond(dp1, dp2), resistance, settings)


# --- subcommands --------------------------------------------------------------

def cmd_curve(args):
    spec = load_spec(args.spec)
    res = load_resistance(args.kr_file)
    curve = run_curve(spec, args.dp1, args.dp2, res, settings_from(args), args.closed, args.initial_dp1)
    _write(args.out + ".csv", curve_to_csv(curve))
    _write(args.out + ".svg", curve_svg([curve]))
    print(f"blocked force {curve.blocked_force:.3f} N, terminal CR {100 * curve.terminal_CR_max:.2f} %"
          f", {len(curve.points)} points")
    if curve.truncated:
        print(f"curve truncated: {curve.message}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def _sweep_cell(job):
    spec, dp1, dp2, res, settings, closed = job
    try:
        curve = run_curve(spec, dp1, dp2, res, settings, closed)
    except (SolverError, InputError) as exc:
        return dp1, dp2, None, f"{type(exc).__name__}: {exc}"
    return dp1, dp2, curve, None


def _tag(v):
    return f"{v:g}".replace("-", "m").replace(".", "p")


def cmd_sweep(args):
    spec = load_spec(args.spec)
    res = load_resistance(args.kr_file)
    settings = settings_from(args)
    dp1s, dp2s = _float_list(args.dp1_list), _float_list(args.dp2_list)
    jobs = [(spec, a, b, res, settings, args.closed) for a in dp1s for b in dp2s]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_sweep_cell, jobs))
    else:
        results = [_sweep_cell(j) for j in jobs]
    os.makedirs(args.out, exist_ok=True)
    # single-threaded reducer; results are in job order
    blocked = {}
    errors = []
    curves = []
    for dp1, dp2, curve, err in results:
        if err is not None:
            errors.append((dp1, dp2, err))
            continue
        stem = os.path.join(args.out, f"curve_dp1_{_tag(dp1)}_dp2_{_tag(dp2)}")
        _write(stem + ".csv", curve_to_csv(curve))
        _write(stem + ".svg", curve_svg([curve]))
        blocked[(dp1, dp2)] = curve.blocked_force
        curves.append(curve)
        if curve.truncated:
            errors.append((dp1, dp2, f"truncated: {curve.message}"))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["dP1_kPa\\dP2_kPa", *(f"{b:g}" for b in dp2s)])
    for a in dp1s:
        w.writerow([f"{a:g}", *(repr(blocked[(a, b)]) if (a, b) in blocked else "" for b in dp2s)])
    _write(os.path.join(args.out, "blocked_force.csv"), buf.getvalue())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["dP1_kPa", "dP2_kPa", "error"])
    for row in errors:
        w.writerow([f"{row[0]:g}", f"{row[1]:g}", row[2]])
    _write(os.path.join(args.out, "errors.csv"), buf.getvalue())
    if curves:
        _write(os.path.join(args.out, "curves.svg"), curve_svg(curves))
    print(f"{len(curves)} curves, {len(errors)} problems -> {args.out}")
    return EXIT_SOLVER if any(c is None for _, _, c, _ in results) else EXIT_OK


def cmd_blocked(args):
    spec = load_spec(args.spec)
    F, state = blocked_force(spec, _cond(args.dp1, args.dp2), None, settings_from(args))
    text = dumps({"blocked_force_N": F, "state": state_to_json(state)})
    if args.out:
        _write(args.out, text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_table(args):
    ms = _int_range(args.m, allow_inf=True) if args.m else [2, 3, 4, 5, 6, INF]
    ns = _int_range(args.n) if args.n else [1, 2, 3, 4, 5]
    if args.csv:
        _write(args.csv, table_csv(ms, ns))
    sys.stdout.write(table_text(ms, ns))
    return EXIT_OK


_META_KEYS = {
    "load_mass_kg": ("load_mass", 1.0),
    "cross_area_A_mm2": ("cross_area_A", MM * MM),
    "pressure_dP_kPa": ("pressure_dP", KPA),
    "force_F_N": ("force_F", 1.0),
    "initial_length_mm": ("initial_length", MM),
}


def load_meta(path):
    if path is None:
        return {}
    raw = load_json(path)
    meta = {}
    for k, v in raw.items():
        if k not in _META_KEYS:
            raise InputError(f"{path}: unknown metadata key {k!r} (known: {sorted(_META_KEYS)})")
        name, scale = _META_KEYS[k]
        meta[name] = float(v) * scale
    return meta


def cmd_metrics(args):
    spec = load_spec(args.spec)
    trace = read_trace_csv(args.trace)
    rep = compute_metrics(spec, load_meta(args.meta), trace, smooth=args.smooth)
    if args.json:
        _write(args.json, rep.to_json() + "\n")
    sys.stdout.write(rep.to_text())
    return EXIT_OK


def cmd_fit(args):
    spec = load_spec(args.spec)
    fits = []
    for path, dp1 in args.data:
        try:
            dp1 = float(dp1)
        except ValueError:
            raise InputError(f"bad pressure {dp1!r} for {path}") from None
        kr, slope, r2 = fit_kr(read_measurements_csv(path), spec, dp1 * KPA, args.threshold * MM)
        print(f"{path}: dP1 {dp1:g} kPa  slope {slope:.6g} N/m  kr {kr:.6g} N/m  r2 {r2:.5f}")
        fits.append((dp1 * KPA, kr))
    model = build_resistance_model(fits)
    text = json.dumps(model.to_json(), indent=2) + "\n"
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_modes(args):
    if args.explain:
        print(parse_code(args.explain).describe())
        return EXIT_OK
    modes = enumerate_modes()
    if args.filter:
        try:
            cls = FunctionalClass(args.filter)
        except ValueError:
            raise InputError(f"unknown class {args.filter!r}; use Studied, Untested or NonFunctional") from None
        modes = [m for m in modes if m.functional_class == cls]
    if args.json:
        sys.stdout.write(json.dumps(modes_json(modes), indent=2) + "\n")
    elif args.list or args.filter:
        for m in modes:
            print(m.code)
    else:
        sys.stdout.write(modes_table(modes))
    return EXIT_OK


# --- argument parsing ---------------------------------------------------------

def _float_list(text):
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise InputError(f"bad number list {text!r}") from None


def _int_range(text, allow_inf=False):
    """'2..6', '1,3,5' or a mix; 'inf' allowed for layer counts."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if allow_inf and part in ("inf", "+inf"):
            out.append(INF)
        elif ".." in part:
            a, b = part.split("..", 1)
            try:
                a, b = int(a), int(b)
            except ValueError:
                raise InputError(f"bad range {part!r}") from None
            if b < a:
                raise InputError(f"empty range {part!r}")
            out.extend(range(a, b + 1))
        else:
            try:
                out.append(int(part))
            except ValueError:
                raise InputError(f"bad integer {part!r}") from None
    if not out:
        raise InputError(f"empty range {text!r}")
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def build_parser():
    p = _Parser(prog="infoam", description="Hybrid-pressure pouch muscle statics and tools.")
    p.add_argument("--version", action="version", version=f"infoam {__version__}")
    p.add_argument("--config", help="JSON file whose keys replace flag defaults")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def solver_flags(sp):
        sp.add_argument("--spec", help="ActuatorSpec JSON (mm, kPa); default: reference sample")
        sp.add_argument("--theta2-step", type=float, default=0.01, help="continuation step, rad")

    c = sub.add_parser("curve", help="force-contraction curve")
    solver_flags(c)
    c.add_argument("--dp1", type=float, default=0.0, help="skeleton gauge pressure, kPa")
    c.add_argument("--dp2", type=float, default=0.0, help="skin gauge pressure (<= 0), kPa")
    c.add_argument("--closed", action="store_true", help="seal the skeleton before applying dp2")
    c.add_argument("--initial-dp1", type=float, help="sealing pressure, kPa (default --dp1)")
    c.add_argument("--kr-file", help="ResistanceModel JSON")
    c.add_argument("--out", default="curve", help="output prefix")
    c.set_defaults(func=cmd_curve)

    s = sub.add_parser("sweep", help="grid of curves plus blocked-force matrix")
    solver_flags(s)
    s.add_argument("--dp1-list", default="30,60,90")
    s.add_argument("--dp2-list", default="-10,-40,-60")
    s.add_argument("--closed", action="store_true")
    s.add_argument("--kr-file")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", default="sweep")
    s.set_defaults(func=cmd_sweep)

    b = sub.add_parser("blocked", help="blocked force and state")
    solver_flags(b)
    b.add_argument("--dp1", type=float, default=0.0)
    b.add_argument("--dp2", type=float, default=0.0)
    b.add_argument("--out")
    b.set_defaults(func=cmd_blocked)

    t = sub.add_parser("table", help="multilayer maximum-contraction table")
    t.add_argument("--m", help="layer counts, e.g. 2..6,inf")
    t.add_argument("--n", help="column counts, e.g. 1..5")
    t.add_argument("--csv", help="also write CSV here")
    t.set_defaults(func=cmd_table)

    m = sub.add_parser("metrics", help="performance metrics from a trace CSV")
    m.add_argument("--spec")
    m.add_argument("--trace", required=True)
    m.add_argument("--meta", help="JSON: load_mass_kg, cross_area_A_mm2, pressure_dP_kPa, force_F_N, initial_length_mm")
    m.add_argument("--smooth", action="store_true", help="5-sample moving average before rates")
    m.add_argument("--json")
    m.set_defaults(func=cmd_metrics)

    f = sub.add_parser("fit-kr", help="resistance coefficient from compression data")
    f.add_argument("--spec")
    f.add_argument("--data", nargs=2, action="append", metavar=("CSV", "DP1_KPA"), required=True)
    f.add_argument("--threshold", type=float, default=LINEAR_THRESHOLD / MM, help="mm")
    f.add_argument("--out")
    f.set_defaults(func=cmd_fit)

    o = sub.add_parser("modes", help="operation-mode codes")
    o.add_argument("--list", action="store_true")
    o.add_argument("--filter")
    o.add_argument("--explain")
    o.add_argument("--json", action="store_true")
    o.set_defaults(func=cmd_modes)
    return p


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = load_json(args.config)
        if not isinstance(cfg, dict):
            raise InputError(f"{args.config}: expected a JSON object")
        known = set(vars(args))
        bad = sorted(k for k in cfg if k.replace("-", "_") not in known)
        if bad:
            raise InputError(f"{args.config}: unknown keys {bad}")
        explicit = _explicit_dests(parser, argv)
        for k, v in cfg.items():
            k = k.replace("-", "_")
            if k not in explicit:
                setattr(args, k, v)
    return args


def _explicit_dests(parser, argv):
    """Destinations set on the command line (they win over --config)."""
    seen = set()
    opts = {}
    for action in parser._actions:
        for s in action.option_strings:
            opts[s] = action.dest
    for sp in parser._subparsers._group_actions[0].choices.values():
        for action in sp._actions:
            for s in action.option_strings:
                opts[s] = action.dest
    for tok in argv:
        key = tok.split("=", 1)[0]
        if key in opts:
            seen.add(opts[key])
    return seen


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                            format="%(levelname)s %(message)s")
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
