"""Operation-mode codes for a two-chamber actuator.

A code reads ``I<flow><seq>-O<flow><seq>-<conn>``: ``I`` is the inner
chamber (skeleton), ``O`` the outer chamber (skin). Flow glyphs:

    P   pressurise (kept connected to the supply)
    PC  pressurise, then close
    V   vacuum (kept connected to the pump)
    VC  vacuum, then close
    O   open to ambient

Sequence digits are ``1``/``2`` for inner-first or outer-first and ``0``
on both chambers for simultaneous actuation. ``conn`` is ``C`` when the
chambers are connected and ``N`` when not. Example: ``IP1-OV2-N`` inflates
the skeleton first, then applies vacuum to the skin, chambers separate.
"""

import enum
import itertools
import re
from dataclasses import dataclass

from .errors import MalformedCode


class Airflow(str, enum.Enum):
    PRESSURIZE = "P"
    PRESSURIZE_CLOSE = "PC"
    VACUUM = "V"
    VACUUM_CLOSE = "VC"
    OPEN = "O"


class Connectivity(str, enum.Enum):
    CONNECTED = "C"
    NOT_CONNECTED = "N"


class Sequence(enum.Enum):
    INNER_FIRST = ("1", "2")
    OUTER_FIRST = ("2", "1")
    SIMULTANEOUS = ("0", "0")


class FunctionalClass(str, enum.Enum):
    STUDIED = "Studied"
    UNTESTED = "Untested"
    NONFUNCTIONAL = "NonFunctional"


STUDIED_CODES = frozenset({
    "IP1-OO2-N", "IPC1-OO2-N", "IP1-OV2-N", "IPC1-OV2-N", "IP0-OV0-N", "IP0-OV0-C",
})

_VAC = (Airflow.VACUUM, Airflow.VACUUM_CLOSE)
_INFLATE = (Airflow.PRESSURIZE, Airflow.PRESSURIZE_CLOSE)


@dataclass(frozen=True)
class OperationMode:
    skin_airflow: Airflow
    skeleton_airflow: Airflow
    connectivity: Connectivity
    sequence: Sequence

    @property
    def code(self):
        return render_code(self)

    @property
    def functional_class(self):
        return classify_nonfunctional(self)

    def describe(self):
        flows = {
            Airflow.PRESSURIZE: "inflated",
            Airflow.PRESSURIZE_CLOSE: "inflated then closed",
            Airflow.VACUUM: "driven by vacuum",
            Airflow.VACUUM_CLOSE: "evacuated then closed",
            Airflow.OPEN: "left open to ambient",
        }
        inner = f"skeleton (inner) {flows[self.skeleton_airflow]}"
        outer = f"skin (outer) {flows[self.skin_airflow]}"
        if self.sequence == Sequence.INNER_FIRST:
            order = f"{inner} first, {outer} second"
        elif self.sequence == Sequence.OUTER_FIRST:
            order = f"{outer} first, {inner} second"
        else:
            order = f"{inner} and {outer} simultaneously"
        conn = "connected" if self.connectivity == Connectivity.CONNECTED else "not connected"
        return f"{self.code}: {order}; chambers {conn}; class {self.functional_class.value}"


def render_code(mode: OperationMode) -> str:
    si, so = mode.sequence.value
    return f"I{mode.skeleton_airflow.value}{si}-O{mode.skin_airflow.value}{so}-{mode.connectivity.value}"


_CHAMBER = re.compile(r"^(?P<side>[IO])(?P<flow>PC|VC|P|V|O)(?P<seq>[012])$")


def _chamber(token, side):
    m = _CHAMBER.match(token)
    if not m:
        raise MalformedCode(token, "expected <I|O><P|PC|V|VC|O><0|1|2>")
    if m["side"] != side:
        raise MalformedCode(token, f"chamber must start with {side!r}")
    return Airflow(m["flow"]), m["seq"]


def parse_code(code: str) -> OperationMode:
    if not isinstance(code, str) or not code:
        raise MalformedCode(code, "empty code")
    parts = code.split("-")
    if len(parts) != 3:
        raise MalformedCode(code, "need three '-'-separated tokens")
    inner, si = _chamber(parts[0], "I")
    outer, so = _chamber(parts[1], "O")
    try:
        conn = Connectivity(parts[2])
    except ValueError:
        raise MalformedCode(parts[2], "connectivity must be C or N") from None
    for seq in Sequence:
        if seq.value == (si, so):
            break
    else:
        raise MalformedCode(f"{si}/{so}", "sequence digits must be 1/2, 2/1 or 0/0")
    return OperationMode(outer, inner, conn, seq)


def classify_nonfunctional(mode: OperationMode) -> FunctionalClass:
    if render_code(mode) in STUDIED_CODES:
        return FunctionalClass.STUDIED
    if mode.skeleton_airflow in _VAC and mode.skin_airflow in _INFLATE:
        return FunctionalClass.NONFUNCTIONAL  # the actuator turns into an airbag
    if mode.skeleton_airflow in _VAC and mode.skin_airflow in _VAC:
        return FunctionalClass.NONFUNCTIONAL  # collapses flat
    return FunctionalClass.UNTESTED


def enumerate_modes():
    modes = [OperationMode(o, i, c, s)
             for i, o, c, s in itertools.product(Airflow, Airflow, Connectivity, Sequence)]
    return sorted(modes, key=render_code)


def modes_table(modes):
    lines = [f"{'code':<12} {'class':<14} description"]
    for m in modes:
        lines.append(f"{m.code:<12} {m.functional_class.value:<14} {m.describe().split(': ', 1)[1]}")
    return "\n".join(lines) + "\n"


def modes_json(modes):
    return [{
        "code": m.code, "skeleton_airflow": m.skeleton_airflow.value,
        "skin_airflow": m.skin_airflow.value, "connectivity": m.connectivity.value,
        "sequence": m.sequence.name, "functional_class": m.functional_class.value,
    } for m in modes]
