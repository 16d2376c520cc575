"""Geometric maximum-contraction predictors for stacked and zigzag skeletons."""

import math
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from typing import Optional

from .errors import InfeasibleGeometry, InputError

INF = math.inf

TABLE_M = (2, 3, 4, 5, 6, INF)
TABLE_N = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class MultilayerSpec:
    layers_m: int
    columns_n: int
    L10: float
    L20: float

    def __post_init__(self):
        if self.layers_m < 1 or self.columns_n < 1:
            raise InputError("layers_m and columns_n must be >= 1")
        if self.L10 <= 0 or self.L20 < 0:
            raise InputError("L10 must be > 0 and L20 >= 0")

    @property
    def gap_bound(self):
        """Largest L20 the stacked pouches can still swallow: (m - 1) L10 2/pi."""
        return (self.layers_m - 1) * self.L10 * 2.0 / math.pi


@dataclass(frozen=True)
class ContractionSplit:
    CR_plus: float
    CR_minus: float
    feasible: bool = True

    @property
    def CR_total(self):
        return self.CR_plus + self.CR_minus


def max_contraction_split(spec: MultilayerSpec) -> ContractionSplit:
    """Positive- and negative-pressure shares of the maximum contraction.

    ``feasible`` is False when the gap is longer than the inflated stack is
    tall, in which case the skin cannot be fully drawn into the voids.
    """
    n, L10, L20 = spec.columns_n, spec.L10, spec.L20
    S0 = n * L10 + (n - 1) * L20
    plus = n * (1.0 - 2.0 / math.pi) * L10 / S0
    minus = (n - 1) * L20 / S0
    return ContractionSplit(plus, minus, L20 <= spec.gap_bound * (1.0 + 1e-12))


def max_contraction_at_bound(m, n):
    """(CR+*, CR-*) with L20 at its bound (m - 1) L10 2/pi."""
    if m < 1 or n < 1:
        raise InputError("m and n must be >= 1")
    if math.isinf(m):
        if n == 1:
            return (math.pi - 2.0) / math.pi, 0.0
        return 0.0, 1.0
    k = 2.0 * (m - 1) * (n - 1)
    den = math.pi * n + k
    return (math.pi - 2.0) * n / den, k / den


def zigzag_max_contraction(Ssum0, n_edges, L10):
    """(Ssum0 - n 2 L10/pi) / Ssum0.

    ``n_edges`` counts every zigzag edge, including the horizontal channel
    at both ends.
    """
    folded = n_edges * L10 * 2.0 / math.pi
    if Ssum0 <= 0 or folded > Ssum0:
        raise InfeasibleGeometry(f"Ssum0 = {Ssum0!r} must exceed n*L10*2/pi = {folded!r}")
    return (Ssum0 - folded) / Ssum0


def table_II(m_range=TABLE_M, n_range=TABLE_N):
    """Matrix [[CR_total]] over layers (rows) and columns (cols)."""
    m_range, n_range = list(m_range), list(n_range)
    if not m_range or not n_range:
        raise InputError("ranges must be nonempty")
    return [[sum(max_contraction_at_bound(m, n)) for n in n_range] for m in m_range]


def percent(x, digits=1):
    """Round-half-up percent string, e.g. 0.5172 -> '51.7'."""
    q = Decimal(1).scaleb(-digits)
    return str(Decimal(repr(x * 100.0)).quantize(q, rounding=ROUND_HALF_UP))


def _m_label(m):
    return "+inf" if math.isinf(m) else str(int(m))


def table_csv(m_range=TABLE_M, n_range=TABLE_N):
    rows = table_II(m_range, n_range)
    lines = ["m," + ",".join(f"n={n}" for n in n_range)]
    for m, row in zip(m_range, rows):
        lines.append(_m_label(m) + "," + ",".join(percent(v) for v in row))
    return "\n".join(lines) + "\n"


def table_text(m_range=TABLE_M, n_range=TABLE_N):
    rows = table_II(m_range, n_range)
    head = ["", *(f"n={n}" for n in n_range)]
    body = []
    for m, row in zip(m_range, rows):
        cells = []
        for n, v in zip(n_range, row):
            txt = percent(v) + " %"
            if math.isinf(m) and n > 1:
                txt = "->" + txt
            cells.append(txt)
        body.append([f"m={_m_label(m)}", *cells])
    widths = [max(len(r[i]) for r in [head] + body) for i in range(len(head))]
    out = []
    for r in [head] + body:
        out.append("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(out) + "\n"
