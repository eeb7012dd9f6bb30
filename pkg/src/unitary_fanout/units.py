"""dB/linear conversions and presentation rounding."""

from __future__ import annotations

import math
from decimal import ROUND_HALF_UP, Decimal


def db_to_power_ratio(db: float) -> float:
    return 10.0 ** (db / 10.0)


def power_ratio_to_db(ratio: float) -> float:
    return 10.0 * math.log10(ratio)


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts) + 30.0


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def round_half_away(x: float, decimals: int) -> float:
    """Round half away from zero on the shortest decimal repr of ``x``.

    Python's ``round`` uses banker's rounding on the binary value, which makes
    presentation tables depend on representation noise.
    """
    quantum = Decimal(1).scaleb(-decimals)
    d = Decimal(repr(float(x))).copy_abs().quantize(quantum, rounding=ROUND_HALF_UP)
    return math.copysign(float(d), x)
