"""Symbol-timing feasibility of per-symbol reconfiguration."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownPreset


@dataclass(frozen=True)
class TimingBudget:
    """Reconfiguration budget per symbol, all in seconds."""

    t_tune: float
    t_load: float = 0.0
    t_settle: float = 0.0

    def __post_init__(self):
        if min(self.t_tune, self.t_load, self.t_settle) < 0:
            raise ValueError("timing components must be non-negative")

    @property
    def t_sw(self) -> float:
        return self.t_load + self.t_tune + self.t_settle


@dataclass(frozen=True)
class OfdmNumerology:
    delta_f: float
    t_cp: float = 0.0
    label: str = ""

    def __post_init__(self):
        if not self.delta_f > 0:
            raise ValueError("subcarrier spacing must be positive")
        if self.t_cp < 0:
            raise ValueError("cyclic prefix must be non-negative")

    @property
    def t_u(self) -> float:
        return 1.0 / self.delta_f

    @property
    def t_ofdm(self) -> float:
        return self.t_u + self.t_cp


# Approximate classes; CP lengths are typical choices, not normative.
PRESETS: dict[str, OfdmNumerology] = {
    "long": OfdmNumerology(15e3, 4.7e-6, "long-symbol (15 kHz, normal CP)"),
    "medium": OfdmNumerology(78.125e3, 0.8e-6, "medium-symbol (78.125 kHz)"),
    "short": OfdmNumerology(312.5e3, 0.8e-6, "short-symbol (312.5 kHz)"),
}


def preset(name: str) -> OfdmNumerology:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPreset(f"unknown numerology preset {name!r}; choose from {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class OfdmReport:
    feasible: bool
    t_ss: float
    fits_in_cp: bool
    t_sw: float
    t_ofdm: float
    clamped: bool = False


def feasible(budget: TimingBudget, t_s: float) -> bool:
    if not t_s > 0:
        raise ValueError("symbol duration must be positive")
    return t_s >= budget.t_sw


def ofdm_report(budget: TimingBudget, numerology: OfdmNumerology) -> OfdmReport:
    t_sw, t_ofdm = budget.t_sw, numerology.t_ofdm
    ok = t_sw <= t_ofdm
    return OfdmReport(
        feasible=ok,
        t_ss=t_ofdm - t_sw if ok else 0.0,
        fits_in_cp=t_sw <= numerology.t_cp,
        t_sw=t_sw,
        t_ofdm=t_ofdm,
        clamped=not ok,
    )
