"""Compute-excluded RF-front-end DC power: single-PA analog tree vs fully digital.

Both architectures are compared at equal delivered antenna-port power.  The
analog side pays for the tree's insertion loss through extra PA drive and for
the DC draw of its 2N - 1 tunable controls; the digital side is an affine
model ``P_sh + alpha*N + beta*P_ant_tot``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import DegenerateFit, DimensionMismatch, InvalidEfficiency
from .nonideal import LossParams, stress_loss_closed_form
from .units import db_to_power_ratio, round_half_away


class ValidityWarning(UserWarning):
    """Per-antenna power outside the range the digital coefficients were fitted on."""


@dataclass(frozen=True)
class TechProfile:
    """Phase-control technology operating point.

    ``resolution_bits`` is None for discrete-state elements.  ``l_out``
    defaults to ``l_phi`` (same technology for in-tree and output elements).
    """

    name: str
    t_tune: float
    l_phi: float
    p_phi: float
    resolution_bits: int | None = None
    l_hyb: float = 0.12
    l_out: float | None = None

    def __post_init__(self):
        if not self.t_tune > 0:
            raise ValueError(f"{self.name}: t_tune must be positive")
        if not self.p_phi >= 0:
            raise ValueError(f"{self.name}: p_phi must be non-negative")
        if self.l_out is None:
            object.__setattr__(self, "l_out", self.l_phi)

    @property
    def loss(self) -> LossParams:
        return LossParams(l_hyb=self.l_hyb, l_phi=self.l_phi, l_out=self.l_out)

    @property
    def resolution(self) -> str:
        return "discrete" if self.resolution_bits is None else f"{self.resolution_bits}-bit"

    def stress_loss_db(self, n: int) -> float:
        return stress_loss_closed_form(n, self.loss)


# Representative operating points; t_tune doubles as the reconfiguration time.
DEFAULT_PROFILES: tuple[TechProfile, ...] = (
    TechProfile("rf-mems", t_tune=10e-6, l_phi=0.2, p_phi=0.3e-3),
    TechProfile("gan-switch", t_tune=0.7e-6, l_phi=0.8, p_phi=0.9e-3),
    TechProfile("ultracmos", t_tune=2e-6, l_phi=1.1, p_phi=0.8e-3),
    TechProfile("dps", t_tune=0.5e-6, l_phi=1.4, p_phi=0.25, resolution_bits=6),
)


@dataclass(frozen=True)
class DigitalCoeffs:
    """Affine fully-digital front-end model; ``valid_p_ant`` is the fitted per-antenna range (W)."""

    alpha: float
    beta: float
    p_sh: float = 0.0
    valid_p_ant: tuple[float, float] = (0.0794, 0.2512)

    def __post_init__(self):
        lo, hi = self.valid_p_ant
        if not lo < hi:
            raise ValueError(f"empty validity range {self.valid_p_ant}")

    def covers(self, p_ant: float) -> bool:
        lo, hi = self.valid_p_ant
        return lo <= p_ant <= hi


DEFAULT_DIGITAL = DigitalCoeffs(alpha=2.67, beta=3.19)

# Vendor operating points (p_ant W, P_dc W) of a 6 GHz Wi-Fi FEM.
QPF4658_POINTS: tuple[tuple[float, float], ...] = (
    (0.0794, 1.125),
    (0.1995, 1.500),
    (0.2512, 1.675),
)
P_CHAIN_SUB6 = 1.8


@dataclass(frozen=True)
class AnalogBudget:
    p_in: float
    p_dc_pa: float
    p_dc_ctrl: float

    @property
    def total(self) -> float:
        return self.p_dc_pa + self.p_dc_ctrl


class AffineFit(NamedTuple):
    a: float
    b: float


def required_input_power(p_ant_tot: float, l_net_db: float) -> float:
    """Injected tone power that delivers ``p_ant_tot`` through a network of loss ``l_net_db``."""
    if p_ant_tot < 0:
        raise ValueError(f"delivered power must be non-negative, got {p_ant_tot}")
    return p_ant_tot * db_to_power_ratio(l_net_db)


def analog_dc(n: int, p_ant_tot: float, profile: TechProfile, eta_pa: float = 0.5,
              p_ctrl_fixed: float = 0.0, l_net_db: float | None = None) -> AnalogBudget:
    """DC power of the single-PA tree transmitter.

    ``l_net_db`` defaults to the unrounded stress-case loss of ``profile``.
    """
    if n < 1:
        raise ValueError(f"N must be >= 1, got {n}")
    if not 0 < eta_pa <= 1:
        raise InvalidEfficiency(f"PA efficiency must be in (0, 1], got {eta_pa}")
    if l_net_db is None:
        l_net_db = profile.stress_loss_db(n)
    p_in = required_input_power(p_ant_tot, l_net_db)
    return AnalogBudget(p_in=p_in, p_dc_pa=p_in / eta_pa,
                        p_dc_ctrl=(2 * n - 1) * profile.p_phi + p_ctrl_fixed)


def digital_dc(n: int, p_ant_tot: float, coeffs: DigitalCoeffs = DEFAULT_DIGITAL) -> float:
    """Fully-digital front-end DC power; warns when outside the fitted range."""
    if not coeffs.covers(p_ant_tot / n):
        warnings.warn(
            f"p_ant={p_ant_tot / n:.4g} W outside fitted range {coeffs.valid_p_ant}",
            ValidityWarning, stacklevel=2)
    return coeffs.p_sh + coeffs.alpha * n + coeffs.beta * p_ant_tot


def fit_affine_pa(points: Iterable[tuple[float, float]]) -> AffineFit:
    """Closed-form least-squares line ``P_dc = a + b*p_ant``."""
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise DegenerateFit("need at least two (p_ant, P_dc) points")
    p, dc = pts[:, 0], pts[:, 1]
    k = len(p)
    denom = k * np.sum(p * p) - np.sum(p) ** 2
    if np.all(p == p[0]) or denom == 0:
        raise DegenerateFit("all p_ant values are equal")
    b = (k * np.sum(p * dc) - np.sum(p) * np.sum(dc)) / denom
    a = np.mean(dc) - b * np.mean(p)
    return AffineFit(float(a), float(b))


def affine_sse(points: Iterable[tuple[float, float]], a: float, b: float) -> float:
    pts = np.asarray(list(points), dtype=float)
    return float(np.sum((pts[:, 1] - (a + b * pts[:, 0])) ** 2))


def derive_digital_coeffs(p_chain: float, fit: tuple[float, float],
                          valid_p_ant: tuple[float, float] = (0.0794, 0.2512)) -> DigitalCoeffs:
    if p_chain < 0:
        raise ValueError(f"per-chain power must be non-negative, got {p_chain}")
    a, b = fit
    return DigitalCoeffs(alpha=p_chain + a, beta=b, p_sh=0.0, valid_p_ant=valid_p_ant)


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    p_ant_tot: float
    digital: float
    analog: Mapping[str, float]
    l_net_db: Mapping[str, float]
    out_of_range: bool = False
    budgets: Mapping[str, AnalogBudget] = field(default_factory=dict, repr=False)

    def rounded(self, decimals: int = 2) -> "ComparisonRow":
        return ComparisonRow(
            n=self.n,
            p_ant_tot=round_half_away(self.p_ant_tot, decimals),
            digital=round_half_away(self.digital, decimals),
            analog={k: round_half_away(v, decimals) for k, v in self.analog.items()},
            l_net_db=dict(self.l_net_db),
            out_of_range=self.out_of_range,
            budgets=self.budgets,
        )


def equal_pant_comparison(n_list: Sequence[int], p_ant: float = 0.2,
                          profiles: Sequence[TechProfile] = DEFAULT_PROFILES,
                          coeffs: DigitalCoeffs = DEFAULT_DIGITAL, eta_pa: float = 0.5,
                          p_ctrl_fixed: float = 0.0, loss_decimals: int | None = 1,
                          ) -> list[ComparisonRow]:
    """Analog and digital DC power at fixed per-antenna power ``p_ant``.

    ``loss_decimals`` rounds each stress-case loss before it is used, which is
    how the published comparison table was evaluated (losses taken from the
    0.1 dB loss table).  Pass None to use the unrounded loss.
    """
    if p_ant < 0:
        raise ValueError(f"p_ant must be non-negative, got {p_ant}")
    rows = []
    for n in n_list:
        p_ant_tot = n * p_ant
        losses, budgets = {}, {}
        for profile in profiles:
            l_net = profile.stress_loss_db(n)
            if loss_decimals is not None:
                l_net = round_half_away(l_net, loss_decimals)
            losses[profile.name] = l_net
            budgets[profile.name] = analog_dc(n, p_ant_tot, profile, eta_pa, p_ctrl_fixed, l_net)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ValidityWarning)
            digital = digital_dc(n, p_ant_tot, coeffs)
        rows.append(ComparisonRow(
            n=n, p_ant_tot=p_ant_tot, digital=digital,
            analog={k: b.total for k, b in budgets.items()},
            l_net_db=losses, out_of_range=not coeffs.covers(p_ant), budgets=budgets,
        ))
    return rows


def multitone_input_power(subcarrier_powers: Sequence[float], g_list: Sequence[float]) -> float:
    """Total injected power when subcarrier k delivers ``P_k`` through amplitude fraction ``g_k``."""
    powers = np.asarray(subcarrier_powers, dtype=float)
    g = np.asarray(g_list, dtype=float)
    if powers.shape != g.shape:
        raise DimensionMismatch(f"{powers.size} powers vs {g.size} gains")
    if np.any(g <= 0) or np.any(g > 1):
        raise ValueError("every g_k must lie in (0, 1]")
    return float(math.fsum(powers / g ** 2))
