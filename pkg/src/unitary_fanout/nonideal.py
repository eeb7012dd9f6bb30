"""Passive-contractive loss abstraction for the splitter tree.

Each splitter cell (two hybrids plus one tunable phase element) multiplies the
power on both of its outputs by a common factor ``rho_c``, and each output phase
element by ``rho_out``.  Because every root-to-leaf path crosses exactly L
cells, the delivered fraction under this model is ``rho_out * rho_c**L`` for
any split schedule; common factors scale the output but never rotate it.

Uniform phase quantization of the controls is provided as an extra
impairment, since it is the simplest one that produces a nonzero direction
error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .network import NetworkModel, build_layers, propagate, single_port_input
from .synthesis import TreeSettings, tree_depth, wrap_angle
from .units import db_to_power_ratio, power_ratio_to_db

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class LossParams:
    """Insertion losses in dB: one hybrid excess loss, in-tree and output phase elements."""

    l_hyb: float = 0.0
    l_phi: float = 0.0
    l_out: float = 0.0

    def __post_init__(self):
        for name in ("l_hyb", "l_phi", "l_out"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be a finite non-negative dB value, got {value}")

    @property
    def rho_2hyb(self) -> float:
        return db_to_power_ratio(-2.0 * self.l_hyb)

    @property
    def rho_phi(self) -> float:
        return db_to_power_ratio(-self.l_phi)

    @property
    def rho_out(self) -> float:
        return db_to_power_ratio(-self.l_out)


LOSSLESS = LossParams()


@dataclass(frozen=True)
class ContractionResult:
    g: float
    c_hat: np.ndarray
    l_net_db: float
    eps_dir: float
    x_hat: np.ndarray


def cell_loss_factor(params: LossParams) -> float:
    """Common power transmission factor of one splitter cell."""
    return params.rho_2hyb * (1.0 + params.rho_phi) / 2.0


def net_loss_db(g2: float) -> float:
    return -power_ratio_to_db(g2)


def stress_alphas(n: int) -> tuple[np.ndarray, ...]:
    """Equal-split schedule (every alpha = pi/4), i.e. the constant-modulus target."""
    return tuple(np.full(2 ** k, np.pi / 4) for k in range(tree_depth(n)))


def tree_power_recursion(alphas: Sequence[Sequence[float]], params: LossParams) -> np.ndarray:
    """Leaf powers for unit power entering the root cell."""
    rho_c = cell_loss_factor(params)
    power = np.ones(1)
    for level, a in enumerate(alphas, start=1):
        a = np.asarray(a, dtype=float)
        if a.size != power.size:
            raise DimensionMismatch(f"level {level} has {a.size} alphas, expected {power.size}")
        children = np.empty(2 * power.size)
        children[0::2] = rho_c * power * np.cos(a) ** 2
        children[1::2] = rho_c * power * np.sin(a) ** 2
        power = children
    return power


def delivered_fraction(alphas: Sequence[Sequence[float]], params: LossParams) -> float:
    """g**2, the fraction of injected power reaching the antenna ports."""
    return params.rho_out * float(np.sum(tree_power_recursion(alphas, params)))


def stress_loss_closed_form(n: int, params: LossParams) -> float:
    """Stress-case network insertion loss in dB."""
    g2 = params.rho_out * cell_loss_factor(params) ** tree_depth(n)
    return net_loss_db(g2)


def direction_error(c: Sequence[complex], c_hat: Sequence[complex]) -> float:
    """Phase-invariant mismatch ``1 - |c^H c_hat|`` between unit-norm vectors."""
    c = np.asarray(c, dtype=complex).ravel()
    c_hat = np.asarray(c_hat, dtype=complex).ravel()
    if c.size != c_hat.size:
        raise DimensionMismatch(f"lengths differ: {c.size} vs {c_hat.size}")
    # clip guards the [0, 1] range against rounding in |<c, c>| slightly above 1
    return float(np.clip(1.0 - abs(np.vdot(c, c_hat)), 0.0, 1.0))


def quantize_settings(settings: TreeSettings, bits: int) -> TreeSettings:
    """Round every control to a uniform ``bits``-bit grid.

    Output phases use 2**bits levels over [0, 2*pi).  Splitters are quantized
    on their MZI differential phase ``delta = 2*alpha`` with 2**bits levels
    spanning [0, pi] inclusive, so full pass and full cross stay reachable.
    """
    if bits < 1:
        raise ValueError(f"bits must be >= 1, got {bits}")
    levels = 2 ** bits
    theta_step = TWO_PI / levels
    delta_step = np.pi / (levels - 1)
    thetas = wrap_angle(np.round(settings.thetas / theta_step) * theta_step)
    alphas = tuple(
        np.clip(np.round(2.0 * a / delta_step) * delta_step / 2.0, 0.0, np.pi / 2)
        for a in settings.alphas
    )
    return TreeSettings(alphas, thetas, padded_from=settings.padded_from)


def lossy_model(model: NetworkModel, params: LossParams) -> NetworkModel:
    """Attach the common per-cell and per-output amplitude factors to ``model``."""
    return replace(model, cell_gain=math.sqrt(cell_loss_factor(params)),
                   output_gain=math.sqrt(params.rho_out))


def contract(settings: TreeSettings, params: LossParams, target_c: Sequence[complex] | None = None,
             p_in: float = 1.0, bits: int | None = None) -> ContractionResult:
    """Realized output of the lossy network driven by ``sqrt(p_in) e_1``.

    ``target_c`` defaults to the ideal direction of ``settings``.  When
    ``bits`` is given the controls are quantized before propagation.
    """
    ideal = build_layers(settings)
    if target_c is None:
        target_c = propagate(ideal, single_port_input(settings.n))
    target_c = np.asarray(target_c, dtype=complex).ravel()
    if target_c.size < settings.n:
        target_c = np.concatenate([target_c, np.zeros(settings.n - target_c.size)])
    if bits is not None:
        settings = quantize_settings(settings, bits)
        ideal = build_layers(settings)
    lossy = lossy_model(ideal, params)
    x_hat = propagate(lossy, single_port_input(settings.n, p_in))
    out = x_hat / math.sqrt(p_in)
    g = float(np.linalg.norm(out))
    c_hat = out / g
    return ContractionResult(
        g=g,
        c_hat=c_hat,
        l_net_db=net_loss_db(g * g),
        eps_dir=direction_error(target_c, c_hat),
        x_hat=x_hat,
    )
