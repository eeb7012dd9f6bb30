"""Transfer matrix of the splitter tree plus output phase bank.

Two evaluation paths are kept side by side.  ``assemble_dense`` builds the
N x N matrix ``diag(exp(j*theta)) @ U_L @ ... @ U_1`` and is the verification
oracle.  ``propagate`` mixes disjoint coordinate pairs in place, level by
level, in O(N log N) work and O(N) memory, and is what everything else uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, MalformedSettings
from .synthesis import TreeSettings, is_power_of_two, tree_depth

# Ideal 3 dB hybrid used to build the MZI.
HYBRID = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


def splitter_cell(alpha: float) -> np.ndarray:
    """2x2 splitter ``[[cos a, j sin a], [j sin a, cos a]]``."""
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array([[c, 1j * s], [1j * s, c]], dtype=complex)


def mzi_transfer(delta: float) -> np.ndarray:
    """MZI with internal differential phase ``delta``: H diag(e^{j d/2}, e^{-j d/2}) H."""
    phases = np.diag([np.exp(0.5j * delta), np.exp(-0.5j * delta)])
    return HYBRID @ phases @ HYBRID


def embed_splitter(n: int, p: int, q: int, alpha: float) -> np.ndarray:
    """Identity on all coordinates except the 1-based pair (p, q), where the splitter acts."""
    if not 1 <= p < q <= n:
        raise IndexOutOfRange(f"need 1 <= p < q <= N, got p={p}, q={q}, N={n}")
    u = np.eye(n, dtype=complex)
    cell = splitter_cell(alpha)
    idx = [p - 1, q - 1]
    u[np.ix_(idx, idx)] = cell
    return u


@dataclass(frozen=True)
class Layer:
    """One tree level: disjoint pairs (p, q) with their split angles, 0-based indices."""

    p: np.ndarray
    q: np.ndarray
    alpha: np.ndarray

    def triples(self) -> list[tuple[int, int, float]]:
        """Pairs as 1-based ``(p, q, alpha)`` triples, ascending node order."""
        return [(int(a) + 1, int(b) + 1, float(t)) for a, b, t in zip(self.p, self.q, self.alpha)]

    def is_disjoint(self) -> bool:
        idx = np.concatenate([self.p, self.q])
        return np.unique(idx).size == idx.size


@dataclass(frozen=True)
class NetworkModel:
    """Assembled network.

    ``cell_gain`` and ``output_gain`` are common amplitude factors applied to
    both outputs of every splitter cell and to every output phase element.
    Both are 1 for the ideal (unitary) network.
    """

    n: int
    layers: tuple[Layer, ...]
    phase_bank: np.ndarray
    cell_gain: float = 1.0
    output_gain: float = 1.0

    @property
    def mode(self) -> str:
        return "ideal" if self.cell_gain == 1.0 and self.output_gain == 1.0 else "lossy"

    @property
    def depth(self) -> int:
        return len(self.layers)


def layer_pairs(n: int, level: int) -> tuple[np.ndarray, np.ndarray]:
    """0-based entry and partner indices p(l, i) - 1, q(l, i) - 1 for all nodes of ``level``."""
    depth = tree_depth(n)
    block = 2 ** (depth - level + 1)
    p = np.arange(2 ** (level - 1)) * block
    return p, p + block // 2


def build_layers(settings: TreeSettings) -> NetworkModel:
    if not isinstance(settings, TreeSettings):
        raise MalformedSettings(f"expected TreeSettings, got {type(settings).__name__}")
    n = settings.n
    layers = []
    for level, alphas in enumerate(settings.alphas, start=1):
        p, q = layer_pairs(n, level)
        layers.append(Layer(p, q, np.array(alphas)))
    return NetworkModel(n, tuple(layers), np.array(settings.thetas))


def layer_matrix(n: int, layer: Layer) -> np.ndarray:
    """Dense matrix of one layer; equals the product of its embedded splitters."""
    u = np.eye(n, dtype=complex)
    c, s = np.cos(layer.alpha), 1j * np.sin(layer.alpha)
    u[layer.p, layer.p] = c
    u[layer.q, layer.q] = c
    u[layer.p, layer.q] = s
    u[layer.q, layer.p] = s
    return u


def assemble_dense(model: NetworkModel) -> np.ndarray:
    v = np.eye(model.n, dtype=complex)
    for layer in model.layers:
        v = model.cell_gain * layer_matrix(model.n, layer) @ v
    return (model.output_gain * np.exp(1j * model.phase_bank))[:, None] * v


def apply_layer(state: np.ndarray, layer: Layer, gain: float = 1.0,
                order: Sequence[int] | None = None) -> None:
    """Mix the layer's pairs into ``state`` in place.

    With ``order`` the cells are applied one at a time in that node order
    (0-based); otherwise all pairs are mixed at once.
    """
    c, s = gain * np.cos(layer.alpha), 1j * gain * np.sin(layer.alpha)
    if order is None:
        a, b = state[layer.p], state[layer.q]
        state[layer.p] = c * a + s * b
        state[layer.q] = s * a + c * b
        return
    for k in order:
        i, j = layer.p[k], layer.q[k]
        a, b = state[i], state[j]
        state[i] = c[k] * a + s[k] * b
        state[j] = s[k] * a + c[k] * b


def iter_states(model: NetworkModel, wave: Sequence[complex]) -> Iterator[np.ndarray]:
    """Yield the wave vector before each layer, then after the last layer (before the phase bank).

    The yielded arrays are copies, so callers may keep them.
    """
    state = np.array(wave, dtype=complex).ravel()
    if state.size != model.n:
        raise DimensionMismatch(f"input has length {state.size}, network has {model.n} ports")
    for layer in model.layers:
        yield state.copy()
        apply_layer(state, layer, model.cell_gain)
    yield state


def propagate(model: NetworkModel, wave: Sequence[complex]) -> np.ndarray:
    """Output wave vector for incident ``wave`` at the input ports."""
    *_, state = iter_states(model, wave)
    return state * (model.output_gain * np.exp(1j * model.phase_bank))


def single_port_input(n: int, power: float = 1.0, phase: float = 0.0) -> np.ndarray:
    """``sqrt(power) * exp(j*phase) * e_1``."""
    x = np.zeros(n, dtype=complex)
    x[0] = np.sqrt(power) * np.exp(1j * phase)
    return x


def unitarity_residual(v: np.ndarray) -> float:
    """max |V^H V - I| entrywise."""
    return float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))))


def dft_matrix(n: int) -> np.ndarray:
    """Normalized N-point DFT (Butler) matrix."""
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def input_concentrator_check(n: int, atol: float = 1e-12) -> bool:
    """True when the normalized DFT maps the uniform vector onto e_1."""
    if not is_power_of_two(n):
        raise ValueError(f"N must be a power of two, got {n}")
    out = dft_matrix(n) @ (np.ones(n) / np.sqrt(n))
    return bool(np.max(np.abs(out - single_port_input(n))) < atol)


class ComponentCounts(NamedTuple):
    cells: int
    hybrids: int
    tunable_controls: int
    depth: int


def component_counts(n: int) -> ComponentCounts:
    depth = tree_depth(n)
    return ComponentCounts(cells=n - 1, hybrids=2 * (n - 1), tunable_controls=2 * n - 1, depth=depth)
