"""Closed-form programming of the split-then-phase tree.

A balanced binary tree of N - 1 tunable 2x2 splitters distributes the power of a
single driven port over N = 2**L leaves, and a diagonal bank of N output phase
shifters assigns the target phases.  Everything here is O(N) scalar work.

Indexing follows the tree convention used throughout the package: levels are
1-based (level 1 is the root, level L + 1 holds the leaves), nodes within a
level are 1-based, and node (l, i) covers the contiguous leaf block
``S(l, i) = {(i-1)*2**(L-l+1) + 1, ..., i*2**(L-l+1)}``.  Internally arrays are
0-based, so the value for node (l, i) lives at ``levels[l-1][i-1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    CalibrationLengthMismatch,
    MalformedSettings,
    NonPositivePower,
    ZeroVector,
)

TWO_PI = 2.0 * np.pi

# Relative mismatch between |entries|^2 and total_power tolerated before the
# result is flagged as renormalized.
UNIT_NORM_RTOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


def wrap_angle(theta):
    """Reduce angles to [0, 2*pi)."""
    out = np.mod(theta, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    return np.where(out >= TWO_PI, 0.0, out)


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def tree_depth(n: int) -> int:
    """Number of splitter levels L for a power-of-two port count ``n``."""
    if not is_power_of_two(n):
        raise ValueError(f"N must be a power of two, got {n}")
    return n.bit_length() - 1


@dataclass(frozen=True)
class TargetVector:
    """Desired antenna excitation ``x`` with total power ``total_power`` (W).

    When ``total_power`` is omitted it is taken as ``sum |x_n|**2``.
    """

    entries: np.ndarray
    total_power: float | None = None

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex).ravel()
        if entries.size < 1:
            raise ZeroVector("target vector is empty")
        object.__setattr__(self, "entries", _frozen(entries))
        if self.total_power is None:
            object.__setattr__(self, "total_power", float(np.vdot(entries, entries).real))

    @property
    def n(self) -> int:
        return self.entries.size


@dataclass(frozen=True)
class TreeIndex:
    """Node (level, node) of a depth-L tree, with its leaf block [p, p + 2*half)."""

    level: int
    node: int
    depth: int

    def __post_init__(self):
        if not 1 <= self.level <= self.depth:
            raise ValueError(f"level {self.level} outside [1, {self.depth}]")
        if not 1 <= self.node <= 2 ** (self.level - 1):
            raise ValueError(f"node {self.node} outside [1, {2 ** (self.level - 1)}]")

    @property
    def block(self) -> int:
        return 2 ** (self.depth - self.level + 1)

    @property
    def p(self) -> int:
        """Entry (first) leaf of the block, 1-based."""
        return (self.node - 1) * self.block + 1

    @property
    def q(self) -> int:
        """Split partner leaf, 1-based."""
        return self.p + self.block // 2

    @property
    def leaves(self) -> range:
        return range(self.p, self.p + self.block)

    def children(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.level + 1, 2 * self.node - 1), (self.level + 1, 2 * self.node)


@dataclass(frozen=True)
class SubtreeNorms:
    """Subtree norms r for levels 1..L+1; ``levels[L]`` holds the leaf magnitudes."""

    levels: tuple[np.ndarray, ...]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def r(self, level: int, node: int) -> float:
        return float(self.levels[level - 1][node - 1])


@dataclass(frozen=True)
class TreeSettings:
    """The 2N - 1 tunable controls of the tree.

    ``alphas[l-1]`` holds the 2**(l-1) split angles of level l, in radians and
    within [0, pi/2].  ``thetas`` holds the N output phases, reduced to
    [0, 2*pi).  ``padded_from`` records the antenna count before zero padding
    and ``renormalized`` is set when the target's entries did not match its
    stated total power and were rescaled.
    """

    alphas: tuple[np.ndarray, ...]
    thetas: np.ndarray
    padded_from: int | None = None
    renormalized: bool = False
    n: int = field(init=False)

    def __post_init__(self):
        thetas = np.asarray(self.thetas, dtype=float).ravel()
        n = thetas.size
        if not is_power_of_two(n):
            raise MalformedSettings(f"theta count {n} is not a power of two")
        depth = tree_depth(n)
        if len(self.alphas) != depth:
            raise MalformedSettings(f"expected {depth} alpha levels for N={n}, got {len(self.alphas)}")
        alphas = []
        for level, a in enumerate(self.alphas, start=1):
            a = np.asarray(a, dtype=float).ravel()
            if a.size != 2 ** (level - 1):
                raise MalformedSettings(
                    f"level {level} needs {2 ** (level - 1)} alphas, got {a.size}")
            if np.any(~np.isfinite(a)) or np.any(a < 0.0) or np.any(a > np.pi / 2):
                raise MalformedSettings(f"level {level} has alphas outside [0, pi/2]")
            alphas.append(_frozen(a))
        if np.any(~np.isfinite(thetas)):
            raise MalformedSettings("non-finite output phase")
        object.__setattr__(self, "alphas", tuple(alphas))
        object.__setattr__(self, "thetas", _frozen(wrap_angle(thetas)))
        object.__setattr__(self, "n", n)
        if self.padded_from is None:
            object.__setattr__(self, "padded_from", n)
        elif not 1 <= self.padded_from <= n:
            raise MalformedSettings(f"padded_from={self.padded_from} inconsistent with N={n}")

    @property
    def depth(self) -> int:
        return len(self.alphas)

    @property
    def num_controls(self) -> int:
        return 2 * self.n - 1

    def alpha(self, level: int, node: int) -> float:
        return float(self.alphas[level - 1][node - 1])

    def alpha_items(self) -> Iterator[tuple[int, int, float]]:
        """Yield ``(level, node, alpha)`` in level order, nodes ascending."""
        for level, a in enumerate(self.alphas, start=1):
            for node, value in enumerate(a, start=1):
                yield level, node, float(value)

    @classmethod
    def identity(cls, n: int) -> "TreeSettings":
        depth = tree_depth(n)
        return cls(tuple(np.zeros(2 ** k) for k in range(depth)), np.zeros(n))


def normalize_target(x: TargetVector) -> tuple[np.ndarray, float]:
    """Split ``x`` into its unit-norm direction ``c`` and ``sqrt(P)``."""
    norm = np.linalg.norm(x.entries)
    if norm == 0:
        raise ZeroVector("target vector has zero norm")
    if not x.total_power > 0:
        raise NonPositivePower(f"total power must be positive, got {x.total_power}")
    return x.entries / norm, float(np.sqrt(x.total_power))


def pad_to_power_of_two(c: Sequence[complex]) -> tuple[np.ndarray, int]:
    c = np.asarray(c, dtype=complex).ravel()
    n = c.size
    n_pad = 1 << max(n - 1, 0).bit_length()
    if n_pad == n:
        return c.copy(), n
    out = np.zeros(n_pad, dtype=complex)
    out[:n] = c
    return out, n_pad


def compute_subtree_norms(c: Sequence[complex]) -> SubtreeNorms:
    """Bottom-up subtree norms via the energy recursion."""
    c = np.asarray(c, dtype=complex).ravel()
    depth = tree_depth(c.size)
    energy = np.abs(c) ** 2
    levels = [np.abs(c)]
    for _ in range(depth):
        energy = energy[0::2] + energy[1::2]
        levels.append(np.sqrt(energy))
    levels.reverse()
    return SubtreeNorms(tuple(_frozen(r) for r in levels))


def compute_split_angles(norms: SubtreeNorms) -> tuple[np.ndarray, ...]:
    alphas = []
    for level in range(norms.depth):
        children = norms.levels[level + 1]
        left, right = children[0::2], children[1::2]
        # atan2(0, 0) == 0, which is exactly the zero rule for dead subtrees
        a = np.arctan2(right, left)
        a[norms.levels[level] == 0] = 0.0
        alphas.append(a)
    return tuple(alphas)


def right_branch_count(n: int, depth: int) -> int:
    """Number of right-child decisions on the root-to-leaf path to leaf ``n`` (1-based)."""
    if not 1 <= n <= 2 ** depth:
        raise ValueError(f"leaf {n} outside [1, {2 ** depth}]")
    return (n - 1).bit_count()


def magnitude_tree_phase_offsets(n: int, calibrated: Sequence[float] | None = None) -> np.ndarray:
    """Phases of the magnitude-tree output ``V_mag e_1`` per leaf.

    The ideal splitter puts a factor ``j`` on every right branch, so leaf n
    picks up ``pi/2`` times its right-branch count.  A measured vector can be
    supplied instead and is returned unchanged.
    """
    tree_depth(n)
    if calibrated is not None:
        calibrated = np.asarray(calibrated, dtype=float).ravel()
        if calibrated.size != n:
            raise CalibrationLengthMismatch(
                f"calibrated offsets have length {calibrated.size}, expected {n}")
        return calibrated.copy()
    k = np.arange(n)
    weights = np.zeros(n, dtype=int)
    while np.any(k):
        weights += k & 1
        k >>= 1
    return wrap_angle(0.5 * np.pi * weights)


def compute_phase_bank(c: Sequence[complex], theta_mag: Sequence[float],
                       global_phase: float = 0.0) -> np.ndarray:
    c = np.asarray(c, dtype=complex).ravel()
    theta_mag = np.asarray(theta_mag, dtype=float).ravel()
    if c.size != theta_mag.size:
        raise ValueError(f"length mismatch: {c.size} targets vs {theta_mag.size} offsets")
    thetas = np.angle(c) - theta_mag - global_phase
    thetas[c == 0] = 0.0
    return wrap_angle(thetas)


def program(x: TargetVector | Sequence[complex], global_phase: float = 0.0,
            calibrated_offsets: Sequence[float] | None = None) -> TreeSettings:
    """Closed-form tree settings that map ``sqrt(P) e_1`` onto ``x``.

    ``global_phase`` compensates a known common phase on the injected tone.
    Targets whose length is not a power of two are zero padded; the padded
    leaves receive no power.
    """
    if not isinstance(x, TargetVector):
        x = TargetVector(x)
    c, sqrt_p = normalize_target(x)
    norm_sq = float(np.vdot(x.entries, x.entries).real)
    renormalized = abs(norm_sq - x.total_power) > UNIT_NORM_RTOL * x.total_power
    c, n = pad_to_power_of_two(c)
    alphas = compute_split_angles(compute_subtree_norms(c))
    theta_mag = magnitude_tree_phase_offsets(n, calibrated_offsets)
    thetas = compute_phase_bank(c, theta_mag, global_phase)
    return TreeSettings(alphas, thetas, padded_from=x.n, renormalized=renormalized)
