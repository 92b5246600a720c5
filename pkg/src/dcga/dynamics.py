"""Trap-function landscapes, the cyclic change schedule, and unitation theory."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .core import Population

# Block shapes. "standard" peaks at all-ones with the deceptive slope rising
# toward all-zeros; the two asymmetric variants move the optimum to one
# extreme and the secondary attractor one step inside the other extreme.
SHAPE_STANDARD = "standard"
SHAPE_PEAK_AT_ZEROS = "peak-at-zeros"
SHAPE_PEAK_AT_ONES = "peak-at-ones"
SHAPES = (SHAPE_STANDARD, SHAPE_PEAK_AT_ZEROS, SHAPE_PEAK_AT_ONES)

ENVIRONMENTS = ("trap4-static", "trap4-modified", "trap34-switching")


@dataclass(frozen=True)
class TrapSpec:
    """Order-k deceptive block function over unitation 0..k."""

    k: int
    low: float
    high: float
    shape: str = SHAPE_STANDARD

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"trap order must be >= 2, got {self.k}")
        if not (self.high > self.low > 0):
            raise ValueError(f"need high > low > 0, got high={self.high}, low={self.low}")
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}")

    def table(self) -> np.ndarray:
        """Values at unitation 0..k as a float vector."""
        return np.array([trap_value(u, self) for u in range(self.k + 1)])


def trap_value(u: int, spec: TrapSpec) -> float:
    """Block value at unitation u."""
    return float(trap_value_exact(u, spec))


def trap_value_exact(u: int, spec: TrapSpec) -> Fraction:
    """Block value at unitation u in exact rational arithmetic."""
    if not 0 <= u <= spec.k:
        raise ValueError(f"unitation {u} outside 0..{spec.k}")
    k, low, high = spec.k, Fraction(spec.low), Fraction(spec.high)
    if spec.shape == SHAPE_STANDARD:
        if u == k:
            return high
        return low - u * low / (k - 1)
    if spec.shape == SHAPE_PEAK_AT_ZEROS:
        if u == 0:
            return high
        if u == k:
            return Fraction(0)
        return low * u / (k - 1)
    # peak at ones: mirror image of peak-at-zeros
    if u == k:
        return high
    if u == 0:
        return Fraction(0)
    return low * (k - u) / (k - 1)


def theoretical_schema_proportion_exact(spec: TrapSpec) -> list[Fraction]:
    """First-generation fitness-proportional schema shares by unitation, exact."""
    weights = [comb(spec.k, u) * trap_value_exact(u, spec) for u in range(spec.k + 1)]
    total = sum(weights)
    if total == 0:
        raise ValueError("all block values are zero; proportions undefined")
    return [w / total for w in weights]


def theoretical_schema_proportion(spec: TrapSpec) -> np.ndarray:
    """Float view of the exact unitation-level proportions."""
    return np.array([float(p) for p in theoretical_schema_proportion_exact(spec)])


@dataclass(frozen=True)
class PhaseLandscape:
    """One phase of the environment: a trap spec tiled over contiguous blocks."""

    spec: TrapSpec
    blocks: int
    values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.blocks < 1:
            raise ValueError("need at least one block")
        object.__setattr__(self, "values", self.spec.table())

    @property
    def length(self) -> int:
        return self.blocks * self.spec.k

    @property
    def optimum(self) -> float:
        return self.blocks * float(self.values.max())

    def evaluate_genes(self, genes: np.ndarray) -> np.ndarray:
        """Vectorised evaluation of an (n, L) gene matrix."""
        n = genes.shape[0]
        u = genes.reshape(n, self.blocks, self.spec.k).sum(axis=2)
        return self.values[u].sum(axis=1)


@dataclass(frozen=True)
class DynamicEnvironment:
    """Cyclic sequence of phase landscapes over a common string length."""

    name: str
    length: int
    cycle_length: int
    phases: tuple[PhaseLandscape, ...]

    def __post_init__(self):
        if self.cycle_length < 1:
            raise ValueError("cycle_length must be >= 1")
        if not self.phases:
            raise ValueError("need at least one phase")
        for ph in self.phases:
            if ph.length != self.length:
                raise ValueError(
                    f"phase of order {ph.spec.k} with {ph.blocks} blocks does not "
                    f"tile length {self.length}")

    def evaluate_population(self, pop: Population, generation: int) -> None:
        """Assign fitness under the phase active at ``generation``."""
        if pop.length != self.length:
            raise ValueError(f"expected strings of length {self.length}, got {pop.length}")
        phase = self.phases[phase_of(self, generation)]
        pop.set_fitness(phase.evaluate_genes(pop.genes))


def phase_of(env: DynamicEnvironment, generation: int) -> int:
    """Index of the phase active at ``generation``."""
    return (generation // env.cycle_length) % len(env.phases)


def changed(env: DynamicEnvironment, generation: int) -> bool:
    """True when the landscape at ``generation`` differs from the previous one."""
    if generation < 1:
        return False
    return phase_of(env, generation) != phase_of(env, generation - 1)


def current_optimum(env: DynamicEnvironment, generation: int) -> float:
    """Global maximum of the phase active at ``generation``."""
    return env.phases[phase_of(env, generation)].optimum


def evaluate(genes: np.ndarray, env: DynamicEnvironment, generation: int) -> float:
    """Objective value of a single bitstring at ``generation``."""
    genes = np.atleast_2d(np.asarray(genes, dtype=np.uint8))
    if genes.shape[1] != env.length:
        raise ValueError(f"expected strings of length {env.length}, got {genes.shape[1]}")
    phase = env.phases[phase_of(env, generation)]
    return float(phase.evaluate_genes(genes)[0])


def make_environment(name: str, *, blocks: int | None = None,
                     length: int | None = None, cycle_length: int = 10) -> DynamicEnvironment:
    """Build one of the named benchmark environments.

    ``trap4-static`` and ``trap4-modified`` accept either ``blocks`` (4-bit
    building blocks) or ``length`` (a multiple of 4); ``trap34-switching``
    requires ``length`` divisible by 12 so both phases tile it.
    """
    if name not in ENVIRONMENTS:
        raise ValueError(f"unknown environment {name!r}; choose from {ENVIRONMENTS}")

    if name == "trap34-switching":
        if length is None:
            raise ValueError("trap34-switching requires length (a multiple of 12)")
        if blocks is not None:
            raise ValueError("trap34-switching takes length, not blocks")
        if length % 12 != 0:
            raise ValueError(f"length must be divisible by 12, got {length}")
        phases = (
            PhaseLandscape(TrapSpec(4, 4.0, 5.0, SHAPE_PEAK_AT_ZEROS), length // 4),
            PhaseLandscape(TrapSpec(3, 3.0, 5.0, SHAPE_PEAK_AT_ONES), length // 3),
        )
        return DynamicEnvironment(name, length, cycle_length, phases)

    if length is None and blocks is None:
        raise ValueError(f"{name} requires blocks or length")
    if length is None:
        length = 4 * blocks
    elif blocks is not None and length != 4 * blocks:
        raise ValueError(f"blocks={blocks} and length={length} disagree")
    if length % 4 != 0:
        raise ValueError(f"length must be divisible by 4, got {length}")
    m = length // 4

    if name == "trap4-static":
        phases = (PhaseLandscape(TrapSpec(4, 4.0, 5.0, SHAPE_STANDARD), m),)
    else:  # trap4-modified
        phases = (
            PhaseLandscape(TrapSpec(4, 4.0, 5.0, SHAPE_PEAK_AT_ZEROS), m),
            PhaseLandscape(TrapSpec(4, 4.0, 5.0, SHAPE_PEAK_AT_ONES), m),
        )
    return DynamicEnvironment(name, length, cycle_length, phases)
