"""Per-group schema statistics and the three offspring sampling distributions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Population, RngStream
from .mpm import Partition, _encode

MODE_FREQUENCY = "frequency"
MODE_SCHEM1 = "schem1"
MODE_SCHEM2 = "schem2"
MODES = (MODE_FREQUENCY, MODE_SCHEM1, MODE_SCHEM2)


class DegenerateTableError(ValueError):
    """Every schema carries zero fitness mass; no fitness-weighted distribution exists."""


@dataclass(frozen=True)
class SchemaTable:
    """Occurrence counts and fitness mass for every pattern of one group.

    ``fitness_sums[s]`` is the summed fitness of the individuals that carry
    pattern s, so ``fitness_sums[s] / counts[s]`` is the mean fitness of the
    carriers.
    """

    group: tuple[int, ...]
    counts: np.ndarray
    fitness_sums: np.ndarray
    pop_mean_fitness: float

    @property
    def size(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class SamplingDistribution:
    probs: np.ndarray
    mode: str


def build_table(pop: Population, group) -> SchemaTable:
    """Tally pattern counts and per-pattern fitness mass in one pass."""
    fit = pop.require_evaluated()
    group = tuple(sorted(int(i) for i in group))
    if not group or max(group) >= pop.length:
        raise ValueError(f"bad group {group} for string length {pop.length}")
    codes = _encode(pop.genes, group)
    sigma = 1 << len(group)
    counts = np.bincount(codes, minlength=sigma)
    sums = np.bincount(codes, weights=fit, minlength=sigma)
    return SchemaTable(group=group, counts=counts, fitness_sums=sums,
                       pop_mean_fitness=float(fit.mean()))


def distribution(table: SchemaTable, mode: str) -> SamplingDistribution:
    """Sampling probabilities over the group's patterns.

    frequency: relative occurrence counts. schem1: fitness mass, normalized.
    schem2: schem1 after zeroing patterns whose fitness mass, spread over the
    2^nu pattern slots, falls below the population mean fitness; this prunes
    thinly supported patterns. Falls back to schem1 when it zeroes everything.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {MODES}")
    if np.any(table.fitness_sums < 0):
        raise ValueError("schema fitness sums must be nonnegative")

    if mode == MODE_FREQUENCY:
        probs = table.counts / table.size
        return SamplingDistribution(probs=probs, mode=mode)

    sums = table.fitness_sums
    if mode == MODE_SCHEM2:
        sigma = len(sums)
        kept = np.where(sums / sigma >= table.pop_mean_fitness, sums, 0.0)
        if kept.sum() > 0:
            sums = kept
        # else: every schema fell below the bar; keep the schem1 weights

    total = sums.sum()
    if total <= 0:
        raise DegenerateTableError("all schemas have zero fitness mass")
    return SamplingDistribution(probs=sums / total, mode=mode)


def sample_offspring(part: Partition, dists, n: int, rng: RngStream) -> Population:
    """Draw n individuals by sampling one pattern per group independently.

    ``dists`` must align with ``part.groups``. Fitness is left unset.
    """
    if n < 1:
        raise ValueError("need n >= 1 offspring")
    dists = list(dists)
    if len(dists) != len(part.groups):
        raise ValueError(f"expected {len(part.groups)} distributions, got {len(dists)}")
    length = max(i for g in part.groups for i in g) + 1
    if not part.covers(length):
        raise ValueError("partition must cover a full index range to sample strings")
    genes = np.empty((n, length), dtype=np.uint8)
    for group, dist in zip(part.groups, dists):
        nu = len(group)
        if dist.probs.shape != (1 << nu,):
            raise ValueError(f"distribution size {dist.probs.shape} does not match group {group}")
        codes = rng.gen.choice(1 << nu, size=n, p=dist.probs)
        for j, idx in enumerate(group):
            genes[:, idx] = (codes >> (nu - 1 - j)) & 1
    return Population(genes)
