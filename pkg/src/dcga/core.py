"""Bitstring populations, deterministic RNG, and tournament selection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RNG_ALGORITHM = "numpy.random.PCG64"


class UnevaluatedPopulationError(RuntimeError):
    """An operation needed fitness values that have not been assigned yet."""


@dataclass
class RngStream:
    """Seeded random source.

    One stream drives every stochastic decision of a run, so equal seeds
    give bit-identical traces.
    """

    seed: int

    def __post_init__(self) -> None:
        self.gen = np.random.Generator(np.random.PCG64(self.seed))


@dataclass
class Individual:
    """A single bitstring with its cached objective value."""

    genes: np.ndarray
    fitness: float | None = None


class Population:
    """Fixed-size set of equal-length bitstrings with optional fitness values.

    ``genes`` is an (n, L) uint8 matrix of 0/1 alleles. ``fitness`` is either
    None (not yet evaluated) or a length-n float vector.
    """

    def __init__(self, genes: np.ndarray, fitness: np.ndarray | None = None,
                 generation: int = 0):
        genes = np.ascontiguousarray(genes, dtype=np.uint8)
        if genes.ndim != 2 or genes.shape[0] == 0 or genes.shape[1] == 0:
            raise ValueError(f"genes must be a non-empty 2-d matrix, got shape {genes.shape}")
        if genes.max(initial=0) > 1:
            raise ValueError("alleles must be 0 or 1")
        self.genes = genes
        self.generation = int(generation)
        self.fitness: np.ndarray | None = None
        if fitness is not None:
            self.set_fitness(fitness)

    @property
    def size(self) -> int:
        return self.genes.shape[0]

    @property
    def length(self) -> int:
        return self.genes.shape[1]

    @property
    def evaluated(self) -> bool:
        return self.fitness is not None

    def set_fitness(self, values: np.ndarray) -> None:
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (self.size,):
            raise ValueError(f"fitness must have shape ({self.size},), got {values.shape}")
        if np.any(values < 0):
            raise ValueError("fitness values must be nonnegative")
        self.fitness = values

    def require_evaluated(self) -> np.ndarray:
        if self.fitness is None:
            raise UnevaluatedPopulationError("population has no fitness values")
        return self.fitness

    def best(self) -> Individual:
        fit = self.require_evaluated()
        i = int(np.argmax(fit))
        return Individual(self.genes[i].copy(), float(fit[i]))

    def mean_fitness(self) -> float:
        return float(self.require_evaluated().mean())

    def __len__(self) -> int:
        return self.size

    def __iter__(self):
        for i in range(self.size):
            f = None if self.fitness is None else float(self.fitness[i])
            yield Individual(self.genes[i], f)


def random_population(n: int, length: int, rng: RngStream) -> Population:
    """Draw n individuals with i.i.d. fair-coin alleles; fitness unset."""
    if n < 1 or length < 1:
        raise ValueError(f"need n >= 1 and length >= 1, got n={n}, length={length}")
    genes = rng.gen.integers(0, 2, size=(n, length), dtype=np.uint8)
    return Population(genes)


def unitation(genes: np.ndarray) -> int:
    """Number of 1-alleles in a bitstring."""
    return int(np.asarray(genes).sum())


def tournament_select(pop: Population, tournament_size: int, rng: RngStream) -> Population:
    """Tournament selection with replacement.

    Produces pop.size winners; each is the fittest of ``tournament_size``
    uniform draws, ties going to the earliest draw.
    """
    if tournament_size < 1:
        raise ValueError(f"tournament_size must be >= 1, got {tournament_size}")
    fit = pop.require_evaluated()
    n = pop.size
    draws = rng.gen.integers(0, n, size=(n, tournament_size))
    # argmax returns the first maximal column, i.e. the earliest draw
    winners = draws[np.arange(n), np.argmax(fit[draws], axis=1)]
    return Population(pop.genes[winners], fit[winners], pop.generation)
