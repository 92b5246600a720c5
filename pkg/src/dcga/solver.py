"""Generation loop: model-building GA with restart-on-change, in three flavors.

The three methods share one loop and differ only in how offspring patterns
are sampled per group: ``dcga`` uses post-selection frequencies, ``schem1``
fitness-weighted frequencies, ``schem2`` the above-average subset of those.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Population, RngStream, random_population, tournament_select
from .dynamics import DynamicEnvironment, changed, current_optimum, phase_of
from .mpm import DEFAULT_NU_MAX, Partition, learn_model
from .schema import (MODE_FREQUENCY, MODE_SCHEM1, MODE_SCHEM2,
                     DegenerateTableError, build_table, distribution,
                     sample_offspring)

METHODS = ("dcga", "schem1", "schem2")
_METHOD_MODES = {"dcga": MODE_FREQUENCY, "schem1": MODE_SCHEM1, "schem2": MODE_SCHEM2}


@dataclass(frozen=True)
class SolverConfig:
    method: str = "dcga"
    n: int = 5000
    tournament_size: int = 16
    max_generations: int = 100
    seed: int = 0
    nu_max: int = DEFAULT_NU_MAX
    mc_form: str = "full"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.n < 1 or self.tournament_size < 1 or self.max_generations < 1:
            raise ValueError("n, tournament_size and max_generations must be >= 1")


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    phase: int
    changed: bool
    best_fitness: float
    mean_fitness: float
    current_optimum: float
    partition: str


@dataclass(frozen=True)
class RunTrace:
    seed: int
    method: str
    records: tuple[GenerationRecord, ...]

    def best_series(self) -> np.ndarray:
        return np.array([r.best_fitness for r in self.records])

    def mean_series(self) -> np.ndarray:
        return np.array([r.mean_fitness for r in self.records])

    def change_generations(self) -> list[int]:
        return [r.generation for r in self.records if r.changed]


def _resample(part: Partition, selected: Population, mode: str, n: int,
              rng: RngStream) -> Population:
    """Model-based crossover: sample n offspring from per-group distributions."""
    dists = []
    for group in part.groups:
        table = build_table(selected, group)
        try:
            dists.append(distribution(table, mode))
        except DegenerateTableError:
            dists.append(distribution(table, MODE_FREQUENCY))
    return sample_offspring(part, dists, n, rng)


def run(env: DynamicEnvironment, cfg: SolverConfig) -> RunTrace:
    """Execute one run and return its per-generation trace.

    Each generation: on a detected change, restart from a random population
    biased by the last learned partition; then evaluate and record, select,
    re-learn the partition from scratch, and sample the next population with
    the method's distribution mode.
    """
    mode = _METHOD_MODES[cfg.method]
    rng = RngStream(cfg.seed)
    pop = random_population(cfg.n, env.length, rng)
    part: Partition | None = None
    records: list[GenerationRecord] = []

    for g in range(cfg.max_generations):
        if g >= 1 and changed(env, g) and part is not None:
            pop = random_population(cfg.n, env.length, rng)
            env.evaluate_population(pop, g)
            restart_sel = tournament_select(pop, cfg.tournament_size, rng)
            pop = _resample(part, restart_sel, mode, cfg.n, rng)

        env.evaluate_population(pop, g)
        fit = pop.fitness
        selected = tournament_select(pop, cfg.tournament_size, rng)
        part = learn_model(selected, nu_max=cfg.nu_max, mc_form=cfg.mc_form)
        records.append(GenerationRecord(
            generation=g,
            phase=phase_of(env, g),
            changed=changed(env, g),
            best_fitness=float(fit.max()),
            mean_fitness=float(fit.mean()),
            current_optimum=current_optimum(env, g),
            partition=part.serialize(),
        ))
        pop = _resample(part, selected, mode, cfg.n, rng)

    return RunTrace(seed=cfg.seed, method=cfg.method, records=tuple(records))


@dataclass(frozen=True)
class RecoveryEvent:
    """Time from one environmental change to re-reaching the active optimum."""

    change_generation: int
    generations: int
    recovered: bool


def generations_to_recover(trace: RunTrace, epsilon: float) -> list[RecoveryEvent]:
    """Per change event, generations until best fitness is within epsilon of
    the active optimum; unrecovered events report the full gap to the next
    change, flagged.
    """
    events = []
    changes = trace.change_generations()
    horizon = len(trace.records)
    for i, c in enumerate(changes):
        end = changes[i + 1] if i + 1 < len(changes) else horizon
        hit = None
        for g in range(c, end):
            rec = trace.records[g]
            if rec.best_fitness >= (1.0 - epsilon) * rec.current_optimum:
                hit = g - c
                break
        if hit is None:
            events.append(RecoveryEvent(c, end - c, False))
        else:
            events.append(RecoveryEvent(c, hit, True))
    return events


def warmup_generation(trace: RunTrace, tol: float = 1e-9) -> int | None:
    """First generation whose best fitness reaches the active optimum."""
    for rec in trace.records:
        if rec.best_fitness >= rec.current_optimum - tol:
            return rec.generation
    return None
