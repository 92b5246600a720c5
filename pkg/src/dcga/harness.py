"""Experiment orchestration: multi-seed runs, aggregation, feasibility, outputs."""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .core import RNG_ALGORITHM, RngStream, random_population
from .dynamics import (DynamicEnvironment, TrapSpec, make_environment,
                       theoretical_schema_proportion)
from .mpm import DEFAULT_NU_MAX
from .schema import MODE_SCHEM1, build_table, distribution
from .solver import METHODS, RunTrace, GenerationRecord, SolverConfig, run

RUNS_HEADER = ["seed", "generation", "phase", "changed", "best_fitness",
               "mean_fitness", "current_optimum", "partition"]
AGG_HEADER = ["generation", "mean_best", "std_best", "mean_mean", "std_mean",
              "current_optimum"]

# Desk-scale and full-scale defaults, applied by the CLI before flags.
PRESETS = {
    "quick": {"pop": 1000, "seeds": 5, "blocks": 5},
    "paper": {"pop": 5000, "seeds": 30, "gens": 100, "tournament": 16},
}


def seed_range(base_seed: int, count: int) -> tuple[int, ...]:
    """The default seed list: base_seed, base_seed + 1, ..."""
    if count < 1:
        raise ValueError("need at least one seed")
    return tuple(base_seed + i for i in range(count))


@dataclass(frozen=True)
class ExperimentConfig:
    env_name: str
    method: str = "dcga"
    blocks: int | None = None
    length: int | None = None
    cycle_length: int = 10
    n: int = 5000
    tournament_size: int = 16
    max_generations: int = 100
    seeds: tuple[int, ...] = (0,)
    workers: int = 1
    nu_max: int = DEFAULT_NU_MAX
    mc_form: str = "full"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not self.seeds:
            raise ValueError("seed list must be non-empty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be distinct")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def environment(self) -> DynamicEnvironment:
        return make_environment(self.env_name, blocks=self.blocks,
                                length=self.length, cycle_length=self.cycle_length)

    def solver_config(self, seed: int) -> SolverConfig:
        return SolverConfig(method=self.method, n=self.n,
                            tournament_size=self.tournament_size,
                            max_generations=self.max_generations, seed=seed,
                            nu_max=self.nu_max, mc_form=self.mc_form)


@dataclass(frozen=True)
class AggregateSeries:
    """Across-seed mean/std of the fitness curves, plus the known optimum."""

    generations: np.ndarray
    mean_best: np.ndarray
    std_best: np.ndarray
    mean_mean: np.ndarray
    std_mean: np.ndarray
    current_optimum: np.ndarray
    changed: np.ndarray


def aggregate(traces: list[RunTrace]) -> AggregateSeries:
    """Deterministic reduction over traces in the given order."""
    if not traces:
        raise ValueError("nothing to aggregate")
    horizon = len(traces[0].records)
    if any(len(t.records) != horizon for t in traces):
        raise ValueError("traces must share one horizon")
    best = np.array([t.best_series() for t in traces])
    mean = np.array([t.mean_series() for t in traces])
    first = traces[0].records
    return AggregateSeries(
        generations=np.arange(horizon),
        mean_best=best.mean(axis=0),
        std_best=best.std(axis=0),
        mean_mean=mean.mean(axis=0),
        std_mean=mean.std(axis=0),
        current_optimum=np.array([r.current_optimum for r in first]),
        changed=np.array([r.changed for r in first], dtype=bool),
    )


def _run_one(args) -> RunTrace:
    env, cfg = args
    return run(env, cfg)


def run_experiment(cfg: ExperimentConfig,
                   out: str | Path | None = None) -> tuple[AggregateSeries, list[RunTrace]]:
    """One run per seed, aggregated in seed order; optionally persisted."""
    env = cfg.environment()
    jobs = [(env, cfg.solver_config(s)) for s in cfg.seeds]
    traces: list[RunTrace] = []
    if cfg.workers == 1:
        for seed, job in zip(cfg.seeds, jobs):
            try:
                traces.append(_run_one(job))
            except Exception as exc:
                raise RuntimeError(f"run with seed {seed} failed: {exc}") from exc
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = list(pool.map(_run_one, jobs))
        traces = list(futures)
    series = aggregate(traces)
    if out is not None:
        emit_outputs(series, traces, out, meta=experiment_meta(cfg, env))
    return series, traces


def experiment_meta(cfg: ExperimentConfig, env: DynamicEnvironment) -> dict:
    phases = [{"order": ph.spec.k, "low": ph.spec.low, "high": ph.spec.high,
               "shape": ph.spec.shape, "blocks": ph.blocks, "optimum": ph.optimum}
              for ph in env.phases]
    return {
        "config": asdict(cfg),
        "environment": {"name": env.name, "length": env.length,
                        "cycle_length": env.cycle_length, "phases": phases},
        "rng_algorithm": RNG_ALGORITHM,
        "version": __version__,
    }


@dataclass(frozen=True)
class FeasibilityReport:
    """First-generation sampling check against the exact unitation theory."""

    spec: TrapSpec
    n: int
    seed: int
    empirical: np.ndarray
    theoretical: np.ndarray

    @property
    def l1_distance(self) -> float:
        return float(np.abs(self.empirical - self.theoretical).sum())


def feasibility_check(spec: TrapSpec, n: int, seed: int) -> FeasibilityReport:
    """Sample a random block population and compare the fitness-weighted
    schema shares, folded by unitation, with the exact proportions."""
    rng = RngStream(seed)
    pop = random_population(n, spec.k, rng)
    values = spec.table()
    pop.set_fitness(values[pop.genes.sum(axis=1)])
    table = build_table(pop, range(spec.k))
    dist = distribution(table, MODE_SCHEM1)
    pattern_u = np.array([bin(s).count("1") for s in range(1 << spec.k)])
    empirical = np.array([dist.probs[pattern_u == u].sum() for u in range(spec.k + 1)])
    return FeasibilityReport(spec=spec, n=n, seed=seed, empirical=empirical,
                             theoretical=theoretical_schema_proportion(spec))


def emit_outputs(series: AggregateSeries, traces: list[RunTrace],
                 out_path: str | Path, meta: dict | None = None) -> dict[str, Path]:
    """Write runs.csv, aggregate.csv, plot.svg and meta.json under out_path."""
    out = Path(out_path)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "runs": out / "runs.csv",
        "aggregate": out / "aggregate.csv",
        "plot": out / "plot.svg",
        "meta": out / "meta.json",
    }

    with open(paths["runs"], "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RUNS_HEADER)
        for trace in traces:
            for r in trace.records:
                writer.writerow([trace.seed, r.generation, r.phase,
                                 int(r.changed), repr(r.best_fitness),
                                 repr(r.mean_fitness), repr(r.current_optimum),
                                 r.partition])

    with open(paths["aggregate"], "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(AGG_HEADER)
        for g in series.generations:
            writer.writerow([g, repr(float(series.mean_best[g])),
                             repr(float(series.std_best[g])),
                             repr(float(series.mean_mean[g])),
                             repr(float(series.std_mean[g])),
                             repr(float(series.current_optimum[g]))])

    _plot_series(series, paths["plot"])

    with open(paths["meta"], "w") as fh:
        json.dump(meta or {}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return paths


def _plot_series(series: AggregateSeries, path: Path) -> None:
    from matplotlib.figure import Figure

    fig = Figure(figsize=(8, 4.5))
    ax = fig.add_subplot(111)
    gens = series.generations
    ax.plot(gens, series.mean_best, label="mean best fitness", color="tab:blue")
    ax.plot(gens, series.current_optimum, label="optimum", color="tab:green",
            linestyle=":", linewidth=1)
    for g in gens[series.changed]:
        ax.axvline(g, color="tab:red", alpha=0.3, linewidth=0.8)
    ax.set_xlabel("generation")
    ax.set_ylabel("fitness")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, format="svg")


def read_runs_csv(path: str | Path) -> list[RunTrace]:
    """Rebuild traces from runs.csv; the method name is not stored there."""
    by_seed: dict[int, list[GenerationRecord]] = {}
    order: list[int] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != RUNS_HEADER:
            raise ValueError(f"unexpected header {header}")
        for row in reader:
            seed = int(row[0])
            if seed not in by_seed:
                by_seed[seed] = []
                order.append(seed)
            by_seed[seed].append(GenerationRecord(
                generation=int(row[1]), phase=int(row[2]), changed=bool(int(row[3])),
                best_fitness=float(row[4]), mean_fitness=float(row[5]),
                current_optimum=float(row[6]), partition=row[7]))
    return [RunTrace(seed=s, method="", records=tuple(by_seed[s])) for s in order]
