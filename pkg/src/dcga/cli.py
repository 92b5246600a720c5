"""Command-line entry points: run experiments, feasibility check, MDL oracle."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .core import Population
from .dynamics import ENVIRONMENTS, TrapSpec
from .harness import (PRESETS, ExperimentConfig, experiment_meta,
                      feasibility_check, run_experiment, seed_range)
from .mpm import MC_FORMS, exhaustive_partition_scores, learn_model
from .solver import METHODS

_RUN_DEFAULTS = {
    "cycle": 10, "pop": 5000, "tournament": 16, "gens": 100,
    "seeds": 30, "base_seed": 0, "workers": 1, "mc_form": "full",
}
_INT_KEYS = {"blocks", "length", "cycle", "pop", "tournament", "gens",
             "seeds", "base_seed", "workers"}


def _read_config_file(path: str) -> dict:
    """Flat key=value lines; '#' starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        values[key] = int(val) if key in _INT_KEYS else val
    return values


def _merge_run_options(args: argparse.Namespace) -> dict:
    """Precedence: defaults < config file < preset < explicit flags."""
    opts = dict(_RUN_DEFAULTS)
    if args.config:
        opts.update(_read_config_file(args.config))
    if args.preset:
        preset = dict(PRESETS[args.preset])
        if args.env == "trap34-switching" and "blocks" in preset:
            # switching phases need a multiple of 12; 24 bits is the quick scale
            preset.pop("blocks")
            preset.setdefault("length", 24)
        opts.update(preset)
    for key in ("env", "method", "blocks", "length", "cycle", "pop", "tournament",
                "gens", "seeds", "base_seed", "out", "workers", "mc_form"):
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    return opts


def _cmd_run(args: argparse.Namespace) -> int:
    opts = _merge_run_options(args)
    if "env" not in opts:
        raise ValueError("an environment is required (--env)")
    if "out" not in opts:
        raise ValueError("an output directory is required (--out)")
    cfg = ExperimentConfig(
        env_name=opts["env"],
        method=opts.get("method", "dcga"),
        blocks=opts.get("blocks"),
        length=opts.get("length"),
        cycle_length=opts["cycle"],
        n=opts["pop"],
        tournament_size=opts["tournament"],
        max_generations=opts["gens"],
        seeds=seed_range(opts["base_seed"], opts["seeds"]),
        workers=opts["workers"],
        mc_form=opts["mc_form"],
    )
    series, _ = run_experiment(cfg, out=opts["out"])
    final = series.mean_best[-1]
    print(f"wrote {opts['out']}: {len(cfg.seeds)} runs x {cfg.max_generations} "
          f"generations, final mean best {final:.3f}")
    return 0


def _cmd_feasibility(args: argparse.Namespace) -> int:
    spec = TrapSpec(k=args.k, low=args.low, high=args.high)
    report = feasibility_check(spec, n=args.pop, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "feasibility.csv", "w") as fh:
        fh.write("unitation,empirical,theoretical\n")
        for u in range(spec.k + 1):
            fh.write(f"{u},{report.empirical[u]!r},{report.theoretical[u]!r}\n")
    with open(out / "meta.json", "w") as fh:
        json.dump({"k": spec.k, "low": spec.low, "high": spec.high,
                   "n": report.n, "seed": report.seed,
                   "l1_distance": report.l1_distance}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"l1 distance: {report.l1_distance:.6f}")
    return 0


def _read_population_file(path: str) -> Population:
    rows = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if set(line) - {"0", "1"}:
            raise ValueError(f"{path}:{lineno}: expected a 0/1 string, got {line!r}")
        rows.append([int(c) for c in line])
    if not rows:
        raise ValueError(f"{path}: no bitstrings found")
    if len({len(r) for r in rows}) != 1:
        raise ValueError(f"{path}: bitstrings must share one length")
    return Population(np.array(rows, dtype=np.uint8))


def _cmd_oracle_mdl(args: argparse.Namespace) -> int:
    pop = _read_population_file(args.pop_file)
    if pop.length > 5:
        raise ValueError(f"exhaustive enumeration is capped at length 5, got {pop.length}")
    scored = exhaustive_partition_scores(pop, mc_form=args.mc_form)
    scored.sort(key=lambda ps: (ps[1].total, ps[0].serialize()))
    for part, score in scored:
        print(f"{part.serialize()}  cpc={score.cpc!r}  mc={score.mc!r}  total={score.total!r}")
    greedy = learn_model(pop, mc_form=args.mc_form)
    print(f"greedy: {greedy.serialize()}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcga",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a multi-seed experiment")
    p_run.add_argument("--env", choices=ENVIRONMENTS)
    p_run.add_argument("--method", choices=METHODS)
    size = p_run.add_mutually_exclusive_group()
    size.add_argument("--blocks", type=int)
    size.add_argument("--length", type=int)
    p_run.add_argument("--cycle", type=int)
    p_run.add_argument("--pop", type=int)
    p_run.add_argument("--tournament", type=int)
    p_run.add_argument("--gens", type=int)
    p_run.add_argument("--seeds", type=int, help="number of seeds")
    p_run.add_argument("--base-seed", type=int, dest="base_seed")
    p_run.add_argument("--out")
    p_run.add_argument("--preset", choices=sorted(PRESETS))
    p_run.add_argument("--workers", type=int)
    p_run.add_argument("--mc-form", choices=MC_FORMS, dest="mc_form")
    p_run.add_argument("--config", help="key=value file; flags win over file values")
    p_run.set_defaults(func=_cmd_run)

    p_feas = sub.add_parser("feasibility", help="first-generation sampling check")
    p_feas.add_argument("--k", type=int, default=4)
    p_feas.add_argument("--low", type=float, default=4.0)
    p_feas.add_argument("--high", type=float, default=5.0)
    p_feas.add_argument("--pop", type=int, default=5000)
    p_feas.add_argument("--seed", type=int, default=0)
    p_feas.add_argument("--out", required=True)
    p_feas.set_defaults(func=_cmd_feasibility)

    p_oracle = sub.add_parser("oracle", help="brute-force reference computations")
    oracle_sub = p_oracle.add_subparsers(dest="oracle_command", required=True)
    p_mdl = oracle_sub.add_parser("mdl", help="score every partition of a small population")
    p_mdl.add_argument("--pop-file", required=True, dest="pop_file",
                       help="text file, one 0/1 string per line")
    p_mdl.add_argument("--mc-form", choices=MC_FORMS, dest="mc_form", default="full")
    p_mdl.set_defaults(func=_cmd_oracle_mdl)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
