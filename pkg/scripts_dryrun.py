"""Acceptance-scale dry run: measures every criterion before tests freeze."""
import time
import numpy as np
from dcga import (make_environment, SolverConfig, run, generations_to_recover,
                  warmup_generation, Partition)

t_all = time.time()

# --- c2: linkage learning, static trap-4, L=20, by gen 5, >=27/30 seeds
t0 = time.time()
env = make_environment("trap4-static", blocks=5, cycle_length=1000)
true_blocks = Partition(tuple(tuple(range(4 * i, 4 * i + 4)) for i in range(5))).serialize()
hits = 0
for seed in range(30):
    tr = run(env, SolverConfig(method="dcga", n=5000, max_generations=6, seed=seed))
    if any(r.partition == true_blocks for r in tr.records):
        hits += 1
print(f"c2: {hits}/30 seeds found true blocks by gen 5  [{time.time()-t0:.0f}s]", flush=True)

# --- c3: dcGA response rate, 20 blocks, cycle 10, 10 seeds
t0 = time.time()
env = make_environment("trap4-modified", blocks=20, cycle_length=10)
gens = []
for seed in range(10):
    tr = run(env, SolverConfig(method="dcga", n=5000, max_generations=100, seed=seed))
    gens.extend(e.generations for e in generations_to_recover(tr, 0.05))
print(f"c3: mean recovery {np.mean(gens):.2f} (events={len(gens)})  [{time.time()-t0:.0f}s]", flush=True)

# --- c4: schem1/schem2 instant recovery, 5 blocks, cycle 10, 10 seeds
t0 = time.time()
env = make_environment("trap4-modified", blocks=5, cycle_length=10)
for method in ("schem1", "schem2"):
    ok = total = 0
    for seed in range(10):
        tr = run(env, SolverConfig(method=method, n=5000, max_generations=100, seed=seed))
        wu = warmup_generation(tr)
        if wu is None:
            continue
        for e in generations_to_recover(tr, 0.0):
            if e.change_generation > wu:
                total += 1
                ok += e.recovered and e.generations <= 2
    print(f"c4 {method}: {ok}/{total} events recovered <=2 gens ({100*ok/max(total,1):.0f}%)  [{time.time()-t0:.0f}s]", flush=True)

# --- c5: warm-up ordering, 10 blocks, 30 paired seeds
t0 = time.time()
env = make_environment("trap4-modified", blocks=10, cycle_length=10)
wins = 0
pairs = []
for seed in range(30):
    wu = {}
    for method in ("schem1", "schem2"):
        tr = run(env, SolverConfig(method=method, n=5000, max_generations=100, seed=seed))
        w = warmup_generation(tr)
        wu[method] = np.inf if w is None else w
    pairs.append((wu["schem1"], wu["schem2"]))
    wins += wu["schem2"] <= wu["schem1"]
print(f"c5: schem2 <= schem1 in {wins}/30 pairs; pairs={pairs}  [{time.time()-t0:.0f}s]", flush=True)

# --- c6: switching env, L=84, schem1, 10 seeds
t0 = time.time()
env = make_environment("trap34-switching", length=84, cycle_length=10)
opt_seq = set()
worst = []
for seed in range(10):
    tr = run(env, SolverConfig(method="schem1", n=5000, max_generations=100, seed=seed))
    opt_seq.update((r.phase, r.current_optimum) for r in tr.records)
    wu = None
    for r in tr.records:
        if r.best_fitness >= 0.95 * r.current_optimum:
            wu = r.generation
            break
    evs = [e for e in generations_to_recover(tr, 0.05) if wu is not None and e.change_generation > wu]
    worst.append([e.generations if e.recovered else "X" for e in evs])
print(f"c6: phase optima {sorted(opt_seq)}", flush=True)
print(f"c6: post-warmup recovery gens per seed: {worst}  [{time.time()-t0:.0f}s]", flush=True)
print(f"total {time.time()-t_all:.0f}s")
