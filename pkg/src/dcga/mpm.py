"""Marginal-product-model learning: entropy, MDL scoring, greedy merging."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .core import Population

# Model-size accounting: "full" charges 2^nu parameters per group (one per
# pattern); "reduced" charges 2^nu - 1 (free frequencies only).
MC_FORMS = ("full", "reduced")

DEFAULT_NU_MAX = 16


@dataclass(frozen=True)
class Partition:
    """Disjoint gene-index groups; canonical order is by smallest member."""

    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.groups:
            raise ValueError("partition needs at least one group")
        if any(not g for g in self.groups):
            raise ValueError("groups must be non-empty")
        norm = tuple(sorted((tuple(sorted(g)) for g in self.groups), key=lambda g: g[0]))
        object.__setattr__(self, "groups", norm)
        seen: set[int] = set()
        for g in norm:
            if seen.intersection(g):
                raise ValueError("groups must be disjoint")
            seen.update(g)
        if any(i < 0 for i in seen):
            raise ValueError("gene indices must be nonnegative")

    @classmethod
    def singletons(cls, length: int) -> "Partition":
        return cls(tuple((i,) for i in range(length)))

    @property
    def length(self) -> int:
        return sum(len(g) for g in self.groups)

    def covers(self, length: int) -> bool:
        idx = {i for g in self.groups for i in g}
        return idx == set(range(length))

    def serialize(self) -> str:
        return "".join("[" + ",".join(map(str, g)) + "]" for g in self.groups)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        if not re.fullmatch(r"(\[\d+(,\d+)*\])+", text):
            raise ValueError(f"malformed partition string {text!r}")
        groups = tuple(tuple(int(i) for i in grp.split(","))
                       for grp in re.findall(r"\[([\d,]+)\]", text))
        return cls(groups)


@dataclass(frozen=True)
class MdlScore:
    """Description length split into population and model terms (bits)."""

    cpc: float
    mc: float

    @property
    def total(self) -> float:
        return self.cpc + self.mc


def _encode(genes: np.ndarray, group: tuple[int, ...]) -> np.ndarray:
    """Pattern code per individual; first index of the group is the high bit."""
    nu = len(group)
    cols = genes[:, list(group)].astype(np.int32)
    shifts = np.arange(nu - 1, -1, -1, dtype=np.int32)
    return (cols << shifts).sum(axis=1, dtype=np.int32)


def _entropy_from_counts(counts: np.ndarray, n: int) -> float:
    # Sorted ascending so the result depends only on the count multiset;
    # keeps model learning exactly equivariant under gene relabelling.
    nz = np.sort(counts[counts > 0])
    p = nz / n
    return float(-(p * np.log2(p)).sum())


def group_entropy(pop: Population, group) -> float:
    """Empirical Shannon entropy (bits) of the pattern over ``group``."""
    group = tuple(int(i) for i in group)
    if not group:
        raise ValueError("group must be non-empty")
    if len(set(group)) != len(group):
        raise ValueError("group indices must be distinct")
    if max(group) >= pop.length:
        raise ValueError(f"index {max(group)} outside string of length {pop.length}")
    codes = _encode(pop.genes, tuple(sorted(group)))
    counts = np.bincount(codes, minlength=1 << len(group))
    return _entropy_from_counts(counts, pop.size)


def _param_count(nu: int, mc_form: str) -> int:
    if mc_form == "full":
        return 1 << nu
    if mc_form == "reduced":
        return (1 << nu) - 1
    raise ValueError(f"unknown mc_form {mc_form!r}; choose from {MC_FORMS}")


def mdl_score(pop: Population, part: Partition, mc_form: str = "full") -> MdlScore:
    """Description length of ``pop`` under the marginal-product partition.

    cpc = n * sum of per-group entropies; mc = log2(n) * sum of per-group
    parameter counts.
    """
    if not part.covers(pop.length):
        raise ValueError("partition does not cover the gene indices exactly")
    n = pop.size
    cpc = n * sum(group_entropy(pop, g) for g in part.groups)
    mc = np.log2(n) * sum(_param_count(len(g), mc_form) for g in part.groups)
    return MdlScore(cpc=float(cpc), mc=float(mc))


class _Group:
    __slots__ = ("indices", "codes", "nu", "entropy")

    def __init__(self, indices, codes, nu, entropy):
        self.indices = indices
        self.codes = codes
        self.nu = nu
        self.entropy = entropy


def _pairwise_bit_entropies(genes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Joint entropies of all bit pairs via one matmul; returns (H1, H2)."""
    n, length = genes.shape
    x = genes.astype(np.float64)
    ones = x.sum(axis=0)
    c11 = x.T @ x
    c10 = ones[:, None] - c11
    c01 = ones[None, :] - c11
    c00 = n - c11 - c10 - c01
    cells = np.sort(np.stack([c00, c01, c10, c11], axis=-1), axis=-1)
    p = cells / n
    logp = np.log2(np.where(p > 0, p, 1.0))
    h2 = -(p * logp).sum(axis=-1)
    h1 = np.array([_entropy_from_counts(np.array([n - c, c]), n)
                   for c in ones.astype(np.int64)])
    return h1, h2


def learn_model(pop: Population, *, nu_max: int = DEFAULT_NU_MAX,
                mc_form: str = "full") -> Partition:
    """Greedy agglomerative search for the minimum-description-length partition.

    Starts from singletons; repeatedly applies the pairwise merge with the
    largest strict decrease in total score, stopping when none decreases it
    or every candidate would exceed ``nu_max``. Ties break on the smallest
    (min-index, min-index) pair, so the search is deterministic and uses no
    randomness.
    """
    return learn_model_scored(pop, nu_max=nu_max, mc_form=mc_form)[0]


def learn_model_scored(pop: Population, *, nu_max: int = DEFAULT_NU_MAX,
                       mc_form: str = "full") -> tuple[Partition, list[float]]:
    """As learn_model, also returning the accepted total-score sequence.

    The trail starts at the all-singletons score; each accepted merge appends
    the incrementally updated total.
    """
    _param_count(1, mc_form)  # validate early
    genes = pop.genes
    n, length = genes.shape
    log2n = float(np.log2(n))

    h1, h2 = _pairwise_bit_entropies(genes)
    groups: dict[int, _Group] = {
        i: _Group((i,), genes[:, i].astype(np.int32), 1, float(h1[i]))
        for i in range(length)
    }

    def delta_params(nu_a: int, nu_b: int) -> int:
        return (_param_count(nu_a + nu_b, mc_form)
                - _param_count(nu_a, mc_form) - _param_count(nu_b, mc_form))

    # candidate merge (a, b) keyed by min gene index of each side -> (delta, merged entropy)
    cand: dict[tuple[int, int], tuple[float, float]] = {}
    if nu_max >= 2:
        pair_dmc = log2n * delta_params(1, 1)
        for a in range(length):
            for b in range(a + 1, length):
                joint = float(h2[a, b])
                delta = n * (joint - groups[a].entropy - groups[b].entropy) + pair_dmc
                cand[(a, b)] = (delta, joint)

    def score_candidate(ga: _Group, gb: _Group) -> tuple[float, float]:
        nu = ga.nu + gb.nu
        codes = (ga.codes << gb.nu) | gb.codes
        counts = np.bincount(codes, minlength=1 << nu)
        joint = _entropy_from_counts(counts, n)
        delta = n * (joint - ga.entropy - gb.entropy) + log2n * delta_params(ga.nu, gb.nu)
        return delta, joint

    while cand:
        (a, b), (best_delta, joint) = min(cand.items(), key=lambda kv: (kv[1][0], kv[0]))
        if best_delta >= 0:
            break
        ga, gb = groups.pop(a), groups.pop(b)
        merged_codes = (ga.codes << gb.nu) | gb.codes
        if ga.nu == gb.nu == 1:
            # singleton pairs were scored by the matmul path; recompute through
            # the count path so every stored entropy shares one convention
            counts = np.bincount(merged_codes, minlength=4)
            joint = _entropy_from_counts(counts, n)
        merged = _Group(tuple(sorted(ga.indices + gb.indices)), merged_codes,
                        ga.nu + gb.nu, joint)
        cand = {k: v for k, v in cand.items() if a not in k and b not in k}
        groups[a] = merged
        for key, other in groups.items():
            if key == a or merged.nu + other.nu > nu_max:
                continue
            pair = (min(a, key), max(a, key))
            lo, hi = (merged, other) if pair[0] == a else (other, merged)
            cand[pair] = score_candidate(lo, hi)

    return Partition(tuple(g.indices for g in groups.values()))


def iter_set_partitions(items):
    """All set partitions of ``items`` (Bell-number many); deterministic order."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in iter_set_partitions(rest):
        yield [[first]] + [list(g) for g in part]
        for i in range(len(part)):
            yield part[:i] + [[first] + list(part[i])] + part[i + 1:]


def exhaustive_partition_scores(pop: Population, mc_form: str = "full"):
    """Score every partition of the gene indices; only sensible for small L."""
    out = []
    for raw in iter_set_partitions(range(pop.length)):
        part = Partition(tuple(tuple(g) for g in raw))
        out.append((part, mdl_score(pop, part, mc_form)))
    return out
