"""Genetic search over level-1 controller matrices.

Individuals are N x M binary matrices. Each generation evaluates the
population on a fixed cube workload, keeps the lowest-fitness individuals
as parents, and refills with children produced by row-wise crossover of
parent pairs followed by per-bit mutation. Parents re-enter the population
unchanged, so the best fitness never increases.

Fitness is ``ue + lam * mean_sca``: the count of cubes that fail encoding
plus a scaled average of the activated-chain fraction, both minimized.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cubes import CubeSet
from .gf2 import BitMatrix
from .metrics import evaluate_xornet
from .seeds import derived_seed, stream_seed
from .xornet import XorNet


@dataclass
class GaConfig:
    """Search hyperparameters.

    The steady-state population is ``size_parents + size_children``; the
    initial population has ``size_pop`` individuals. ``lam`` scales the
    mean activated-chain fraction against the failure count in the
    fitness; ``mutation_ratio`` is the per-bit flip probability.
    """

    size_pop: int = 40
    size_parents: int = 5
    size_children: int = 25
    size_gen: int = 20
    mutation_ratio: float = 0.05
    lam: float = 100.0
    sca_limit: float = 0.5
    taps_init: int = 3
    stall_window: int = 5
    master_seed: int = 0

    def __post_init__(self) -> None:
        if min(self.size_pop, self.size_parents, self.size_children, self.size_gen) < 1:
            raise ValueError("population, parent, child and generation counts must be >= 1")
        if self.size_parents > self.size_pop:
            raise ValueError("size_parents cannot exceed size_pop")
        if not 0.0 <= self.mutation_ratio <= 1.0:
            raise ValueError("mutation_ratio must lie in [0, 1]")
        if self.lam <= 0.0:
            raise ValueError("lam must be positive")
        if not 0.0 < self.sca_limit <= 1.0:
            raise ValueError("sca_limit must lie in (0, 1]")
        if self.taps_init < 1:
            raise ValueError("taps_init must be >= 1")
        if self.stall_window < 1:
            raise ValueError("stall_window must be >= 1")


@dataclass(frozen=True)
class FitnessRecord:
    ue: int
    mean_sca: float
    value: float


@dataclass
class Individual:
    """One candidate level-1 matrix with cached fitness."""

    level1: BitMatrix
    fitness: FitnessRecord | None = None

    def content_key(self) -> bytes:
        m = self.level1
        width = (m.n_cols + 7) // 8
        return (
            m.n_rows.to_bytes(4, "little")
            + m.n_cols.to_bytes(4, "little")
            + b"".join(r.to_bytes(width, "little") for r in m.data)
        )


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best_fitness: float
    best_ue: int
    best_mean_sca: float
    population_fitness: tuple[float, ...]


@dataclass
class GaTrace:
    records: list[GenerationRecord] = field(default_factory=list)

    def best_fitness_series(self) -> list[float]:
        return [r.best_fitness for r in self.records]


@dataclass
class GaResult:
    best: XorNet
    trace: GaTrace
    best_fitness: FitnessRecord


def init_population(
    n_chains: int, n_control: int, cfg: GaConfig, rng: np.random.Generator
) -> list[Individual]:
    """Random initial population with exactly ``taps_init`` taps per row.

    The fixed row weight keeps the XOR fan-in (and thus the controller
    area) of the searched nets comparable to the conventional design.
    """
    if cfg.taps_init > n_control:
        raise ValueError(
            f"taps_init {cfg.taps_init} exceeds control bit count {n_control}"
        )
    population = []
    for _ in range(cfg.size_pop):
        rows = []
        for _ in range(n_chains):
            value = 0
            for col in rng.choice(n_control, size=cfg.taps_init, replace=False):
                value |= 1 << int(col)
            rows.append(value)
        population.append(Individual(BitMatrix(n_chains, n_control, tuple(rows))))
    return population


def fitness(
    ind: Individual,
    cubes: CubeSet,
    cfg: GaConfig,
    rng: int | np.random.Generator,
    fixed_andnet: BitMatrix | None = None,
) -> float:
    """Evaluate one individual and cache ``ue + lam * mean_sca``."""
    net = XorNet.from_matrices(ind.level1, fixed_andnet)
    report = evaluate_xornet(net, cubes, cfg.sca_limit, rng)
    value = report.ue + cfg.lam * report.mean_sca
    ind.fitness = FitnessRecord(ue=report.ue, mean_sca=report.mean_sca, value=value)
    return value


def select_parents(population: list[Individual], k: int) -> list[Individual]:
    """The ``k`` lowest-fitness individuals, ties broken by position."""
    if k > len(population):
        raise ValueError(f"cannot select {k} parents from {len(population)} individuals")
    for i, ind in enumerate(population):
        if ind.fitness is None:
            raise ValueError(f"individual {i} has no computed fitness")
    ranked = sorted(range(len(population)), key=lambda i: population[i].fitness.value)
    return [population[i] for i in ranked[:k]]


def crossover(p1: Individual, p2: Individual, rng: np.random.Generator) -> Individual:
    """Child takes each row wholesale from one parent, fair coin per row."""
    a, b = p1.level1, p2.level1
    if (a.n_rows, a.n_cols) != (b.n_rows, b.n_cols):
        raise ValueError("parents have mismatched dimensions")
    picks = rng.random(a.n_rows) < 0.5
    rows = tuple(a.data[i] if picks[i] else b.data[i] for i in range(a.n_rows))
    return Individual(BitMatrix(a.n_rows, a.n_cols, rows))


def mutate(ind: Individual, gamma: float, rng: np.random.Generator) -> Individual:
    """Flip each bit independently with probability ``gamma``.

    A row mutated to all-zero would leave its chain permanently
    un-enableable, so one uniformly chosen bit is set back to 1.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    m = ind.level1
    flips = rng.random((m.n_rows, m.n_cols)) < gamma
    masks = np.packbits(flips, axis=1, bitorder="little")
    rows = []
    for i, row in enumerate(m.data):
        row ^= int.from_bytes(masks[i].tobytes(), "little")
        if row == 0:
            row = 1 << int(rng.integers(m.n_cols))
        rows.append(row)
    return Individual(BitMatrix(m.n_rows, m.n_cols, tuple(rows)))


def _ensure_fitness(
    ind: Individual,
    cubes: CubeSet,
    cfg: GaConfig,
    fill_root: int,
    fixed_andnet: BitMatrix | None,
) -> None:
    # Fill randomness is keyed to the matrix content, so an individual
    # carried across generations keeps a fitness identical to what a
    # re-evaluation would produce.
    if ind.fitness is None:
        fitness(ind, cubes, cfg, derived_seed(fill_root, ind.content_key()), fixed_andnet)


def run_ga(
    cubes: CubeSet,
    n_control: int,
    cfg: GaConfig,
    fixed_andnet: BitMatrix | None = None,
) -> GaResult:
    """Search for a controller matrix minimizing the fitness on ``cubes``.

    Runs up to ``cfg.size_gen`` generations, stopping early once the best
    fitness has not changed for ``cfg.stall_window`` consecutive
    generations. With ``fixed_andnet`` the search targets the first level
    of a two-level net while the second stays fixed. Fully deterministic
    given (cubes, cfg, fixed_andnet).
    """
    if len(cubes) == 0:
        raise ValueError("cube set is empty")
    n_chains = cubes.n_chains
    if fixed_andnet is not None and (
        fixed_andnet.n_rows != n_chains or fixed_andnet.n_cols != n_control
    ):
        raise ValueError("fixed_andnet dimensions do not match the search space")
    rng = np.random.default_rng(stream_seed(cfg.master_seed, "ga"))
    fill_root = stream_seed(cfg.master_seed, "encode-fill")

    population = init_population(n_chains, n_control, cfg, rng)
    trace = GaTrace()
    best_history: list[float] = []
    for gen in range(1, cfg.size_gen + 1):
        for ind in population:
            _ensure_fitness(ind, cubes, cfg, fill_root, fixed_andnet)
        best = min(population, key=lambda ind: ind.fitness.value)
        trace.records.append(
            GenerationRecord(
                generation=gen,
                best_fitness=best.fitness.value,
                best_ue=best.fitness.ue,
                best_mean_sca=best.fitness.mean_sca,
                population_fitness=tuple(ind.fitness.value for ind in population),
            )
        )
        best_history.append(best.fitness.value)
        stalled = (
            len(best_history) > cfg.stall_window
            and best_history[-1] == best_history[-1 - cfg.stall_window]
        )
        if gen == cfg.size_gen or stalled:
            break
        parents = select_parents(population, cfg.size_parents)
        children = []
        for _ in range(cfg.size_children):
            if len(parents) >= 2:
                i, j = rng.choice(len(parents), size=2, replace=False)
                pair = (parents[int(i)], parents[int(j)])
            else:
                pair = (parents[0], parents[0])
            children.append(mutate(crossover(*pair, rng), cfg.mutation_ratio, rng))
        population = parents + children

    best = min(population, key=lambda ind: ind.fitness.value)
    net = XorNet(n_chains, n_control, best.level1, fixed_andnet)
    return GaResult(best=net, trace=trace, best_fitness=best.fitness)


def write_trace_csv(trace: GaTrace, path: str | Path, provenance: dict | None = None) -> None:
    """Fitness trace as CSV, one row per generation, one column per individual."""
    width = max((len(r.population_fitness) for r in trace.records), default=0)
    with open(path, "w", newline="") as fh:
        if provenance:
            fh.write("# " + " ".join(f"{k}={v}" for k, v in provenance.items()) + "\n")
        writer = csv.writer(fh)
        writer.writerow(
            ["generation", "best_fitness", "best_ue", "best_mean_sca"]
            + [f"ind_{i:02d}" for i in range(width)]
        )
        for r in trace.records:
            row = [
                r.generation,
                f"{r.best_fitness:.9g}",
                r.best_ue,
                f"{r.best_mean_sca:.9g}",
            ]
            row += [f"{v:.9g}" for v in r.population_fitness]
            row += [""] * (width - len(r.population_fitness))
            writer.writerow(row)
