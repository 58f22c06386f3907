"""Genetic-algorithm search over RBF-SVM hyperparameters.

Individuals are real-valued pairs (log2 c, log2 gamma).  Selection is
tournament, recombination is blend crossover (BLX-alpha with alpha = 0.5),
mutation is additive Gaussian in log2 space, and the top individuals carry
over unchanged each generation.  Fitness is k-fold cross-validation accuracy
on one fixed training set with one fixed fold assignment, so every candidate
is scored on identical splits and repeated genomes hit a memo instead of
retraining.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .svm_core import (
    SvmHyper,
    TrainingSet,
    cross_val_accuracy,
    make_cv_folds,
    pairwise_sq_dists,
)


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 20
    generations: int = 30
    crossover_rate: float = 0.9
    mutation_rate: float = 0.2
    mutation_sigma: float = 1.0
    elite_count: int = 2
    tournament_size: int = 3
    c_range_log2: tuple[float, float] = (-5.0, 15.0)
    g_range_log2: tuple[float, float] = (-15.0, 3.0)
    cv_folds: int = 5

    def __post_init__(self):
        if self.population_size < max(2, self.elite_count + 1):
            raise ValueError("population must exceed the elite count")
        if self.generations < 1:
            raise ValueError("need at least one generation")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError("crossover_rate must lie in [0, 1]")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must lie in [0, 1]")
        if self.tournament_size < 1:
            raise ValueError("tournament_size must be >= 1")
        for name, (lo, hi) in (
            ("c_range_log2", self.c_range_log2),
            ("g_range_log2", self.g_range_log2),
        ):
            if not lo < hi:
                raise ValueError(f"{name} must be an increasing interval")


@dataclass
class Individual:
    log2_c: float
    log2_g: float
    fitness: float = float("-inf")

    @property
    def hyper(self) -> SvmHyper:
        return SvmHyper(c=2.0 ** self.log2_c, gamma=2.0 ** self.log2_g)


@dataclass
class GenerationStats:
    generation: int
    best_fitness: float
    mean_fitness: float
    best_log2_c: float
    best_log2_g: float


@dataclass
class GaResult:
    best: Individual
    history: list[GenerationStats] = field(default_factory=list)
    evaluations: int = 0

    @property
    def hyper(self) -> SvmHyper:
        return self.best.hyper


def _clip(value: float, bounds: tuple[float, float]) -> float:
    return float(min(max(value, bounds[0]), bounds[1]))


def _tournament(
    pop: list[Individual], k: int, rng: np.random.Generator
) -> Individual:
    picks = rng.integers(0, len(pop), size=k)
    return max((pop[i] for i in picks), key=lambda ind: ind.fitness)


def _blend(a: float, b: float, rng: np.random.Generator, alpha: float = 0.5) -> float:
    lo, hi = min(a, b), max(a, b)
    spread = alpha * (hi - lo)
    return float(rng.uniform(lo - spread, hi + spread))


def evolve(
    fitness_fn: Callable[[float, float], float],
    cfg: GaConfig,
    rng: np.random.Generator,
) -> GaResult:
    """Run the GA against an arbitrary (log2_c, log2_g) -> fitness landscape."""
    memo: dict[tuple[float, float], float] = {}
    evaluations = 0

    def score(ind: Individual) -> None:
        nonlocal evaluations
        key = (ind.log2_c, ind.log2_g)
        if key not in memo:
            memo[key] = float(fitness_fn(*key))
            evaluations += 1
        ind.fitness = memo[key]

    pop = [
        Individual(
            log2_c=float(rng.uniform(*cfg.c_range_log2)),
            log2_g=float(rng.uniform(*cfg.g_range_log2)),
        )
        for _ in range(cfg.population_size)
    ]
    for ind in pop:
        score(ind)

    result = GaResult(best=max(pop, key=lambda ind: ind.fitness))
    for gen in range(cfg.generations):
        pop.sort(key=lambda ind: ind.fitness, reverse=True)
        nxt = [Individual(p.log2_c, p.log2_g, p.fitness) for p in pop[: cfg.elite_count]]
        while len(nxt) < cfg.population_size:
            p1 = _tournament(pop, cfg.tournament_size, rng)
            p2 = _tournament(pop, cfg.tournament_size, rng)
            if rng.random() < cfg.crossover_rate:
                child = Individual(
                    log2_c=_blend(p1.log2_c, p2.log2_c, rng),
                    log2_g=_blend(p1.log2_g, p2.log2_g, rng),
                )
            else:
                child = Individual(p1.log2_c, p1.log2_g)
            if rng.random() < cfg.mutation_rate:
                child.log2_c += float(rng.normal(0.0, cfg.mutation_sigma))
            if rng.random() < cfg.mutation_rate:
                child.log2_g += float(rng.normal(0.0, cfg.mutation_sigma))
            child.log2_c = _clip(child.log2_c, cfg.c_range_log2)
            child.log2_g = _clip(child.log2_g, cfg.g_range_log2)
            score(child)
            nxt.append(child)
        pop = nxt
        gen_best = max(pop, key=lambda ind: ind.fitness)
        if gen_best.fitness > result.best.fitness:
            result.best = Individual(gen_best.log2_c, gen_best.log2_g, gen_best.fitness)
        result.history.append(
            GenerationStats(
                generation=gen,
                best_fitness=result.best.fitness,
                mean_fitness=float(np.mean([ind.fitness for ind in pop])),
                best_log2_c=result.best.log2_c,
                best_log2_g=result.best.log2_g,
            )
        )
    result.evaluations = evaluations
    return result


def cv_fitness(
    ts: TrainingSet,
    cfg: GaConfig,
    rng: np.random.Generator,
    tol: float = 1e-3,
    max_iter: int = 400_000,
) -> Callable[[float, float], float]:
    """Cross-validation fitness with folds and the pairwise-distance matrix
    fixed up front and shared across every candidate."""
    fold_ids = make_cv_folds(ts.labels, cfg.cv_folds, rng)
    d2 = pairwise_sq_dists(ts.x)

    def fitness(log2_c: float, log2_g: float) -> float:
        hyper = SvmHyper(c=2.0 ** log2_c, gamma=2.0 ** log2_g)
        return cross_val_accuracy(
            ts, hyper, fold_ids, d2=d2, tol=tol, max_iter=max_iter
        )

    return fitness


def tune_hyperparameters(
    ts: TrainingSet,
    cfg: GaConfig | None = None,
    rng: np.random.Generator | None = None,
    tol: float = 1e-3,
    max_iter: int = 400_000,
) -> GaResult:
    """Search hyperparameters for one training set and return the best genome."""
    cfg = cfg or GaConfig()
    rng = rng or np.random.default_rng()
    return evolve(cv_fitness(ts, cfg, rng, tol=tol, max_iter=max_iter), cfg, rng)
