"""Genetic-algorithm search tests on synthetic landscapes plus the
cross-validation fitness integration."""

import numpy as np
import pytest

from cbwcs import GaConfig, evolve, tune_hyperparameters
from cbwcs.ga_tune import cv_fitness

from smallqp import identity_training_set


def quadratic_peak(log2_c, log2_g):
    """Smooth unimodal landscape with its optimum at (3, -7)."""
    return -((log2_c - 3.0) ** 2 + (log2_g + 7.0) ** 2) / 10.0


class TestGaConfig:
    def test_defaults(self):
        cfg = GaConfig()
        assert cfg.population_size == 20
        assert cfg.generations == 30
        assert cfg.elite_count == 2
        assert cfg.c_range_log2 == (-5.0, 15.0)
        assert cfg.g_range_log2 == (-15.0, 3.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            GaConfig(population_size=2, elite_count=2)
        with pytest.raises(ValueError):
            GaConfig(generations=0)
        with pytest.raises(ValueError):
            GaConfig(crossover_rate=1.5)
        with pytest.raises(ValueError):
            GaConfig(mutation_rate=-0.1)
        with pytest.raises(ValueError):
            GaConfig(c_range_log2=(5.0, 5.0))


class TestEvolve:
    CFG = GaConfig(population_size=24, generations=25)

    def test_finds_quadratic_optimum(self):
        res = evolve(quadratic_peak, self.CFG, np.random.default_rng(17))
        assert abs(res.best.log2_c - 3.0) < 0.5
        assert abs(res.best.log2_g + 7.0) < 0.5
        assert res.best.fitness > -0.05

    def test_history_best_is_monotone(self):
        res = evolve(quadratic_peak, self.CFG, np.random.default_rng(17))
        best = [st.best_fitness for st in res.history]
        assert len(best) == self.CFG.generations
        assert all(b2 >= b1 for b1, b2 in zip(best, best[1:]))
        assert res.best.fitness == best[-1]

    def test_deterministic_under_fixed_seed(self):
        r1 = evolve(quadratic_peak, self.CFG, np.random.default_rng(99))
        r2 = evolve(quadratic_peak, self.CFG, np.random.default_rng(99))
        assert (r1.best.log2_c, r1.best.log2_g) == (r2.best.log2_c, r2.best.log2_g)
        assert r1.evaluations == r2.evaluations
        assert [st.best_fitness for st in r1.history] == [
            st.best_fitness for st in r2.history
        ]

    def test_genomes_respect_bounds(self):
        cfg = GaConfig(
            population_size=10,
            generations=12,
            mutation_rate=0.9,
            mutation_sigma=5.0,
            c_range_log2=(0.0, 2.0),
            g_range_log2=(-2.0, 0.0),
        )
        # optimum far outside the box: clipping must hold the boundary
        res = evolve(quadratic_peak, cfg, np.random.default_rng(3))
        assert 0.0 <= res.best.log2_c <= 2.0
        assert -2.0 <= res.best.log2_g <= 0.0
        assert res.best.log2_c == pytest.approx(2.0, abs=1e-9)

    def test_memoization_caps_evaluations(self):
        calls = []

        def counted(a, b):
            calls.append((a, b))
            return quadratic_peak(a, b)

        cfg = GaConfig(population_size=8, generations=10, elite_count=2)
        res = evolve(counted, cfg, np.random.default_rng(1))
        naive = cfg.population_size + cfg.generations * (
            cfg.population_size - cfg.elite_count
        )
        assert res.evaluations == len(calls) <= naive
        assert len(set(calls)) == len(calls)  # repeats served from the memo


class TestCvIntegration:
    def make_ts(self):
        rng = np.random.default_rng(12)
        xp = rng.normal(loc=1.0, size=(24, 3))
        xn = rng.normal(loc=-1.0, size=(24, 3))
        x = np.vstack([xp, xn])
        v = np.concatenate([np.ones(24), -np.ones(24)])
        return identity_training_set(x, v)

    def test_cv_fitness_bounded_and_deterministic(self):
        ts = self.make_ts()
        cfg = GaConfig(population_size=4, generations=1, cv_folds=3)
        f1 = cv_fitness(ts, cfg, np.random.default_rng(2))
        f2 = cv_fitness(ts, cfg, np.random.default_rng(2))
        assert f1(1.0, -2.0) == f2(1.0, -2.0)
        assert 0.0 <= f1(1.0, -2.0) <= 1.0

    def test_tune_hyperparameters_end_to_end(self):
        ts = self.make_ts()
        cfg = GaConfig(population_size=6, generations=3, cv_folds=3)
        res = tune_hyperparameters(ts, cfg, np.random.default_rng(4))
        assert res.hyper.c > 0 and res.hyper.gamma > 0
        assert 0.5 <= res.best.fitness <= 1.0  # easily separable blobs
        assert res.evaluations >= cfg.population_size
