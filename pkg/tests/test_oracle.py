import numpy as np
import pytest

from gmrelax.core import Permutation, frobenius_objective
from gmrelax.oracle import (
    EnumerationLimitError,
    brute_force_gm,
    brute_force_lap,
    fw_gap_at,
)

from conftest import aligned_instance, random_binary_graph


class TestBruteForceGm:
    def test_rigid_graph_has_unique_optimizer(self):
        # a 6-vertex graph with trivial automorphism group
        a = np.zeros((6, 6))
        for i, j in [(0, 2), (1, 2), (1, 4), (1, 5), (2, 3), (2, 4), (3, 4)]:
            a[i, j] = a[j, i] = 1.0
        res = brute_force_gm(a, a)
        assert res.optimal_value == 0.0
        assert res.optimizers == [Permutation.identity(6)]

    def test_complete_graph_all_permutations_optimal(self):
        a = np.ones((4, 4)) - np.eye(4)
        res = brute_force_gm(a, a)
        assert res.optimal_value == 0.0
        assert len(res.optimizers) == 24
        maps = [tuple(p.map.tolist()) for p in res.optimizers]
        assert maps == sorted(maps)

    def test_optimum_bounded_by_truth(self):
        for seed in range(10):
            aprime, b, pstar = aligned_instance(7, 0.9, 0.2, seed)
            res = brute_force_gm(aprime.entries, b.entries)
            assert res.optimal_value <= frobenius_objective(aprime.entries, b.entries, pstar) + 1e-12

    def test_optimum_bounded_by_random_permutations(self, rng):
        a = random_binary_graph(6, 0.5, rng)
        b = random_binary_graph(6, 0.5, rng)
        res = brute_force_gm(a, b)
        for _ in range(100):
            p = Permutation.random(6, rng)
            assert res.optimal_value <= frobenius_objective(a, b, p) + 1e-12

    def test_enumeration_cap(self):
        big = np.zeros((10, 10))
        with pytest.raises(EnumerationLimitError):
            brute_force_gm(big, big)


class TestBruteForceLap:
    def test_singleton(self):
        res = brute_force_lap(np.array([[3.0]]))
        assert res.optimal_value == 3.0
        assert res.optimizers == [Permutation.identity(1)]

    def test_constant_cost_all_tie(self):
        res = brute_force_lap(np.full((3, 3), 1.0 / 3))
        assert len(res.optimizers) == 6

    def test_cap(self):
        with pytest.raises(EnumerationLimitError):
            brute_force_lap(np.zeros((10, 10)))


class TestFwGapAt:
    def test_convex_gap_nonnegative_at_global_minimizer(self, rng):
        a = random_binary_graph(8, 0.5, rng)
        assert fw_gap_at("convex", a, a, np.eye(8)) >= -1e-9

    def test_gap_never_positive(self, rng):
        # min_Q <grad, Q - D> <= 0 for any feasible D
        from gmrelax.core import sinkhorn_normalize

        a = rng.normal(size=(6, 6))
        b = rng.normal(size=(6, 6))
        for kind in ("convex", "indefinite"):
            for _ in range(10):
                d = sinkhorn_normalize(rng.random((6, 6)) + 0.1, sweeps=40)
                assert fw_gap_at(kind, a, b, d) <= 1e-9

    def test_matches_exhaustive_enumeration(self, rng):
        import itertools

        from gmrelax.core import convex_gradient, indefinite_gradient, sinkhorn_normalize

        for _ in range(10):
            a = rng.normal(size=(6, 6))
            b = rng.normal(size=(6, 6))
            d = sinkhorn_normalize(rng.random((6, 6)) + 0.1, sweeps=50)
            for kind, grad_fn in (
                ("indefinite", indefinite_gradient),
                ("convex", convex_gradient),
            ):
                g = grad_fn(a, b, d)
                best = min(
                    float(np.sum(g * Permutation(np.array(p)).as_matrix()))
                    for p in itertools.permutations(range(6))
                )
                expected = best - float(np.sum(g * d))
                assert fw_gap_at(kind, a, b, d) == pytest.approx(expected, abs=1e-9)

    def test_negative_gap_detects_descent_direction(self, rng):
        # at the barycenter of a non-degenerate instance the convex objective
        # is not stationary
        a = random_binary_graph(8, 0.3, rng)
        b = random_binary_graph(8, 0.7, rng)
        d = np.full((8, 8), 1.0 / 8)
        assert fw_gap_at("convex", a, b, d) < 0.0

    def test_truth_stationary_at_high_correlation(self):
        # rho = 0.8 draws at n = 150: the truth passes first-order
        # stationarity in nearly every replicate
        stationary = 0
        for seed in range(50):
            aprime, b, pstar = aligned_instance(150, 0.8, 0.1, seed=800 + seed)
            gap = fw_gap_at(
                "indefinite", aprime.entries, b.entries, pstar.as_matrix()
            )
            stationary += int(gap >= -1e-6)
        assert stationary >= 45

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="kind"):
            fw_gap_at("spectral", np.zeros((2, 2)), np.zeros((2, 2)), np.eye(2))
