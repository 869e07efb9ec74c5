import numpy as np
import pytest

from gmrelax.core import FeasibilityError, Permutation, sinkhorn_normalize
from gmrelax.lap import project_to_permutation, solve_lap_max, solve_lap_min
from gmrelax.oracle import brute_force_lap


class TestSolveLapMin:
    def test_identity_favoring_cost(self):
        cost = np.ones((5, 5)) - np.eye(5)
        res = solve_lap_min(cost)
        assert res.permutation == Permutation.identity(5)
        assert res.total_cost == 0.0

    def test_two_by_two(self):
        res = solve_lap_min(np.array([[1.0, 2.0], [2.0, 1.0]]))
        assert res.permutation.map.tolist() == [0, 1]
        assert res.total_cost == 2.0

    def test_optimal_against_brute_force(self, rng):
        for _ in range(100):
            cost = rng.random((7, 7))
            res = solve_lap_min(cost)
            bf = brute_force_lap(cost)
            assert res.total_cost == pytest.approx(bf.optimal_value, abs=1e-12)
            assert res.total_cost == pytest.approx(
                float(cost[np.arange(7), res.permutation.map].sum()), abs=1e-12
            )

    def test_rejects_non_finite(self):
        cost = np.zeros((3, 3))
        cost[1, 1] = np.inf
        with pytest.raises(ValueError, match="finite"):
            solve_lap_min(cost)

    @pytest.mark.parametrize("axis", [0, 1])
    def test_shift_invariance_of_optimality(self, rng, axis):
        # every assignment uses each row and column exactly once, so shifting
        # one line by c moves the optimum value by exactly c and leaves the
        # argmin set unchanged
        for _ in range(20):
            cost = rng.random((6, 6))
            base = solve_lap_min(cost)
            line, c = int(rng.integers(6)), float(rng.normal())
            shifted = cost.copy()
            if axis == 0:
                shifted[line, :] += c
            else:
                shifted[:, line] += c
            res = solve_lap_min(shifted)
            assert res.total_cost == pytest.approx(base.total_cost + c, abs=1e-9)
            returned_perm_cost = float(shifted[np.arange(6), res.permutation.map].sum())
            assert returned_perm_cost == pytest.approx(res.total_cost, abs=1e-12)
            base_perm_shifted_cost = float(shifted[np.arange(6), base.permutation.map].sum())
            assert base_perm_shifted_cost == pytest.approx(res.total_cost, abs=1e-9)


class TestSolveLapMax:
    def test_barycenter_profits_tie_at_one(self):
        res = solve_lap_max(np.full((4, 4), 0.25))
        assert res.total_cost == pytest.approx(1.0)

    def test_dominant_diagonal(self):
        profit = np.eye(5) * 10.0 + 0.1
        assert solve_lap_max(profit).permutation == Permutation.identity(5)

    def test_matches_brute_force(self, rng):
        for _ in range(50):
            profit = rng.random((6, 6))
            res = solve_lap_max(profit)
            bf = brute_force_lap(-profit)
            assert res.total_cost == pytest.approx(-bf.optimal_value, abs=1e-12)


class TestProjectToPermutation:
    def test_permutation_projects_to_itself(self, rng):
        for _ in range(20):
            p = Permutation.random(6, rng)
            assert project_to_permutation(p.as_matrix()) == p

    def test_barycenter_ties_give_valid_permutation(self):
        d = np.full((5, 5), 0.2)
        p = project_to_permutation(d)
        assert float(np.sum(p.as_matrix() * d)) == pytest.approx(1.0)

    def test_matches_brute_force_nearest(self, rng):
        for _ in range(20):
            d = sinkhorn_normalize(rng.random((6, 6)) + 0.05, sweeps=60)
            p = project_to_permutation(d)
            best = max(
                (float(np.sum(q.as_matrix() * d))
                 for q in (Permutation(np.array(t)) for t in __import__("itertools").permutations(range(6)))),
            )
            assert float(np.sum(p.as_matrix() * d)) == pytest.approx(best, abs=1e-9)

    def test_rejects_infeasible(self):
        with pytest.raises(FeasibilityError):
            project_to_permutation(np.full((4, 4), 0.5))
