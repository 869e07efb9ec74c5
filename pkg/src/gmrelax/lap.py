"""Exact linear assignment: Frank-Wolfe direction finding and projection to permutations.

Backed by :func:`scipy.optimize.linear_sum_assignment` (a shortest augmenting
path solver, O(n^3)); the solver is exact and deterministic for a given input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import FeasibilityError, Permutation, _as_square, feasibility_deviation


@dataclass(frozen=True)
class AssignmentResult:
    """An optimal assignment: row i is matched to column ``permutation.map[i]``."""

    permutation: Permutation
    total_cost: float


def _checked_cost(cost) -> np.ndarray:
    c = _as_square(cost, "cost matrix")
    if not np.all(np.isfinite(c)):
        raise ValueError("cost matrix entries must be finite")
    return c


def solve_lap_min(cost) -> AssignmentResult:
    """Minimize sum_i cost[i, pi(i)] over permutations pi, exactly."""
    c = _checked_cost(cost)
    rows, cols = linear_sum_assignment(c)
    return AssignmentResult(
        permutation=Permutation(cols),
        total_cost=float(c[rows, cols].sum()),
    )


def solve_lap_max(profit) -> AssignmentResult:
    """Maximize sum_i profit[i, pi(i)] over permutations pi, exactly."""
    c = _checked_cost(profit)
    rows, cols = linear_sum_assignment(c, maximize=True)
    return AssignmentResult(
        permutation=Permutation(cols),
        total_cost=float(c[rows, cols].sum()),
    )


def project_to_permutation(d) -> Permutation:
    """Nearest permutation to a doubly stochastic matrix.

    Maximizes <P, D> over permutation matrices (equivalently minimizes
    ||D - P||_F), reading the result in the package's column-action
    convention so that a permutation matrix projects to itself.
    """
    a = _as_square(d, "doubly stochastic matrix")
    tol = getattr(d, "tolerance", 1e-6)
    dev = feasibility_deviation(a)
    if dev > max(tol, 1e-6):
        raise FeasibilityError(
            f"cannot project an infeasible matrix (deviation {dev:.3g})"
        )
    # <C_P, D> = sum_j D[map[j], j]; assign columns of D to rows via D^T.
    return solve_lap_max(a.T).permutation
