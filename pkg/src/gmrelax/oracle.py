"""Brute-force ground truth for small instances and first-order stationarity certificates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import (
    GmError,
    Permutation,
    _as_square,
    _check_same_n,
    convex_gradient,
    indefinite_gradient,
)
from .lap import solve_lap_min

ENUMERATION_CAP = 9
TIE_TOL = 1e-9


class EnumerationLimitError(GmError, ValueError):
    """The instance exceeds the brute-force enumeration cap."""


def _check_cap(n: int):
    if n > ENUMERATION_CAP:
        raise EnumerationLimitError(
            f"brute force is capped at n <= {ENUMERATION_CAP}, got n = {n}"
        )


@dataclass(frozen=True)
class BruteForceResult:
    """Exhaustive optimum with the full (lexicographically sorted) tie list."""

    optimal_value: float
    optimizers: list[Permutation]


def _enumerate_min(n: int, value_of) -> BruteForceResult:
    best = np.inf
    ties: list[tuple[int, ...]] = []
    for perm in itertools.permutations(range(n)):
        v = value_of(np.array(perm, dtype=np.intp))
        if v < best - TIE_TOL:
            best = v
            ties = [perm]
        elif v <= best + TIE_TOL:
            ties.append(perm)
    ties.sort()
    return BruteForceResult(
        optimal_value=float(best),
        optimizers=[Permutation(np.array(t, dtype=np.intp)) for t in ties],
    )


def brute_force_gm(a, b) -> BruteForceResult:
    """Global minimum of the edge-disagreement objective over all permutations."""
    a, b = _as_square(a), _as_square(b)
    n = _check_same_n(a, b)
    _check_cap(n)

    def value_of(m):
        return float(np.sum((a[np.ix_(m, m)] - b) ** 2))

    return _enumerate_min(n, value_of)


def brute_force_lap(cost) -> BruteForceResult:
    """Exhaustive linear assignment optimum with all ties."""
    c = _as_square(cost, "cost matrix")
    n = c.shape[0]
    _check_cap(n)
    rows = np.arange(n)

    def value_of(m):
        return float(c[rows, m].sum())

    return _enumerate_min(n, value_of)


def fw_gap_at(kind: str, a, b, d, feature_cost=None, lam: float = 1.0) -> float:
    """Linearization certificate min_Q <grad f(D), Q - D> over permutations Q.

    Always <= 0 for feasible D; a value below -tolerance certifies an
    improving Frank-Wolfe direction, while ~0 certifies first-order
    stationarity over the polytope. ``kind`` selects 'convex' or 'indefinite';
    an optional linear feature term (1-lam) <C, D> is included.
    """
    a, b = _as_square(a), _as_square(b)
    de = _as_square(d)
    _check_same_n(a, b, de)
    if kind == "convex":
        grad = convex_gradient(a, b, de)
    elif kind == "indefinite":
        grad = indefinite_gradient(a, b, de)
    else:
        raise ValueError(f"unknown objective kind: {kind!r}")
    if feature_cost is not None:
        grad = lam * grad + (1.0 - lam) * _as_square(feature_cost)
    best = solve_lap_min(grad.T)
    return float(best.total_cost - np.sum(grad * de))
