"""Core matrix types, graph-matching objectives, their gradients, and testable identities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class GmError(Exception):
    """Base class for errors raised by this package."""


class ShapeMismatchError(GmError, ValueError):
    """Operands do not share the required square dimension."""


class FeasibilityError(GmError, ValueError):
    """A matrix violates the doubly stochastic (or other feasibility) constraints."""


class NotBinaryError(GmError, ValueError):
    """An operation requiring 0/1 matrices received non-binary input."""


def _as_square(x, name: str = "matrix") -> np.ndarray:
    """Coerce wrapper types or array-likes to a square float64 ndarray."""
    a = np.asarray(getattr(x, "entries", x), dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatchError(f"{name} must be square, got shape {a.shape}")
    return a


def _check_same_n(*mats: np.ndarray) -> int:
    n = mats[0].shape[0]
    for m in mats[1:]:
        if m.shape[0] != n:
            raise ShapeMismatchError(
                f"dimension mismatch: {n} vs {m.shape[0]}"
            )
    return n


@dataclass(frozen=True, eq=False)
class AdjacencyMatrix:
    """Dense square adjacency matrix with directedness and hollowness flags."""

    entries: np.ndarray
    directed: bool = False
    hollow: bool = True

    def __post_init__(self):
        a = _as_square(self.entries, "adjacency matrix")
        if not np.all(np.isfinite(a)):
            raise ValueError("adjacency entries must be finite")
        if not self.directed and not np.array_equal(a, a.T):
            raise ValueError("undirected adjacency matrix must be symmetric")
        if self.hollow and np.any(np.diag(a) != 0):
            raise ValueError("hollow adjacency matrix must have zero diagonal")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def is_binary(self) -> bool:
        a = self.entries
        return bool(np.all((a == 0) | (a == 1)))


@dataclass(frozen=True, eq=False)
class Permutation:
    """A bijection on {0, ..., n-1}; ``map[i]`` is the image of vertex i.

    The associated matrix uses the column-action convention fixed for the whole
    package: ``P[map[j], j] = 1``, so ``P @ G @ P.T`` relabels vertex j of G as
    ``map[j]``.
    """

    map: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.map, dtype=np.intp)
        if m.ndim != 1:
            raise ValueError("permutation map must be one-dimensional")
        n = m.shape[0]
        if not np.array_equal(np.sort(m), np.arange(n)):
            raise ValueError("permutation map must be a bijection on {0,...,n-1}")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "map", m)

    @property
    def n(self) -> int:
        return self.map.shape[0]

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Permutation":
        return cls(rng.permutation(n))

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.map)
        inv[self.map] = np.arange(self.n)
        return Permutation(inv)

    def as_matrix(self) -> np.ndarray:
        """Column-action permutation matrix with ``P[map[j], j] = 1``."""
        p = np.zeros((self.n, self.n))
        p[self.map, np.arange(self.n)] = 1.0
        return p

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.map, other.map)

    def __hash__(self) -> int:
        return hash(tuple(self.map.tolist()))


@dataclass(frozen=True, eq=False)
class DoublyStochastic:
    """Nonnegative square matrix with unit row and column sums (within tolerance)."""

    entries: np.ndarray
    tolerance: float = 1e-9

    def __post_init__(self):
        a = _as_square(self.entries, "doubly stochastic matrix")
        dev = feasibility_deviation(a)
        if dev > self.tolerance:
            raise FeasibilityError(
                f"matrix is not doubly stochastic within {self.tolerance:g} "
                f"(deviation {dev:.3g})"
            )
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def barycenter(cls, n: int) -> "DoublyStochastic":
        return cls(np.full((n, n), 1.0 / n))

    @classmethod
    def from_permutation(cls, p: Permutation) -> "DoublyStochastic":
        return cls(p.as_matrix())


def feasibility_deviation(d) -> float:
    """Worst violation of the doubly stochastic constraints (sums and negativity)."""
    a = _as_square(d)
    return float(
        max(
            np.abs(a.sum(axis=0) - 1.0).max(),
            np.abs(a.sum(axis=1) - 1.0).max(),
            max(0.0, -a.min()),
        )
    )


def sinkhorn_normalize(m: np.ndarray, sweeps: int = 5) -> np.ndarray:
    """Alternate row/column rescaling of a nonnegative matrix toward double stochasticity."""
    a = np.clip(np.asarray(m, dtype=float), 0.0, None)
    for _ in range(sweeps):
        a = a / a.sum(axis=1, keepdims=True)
        a = a / a.sum(axis=0, keepdims=True)
    return a


@dataclass(frozen=True)
class ObjectivePair:
    """The two objective values at one point: ||AD-DB||_F^2 and -<AD, DB>."""

    frobenius_sq: float
    neg_inner: float

    @classmethod
    def at(cls, a, b, d) -> "ObjectivePair":
        a, b, d = _as_square(a), _as_square(b), _as_square(d)
        _check_same_n(a, b, d)
        ad, db = a @ d, d @ b
        return cls(
            frobenius_sq=float(np.sum((ad - db) ** 2)),
            neg_inner=-float(np.sum(ad * db)),
        )


def frobenius_objective(a, b, p: Permutation) -> float:
    """Edge-disagreement objective ||A P - P B||_F^2 at a permutation.

    Equals sum_{i,j} (A[p(i), p(j)] - B[i, j])^2 under the column-action
    matrix convention; for binary undirected graphs this is twice the number
    of unordered adjacency disagreements induced by the vertex bijection.
    """
    a, b = _as_square(a), _as_square(b)
    _check_same_n(a, b, np.empty((p.n, p.n)))
    m = p.map
    return float(np.sum((a[np.ix_(m, m)] - b) ** 2))


def neg_inner_objective(a, b, d) -> float:
    """Indefinite relaxation objective -<AD, DB>."""
    a, b, d = _as_square(a), _as_square(b), _as_square(d)
    _check_same_n(a, b, d)
    return -float(np.sum((a @ d) * (d @ b)))


def convex_objective(a, b, d) -> float:
    """Convex relaxation objective ||AD - DB||_F^2."""
    a, b, d = _as_square(a), _as_square(b), _as_square(d)
    _check_same_n(a, b, d)
    return float(np.sum((a @ d - d @ b) ** 2))


def convex_gradient(a, b, d) -> np.ndarray:
    """Gradient of ||AD - DB||_F^2: 2(A^T A D + D B B^T - A^T D B - A D B^T)."""
    a, b, d = _as_square(a), _as_square(b), _as_square(d)
    _check_same_n(a, b, d)
    return 2.0 * (a.T @ (a @ d) + (d @ b) @ b.T - a.T @ (d @ b) - (a @ d) @ b.T)


def indefinite_gradient(a, b, d) -> np.ndarray:
    """Gradient of -<AD, DB>: -(A^T D B + A D B^T); equals -2 A D B for symmetric A, B."""
    a, b, d = _as_square(a), _as_square(b), _as_square(d)
    _check_same_n(a, b, d)
    return -(a.T @ (d @ b) + (a @ d) @ b.T)


@dataclass(frozen=True)
class KktReport:
    """Pairwise check of the first-order condition 2 X_ij >= X_ii + X_jj, X = (A-B)^T (A-B).

    ``margin[i, j] = 2 X_ij - X_ii - X_jj`` for i != j (diagonal fixed at 0);
    ``holds`` marks pairs with nonnegative margin. The identity alignment can
    only be a KKT point of the convex relaxation if every pair holds.
    """

    holds: np.ndarray
    margin: np.ndarray

    @property
    def identity_can_be_kkt(self) -> bool:
        return bool(self.holds.all())

    @property
    def violation_count(self) -> int:
        return int((~self.holds).sum())

    @property
    def min_margin(self) -> float:
        return float(self.margin.min())


def kkt_pairwise_check(a, b) -> KktReport:
    """Evaluate the pairwise KKT necessary condition for I on an aligned graph pair."""
    a, b = _as_square(a), _as_square(b)
    _check_same_n(a, b)
    e = a - b
    x = e.T @ e
    diag = np.diag(x)
    margin = 2.0 * x - diag[:, None] - diag[None, :]
    np.fill_diagonal(margin, 0.0)
    return KktReport(holds=margin >= 0.0, margin=margin)


@dataclass(frozen=True)
class ThetaGamma:
    """Both sides of the exact disagreement-count identity for binary graphs."""

    lhs: int
    theta: int
    gamma: int


def theta_gamma_identity(a, b, p: Permutation, q: Permutation) -> ThetaGamma:
    """Disagreement identity ||A - P B Q^T||_F^2 - ||A - B||_F^2 = |Theta| - 2 |Gamma|.

    Theta collects the entries B moves onto a different value under the pair
    of vertex bijections, Gamma the subset where A and B already disagreed.
    Exact in integer arithmetic for 0/1 inputs.
    """
    a, b = _as_square(a), _as_square(b)
    _check_same_n(a, b, np.empty((p.n, p.n)), np.empty((q.n, q.n)))
    for name, m in (("A", a), ("B", b)):
        if not np.all((m == 0) | (m == 1)):
            raise NotBinaryError(f"{name} must be a 0/1 matrix")
    ai = a.astype(np.int64)
    bi = b.astype(np.int64)
    moved = bi[np.ix_(p.map, q.map)]
    lhs = int(np.sum((ai - moved) ** 2) - np.sum((ai - bi) ** 2))
    theta_mask = bi != moved
    theta = int(theta_mask.sum())
    gamma = int((theta_mask & (ai != bi)).sum())
    return ThetaGamma(lhs=lhs, theta=theta, gamma=gamma)


def n_correct(p: Permutation, p_star: Permutation) -> int:
    """Number of vertices on which two permutations agree."""
    if p.n != p_star.n:
        raise ShapeMismatchError(f"dimension mismatch: {p.n} vs {p_star.n}")
    return int(np.sum(p.map == p_star.map))
