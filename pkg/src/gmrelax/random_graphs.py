"""Random-graph samplers: correlated Bernoulli pairs, power-law, bounded-degree, bit flips, features."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .core import AdjacencyMatrix, NotBinaryError, Permutation, ShapeMismatchError, _as_square


@dataclass(frozen=True)
class CorrelatedPairSpec:
    """One draw from the rho-correlated Bernoulli edge model.

    Exactly one of ``alpha`` (i.i.d. Uniform[alpha, 1-alpha] edge probabilities)
    or ``lambda_matrix`` (explicit symmetric hollow probability matrix) selects
    the edge-probability source.
    """

    n: int
    rho: float
    alpha: float | None = None
    lambda_matrix: np.ndarray | None = None
    rng_seed: int = 0
    directed: bool = False

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError("rho must lie in [0, 1]")
        if (self.alpha is None) == (self.lambda_matrix is None):
            raise ValueError("provide exactly one of alpha or lambda_matrix")
        if self.alpha is not None and not 0.0 < self.alpha < 0.5:
            raise ValueError("alpha must lie in (0, 1/2)")
        if self.lambda_matrix is not None:
            lam = _as_square(self.lambda_matrix, "lambda matrix")
            if np.any(lam < 0) or np.any(lam > 1):
                raise ValueError("lambda entries must lie in [0, 1]")
            if np.any(np.diag(lam) != 0):
                raise ValueError("lambda must be hollow")
            if not self.directed and not np.array_equal(lam, lam.T):
                raise ValueError("lambda must be symmetric for undirected pairs")
            if lam.shape[0] != self.n:
                raise ShapeMismatchError("lambda dimension does not match n")


def sample_lambda_uniform(n: int, alpha: float, rng: np.random.Generator) -> np.ndarray:
    """Symmetric hollow matrix with upper-triangle entries i.i.d. Uniform[alpha, 1-alpha]."""
    if not 0.0 < alpha < 0.5:
        raise ValueError("alpha must lie in (0, 1/2)")
    lam = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    lam[iu] = rng.uniform(alpha, 1.0 - alpha, size=iu[0].size)
    return lam + lam.T


def sample_correlated_pair(
    spec: CorrelatedPairSpec, rng: np.random.Generator | None = None
) -> tuple[AdjacencyMatrix, AdjacencyMatrix]:
    """Draw an aligned graph pair: B entrywise Bernoulli(Lambda), then A conditionally.

    Conditioned on B, each entry of A is Bernoulli((1-rho) Lambda + rho B), so
    matched entries have identical marginals and Pearson correlation rho;
    rho=1 yields A = B exactly.
    """
    if rng is None:
        rng = np.random.default_rng(spec.rng_seed)
    n = spec.n
    if spec.lambda_matrix is not None:
        lam = np.asarray(spec.lambda_matrix, dtype=float)
    elif spec.directed:
        lam = rng.uniform(spec.alpha, 1.0 - spec.alpha, size=(n, n))
        np.fill_diagonal(lam, 0.0)
    else:
        lam = sample_lambda_uniform(n, spec.alpha, rng)

    if spec.directed:
        mask = ~np.eye(n, dtype=bool)
        b = np.zeros((n, n))
        b[mask] = (rng.random(mask.sum()) < lam[mask]).astype(float)
        cond = (1.0 - spec.rho) * lam + spec.rho * b
        a = np.zeros((n, n))
        a[mask] = (rng.random(mask.sum()) < cond[mask]).astype(float)
    else:
        iu = np.triu_indices(n, k=1)
        b = np.zeros((n, n))
        b[iu] = (rng.random(iu[0].size) < lam[iu]).astype(float)
        b = b + b.T
        cond = (1.0 - spec.rho) * lam + spec.rho * b
        a = np.zeros((n, n))
        a[iu] = (rng.random(iu[0].size) < cond[iu]).astype(float)
        a = a + a.T
    kw = dict(directed=spec.directed, hollow=True)
    return AdjacencyMatrix(a, **kw), AdjacencyMatrix(b, **kw)


def sample_power_law(n: int, beta: float, rng: np.random.Generator) -> AdjacencyMatrix:
    """Undirected graph whose degree law has tail exponent beta (Chung-Lu model).

    Expected-degree weights w_i = (n / (i + i0))^(1/(beta-1)) with i0 = 1;
    pairs connect independently with probability min(1, w_i w_j / sum(w)),
    which keeps every expected degree below n.
    """
    if beta <= 1.0:
        raise ValueError("beta must exceed 1")
    if n < 2:
        raise ValueError("need at least two vertices")
    i0 = 1.0
    w = (n / (np.arange(n) + i0)) ** (1.0 / (beta - 1.0))
    p = np.minimum(1.0, np.outer(w, w) / w.sum())
    iu = np.triu_indices(n, k=1)
    a = np.zeros((n, n))
    a[iu] = (rng.random(iu[0].size) < p[iu]).astype(float)
    a = a + a.T
    return AdjacencyMatrix(a)


def sample_bounded_degree(n: int, dmax: int, rng: np.random.Generator) -> AdjacencyMatrix:
    """Undirected graph grown by uniform random edge addition under a degree cap.

    Candidate pairs are visited in a uniformly random order; a pair is added
    when both endpoints still have degree < dmax. Degree saturation is
    monotone, so this single pass realizes sequential uniform selection among
    addable pairs until none remains (near-regular for small dmax).
    """
    if dmax < 1:
        raise ValueError("dmax must be at least 1")
    iu, ju = np.triu_indices(n, k=1)
    order = rng.permutation(iu.size)
    deg = np.zeros(n, dtype=int)
    a = np.zeros((n, n))
    for k in order:
        i, j = int(iu[k]), int(ju[k])
        if deg[i] < dmax and deg[j] < dmax:
            a[i, j] = a[j, i] = 1.0
            deg[i] += 1
            deg[j] += 1
    return AdjacencyMatrix(a)


def bit_flip(
    g: AdjacencyMatrix,
    p: float,
    rng: np.random.Generator,
    only_existing_edges: bool = False,
) -> AdjacencyMatrix:
    """Flip vertex-pair indicators independently with probability p.

    By default every off-diagonal pair may flip in either direction (0->1 or
    1->0); ``only_existing_edges`` restricts flips to current edges. The
    diagonal stays zero.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    a = g.entries
    if not g.is_binary():
        raise NotBinaryError("bit_flip requires a 0/1 adjacency matrix")
    out = a.copy()
    if g.directed:
        mask = ~np.eye(g.n, dtype=bool)
        flip = mask & (rng.random((g.n, g.n)) < p)
        if only_existing_edges:
            flip &= a == 1
        out[flip] = 1.0 - out[flip]
    else:
        iu = np.triu_indices(g.n, k=1)
        flip = rng.random(iu[0].size) < p
        if only_existing_edges:
            flip &= a[iu] == 1
        vals = a[iu].copy()
        vals[flip] = 1.0 - vals[flip]
        out = np.zeros_like(a)
        out[iu] = vals
        out = out + out.T
    return AdjacencyMatrix(out, directed=g.directed, hollow=True)


@dataclass(frozen=True)
class FeatureSet:
    """Per-vertex feature vectors (n x d) plus the noise variance they carry."""

    vectors: np.ndarray
    noise_variance: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=float)
        if v.ndim != 2:
            raise ValueError("feature vectors must form an n x d matrix")
        if not np.all(np.isfinite(v)):
            raise ValueError("feature entries must be finite")
        if self.noise_variance < 0:
            raise ValueError("noise variance must be nonnegative")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "vectors", v)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]


def sample_features(n: int, d: int, rng: np.random.Generator) -> FeatureSet:
    """Standard-normal feature vectors, d per vertex."""
    if d < 1:
        raise ValueError("need at least one feature dimension")
    return FeatureSet(rng.standard_normal((n, d)))


def add_feature_noise(
    features: FeatureSet, variance: float, rng: np.random.Generator
) -> FeatureSet:
    """Add entrywise independent N(0, variance) noise to a copy of the features."""
    if variance < 0:
        raise ValueError("noise variance must be nonnegative")
    noisy = features.vectors + np.sqrt(variance) * rng.standard_normal(
        features.vectors.shape
    )
    return FeatureSet(noisy, noise_variance=features.noise_variance + variance)


def feature_cost(f1: FeatureSet, f2: FeatureSet) -> np.ndarray:
    """Matrix of Euclidean distances C[v, w] = ||x_v^(1) - x_w^(2)||_2."""
    if f1.n != f2.n or f1.vectors.shape[1] != f2.vectors.shape[1]:
        raise ShapeMismatchError("feature sets must have matching shapes")
    return cdist(f1.vectors, f2.vectors)


def permute_graph(g: AdjacencyMatrix, p: Permutation) -> AdjacencyMatrix:
    """Relabel vertex j of G as p.map[j]: returns P G P^T, entry (i,j) = G(p^-1(i), p^-1(j))."""
    if g.n != p.n:
        raise ShapeMismatchError(f"dimension mismatch: {g.n} vs {p.n}")
    out = np.empty_like(g.entries)
    out[np.ix_(p.map, p.map)] = g.entries
    return AdjacencyMatrix(out, directed=g.directed, hollow=g.hollow)
