"""Frank-Wolfe solvers over the Birkhoff polytope: convex relaxation run to
convergence, indefinite relaxation to a local optimum, seeded and
feature-augmented variants."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import (
    DoublyStochastic,
    FeasibilityError,
    Permutation,
    ShapeMismatchError,
    _as_square,
    feasibility_deviation,
    sinkhorn_normalize,
)
from .lap import project_to_permutation

CONVEX = "convex"
INDEFINITE = "indefinite"

DEFAULT_CONVEX_MAX_ITERS = 2000
DEFAULT_INDEFINITE_MAX_ITERS = 200


class ConfigurationError(ValueError):
    """A solver call is inconsistent with the problem it was given."""


@dataclass(frozen=True)
class SolverConfig:
    """Iteration and tolerance knobs shared by both relaxations.

    ``fw_gap_tol`` is the absolute Frank-Wolfe gap threshold; when None it is
    set at runtime to 1e-6 * (1 + |f(D0)|).
    """

    max_iters: int
    fw_gap_tol: float | None = None
    feasibility_tol: float = 1e-9
    record_trace: bool = False

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.fw_gap_tol is not None and self.fw_gap_tol <= 0:
            raise ValueError("fw_gap_tol must be positive")
        if self.feasibility_tol <= 0:
            raise ValueError("feasibility_tol must be positive")


def convex_config(**overrides) -> SolverConfig:
    """Default configuration for the convex solver (run to convergence)."""
    kw = dict(max_iters=DEFAULT_CONVEX_MAX_ITERS)
    kw.update(overrides)
    return SolverConfig(**kw)


def indefinite_config(**overrides) -> SolverConfig:
    """Default configuration for the indefinite (local) solver."""
    kw = dict(max_iters=DEFAULT_INDEFINITE_MAX_ITERS)
    kw.update(overrides)
    return SolverConfig(**kw)


@dataclass(frozen=True)
class InitSpec:
    """Starting point: barycenter, identity, a permutation, a given matrix, or random."""

    kind: str
    permutation: Permutation | None = None
    matrix: np.ndarray | None = None
    seed: int | None = None

    @classmethod
    def barycenter(cls) -> "InitSpec":
        return cls(kind="barycenter")

    @classmethod
    def identity(cls) -> "InitSpec":
        return cls(kind="identity")

    @classmethod
    def from_permutation(cls, p: Permutation) -> "InitSpec":
        return cls(kind="permutation", permutation=p)

    @classmethod
    def from_matrix(cls, d) -> "InitSpec":
        return cls(kind="doubly-stochastic", matrix=np.asarray(getattr(d, "entries", d), dtype=float))

    @classmethod
    def random(cls, seed: int) -> "InitSpec":
        return cls(kind="random", seed=seed)


@dataclass(frozen=True)
class MatchProblem:
    """A graph-matching instance: the pair (A, B), optional seeds and features.

    The first ``seeds`` vertices of A are pre-matched to the first ``seeds``
    vertices of B (the caller pre-permutes); ``feature_cost`` and ``lam``
    define the blended objective lam * f(D) + (1 - lam) * <C, D>.
    """

    a: np.ndarray
    b: np.ndarray
    seeds: int = 0
    feature_cost: np.ndarray | None = None
    lam: float = 1.0

    def __post_init__(self):
        a = _as_square(self.a, "A")
        b = _as_square(self.b, "B")
        if a.shape != b.shape:
            raise ShapeMismatchError(f"A and B differ in size: {a.shape} vs {b.shape}")
        if not (0 <= self.seeds <= a.shape[0]):
            raise ValueError("seeds must lie in [0, n]")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lam must lie in [0, 1]")
        c = self.feature_cost
        if c is not None:
            c = _as_square(c, "feature cost")
            if c.shape != a.shape:
                raise ShapeMismatchError("feature cost must be n x n")
            if not np.all(np.isfinite(c)) or np.any(c < 0):
                raise ValueError("feature cost must be finite and nonnegative")
            object.__setattr__(self, "feature_cost", c)
        elif self.lam < 1.0:
            raise ConfigurationError("lam < 1 requires a feature cost matrix")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True)
class MatchResult:
    """Solver output: discrete solution, final iterate, and convergence data.

    ``objective_frobenius_sq`` and ``objective_neg_inner`` are evaluated at the
    final (pre-projection) iterate; ``permutation`` is the Hungarian projection
    of the final iterate with any seed prefix fixed.
    """

    permutation: Permutation
    final_iterate: DoublyStochastic
    objective_frobenius_sq: float
    objective_neg_inner: float
    iterations: int
    fw_gap_final: float
    converged: bool
    objective_trace: tuple[float, ...] | None
    wall_time: float


@dataclass(frozen=True)
class FwStep:
    """One Frank-Wolfe step: LAP direction, gap certificate, exact step size."""

    direction: Permutation
    gap: float
    alpha: float
    d_next: DoublyStochastic


def _minimize_quadratic(qa: float, qb: float) -> float:
    """Exact minimizer over [0, 1] of g(alpha) = qa * alpha^2 + qb * alpha."""
    if qa > 0.0:
        return float(min(1.0, max(0.0, -qb / (2.0 * qa))))
    # concave or linear slice: best endpoint
    return 1.0 if qa + qb < 0.0 else 0.0


def _direction_map(grad: np.ndarray, s: int, n: int) -> np.ndarray:
    """Full-size column-convention map of the LAP direction, seed prefix fixed."""
    _, cols = linear_sum_assignment(grad[s:, s:].T)
    full = np.empty(n, dtype=np.intp)
    full[:s] = np.arange(s)
    full[s:] = s + cols
    return full


def _initial_iterate(init: InitSpec, n: int, s: int, tol: float) -> np.ndarray:
    if init.kind == "barycenter":
        d = np.eye(n)
        d[s:, s:] = 1.0 / (n - s)
        return d
    if init.kind == "identity":
        return np.eye(n)
    if init.kind == "permutation":
        p = init.permutation
        if p is None or p.n != n:
            raise ConfigurationError("permutation init must match the problem size")
        if s and not np.array_equal(p.map[:s], np.arange(s)):
            raise FeasibilityError("permutation init must fix the seed prefix")
        return p.as_matrix()
    if init.kind == "doubly-stochastic":
        d = _as_square(init.matrix, "init matrix")
        if d.shape[0] != n:
            raise ConfigurationError("init matrix must match the problem size")
        if feasibility_deviation(d) > max(tol, 1e-9):
            raise FeasibilityError("init matrix is not doubly stochastic")
        if s:
            prefix_dev = max(
                float(np.abs(d[:s, :s] - np.eye(s)).max()),
                float(np.abs(d[:s, s:]).max()),
                float(np.abs(d[s:, :s]).max()),
            )
            if prefix_dev > max(tol, 1e-9):
                raise FeasibilityError("init matrix must fix the seed prefix")
        return d.copy()
    if init.kind == "random":
        if init.seed is None:
            raise ConfigurationError("random init requires a seed")
        rng = np.random.default_rng(init.seed)
        d = np.eye(n)
        d[s:, s:] = sinkhorn_normalize(rng.random((n - s, n - s)), sweeps=20)
        return d
    raise ConfigurationError(f"unknown init kind: {init.kind!r}")


def _graph_objective(kind: str, ad: np.ndarray, db: np.ndarray) -> float:
    if kind == CONVEX:
        return float(np.sum((ad - db) ** 2))
    return -float(np.sum(ad * db))


def _gradient(kind: str, a, b, ad, db) -> np.ndarray:
    if kind == CONVEX:
        m = ad - db
        return 2.0 * (a.T @ m - m @ b.T)
    return -(a.T @ db + ad @ b.T)


def _solve(problem: MatchProblem, kind: str, init: InitSpec, config: SolverConfig) -> MatchResult:
    if kind not in (CONVEX, INDEFINITE):
        raise ConfigurationError(f"unknown objective kind: {kind!r}")
    t0 = time.perf_counter()
    a, b = problem.a, problem.b
    n, s = problem.n, problem.seeds
    c, lam = problem.feature_cost, problem.lam

    if s == n:
        d = np.eye(n)
        ad, db = a @ d, d @ b
        return MatchResult(
            permutation=Permutation.identity(n),
            final_iterate=DoublyStochastic(d, tolerance=config.feasibility_tol),
            objective_frobenius_sq=float(np.sum((ad - db) ** 2)),
            objective_neg_inner=-float(np.sum(ad * db)),
            iterations=0,
            fw_gap_final=0.0,
            converged=True,
            objective_trace=None,
            wall_time=time.perf_counter() - t0,
        )

    d = _initial_iterate(init, n, s, config.feasibility_tol)
    ad, db = a @ d, d @ b

    def total_objective() -> float:
        f = _graph_objective(kind, ad, db)
        if c is not None:
            f = lam * f + (1.0 - lam) * float(np.sum(c * d))
        return f

    f = total_objective()
    tol = config.fw_gap_tol if config.fw_gap_tol is not None else 1e-6 * (1.0 + abs(f))
    trace = [f] if config.record_trace else None

    iterations = 0
    converged = False
    gap = 0.0
    while True:
        grad = _gradient(kind, a, b, ad, db)
        if c is not None:
            grad = lam * grad + (1.0 - lam) * c
        qmap = _direction_map(grad, s, n)
        q = np.zeros((n, n))
        q[qmap, np.arange(n)] = 1.0
        gap = float(np.sum(grad * (d - q)))
        if gap <= tol:
            converged = True
            break
        if iterations >= config.max_iters:
            break
        # aq and qb via gathers: (A Q)[:, j] = A[:, qmap[j]], (Q B)[i, :] = B[qinv[i], :]
        qinv = np.empty(n, dtype=np.intp)
        qinv[qmap] = np.arange(n)
        ar = a[:, qmap] - ad
        rb = b[qinv, :] - db
        if kind == CONVEX:
            m = ad - db
            nm = ar - rb
            qa = float(np.sum(nm * nm))
            qb = 2.0 * float(np.sum(m * nm))
        else:
            qa = -float(np.sum(ar * rb))
            qb = -(float(np.sum(ad * rb)) + float(np.sum(ar * db)))
        if c is not None:
            qa = lam * qa
            qb = lam * qb + (1.0 - lam) * float(np.sum(c * (q - d)))
        alpha = _minimize_quadratic(qa, qb)
        if alpha <= 0.0:
            converged = True
            break
        d = d + alpha * (q - d)
        ad = ad + alpha * ar
        db = db + alpha * rb
        iterations += 1
        if feasibility_deviation(d) > 0.5 * config.feasibility_tol:
            d[s:, s:] = sinkhorn_normalize(d[s:, s:], sweeps=5)
            ad, db = a @ d, d @ b
        if trace is not None:
            trace.append(total_objective())

    block_perm = project_to_permutation(d[s:, s:])
    full_map = np.concatenate([np.arange(s), s + block_perm.map])
    return MatchResult(
        permutation=Permutation(full_map),
        final_iterate=DoublyStochastic(d, tolerance=config.feasibility_tol),
        objective_frobenius_sq=float(np.sum((ad - db) ** 2)),
        objective_neg_inner=-float(np.sum(ad * db)),
        iterations=iterations,
        fw_gap_final=gap,
        converged=converged,
        objective_trace=tuple(trace) if trace is not None else None,
        wall_time=time.perf_counter() - t0,
    )


def solve_convex(
    problem: MatchProblem,
    config: SolverConfig | None = None,
    init: InitSpec | None = None,
) -> MatchResult:
    """Solve the convex relaxation min ||AD - DB||_F^2 over the (seeded) polytope.

    Runs Frank-Wolfe with exact line search from the barycenter (by default)
    until the duality gap falls below the tolerance or ``max_iters`` is hit;
    the gap at the final iterate certifies global suboptimality.
    """
    return _solve(
        problem,
        CONVEX,
        init if init is not None else InitSpec.barycenter(),
        config if config is not None else convex_config(),
    )


def solve_indefinite(
    problem: MatchProblem,
    init: InitSpec,
    config: SolverConfig | None = None,
) -> MatchResult:
    """Find a local optimum of min -<AD, DB> by Frank-Wolfe from the given start.

    Initialization-sensitive; termination at gap <= tol certifies first-order
    stationarity over the polytope (no improving permutation direction).
    """
    return _solve(
        problem,
        INDEFINITE,
        init,
        config if config is not None else indefinite_config(),
    )


def solve_seeded(
    problem: MatchProblem,
    init: InitSpec,
    config: SolverConfig | None = None,
    kind: str = INDEFINITE,
) -> MatchResult:
    """Solve with the first ``problem.seeds`` vertices pinned to each other.

    Optimizes only the non-seed block of D; the gradient of the restricted
    objective picks up the seed-to-nonseed adjacency cross terms
    automatically by differentiating the full objective at D = diag(I, D22).
    At seeds = 0 this is identical to the unseeded solver.
    """
    if config is None:
        config = convex_config() if kind == CONVEX else indefinite_config()
    return _solve(problem, kind, init, config)


def solve_with_features(
    problem: MatchProblem,
    init: InitSpec,
    config: SolverConfig | None = None,
    kind: str = INDEFINITE,
) -> MatchResult:
    """Minimize lam * f(D) + (1 - lam) * <C, D> for the selected relaxation f.

    At lam = 1 this is the featureless solver; at lam = 0 the objective is
    linear and a single Frank-Wolfe step solves the assignment on C exactly.
    """
    if problem.feature_cost is None:
        raise ConfigurationError("solve_with_features requires problem.feature_cost")
    if config is None:
        config = convex_config() if kind == CONVEX else indefinite_config()
    return _solve(problem, kind, init, config)


def fw_step(kind: str, a, b, d, feature_cost=None, lam: float = 1.0) -> FwStep:
    """One Frank-Wolfe step from D: LAP direction, gap, exact step, next iterate."""
    if kind not in (CONVEX, INDEFINITE):
        raise ConfigurationError(f"unknown objective kind: {kind!r}")
    a, b = _as_square(a), _as_square(b)
    de = _as_square(d)
    n = de.shape[0]
    if a.shape[0] != n or b.shape[0] != n:
        raise ShapeMismatchError("dimension mismatch")
    c = None if feature_cost is None else _as_square(feature_cost)
    ad, db = a @ de, de @ b
    grad = _gradient(kind, a, b, ad, db)
    if c is not None:
        grad = lam * grad + (1.0 - lam) * c
    qmap = _direction_map(grad, 0, n)
    q = np.zeros((n, n))
    q[qmap, np.arange(n)] = 1.0
    gap = float(np.sum(grad * (de - q)))
    r = q - de
    ar, rb = a @ r, r @ b
    if kind == CONVEX:
        m = ad - db
        nm = ar - rb
        qa = float(np.sum(nm * nm))
        qb = 2.0 * float(np.sum(m * nm))
    else:
        qa = -float(np.sum(ar * rb))
        qb = -(float(np.sum(ad * rb)) + float(np.sum(ar * db)))
    if c is not None:
        qa = lam * qa
        qb = lam * qb + (1.0 - lam) * float(np.sum(c * r))
    alpha = _minimize_quadratic(qa, qb)
    d_next = de + alpha * r
    return FwStep(
        direction=Permutation(qmap),
        gap=gap,
        alpha=alpha,
        d_next=DoublyStochastic(d_next, tolerance=1e-9),
    )
