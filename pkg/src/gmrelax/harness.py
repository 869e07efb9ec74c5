"""Monte Carlo experiment driver: correlation sweeps over random-graph models,
QAPLIB benchmark runs, CSV emission, summaries, and generated plot scripts."""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .core import (
    GmError,
    Permutation,
    frobenius_objective,
    kkt_pairwise_check,
    n_correct,
    neg_inner_objective,
)
from .oracle import brute_force_gm
from .qaplib import parse_qaplib, benchmark_manifest, qap_cost, qap_cost_frobenius
from .random_graphs import (
    CorrelatedPairSpec,
    FeatureSet,
    add_feature_noise,
    bit_flip,
    feature_cost,
    permute_graph,
    sample_bounded_degree,
    sample_correlated_pair,
    sample_features,
    sample_power_law,
)
from .solvers import (
    InitSpec,
    MatchProblem,
    MatchResult,
    SolverConfig,
    solve_convex,
    solve_indefinite,
)

ENV_CONFIG_VAR = "GMRELAX_CONFIG"

EXPERIMENTS = (
    "energy",
    "distance",
    "success",
    "objective-trace",
    "directed",
    "seeds",
    "features",
    "kkt-check",
    "oracle-check",
    "qaplib",
)

METHODS = ("convex+project", "faq-J", "faq-Dstar", "faq-Pstar")

MODELS = ("bernoulli", "power-law", "bounded-degree")


class ConfigError(GmError, ValueError):
    """A run configuration file or experiment spec is invalid."""


@dataclass(frozen=True)
class RunConfig:
    """Runtime configuration: solver defaults, worker threads, QAPLIB location."""

    convex_max_iters: int = 2000
    indefinite_max_iters: int = 200
    fw_gap_tol: float | None = None
    feasibility_tol: float = 1e-9
    threads: int = 1
    qaplib_dir: str | None = None

    _INT_KEYS = ("convex_max_iters", "indefinite_max_iters", "threads")
    _FLOAT_KEYS = ("fw_gap_tol", "feasibility_tol")

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        """Parse a plain-text ``key = value`` file; unknown keys are errors."""
        known = {f.name for f in fields(cls)}
        kw = {}
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
            if key in cls._INT_KEYS:
                kw[key] = int(value)
            elif key in cls._FLOAT_KEYS:
                kw[key] = None if value.lower() == "auto" else float(value)
            else:
                kw[key] = value
        return cls(**kw)

    def convex_solver_config(self, record_trace: bool = False) -> SolverConfig:
        return SolverConfig(
            max_iters=self.convex_max_iters,
            fw_gap_tol=self.fw_gap_tol,
            feasibility_tol=self.feasibility_tol,
            record_trace=record_trace,
        )

    def indefinite_solver_config(self, record_trace: bool = False) -> SolverConfig:
        return SolverConfig(
            max_iters=self.indefinite_max_iters,
            fw_gap_tol=self.fw_gap_tol,
            feasibility_tol=self.feasibility_tol,
            record_trace=record_trace,
        )


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything that defines one experiment run; fully determines the CSV
    given the RNG seed (wall-time columns aside)."""

    experiment: str
    n: int = 150
    rho_grid: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
    alpha: float = 0.1
    replicates: int = 20
    methods: tuple[str, ...] = ("convex+project", "faq-J", "faq-Dstar")
    seeds_grid: tuple[int, ...] = ()
    feature_noise_grid: tuple[float, ...] = ()
    flip_grid: tuple[float, ...] = ()
    model: str = "bernoulli"
    beta: float = 2.0
    dmax: int = 4
    lam: float = 0.5
    feature_dim: int = 5
    rng_seed: int = 0
    output_path: str | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}")
        if self.replicates < 1:
            raise ConfigError("replicates must be at least 1")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ConfigError(f"unknown methods: {sorted(unknown)}")
        needs_methods = self.experiment not in ("kkt-check", "oracle-check")
        if needs_methods and not self.methods:
            raise ConfigError("at least one method is required")
        sweeps_p = self.model != "bernoulli"
        if sweeps_p and self.experiment in ("success", "energy", "distance", "objective-trace"):
            if not self.flip_grid:
                raise ConfigError(f"model {self.model!r} requires a flip_grid")
        elif self.experiment not in ("qaplib",) and not self.rho_grid:
            raise ConfigError("rho_grid must be nonempty")
        if self.experiment == "seeds" and not self.seeds_grid:
            raise ConfigError("seeds experiment requires a seeds_grid")
        if self.experiment == "features" and not self.feature_noise_grid:
            raise ConfigError("features experiment requires a feature_noise_grid")
        if self.experiment == "oracle-check" and self.n > 9:
            raise ConfigError("oracle-check requires n <= 9")


@dataclass(frozen=True)
class _Point:
    """One parameter point of the sweep (empty fields do not apply)."""

    rho: float | None = None
    flip_p: float | None = None
    seeds: int | None = None
    noise: float | None = None
    features: int | None = None
    instance: str | None = None


@dataclass(frozen=True)
class ExperimentRecord:
    """One CSV row: a single (method, parameter point, replicate) outcome."""

    method: str
    experiment: str
    instance: str = ""
    rho: float | None = None
    flip_p: float | None = None
    seeds: int | None = None
    noise: float | None = None
    lam: float | None = None
    features: int | None = None
    replicate: int = 0
    success: int | None = None
    n_correct: int | None = None
    obj_frobenius_sq: float | None = None
    obj_neg_inner: float | None = None
    energy_post: float | None = None
    energy_truth: float | None = None
    neg_inner_truth: float | None = None
    qap_cost: float | None = None
    oracle_opt: float | None = None
    fw_gap: float | None = None
    iterations: int | None = None
    converged: int | None = None
    dist_pc: float | None = None
    dist_pstar: float | None = None
    dist_rand: float | None = None
    kkt_violated: int | None = None
    kkt_min_margin: float | None = None
    wall_time: float = 0.0
    rng_stream: str = ""


CSV_HEADER = tuple(f.name for f in fields(ExperimentRecord))

WALL_TIME_COLUMN = "wall_time"


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def records_to_csv(records: list[ExperimentRecord]) -> str:
    """Render records as CSV text (UTF-8 content, LF line endings, fixed header)."""
    lines = [",".join(CSV_HEADER)]
    for rec in records:
        lines.append(",".join(_format_cell(getattr(rec, name)) for name in CSV_HEADER))
    return "\n".join(lines) + "\n"


def write_records(records: list[ExperimentRecord], path) -> None:
    Path(path).write_text(records_to_csv(records), encoding="utf-8", newline="\n")


def _stream_rng(spec: ExperimentSpec, point_index: int, replicate: int):
    ss = np.random.SeedSequence(spec.rng_seed, spawn_key=(point_index, replicate))
    return np.random.default_rng(ss), f"{spec.rng_seed}:{point_index}:{replicate}"


def _sample_aligned_pair(spec: ExperimentSpec, point: _Point, rng):
    """Draw the aligned pair (A, B) for one replicate of the selected model."""
    directed = spec.experiment == "directed"
    if spec.model == "bernoulli":
        pair_spec = CorrelatedPairSpec(
            n=spec.n, rho=point.rho, alpha=spec.alpha, directed=directed
        )
        return sample_correlated_pair(pair_spec, rng=rng)
    if spec.model == "power-law":
        g1 = sample_power_law(spec.n, spec.beta, rng)
    else:
        g1 = sample_bounded_degree(spec.n, spec.dmax, rng)
    return g1, bit_flip(g1, point.flip_p, rng)


def _draw_truth(n: int, seeds: int, rng) -> Permutation:
    """Uniform random truth permutation, fixing the seed prefix when present."""
    if seeds:
        return Permutation(np.concatenate([np.arange(seeds), seeds + rng.permutation(n - seeds)]))
    return Permutation(rng.permutation(n))


def _solver_records(
    spec: ExperimentSpec,
    config: RunConfig,
    point_index: int,
    point: _Point,
    replicate: int,
) -> list[ExperimentRecord]:
    rng, stream = _stream_rng(spec, point_index, replicate)
    a0, b = _sample_aligned_pair(spec, point, rng)
    s = point.seeds or 0
    pstar = _draw_truth(spec.n, s, rng)
    aprime = permute_graph(a0, pstar)
    rand_perm = Permutation.random(spec.n, rng)

    c = None
    lam = 1.0
    if point.noise is not None:
        base = sample_features(spec.n, spec.feature_dim, rng)
        f1 = FeatureSet(base.vectors[pstar.inverse().map])
        f1 = add_feature_noise(f1, point.noise, rng)
        f2 = add_feature_noise(base, point.noise, rng)
        c = feature_cost(f1, f2)
        lam = spec.lam

    problem = MatchProblem(aprime.entries, b.entries, seeds=s, feature_cost=c, lam=lam)
    record_trace = spec.experiment == "objective-trace"
    cfg_convex = config.convex_solver_config(record_trace)
    cfg_indef = config.indefinite_solver_config(record_trace)

    energy_truth = frobenius_objective(aprime.entries, b.entries, pstar)
    neg_truth = neg_inner_objective(aprime.entries, b.entries, pstar.as_matrix())

    convex_result: MatchResult | None = None
    if "convex+project" in spec.methods or "faq-Dstar" in spec.methods:
        convex_result = solve_convex(problem, cfg_convex)

    def base_record(method: str, res: MatchResult) -> ExperimentRecord:
        return ExperimentRecord(
            method=method,
            experiment=spec.experiment,
            rho=point.rho,
            flip_p=point.flip_p,
            seeds=point.seeds,
            noise=point.noise,
            lam=lam if c is not None else None,
            features=point.features,
            replicate=replicate,
            success=int(res.permutation == pstar),
            n_correct=n_correct(res.permutation, pstar),
            obj_frobenius_sq=res.objective_frobenius_sq,
            obj_neg_inner=res.objective_neg_inner,
            energy_post=frobenius_objective(aprime.entries, b.entries, res.permutation),
            energy_truth=energy_truth,
            neg_inner_truth=neg_truth,
            fw_gap=res.fw_gap_final,
            iterations=res.iterations,
            converged=int(res.converged),
            wall_time=res.wall_time,
            rng_stream=stream,
        )

    out: list[ExperimentRecord] = []
    for method in spec.methods:
        if method == "convex+project":
            res = convex_result
            rec = base_record(method, res)
            dstar = res.final_iterate.entries
            rec = dataclasses.replace(
                rec,
                dist_pc=float(np.linalg.norm(dstar - res.permutation.as_matrix())),
                dist_pstar=float(np.linalg.norm(dstar - pstar.as_matrix())),
                dist_rand=float(np.linalg.norm(dstar - rand_perm.as_matrix())),
            )
        elif method == "faq-J":
            res = solve_indefinite(problem, InitSpec.barycenter(), cfg_indef)
            rec = base_record(method, res)
        elif method == "faq-Dstar":
            init = InitSpec.from_matrix(convex_result.final_iterate)
            res = solve_indefinite(problem, init, cfg_indef)
            rec = base_record(method, res)
        elif method == "faq-Pstar":
            res = solve_indefinite(problem, InitSpec.from_permutation(pstar), cfg_indef)
            rec = base_record(method, res)
        else:  # pragma: no cover - spec validation rejects this earlier
            raise ConfigError(f"unknown method {method!r}")
        out.append(rec)
    return out


def _kkt_records(spec, config, point_index, point, replicate) -> list[ExperimentRecord]:
    rng, stream = _stream_rng(spec, point_index, replicate)
    a, b = _sample_aligned_pair(spec, point, rng)
    report = kkt_pairwise_check(a.entries, b.entries)
    return [
        ExperimentRecord(
            method="kkt-identity",
            experiment=spec.experiment,
            rho=point.rho,
            flip_p=point.flip_p,
            replicate=replicate,
            kkt_violated=int(not report.identity_can_be_kkt),
            kkt_min_margin=report.min_margin,
            rng_stream=stream,
        )
    ]


def _oracle_records(spec, config, point_index, point, replicate) -> list[ExperimentRecord]:
    rng, stream = _stream_rng(spec, point_index, replicate)
    a0, b = _sample_aligned_pair(spec, point, rng)
    pstar = _draw_truth(spec.n, 0, rng)
    aprime = permute_graph(a0, pstar)
    bf = brute_force_gm(aprime.entries, b.entries)
    problem = MatchProblem(aprime.entries, b.entries)
    res = solve_indefinite(
        problem, InitSpec.from_permutation(pstar), config.indefinite_solver_config()
    )
    energy_truth = frobenius_objective(aprime.entries, b.entries, pstar)
    energy_post = frobenius_objective(aprime.entries, b.entries, res.permutation)
    sound = bf.optimal_value <= energy_truth + 1e-9 and energy_post >= bf.optimal_value - 1e-9
    return [
        ExperimentRecord(
            method="oracle-check",
            experiment=spec.experiment,
            rho=point.rho,
            replicate=replicate,
            success=int(sound),
            n_correct=n_correct(res.permutation, pstar),
            obj_frobenius_sq=res.objective_frobenius_sq,
            obj_neg_inner=res.objective_neg_inner,
            energy_post=energy_post,
            energy_truth=energy_truth,
            oracle_opt=bf.optimal_value,
            fw_gap=res.fw_gap_final,
            iterations=res.iterations,
            converged=int(res.converged),
            wall_time=res.wall_time,
            rng_stream=stream,
        )
    ]


def _qaplib_records(spec, config, point_index, point, replicate) -> list[ExperimentRecord]:
    if config.qaplib_dir is None:
        raise ConfigError("qaplib experiment requires qaplib_dir")
    path = Path(config.qaplib_dir) / f"{point.instance}.dat"
    inst = parse_qaplib(path.read_text(), name=point.instance)
    # Minimizing the classical QAP cost through the relaxations: with the pair
    # (A, B) = (distance, -flow), both objectives agree with qap_cost at every
    # permutation (up to an additive constant), and the projected permutation
    # prices directly via qap_cost.
    problem = MatchProblem(inst.distance, -inst.flow)
    _, stream = _stream_rng(spec, point_index, replicate)

    def rec(method: str, res: MatchResult) -> ExperimentRecord:
        return ExperimentRecord(
            method=method,
            experiment=spec.experiment,
            instance=point.instance,
            replicate=replicate,
            qap_cost=qap_cost(inst, res.permutation),
            energy_post=qap_cost_frobenius(inst, res.permutation),
            obj_frobenius_sq=res.objective_frobenius_sq,
            obj_neg_inner=res.objective_neg_inner,
            fw_gap=res.fw_gap_final,
            iterations=res.iterations,
            converged=int(res.converged),
            wall_time=res.wall_time,
            rng_stream=stream,
        )

    out = []
    convex_result = None
    if "convex+project" in spec.methods or "faq-Dstar" in spec.methods:
        convex_result = solve_convex(problem, config.convex_solver_config())
    for method in spec.methods:
        if method == "convex+project":
            out.append(rec(method, convex_result))
        elif method == "faq-J":
            res = solve_indefinite(
                problem, InitSpec.barycenter(), config.indefinite_solver_config()
            )
            out.append(rec(method, res))
        elif method == "faq-Dstar":
            res = solve_indefinite(
                problem,
                InitSpec.from_matrix(convex_result.final_iterate),
                config.indefinite_solver_config(),
            )
            out.append(rec(method, res))
        else:
            raise ConfigError(f"method {method!r} is not available for qaplib runs")
    return out


def _build_points(spec: ExperimentSpec, config: RunConfig) -> list[_Point]:
    if spec.experiment == "qaplib":
        if config.qaplib_dir is None:
            raise ConfigError("qaplib experiment requires qaplib_dir")
        base = Path(config.qaplib_dir)
        return [
            _Point(instance=name)
            for name in benchmark_manifest()
            if (base / f"{name}.dat").is_file()
        ]
    if spec.experiment == "seeds":
        return [
            _Point(rho=r, seeds=s) for r in spec.rho_grid for s in spec.seeds_grid
        ]
    if spec.experiment == "features":
        points = []
        for r in spec.rho_grid:
            points.append(_Point(rho=r, features=0))
            for v in spec.feature_noise_grid:
                points.append(_Point(rho=r, noise=v, features=1))
        return points
    if spec.model != "bernoulli":
        return [_Point(flip_p=p) for p in spec.flip_grid]
    return [_Point(rho=r) for r in spec.rho_grid]


def _run_task(args) -> tuple[int, int, list[ExperimentRecord]]:
    spec, config, point_index, point, replicate = args
    if spec.experiment == "kkt-check":
        recs = _kkt_records(spec, config, point_index, point, replicate)
    elif spec.experiment == "oracle-check":
        recs = _oracle_records(spec, config, point_index, point, replicate)
    elif spec.experiment == "qaplib":
        recs = _qaplib_records(spec, config, point_index, point, replicate)
    else:
        recs = _solver_records(spec, config, point_index, point, replicate)
    return point_index, replicate, recs


def run_experiment(
    spec: ExperimentSpec, config: RunConfig | None = None
) -> list[ExperimentRecord]:
    """Run one experiment; returns the records and writes them to
    ``spec.output_path`` when set.

    Deterministic for a given (spec, rng_seed): replicate r at parameter point
    k draws from the derived stream (rng_seed, k, r), and rows are ordered by
    (point, replicate) regardless of worker scheduling.
    """
    config = config if config is not None else RunConfig()
    points = _build_points(spec, config)
    replicates = 1 if spec.experiment == "qaplib" else spec.replicates
    tasks = [
        (spec, config, idx, point, rep)
        for idx, point in enumerate(points)
        for rep in range(replicates)
    ]
    if config.threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    results.sort(key=lambda item: (item[0], item[1]))
    records = [rec for _, _, recs in results for rec in recs]
    if spec.output_path:
        write_records(records, spec.output_path)
    return records


@dataclass(frozen=True)
class SummaryRow:
    """Per (method, parameter point) aggregate of a record set."""

    method: str
    point: str
    x: float
    replicates: int
    success_rate: float | None
    obj_frobenius_mean: float | None
    obj_frobenius_std: float | None
    obj_neg_inner_mean: float | None
    obj_neg_inner_std: float | None
    n_correct_mean: float | None
    wall_time_mean: float
    extras: tuple[tuple[str, float], ...] = ()


def _mean(vals):
    vals = [v for v in vals if v is not None]
    return float(np.mean(vals)) if vals else None


def _std(vals):
    vals = [v for v in vals if v is not None]
    return float(np.std(vals)) if vals else None


def _point_key(rec: ExperimentRecord):
    return (rec.instance, rec.rho, rec.flip_p, rec.seeds, rec.noise, rec.features)


def _point_label(rec: ExperimentRecord) -> str:
    parts = []
    if rec.instance:
        parts.append(rec.instance)
    for label, val in (
        ("rho", rec.rho),
        ("p", rec.flip_p),
        ("seeds", rec.seeds),
        ("noise", rec.noise),
    ):
        if val is not None:
            parts.append(f"{label}={val:g}")
    if rec.features == 0:
        parts.append("no-features")
    return ",".join(parts) if parts else "all"


def _point_x(rec: ExperimentRecord) -> float:
    for val in (rec.rho, rec.flip_p, rec.seeds, rec.noise):
        if val is not None:
            return float(val)
    return 0.0


def aggregate(records: list[ExperimentRecord]) -> list[SummaryRow]:
    """Summarize records per (method, parameter point)."""
    if not records:
        raise ValueError("cannot aggregate an empty record set")
    groups: dict[tuple, list[ExperimentRecord]] = {}
    order: list[tuple] = []
    for rec in records:
        key = (rec.method,) + _point_key(rec)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(rec)
    rows = []
    for key in order:
        recs = groups[key]
        first = recs[0]
        extras = {}
        for name in ("energy_post", "energy_truth", "neg_inner_truth", "qap_cost",
                     "dist_pc", "dist_pstar", "dist_rand", "kkt_violated",
                     "kkt_min_margin", "fw_gap"):
            m = _mean([getattr(r, name) for r in recs])
            if m is not None:
                extras[name + "_mean"] = m
        rows.append(
            SummaryRow(
                method=first.method,
                point=_point_label(first),
                x=_point_x(first),
                replicates=len(recs),
                success_rate=_mean([r.success for r in recs]),
                obj_frobenius_mean=_mean([r.obj_frobenius_sq for r in recs]),
                obj_frobenius_std=_std([r.obj_frobenius_sq for r in recs]),
                obj_neg_inner_mean=_mean([r.obj_neg_inner for r in recs]),
                obj_neg_inner_std=_std([r.obj_neg_inner for r in recs]),
                n_correct_mean=_mean([r.n_correct for r in recs]),
                wall_time_mean=_mean([r.wall_time for r in recs]) or 0.0,
                extras=tuple(sorted(extras.items())),
            )
        )
    return rows


def summary_to_csv(rows: list[SummaryRow]) -> str:
    extra_names = sorted({name for row in rows for name, _ in row.extras})
    header = [
        "method", "point", "x", "replicates", "success_rate",
        "obj_frobenius_mean", "obj_frobenius_std",
        "obj_neg_inner_mean", "obj_neg_inner_std",
        "n_correct_mean", "wall_time_mean", *extra_names,
    ]
    lines = [",".join(header)]
    for row in rows:
        extras = dict(row.extras)
        cells = [
            row.method, row.point, _format_cell(row.x), str(row.replicates),
            _format_cell(row.success_rate),
            _format_cell(row.obj_frobenius_mean), _format_cell(row.obj_frobenius_std),
            _format_cell(row.obj_neg_inner_mean), _format_cell(row.obj_neg_inner_std),
            _format_cell(row.n_correct_mean), _format_cell(row.wall_time_mean),
            *[_format_cell(extras.get(name)) for name in extra_names],
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def correctness_threshold(alpha: float) -> float:
    """Correlation above which the indefinite optimum is almost always the truth."""
    return 1.0 - 1.0 / (2.0 * (1.0 - alpha))


_Y_COLUMNS = {
    "success": ("success_rate",),
    "directed": ("success_rate",),
    "seeds": ("success_rate",),
    "features": ("success_rate",),
    "qaplib": ("qap_cost_mean",),
    "energy": ("obj_frobenius_mean", "energy_post_mean", "energy_truth_mean"),
    "distance": ("dist_pc_mean", "dist_pstar_mean", "dist_rand_mean"),
    "objective-trace": ("obj_neg_inner_mean", "neg_inner_truth_mean"),
    "kkt-check": ("kkt_violated_mean", "kkt_min_margin_mean"),
    "oracle-check": ("success_rate",),
}

_X_LABELS = {
    "seeds": "correlation rho",
    "features": "correlation rho",
    "success": "correlation rho (or flip probability p)",
    "directed": "correlation rho",
    "energy": "correlation rho",
    "distance": "correlation rho",
    "objective-trace": "correlation rho",
    "kkt-check": "correlation rho",
    "oracle-check": "correlation rho",
    "qaplib": "instance",
}


def _curve_label(row: SummaryRow) -> str:
    tags = [t for t in row.point.split(",") if not t.startswith(("rho=", "p="))]
    return " ".join([row.method, *tags]).strip()


def emit_plots(
    summary: list[SummaryRow],
    experiment: str,
    out_dir,
    alpha: float | None = None,
) -> list[str]:
    """Write plain-text curve data plus a matplotlib script reproducing the figure.

    Returns the written file names. Adds the vertical reference line at the
    correctness threshold rho = 1 - 1/(2 (1 - alpha)) on rho-swept figures.
    """
    if not summary:
        raise ValueError("cannot plot an empty summary")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    y_cols = _Y_COLUMNS.get(experiment, ("success_rate",))
    curves: dict[str, list[SummaryRow]] = {}
    for row in summary:
        curves.setdefault(_curve_label(row), []).append(row)
    written = []
    for label, rows in curves.items():
        fname = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in label) + ".tsv"
        rows = sorted(rows, key=lambda r: r.x)
        lines = ["\t".join(["x", *y_cols])]
        for row in rows:
            extras = dict(row.extras)
            cells = [_format_cell(row.x)]
            for col in y_cols:
                val = getattr(row, col, None) if hasattr(row, col) else None
                if val is None:
                    val = extras.get(col)
                cells.append(_format_cell(val))
            lines.append("\t".join(cells))
        (out / fname).write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(fname)

    threshold = None
    rho_swept = experiment in (
        "success", "directed", "seeds", "features", "energy",
        "distance", "objective-trace", "kkt-check",
    )
    if alpha is not None and rho_swept:
        threshold = correctness_threshold(alpha)

    script = [
        "#!/usr/bin/env python3",
        f'"""Plot the {experiment} experiment from the emitted .tsv files."""',
        "import matplotlib.pyplot as plt",
        "",
        f"curves = {sorted(written)!r}",
        f"y_columns = {list(y_cols)!r}",
        "fig, ax = plt.subplots(figsize=(7, 5))",
        "for fname in curves:",
        "    with open(fname) as fh:",
        "        header = fh.readline().split()",
        "        data = [[float(tok) if tok else float('nan') for tok in line.split('\\t')]",
        "                for line in fh.read().splitlines() if line]",
        "    xs = [row[0] for row in data]",
        "    for k, col in enumerate(header[1:], start=1):",
        "        ys = [row[k] for row in data]",
        "        ax.plot(xs, ys, marker='o', label=f'{fname[:-4]} {col}')",
    ]
    if threshold is not None:
        script += [
            f"ax.axvline({threshold!r}, color='red', linestyle='--',",
            f"           label='threshold rho = {threshold:.2f}')",
        ]
    script += [
        f"ax.set_xlabel({_X_LABELS.get(experiment, 'x')!r})",
        f"ax.set_ylabel({' / '.join(y_cols)!r})",
        f"ax.set_title({experiment!r})",
        "ax.legend(fontsize=7)",
        f"fig.savefig({(experiment + '.png')!r}, dpi=150)",
        "print('wrote', " + repr(experiment + ".png") + ")",
    ]
    (out / "plot.py").write_text("\n".join(script) + "\n", encoding="utf-8")
    written.append("plot.py")
    return written
