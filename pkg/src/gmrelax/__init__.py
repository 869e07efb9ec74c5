"""Graph matching via convex and indefinite Frank-Wolfe relaxations.

Matrix types and objectives live in :mod:`gmrelax.core`, exact linear
assignment in :mod:`gmrelax.lap`, the Frank-Wolfe solvers in
:mod:`gmrelax.solvers`, random-graph samplers in :mod:`gmrelax.random_graphs`,
brute-force ground truth in :mod:`gmrelax.oracle`, QAPLIB ingestion in
:mod:`gmrelax.qaplib`, and the Monte Carlo experiment harness in
:mod:`gmrelax.harness`.
"""

from .core import (
    AdjacencyMatrix,
    DoublyStochastic,
    FeasibilityError,
    GmError,
    KktReport,
    NotBinaryError,
    ObjectivePair,
    Permutation,
    ShapeMismatchError,
    ThetaGamma,
    convex_gradient,
    convex_objective,
    feasibility_deviation,
    frobenius_objective,
    indefinite_gradient,
    kkt_pairwise_check,
    n_correct,
    neg_inner_objective,
    sinkhorn_normalize,
    theta_gamma_identity,
)
from .lap import AssignmentResult, project_to_permutation, solve_lap_max, solve_lap_min
from .oracle import BruteForceResult, brute_force_gm, brute_force_lap, fw_gap_at
from .qaplib import (
    QapInstance,
    QaplibParseError,
    load_suite,
    benchmark_manifest,
    parse_qaplib,
    qap_cost,
    qap_cost_frobenius,
    serialize_qaplib,
)
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
    sample_lambda_uniform,
    sample_power_law,
)
from .solvers import (
    CONVEX,
    INDEFINITE,
    ConfigurationError,
    FwStep,
    InitSpec,
    MatchProblem,
    MatchResult,
    SolverConfig,
    convex_config,
    fw_step,
    indefinite_config,
    solve_convex,
    solve_indefinite,
    solve_seeded,
    solve_with_features,
)

__version__ = "0.1.0"
