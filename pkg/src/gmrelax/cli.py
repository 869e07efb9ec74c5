"""Command-line experiment driver: one subcommand per experiment kind."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .harness import (
    ENV_CONFIG_VAR,
    EXPERIMENTS,
    ExperimentSpec,
    RunConfig,
    aggregate,
    emit_plots,
    run_experiment,
    summary_to_csv,
)

_DEFAULT_RHO = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0"


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmrelax",
        description=(
            "Graph-matching relaxation experiments: Monte Carlo sweeps over "
            "correlated random graphs, QAPLIB benchmarks, CSV records, and "
            "generated plot scripts."
        ),
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--n", type=int, default=150, help="number of vertices")
        p.add_argument("--rho", type=_floats, default=None, metavar="R1,R2,...",
                       help="correlation grid")
        p.add_argument("--alpha", type=float, default=0.1,
                       help="edge-probability band half-width")
        p.add_argument("--replicates", type=int, default=None,
                       help="Monte Carlo replicates per point (default 20)")
        p.add_argument("--methods", type=lambda s: tuple(s.split(",")), default=None,
                       metavar="M1,M2,...",
                       help="subset of convex+project,faq-J,faq-Dstar,faq-Pstar")
        p.add_argument("--seed", type=int, default=0, help="root RNG seed")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--qaplib-dir", default=None, help="directory of QAPLIB .dat files")
        p.add_argument("--config", default=None,
                       help=f"key=value config file (default ${ENV_CONFIG_VAR})")
        p.add_argument("--threads", type=int, default=None,
                       help="worker processes across replicates")
        p.add_argument("--paper-scale", action="store_true",
                       help="full-scale run: 100 replicates per point")
        p.add_argument("--seeds-grid", type=_ints, default=(), metavar="S1,S2,...",
                       help="seed counts for the seeds experiment")
        p.add_argument("--noise-grid", type=_floats, default=(), metavar="V1,V2,...",
                       help="feature noise variances for the features experiment")
        p.add_argument("--flip-grid", type=_floats, default=(), metavar="P1,P2,...",
                       help="bit-flip probabilities for non-Bernoulli models")
        p.add_argument("--model", default="bernoulli",
                       choices=("bernoulli", "power-law", "bounded-degree"))
        p.add_argument("--beta", type=float, default=2.0, help="power-law exponent")
        p.add_argument("--dmax", type=int, default=4, help="bounded-degree cap")
        p.add_argument("--lam", type=float, default=0.5,
                       help="graph/feature trade-off for the features experiment")
        p.add_argument("--emit-plots", action="store_true",
                       help="also write an aggregate summary and plot script")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    config_path = args.config or os.environ.get(ENV_CONFIG_VAR)
    config = RunConfig.from_file(config_path) if config_path else RunConfig()
    overrides = {}
    if args.threads is not None:
        overrides["threads"] = args.threads
    if args.qaplib_dir is not None:
        overrides["qaplib_dir"] = args.qaplib_dir
    if overrides:
        import dataclasses

        config = dataclasses.replace(config, **overrides)

    replicates = args.replicates
    if replicates is None:
        replicates = 100 if args.paper_scale else 20

    if args.methods is not None:
        methods = args.methods
    elif args.experiment == "qaplib":
        methods = ("convex+project", "faq-J", "faq-Dstar")
    elif args.experiment in ("kkt-check", "oracle-check"):
        methods = ()
    else:
        methods = ("convex+project", "faq-J", "faq-Dstar")

    spec = ExperimentSpec(
        experiment=args.experiment,
        n=args.n,
        rho_grid=args.rho if args.rho is not None else _floats(_DEFAULT_RHO),
        alpha=args.alpha,
        replicates=replicates,
        methods=methods,
        seeds_grid=args.seeds_grid,
        feature_noise_grid=args.noise_grid,
        flip_grid=args.flip_grid,
        model=args.model,
        beta=args.beta,
        dmax=args.dmax,
        lam=args.lam,
        rng_seed=args.seed,
        output_path=args.out,
    )
    records = run_experiment(spec, config)
    print(f"wrote {len(records)} records to {args.out}")

    if args.emit_plots:
        rows = aggregate(records)
        out = Path(args.out)
        summary_path = out.with_name(out.stem + "_summary.csv")
        summary_path.write_text(summary_to_csv(rows), encoding="utf-8", newline="\n")
        plot_dir = out.with_name(out.stem + "_plots")
        files = emit_plots(rows, args.experiment, plot_dir, alpha=args.alpha)
        print(f"wrote {summary_path} and {len(files)} plot files under {plot_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
