"""Command-line front end.

Subcommands: generate | sample | cluster | experiment | bounds.  Every
command writes a JSON manifest next to its outputs (resolved configuration,
seed, input hashes, timing) so runs are auditable and reproducible.

Exit codes: 0 ok, 2 argument/parse error, 3 invalid model (hierarchy or
matrix), 4 invalid data (constant columns, shape mismatches, bad
parameters), 5 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from ._version import __version__
from .clustering import ALL_ALGORITHMS, GENERIC_LINKAGES, backend_name, kmeans_fp
from .clustering import agglomerate_generic, agglomerate_lw
from .errors import (
    DegenerateParameters,
    DimensionMismatch,
    HcbmError,
    InvalidHierarchy,
    InvalidK,
    InvalidPermutation,
    NotPositiveSemiDefinite,
    ZeroVariance,
)
from .estimators import COEFFICIENTS, correlation_matrix
from .experiments import (
    ExperimentConfig,
    IsoquantConfig,
    ModelSpec,
    run_convergence,
    run_isoquant,
)
from .model import (
    DEFAULT_RHO_INDUSTRIES,
    DEFAULT_RHO_MARKETS,
    Hierarchy,
    benchmark_hierarchy,
    build_correlation,
    correlation_to_distance,
    two_block_hierarchy,
    validate_correlation,
)
from .sampler import MODELS, SamplerSpec, sample
from .separability import concentration_bound, max_error_budget, recovery_confidence
from . import io

PRESETS = ("benchmark265", "twoblock")


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("HCBM_THREADS", "1")))
    except ValueError:
        return 1


# -- hierarchy sources -------------------------------------------------------


def _add_hierarchy_options(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_argument_group("hierarchy source")
    group.add_argument("--hierarchy", metavar="FILE", help="hierarchy JSON file")
    group.add_argument("--preset", choices=PRESETS, help="built-in hierarchy")
    group.add_argument(
        "--rho-markets", type=float, default=DEFAULT_RHO_MARKETS,
        help="benchmark265: correlation between the two European markets "
             f"(default {DEFAULT_RHO_MARKETS})",
    )
    group.add_argument(
        "--rho-industries", type=float, default=DEFAULT_RHO_INDUSTRIES,
        help="benchmark265: correlation between industry blocks of one market "
             f"(default {DEFAULT_RHO_INDUSTRIES})",
    )
    group.add_argument("--twoblock-n", type=int, default=50,
                       help="twoblock: variable count (default 50)")
    group.add_argument("--rho", type=float, default=0.5, help="twoblock: within-block correlation")
    group.add_argument("--rho-cross", type=float, default=0.0, help="twoblock: cross-block correlation")
    parser.set_defaults(_hierarchy_required=required)


def _hierarchy_from_args(args) -> tuple[Hierarchy | None, dict, list]:
    if args.hierarchy and args.preset:
        raise InvalidHierarchy("give either --hierarchy or --preset, not both")
    if args.hierarchy:
        h = Hierarchy.from_json(args.hierarchy)
        return h, {"hierarchy_file": args.hierarchy}, [args.hierarchy]
    if args.preset == "benchmark265":
        h = benchmark_hierarchy(args.rho_markets, args.rho_industries)
        cfg = {
            "preset": "benchmark265",
            "rho_markets": args.rho_markets,
            "rho_industries": args.rho_industries,
        }
        return h, cfg, []
    if args.preset == "twoblock":
        h = two_block_hierarchy(args.twoblock_n, args.rho, args.rho_cross)
        cfg = {"preset": "twoblock", "n": args.twoblock_n, "rho": args.rho,
               "rho_cross": args.rho_cross}
        return h, cfg, []
    if args._hierarchy_required:
        raise InvalidHierarchy("no hierarchy given: use --hierarchy FILE or --preset NAME")
    return None, {}, []


# -- subcommands -------------------------------------------------------------


def cmd_generate(args) -> int:
    started = time.perf_counter()
    hierarchy, cfg, inputs = _hierarchy_from_args(args)
    matrix = build_correlation(hierarchy)
    io.write_matrix_csv(args.output, matrix)
    manifest = io.build_manifest(
        "generate", cfg, seed=None, inputs=inputs, outputs=[args.output],
        elapsed_s=time.perf_counter() - started,
    )
    io.write_manifest(io.manifest_path(args.output), manifest)
    print(f"wrote {matrix.shape[0]}x{matrix.shape[1]} correlation matrix to {args.output}")
    return 0


def cmd_sample(args) -> int:
    started = time.perf_counter()
    inputs = []
    if args.correlation:
        sigma = io.read_matrix_csv(args.correlation)
        validate_correlation(sigma)
        cfg: dict = {"correlation_file": args.correlation}
        inputs.append(args.correlation)
    else:
        hierarchy, cfg, inputs = _hierarchy_from_args(args)
        if hierarchy is None:
            raise InvalidHierarchy("need a correlation source: --correlation, --hierarchy or --preset")
        sigma = build_correlation(hierarchy)
    spec = SamplerSpec(model=args.model, sigma=sigma, nu=args.nu, seed=args.seed)
    x = sample(spec, args.t)
    io.write_sample_csv(args.output, x)
    cfg.update({"model": args.model, "nu": args.nu, "T": args.t})
    manifest = io.build_manifest(
        "sample", cfg, seed=args.seed, inputs=inputs, outputs=[args.output],
        elapsed_s=time.perf_counter() - started,
    )
    io.write_manifest(io.manifest_path(args.output), manifest)
    print(f"wrote {x.shape[0]}x{x.shape[1]} sample matrix to {args.output}")
    return 0


def cmd_cluster(args) -> int:
    started = time.perf_counter()
    kind = args.kind if args.kind != "auto" else io.sniff_csv_kind(args.input)
    if kind == "returns":
        returns = io.read_sample_csv(args.input)
        corr = correlation_matrix(returns, args.coefficient)
    else:
        corr = io.read_matrix_csv(args.input)
        validate_correlation(corr, check_psd=False)
    dist = correlation_to_distance(corr)

    outputs = []
    partition_file = f"{args.output_prefix}.partition.csv"
    if args.algorithm == "kmeans":
        part = kmeans_fp(dist, args.k, seed=args.seed)
    else:
        if args.algorithm in GENERIC_LINKAGES:
            dend = agglomerate_generic(dist, args.algorithm)
        else:
            dend = agglomerate_lw(dist, args.algorithm)
        dend_file = f"{args.output_prefix}.dendrogram.csv"
        io.write_dendrogram_csv(dend_file, dend)
        outputs.append(dend_file)
        part = dend.cut(args.k)
    io.write_partition_csv(partition_file, part)
    outputs.insert(0, partition_file)

    cfg = {
        "input": args.input,
        "kind": kind,
        "algorithm": args.algorithm,
        "coefficient": args.coefficient,
        "k": args.k,
    }
    manifest = io.build_manifest(
        "cluster", cfg, seed=args.seed, inputs=[args.input], outputs=outputs,
        elapsed_s=time.perf_counter() - started,
    )
    io.write_manifest(io.manifest_path(partition_file), manifest)
    sizes = np.bincount(part.labels)
    print(f"clustered {len(part.labels)} variables into {part.n_clusters} clusters "
          f"(sizes {sizes.tolist()})")
    return 0


def _experiment_config(args) -> ExperimentConfig | IsoquantConfig:
    with open(args.config) as fh:
        raw = json.load(fh)
    kind = raw.get("kind", args.mode)
    if args.mode and kind != args.mode:
        raise HcbmError(f"config kind {kind!r} does not match --mode {args.mode!r}")
    trials = raw.get("trials", 100)
    if args.quick:
        trials = max(2, trials // 10)
    if kind == "isoquant":
        model = raw.get("model", {"name": "gaussian"})
        return IsoquantConfig(
            rho_grid=tuple(raw["rho_grid"]),
            t_grid=tuple(raw["t_grid"]),
            n_variables=raw.get("n", 50),
            trials=trials,
            seed=raw.get("seed", 0),
            model=ModelSpec(model["name"], model.get("nu", 3.0)),
            algorithm=raw.get("algorithm", "ward"),
            coefficient=raw.get("coefficient", "spearman"),
            rho_cross=raw.get("rho_cross", 0.0),
        )
    if kind != "convergence":
        raise HcbmError(f"unknown experiment kind {kind!r}")
    hspec = raw.get("hierarchy", {"preset": "benchmark265"})
    if "file" in hspec:
        path = Path(args.config).parent / hspec["file"]
        hierarchy = Hierarchy.from_json(path)
    elif "preset" in hspec:
        if hspec["preset"] == "benchmark265":
            hierarchy = benchmark_hierarchy(
                hspec.get("rho_markets", DEFAULT_RHO_MARKETS),
                hspec.get("rho_industries", DEFAULT_RHO_INDUSTRIES),
            )
        elif hspec["preset"] == "twoblock":
            hierarchy = two_block_hierarchy(
                hspec.get("n", 50), hspec.get("rho", 0.5), hspec.get("rho_cross", 0.0)
            )
        else:
            raise InvalidHierarchy(f"unknown preset {hspec['preset']!r}")
    else:
        hierarchy = Hierarchy.from_dict(hspec)
    return ExperimentConfig(
        hierarchy=hierarchy,
        t_grid=tuple(raw["t_grid"]),
        models=tuple(ModelSpec(m["name"], m.get("nu", 3.0)) for m in raw.get(
            "models", [{"name": "gaussian"}, {"name": "student_t", "nu": 3}])),
        algorithms=tuple(raw.get("algorithms", ["single", "average", "ward"])),
        coefficients=tuple(raw.get("coefficients", list(COEFFICIENTS))),
        trials=trials,
        seed=raw.get("seed", 0),
        recovery=raw.get("recovery", "all_levels"),
    )


def cmd_experiment(args) -> int:
    started = time.perf_counter()
    config = _experiment_config(args)
    if isinstance(config, IsoquantConfig):
        report = run_isoquant(config, threads=args.threads)
    else:
        report = run_convergence(config, threads=args.threads)
    report_file = f"{args.output_prefix}.report.csv"
    meta_file = f"{args.output_prefix}.meta.json"
    report.to_csv(report_file)
    report.write_meta(meta_file)
    outputs = [report_file, meta_file]
    if args.plot:
        from . import plotting

        plot_file = f"{args.output_prefix}.{args.plot_format}"
        if isinstance(config, IsoquantConfig):
            plotting.plot_isoquant(report, plot_file)
        else:
            plotting.plot_convergence(report, plot_file)
        outputs.append(plot_file)
    manifest = io.build_manifest(
        "experiment", config.describe(), seed=config.seed, inputs=[args.config],
        outputs=outputs, elapsed_s=time.perf_counter() - started,
    )
    io.write_manifest(io.manifest_path(report_file), manifest)
    print(f"wrote {len(report.points)} grid points to {report_file}")
    return 0


def cmd_bounds(args) -> int:
    bound = concentration_bound(args.n, args.t)
    confidence = recovery_confidence(args.n, args.t, args.gap)
    print(f"N={args.n} T={args.t} gap={args.gap}")
    print(f"entrywise estimation bound: {bound.value:.6g} "
          f"(stated regime N >= 24/ln T + 2: {'yes' if bound.valid else 'no'})")
    print(f"recovery confidence 1 - 2N^2 exp(-T d^2/24): {confidence:.6g}")
    hierarchy, _, _ = _hierarchy_from_args(args)
    if hierarchy is not None:
        sc = max_error_budget(hierarchy, "space_conserving")
        wd = max_error_budget(hierarchy, "ward")
        print(f"error budget (space-conserving linkages): {sc:.6g}")
        note = "" if wd > 0 else "  [non-positive: no guarantee at these cluster sizes]"
        print(f"error budget (ward): {wd:.6g}{note}")
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hcbm",
        description="Nested block correlation models: generation, sampling, "
                    "clustering and recovery experiments.",
    )
    parser.add_argument("--version", action="version",
                        version=f"hcbm {__version__} [{backend_name()} backend]")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("generate", help="build a correlation matrix from a hierarchy")
    _add_hierarchy_options(p)
    p.add_argument("--output", required=True, help="output CSV path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sample", help="draw correlated observations")
    _add_hierarchy_options(p, required=False)
    p.add_argument("--correlation", metavar="FILE", help="correlation matrix CSV (alternative to a hierarchy)")
    p.add_argument("--model", choices=MODELS, default="gaussian")
    p.add_argument("--nu", type=float, default=3.0, help="degrees of freedom for student_t")
    p.add_argument("--t", type=int, required=True, help="number of observations")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("cluster", help="cluster a returns or correlation CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=("auto", "returns", "correlation"), default="auto")
    p.add_argument("--algorithm", choices=ALL_ALGORITHMS, default="ward")
    p.add_argument("--coefficient", choices=COEFFICIENTS, default="pearson",
                   help="estimator used when the input is returns")
    p.add_argument("--k", type=int, required=True, help="number of clusters for the flat cut")
    p.add_argument("--seed", type=int, default=0, help="seed for kmeans initialization")
    p.add_argument("--output-prefix", required=True)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("experiment", help="run a convergence or isoquant experiment")
    p.add_argument("--config", required=True, help="experiment JSON config")
    p.add_argument("--mode", choices=("convergence", "isoquant"), default=None,
                   help="must match the config kind if both are given")
    p.add_argument("--threads", type=int, default=_default_threads(),
                   help="trial-level parallelism (default $HCBM_THREADS or 1); "
                        "does not change results")
    p.add_argument("--quick", action="store_true", help="divide the trial count by 10")
    p.add_argument("--plot", action="store_true", help="emit a figure next to the report")
    p.add_argument("--plot-format", choices=("svg", "png"), default="svg")
    p.add_argument("--output-prefix", required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("bounds", help="print concentration bound, confidence and budgets")
    p.add_argument("--n", type=int, required=True, help="number of variables")
    p.add_argument("--t", type=int, required=True, help="sample length")
    p.add_argument("--gap", type=float, required=True, help="distance separation between clusters")
    _add_hierarchy_options(p, required=False)
    p.set_defaults(func=cmd_bounds)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (json.JSONDecodeError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvalidHierarchy, NotPositiveSemiDefinite, InvalidPermutation) as exc:
        print(f"error: invalid model: {exc}", file=sys.stderr)
        return 3
    except (ZeroVariance, DimensionMismatch, DegenerateParameters, InvalidK) as exc:
        print(f"error: invalid data: {exc}", file=sys.stderr)
        return 4
    except HcbmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except Exception as exc:  # noqa: BLE001 - map unexpected failures to exit 5
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
