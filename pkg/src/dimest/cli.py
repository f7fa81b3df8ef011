"""Command-line front end.

Subcommands: estimate (point estimate on a CSV cloud), t0 (threshold
bandwidth report), bounds (tail/anti-concentration report), experiment
(seeded CSV-emitting runs), sample (manifold cloud generator).

Exit codes: 0 success, 1 usage error (including unknown flags and
unreadable files), 2 precondition or validity error from the library.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bandwidth import DEFAULT_DELTA, DEFAULT_GRID_SIZE, make_grid, select_bandwidth_curvature, select_bandwidth_slope_max
from .bench import _sanitize, default_config, run_experiment
from .bounds import BoundConfig, RegularityParams, bound_report, compute_t0
from .errors import (
    DegenerateGeometryError,
    RejectionBudgetError,
    ThresholdError,
    ValidityError,
)
from .estimators import default_knn_k, knn_dim_estimate, local_dim_estimate
from .manifolds import (
    MANIFOLD_KINDS,
    ManifoldSpec,
    NoiseSpec,
    add_noise,
    derive_rng,
    load_cloud_csv,
    sample,
    save_cloud_csv,
)


def _emit(payload: dict) -> None:
    json.dump(_sanitize(payload), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _regularity_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--d", type=int, required=True, help="intrinsic dimension")
    sub.add_argument("--L", type=float, required=True, help="second fundamental form bound")
    sub.add_argument("--M", type=float, required=True, help="relative density variation bound")
    sub.add_argument("--kappa", type=float, required=True, help="density Lipschitz bound")
    sub.add_argument("--p", type=float, required=True, help="density at the base point")
    sub.add_argument("--r", type=float, default=float("inf"),
                     help="radius of (L, M) chart control (default: everywhere)")
    sub.add_argument("--boundary", type=float, default=float("inf"),
                     help="distance to the manifold boundary (default: none)")


def _regularity_from(args) -> RegularityParams:
    return RegularityParams(
        d=args.d, L=args.L, M=args.M, r=args.r, kappa=args.kappa, p_x=args.p,
        boundary_dist=args.boundary,
    )


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_estimate(args) -> int:
    cloud = load_cloud_csv(args.input)
    if args.point_index is not None:
        idx = args.point_index
        if not 0 <= idx < cloud.n:
            raise ValueError(f"--point-index {idx} out of range for a cloud of {cloud.n}")
        x = cloud.points[idx]
    else:
        x = [float(v) for v in args.point_coords.split(",")]
        idx = None

    if args.method == "knn":
        k = default_knn_k(cloud.n) if args.k == "auto" else int(args.k)
        est = knn_dim_estimate(x, cloud, k, x_index=idx)
        _emit({"d_hat": est.d_hat, "k": est.t_or_k, "method": est.method})
        return 0

    if args.t == "auto":
        grid = make_grid(cloud, x, args.grid_size)
        if args.method == "gaussian":
            scan = select_bandwidth_curvature(x, cloud, grid, args.delta)
        else:
            scan = select_bandwidth_slope_max(x, cloud, grid)
        _emit({"d_hat": scan.d_hat, "t_star": scan.t_star, "method": scan.method})
        return 0

    t = float(args.t)
    if args.method == "gaussian_slope_max":
        raise ValueError("--method gaussian_slope_max requires --t auto (it selects t itself)")
    est = local_dim_estimate(x, cloud, t)
    _emit({"d_hat": est.d_hat, "t_star": est.t_or_k, "method": est.method})
    return 0


def _cmd_t0(args) -> int:
    report = compute_t0(_regularity_from(args), args.gamma, args.eta)
    _emit({
        "t0": report.t0,
        "terms": report.terms,
        "binding": report.binding,
        "s_star": report.s_star,
        "s_T": report.s_T,
        "gamma": args.gamma,
        "eta": args.eta,
    })
    return 0


def _cmd_bounds(args) -> int:
    reg = _regularity_from(args)
    cfg = BoundConfig(eps=args.eps, c=args.c, gamma=args.gamma, n=args.n, t=args.t)
    report = bound_report(reg, cfg, target_prob=args.target_prob,
                          enforce_threshold=not args.allow_t_above_t0)
    _emit({
        "P_t": report.P_t,
        "upper_tail": report.upper_tail,
        "lower_tail": report.lower_tail,
        "anti_conc": report.anti_conc,
        "remainder_scale": report.remainder_scale,
        "eps_star": report.eps_star,
        "vacuous": report.vacuous,
    })
    return 0


def _cmd_experiment(args) -> int:
    overrides = {}
    if args.config:
        with open(args.config) as fh:
            overrides = json.load(fh)
        if not isinstance(overrides, dict):
            raise ValueError("config file must hold a JSON object")
    overrides.pop("experiment", None)
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.outdir is not None:
        overrides["outdir"] = args.outdir
    config = default_config(args.name, **overrides)
    paths = run_experiment(config)
    for path in paths:
        print(path)
    return 0


def _cmd_sample(args) -> int:
    spec = ManifoldSpec(
        kind=args.manifold, d=args.d, radius=args.radius,
        r_minor=args.r_minor, cap_angle=args.cap_angle,
    )
    cloud = sample(spec, args.n, derive_rng(args.seed, 0))
    if args.sigma > 0:
        cloud = add_noise(cloud, NoiseSpec(args.sigma, spec.ambient_dim, args.seed + 1))
    save_cloud_csv(cloud, args.output)
    print(args.output)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimest",
        description="Gaussian-kernel intrinsic dimension estimation and bound calculators",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    est = subs.add_parser("estimate", help="point estimate on a CSV point cloud")
    est.add_argument("--input", required=True, help="cloud CSV (header row, one point per line)")
    where = est.add_mutually_exclusive_group(required=True)
    where.add_argument("--point-index", type=int, help="row index of the base point")
    where.add_argument("--point-coords", help="comma-separated base point coordinates")
    est.add_argument("--method", default="gaussian",
                     choices=("gaussian", "gaussian_slope_max", "knn"))
    est.add_argument("--t", default="auto", help="bandwidth, or 'auto' to select (default)")
    est.add_argument("--k", default="auto", help="neighbor count for knn, or 'auto'")
    est.add_argument("--grid-size", type=int, default=DEFAULT_GRID_SIZE)
    est.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    est.add_argument("--seed", type=int, default=0, help="unused; accepted for uniformity")
    est.set_defaults(func=_cmd_estimate)

    t0 = subs.add_parser("t0", help="threshold bandwidth report as JSON")
    _regularity_flags(t0)
    t0.add_argument("--gamma", type=float, required=True)
    t0.add_argument("--eta", type=float, required=True)
    t0.add_argument("--seed", type=int, default=0, help="unused; accepted for uniformity")
    t0.set_defaults(func=_cmd_t0)

    bnd = subs.add_parser("bounds", help="tail and anti-concentration report as JSON")
    _regularity_flags(bnd)
    bnd.add_argument("--gamma", type=float, required=True)
    bnd.add_argument("--eps", type=float, required=True)
    bnd.add_argument("--c", type=float, required=True)
    bnd.add_argument("--n", type=int, required=True)
    bnd.add_argument("--t", type=float, required=True)
    bnd.add_argument("--target-prob", type=float, default=0.1)
    bnd.add_argument("--allow-t-above-t0", action="store_true",
                     help="evaluate the formulas even when t exceeds t0")
    bnd.add_argument("--seed", type=int, default=0, help="unused; accepted for uniformity")
    bnd.set_defaults(func=_cmd_bounds)

    exp = subs.add_parser("experiment", help="run a seeded experiment, write CSVs")
    exp.add_argument("name", choices=("concentration", "anticoncentration", "bandwidth_compare"))
    exp.add_argument("--config", help="JSON config; omitted keys take defaults")
    exp.add_argument("--seed", type=int, default=None, help="override the config seed")
    exp.add_argument("--outdir", default=None, help="override the config output directory")
    exp.set_defaults(func=_cmd_experiment)

    smp = subs.add_parser("sample", help="sample a manifold cloud to CSV")
    smp.add_argument("--manifold", required=True, choices=MANIFOLD_KINDS)
    smp.add_argument("--d", type=int, default=2, help="intrinsic dimension")
    smp.add_argument("--radius", type=float, default=1.0)
    smp.add_argument("--r-minor", type=float, default=0.5, help="torus tube radius")
    smp.add_argument("--cap-angle", type=float, default=0.3)
    smp.add_argument("--n", type=int, required=True)
    smp.add_argument("--sigma", type=float, default=0.0, help="ambient Gaussian noise level")
    smp.add_argument("--seed", type=int, default=0)
    smp.add_argument("--output", required=True)
    smp.set_defaults(func=_cmd_sample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems and 0 on --help; fold usage to 1
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except (ValidityError, ThresholdError, DegenerateGeometryError,
            RejectionBudgetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
