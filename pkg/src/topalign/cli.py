"""Command-line entry point.

Exit codes: 0 success, 2 unreadable or malformed input, 3 degenerate input or
shape mismatch, 4 exact solver budget exceeded.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .errors import BudgetExceeded, InvalidInput, ParseError, TopAlignError
from .filtration import PersistenceDiagram, complete_graph, h0_diagram, h1_births, threshold_graph
from .geometry import (
    PointCloud,
    ThresholdRule,
    curve_divergence,
    normalize_weights,
    pairwise_distances,
    resolve_threshold,
    sorted_distance_curve,
)
from .io import diagram_rows, dumps, read_diagrams, read_embeddings, write_graph
from .losses import LossCoefficients, loss_total
from .transport import (
    DEFAULT_BUDGET,
    ProjectionSampler,
    bottleneck_diagrams,
    sliced_wasserstein_diagrams,
    wasserstein_1d,
    wasserstein_exact_diagrams,
    wasserstein_point_clouds,
)

EXIT_OK, EXIT_PARSE, EXIT_DEGENERATE, EXIT_BUDGET = 0, 2, 3, 4


def _emit(text: str, out=None):
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _rule(args) -> ThresholdRule:
    if getattr(args, "epsilon", None) is not None:
        return ThresholdRule.absolute(args.epsilon)
    return ThresholdRule.mean_minus_std(args.lam)


def _load(path) -> PointCloud:
    try:
        return read_embeddings(path)
    except OSError as exc:
        raise ParseError(path, "open", exc.strerror or str(exc)) from None


def cmd_diagram(args) -> int:
    cloud = _load(args.input)
    dm = pairwise_distances(cloud)
    if args.normalize and cloud.size > 1:
        dm = normalize_weights(dm)
    n = cloud.size
    if args.mode == "approx" and n > 1:
        eps = resolve_threshold(dm, _rule(args)).epsilon
        g = threshold_graph(dm, eps)
        unmerged = 1.0 if args.normalize else float(dm.max())
    else:
        g = complete_graph(dm)
        unmerged = None
    if args.dim == "0":
        diagram = h0_diagram(g, finite_death_for_unmerged=unmerged)
    else:
        births = h1_births(g)
        diagram = PersistenceDiagram(1, np.stack([births, np.full(births.size, np.inf)], axis=1))
    _emit(diagram_rows([diagram]), args.out)
    if args.graph_out:
        write_graph(args.graph_out, g)
    return EXIT_OK


def _diagram_arg(path, dim) -> PersistenceDiagram:
    try:
        diagrams = read_diagrams(path)
    except OSError as exc:
        raise ParseError(path, "open", exc.strerror or str(exc)) from None
    d = diagrams.get(dim, PersistenceDiagram(dim, np.zeros((0, 2))))
    return d.finite_diagram()


def cmd_distance(args) -> int:
    a, b = _diagram_arg(args.a, args.dim), _diagram_arg(args.b, args.dim)
    if args.metric == "sw":
        value = sliced_wasserstein_diagrams(a, b, args.p, ProjectionSampler(args.seed, args.projections, 2))
    elif args.metric == "wasserstein":
        value = wasserstein_exact_diagrams(a, b, args.p, budget=args.budget)
    else:
        value = bottleneck_diagrams(a, b, budget=args.budget)
    out = {
        "metric": args.metric,
        "value": value,
        "p": args.p if args.metric != "bottleneck" else float("inf"),
        "K": args.projections if args.metric == "sw" else None,
        "seed": args.seed,
        "dimension": args.dim,
        "version": __version__,
    }
    _emit(dumps(out))
    return EXIT_OK


def cmd_loss(args) -> int:
    t, s = _load(args.teacher), _load(args.student)
    coeffs = LossCoefficients(args.alpha, args.beta, args.gamma)
    rule = _rule(args)
    lb = loss_total(
        t, s, coeffs, args.p, ProjectionSampler(args.seed, args.projections, 2), rule, args.approx,
        with_grad=args.grad, homology=args.homology,
    )
    config = {
        "alpha": coeffs.alpha, "beta": coeffs.beta, "gamma": coeffs.gamma, "p": args.p,
        "K": args.projections, "seed": args.seed, "threshold_rule": asdict(rule), "approx": args.approx,
        "homology": args.homology, "grad": args.grad,
    }
    _emit(dumps({"version": __version__, "seed": args.seed, "config": config, **lb.as_dict(include_grad=args.grad)}), args.out)
    return EXIT_OK


def cmd_align(args) -> int:
    from .align import OptimizerConfig, StudentMap, ablation_suite, ablation_table, optimize

    t, s = _load(args.teacher), _load(args.student)
    config = OptimizerConfig(
        steps=args.steps, learning_rate=args.lr, coeffs=LossCoefficients(args.alpha, args.beta, args.gamma),
        p=args.p, K=args.projections, seed=args.seed, threshold_rule=_rule(args), approx=args.approx,
        log_every=args.log_every, homology=args.homology,
    )
    smap = StudentMap.affine(s) if args.map == "affine" else StudentMap.free_points(s)
    if args.ablation:
        reports = ablation_suite(t, s, config, smap)
        payload = {
            "version": __version__,
            "seed": args.seed,
            "table": ablation_table(reports),
            "runs": {k: r.as_dict() for k, r in reports.items()},
        }
    else:
        _, report = optimize(t, s, smap, config)
        payload = {"seed": args.seed, **report.as_dict()}
    _emit(dumps(payload), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    from . import bench

    if args.kind == "connectivity":
        cfg = bench.SweepConfig(
            distributions=tuple(args.distributions), dimension=args.dim, sizes=tuple(args.sizes),
            lambdas=tuple(args.lambdas), trials=args.trials, master_seed=args.seed,
        )
        report = bench.run_sweep(cfg)
        if args.out_json:
            Path(args.out_json).write_text(dumps({"version": __version__, "seed": args.seed, **report.as_dict()}) + "\n")
        _emit(report.to_csv(), args.out_csv)
    elif args.kind == "timing":
        lambdas = args.lambdas if args.lambdas_given else [0.0, 0.5, 1.0, 1.5]
        size = args.sizes[0] if args.sizes_given else 256
        rows = bench.run_timing_sweep(size, args.dim, lambdas, args.trials, args.seed)
        text = "lambda,mean_seconds\n" + "".join(f"{lam!r},{sec:.17g}\n" for lam, sec in rows)
        if args.out_json:
            Path(args.out_json).write_text(dumps({
                "version": __version__, "seed": args.seed, "N": size, "n": args.dim, "trials": args.trials,
                "rows": [{"lambda": lam, "mean_seconds": sec} for lam, sec in rows],
            }) + "\n")
        _emit(text, args.out_csv)
    else:
        from .fixtures import noisy_student

        if args.teacher and args.student:
            t, s = _load(args.teacher), _load(args.student)
        else:
            t, s = noisy_student(args.seed, n_points=256, dim=16)
        rows = bench.run_k_sweep(t, s, args.ks, args.seeds_per_k, args.seed)
        text = "K,mean_swd,stderr,seconds_per_eval\n" + "".join(
            f"{r.K},{r.mean_swd:.17g},{r.stderr:.17g},{r.seconds_per_eval:.17g}\n" for r in rows
        )
        if args.out_json:
            Path(args.out_json).write_text(
                dumps({"version": __version__, "seed": args.seed, "rows": [asdict(r) for r in rows]}) + "\n"
            )
        _emit(text, args.out_csv)
    return EXIT_OK


def cmd_verify_bound(args) -> int:
    from .bench import run_bound_campaign

    res = run_bound_campaign(args.trials, args.max_n, tuple(args.p), args.seed, args.max_dim, args.budget)
    payload = {
        "version": __version__,
        "seed": args.seed,
        "config": {"trials": args.trials, "max_n": args.max_n, "p": list(args.p), "max_dim": args.max_dim,
                   "budget": args.budget},
        **res.summary(),
    }
    if args.certificates:
        payload["certificates"] = [c.as_dict() for c in res.certificates]
    _emit(dumps(payload), args.out)
    return EXIT_OK


def report_metrics(a: PointCloud, b: PointCloud, K: int = 50, seed: int = 0, p: float = 2.0, budget: int = DEFAULT_BUDGET) -> dict:
    """Sorted-curve gaps and topological distances between two embedding sets."""
    if a.size != b.size:
        raise InvalidInput(f"point counts differ: {a.size} vs {b.size}")
    ma, mb = pairwise_distances(a), pairwise_distances(b)
    out = {}
    if a.size >= 2:
        for name, (xa, xb) in {"raw": (ma, mb), "normalized": (normalize_weights(ma), normalize_weights(mb))}.items():
            mean, rmse = curve_divergence(sorted_distance_curve(xa), sorted_distance_curve(xb))
            out[f"curve_{name}"] = {"mean": mean, "rmse": rmse}
    ga, gb = complete_graph(ma), complete_graph(mb)
    da, db = h0_diagram(ga).finite_diagram(), h0_diagram(gb).finite_diagram()
    try:
        out["w2_clouds"] = wasserstein_point_clouds(a, b, p, budget) if a.dimension == b.dimension else None
    except BudgetExceeded:
        out["w2_clouds"] = None
    try:
        out["w2_h0"] = wasserstein_exact_diagrams(da, db, p, budget)
    except BudgetExceeded:
        out["w2_h0"] = None
    out["sw2_h0"] = sliced_wasserstein_diagrams(da, db, p, ProjectionSampler(seed, K, 2))
    ba, bb = h1_births(ga), h1_births(gb)
    out["h1_birth_w1"] = wasserstein_1d(ba, bb, 1.0) if ba.size else 0.0
    return out


def cmd_report(args) -> int:
    a, b = _load(args.a), _load(args.b)
    metrics = report_metrics(a, b, args.projections, args.seed, args.p, args.budget)
    payload = {
        "version": __version__,
        "seed": args.seed,
        "config": {"p": args.p, "K": args.projections, "budget": args.budget, "n_points": a.size},
        "metrics": metrics,
    }
    _emit(dumps(payload), args.out)
    return EXIT_OK


def _add_loss_flags(p):
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.01)
    p.add_argument("--gamma", type=float, default=0.01)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--projections", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--approx", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--homology", choices=["h0", "h0+h1"], default="h0")


class _Tracking(argparse.Action):
    """Store a value and remember that the flag was given explicitly."""

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        setattr(namespace, self.dest + "_given", True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topalign", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"topalign {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagram", help="persistence diagram of an embedding file")
    p.add_argument("input")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lambda", dest="lam", type=float, default=0.5)
    g.add_argument("--epsilon", type=float)
    p.add_argument("--mode", choices=["exact", "approx"], default="exact")
    p.add_argument("--dim", choices=["0", "1births"], default="0")
    p.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=False)
    p.add_argument("--out")
    p.add_argument("--graph-out", help="also dump the filtration graph as u,v,w CSV")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("distance", help="distance between two diagram files")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--metric", choices=["sw", "wasserstein", "bottleneck"], default="sw")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--projections", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("loss", help="alignment losses between teacher and student embeddings")
    p.add_argument("--teacher", required=True)
    p.add_argument("--student", required=True)
    _add_loss_flags(p)
    p.add_argument("--grad", action=argparse.BooleanOptionalAction, default=False)
    p.add_argument("--out")
    p.set_defaults(func=cmd_loss)

    p = sub.add_parser("align", help="gradient-descent alignment of a student to a teacher")
    p.add_argument("--teacher", required=True)
    p.add_argument("--student", required=True)
    _add_loss_flags(p)
    p.add_argument("--map", choices=["free", "affine"], default="free")
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--lr", type=float, default=0.05)
    p.add_argument("--log-every", type=int, default=10)
    p.add_argument("--ablation", action="store_true", help="run the four coefficient settings")
    p.add_argument("--out")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("sweep", help="benchmark campaigns selected by --kind")
    p.add_argument("--kind", choices=["connectivity", "timing", "k"], default="connectivity")
    p.add_argument("--distributions", nargs="+", choices=["uniform", "gaussian"], default=["uniform", "gaussian"])
    p.add_argument("--dim", type=int, default=512)
    p.add_argument("--sizes", nargs="+", type=int, default=[64, 128, 256, 512], action=_Tracking)
    p.add_argument("--lambdas", nargs="+", type=float, default=[1.0, 0.5, 0.0, -0.5, -1.0], action=_Tracking)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ks", nargs="+", type=int, default=[5, 10, 30, 50, 100])
    p.add_argument("--seeds-per-k", type=int, default=100)
    p.add_argument("--teacher")
    p.add_argument("--student")
    p.add_argument("--out-csv")
    p.add_argument("--out-json")
    p.set_defaults(func=cmd_sweep, sizes_given=False, lambdas_given=False)

    p = sub.add_parser("verify-bound", help="randomized certification of the sparsification error bound")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-n", type=int, default=64)
    p.add_argument("--p", type=float, nargs="+", default=[1.0, 2.0])
    p.add_argument("--max-dim", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--certificates", action="store_true", help="include every certificate")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_bound)

    p = sub.add_parser("report", help="sorted-distance and topological distance report for two embedding sets")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--projections", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidInput, TopAlignError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
