"""Command-line interface: build, certify, gen-lowerbound, dist, trial."""

from __future__ import annotations

import argparse
import json
import sys

from .clustering import DEFAULT_ALPHA, DEFAULT_BETA, ClusteringInstance
from .coreset import CoresetConfig, build_coreset
from .evaluation import candidate_pool, certify, concentration_trial, lower_bound_instance
from .geometry import CurvesetError
from .io import load_coreset, load_dataset, read_records, record_object, save_coreset, save_dataset
from .metrics import FrechetTolerance, MetricKind, distance

METRICS = [m.value for m in MetricKind]


def _metric(value: str) -> MetricKind:
    try:
        return MetricKind(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown metric {value!r}") from None


def cmd_build(args) -> int:
    inst = load_dataset(args.input, args.metric, k=args.k, l=args.l)
    cfg = CoresetConfig(eps=args.eps, delta_exponent=args.delta, size_constant=args.size_constant,
                        size_override=args.size, seed=args.seed, alpha=args.alpha, beta=args.beta)
    cs = build_coreset(inst, cfg)
    save_coreset(cs, args.output, timestamp=not args.no_timestamp)
    print(f"a={cs.meta.a} S={cs.meta.S!r} opt_prime={cs.meta.opt_prime!r}")
    return 0


def run_certify(input_path, coreset_path, candidates: int, seed: int):
    cs = load_coreset(coreset_path)
    inst = load_dataset(input_path, cs.meta.metric, k=cs.meta.k, l=cs.meta.l)
    pool = candidate_pool(inst, cs.meta.k, cs.meta.l, candidates, seed)
    return certify(inst, cs, pool)


def cmd_certify(args) -> int:
    report = run_certify(args.input, args.coreset, args.candidates, args.seed)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=1)
            fh.write("\n")
    print(f"max_error={report.max_error!r} mean_error={report.mean_error!r} "
          f"eps={report.eps!r} passed={report.passed}")
    return 0 if report.passed else 1


def cmd_gen_lowerbound(args) -> int:
    save_dataset(lower_bound_instance(args.n, args.delta, args.metric), args.output,
                 with_weights=False)
    return 0


def cmd_dist(args) -> int:
    objs = []
    for path in (args.a, args.b):
        lineno, rec = read_records(path)[0]
        objs.append(record_object(rec, lineno))
    tol = FrechetTolerance(relative=args.tol) if args.tol else FrechetTolerance()
    print(repr(distance(args.metric, objs[0], objs[1], tol)))
    return 0


def cmd_trial(args) -> int:
    inst = load_dataset(args.input, args.metric, k=args.k, l=args.l)
    centers = candidate_pool(inst, args.k, args.l, 1, args.seed).center_sets[0]
    res = concentration_trial(inst, centers, args.eps, args.trials, args.seed)
    note = " (S <= 1, sample size clamped to 1)" if res.clamped else ""
    print(f"failure_rate={res.failure_rate!r} failures={res.failures} trials={res.trials} "
          f"a={res.a} S={res.S!r}{note}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curveset", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a coreset")
    p.add_argument("--input", required=True)
    p.add_argument("--metric", type=_metric, required=True, metavar="{" + "|".join(METRICS) + "}")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, default=1.0, help="exponent of m in the size bound")
    p.add_argument("--size-constant", type=float, default=1.0)
    p.add_argument("--size", type=int, default=None, help="override the sample size")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--beta", type=float, default=DEFAULT_BETA)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--no-timestamp", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("certify", help="measure coreset error on a candidate pool")
    p.add_argument("--input", required=True)
    p.add_argument("--coreset", required=True)
    p.add_argument("--candidates", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("gen-lowerbound", help="write the lower-bound instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=float, default=10.0)
    p.add_argument("--metric", type=_metric, required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_gen_lowerbound)

    p = sub.add_parser("dist", help="distance between the first records of two files")
    p.add_argument("--metric", type=_metric, required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--tol", type=float, default=None, help="relative Fréchet tolerance")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("trial", help="empirical failure rate of a fixed-size sample")
    p.add_argument("--input", required=True)
    p.add_argument("--metric", type=_metric, default=MetricKind.CONTINUOUS_FRECHET)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_trial)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CurvesetError, OSError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "reason": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
