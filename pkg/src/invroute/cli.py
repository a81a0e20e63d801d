"""Command line front: instance generation, batch searches, and the API host.

Batch verbs write the same run-log bytes the service exports for an identical
configuration, so results are comparable either way.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .archive import archive_csv
from .evaluation import Evaluator
from .instance import GeneratorConfig, InstanceError, generate, parse_instance, serialize_instance
from .runlog import format_run_log
from .scalarize import ReferencePoint, compute_weights
from .search import (
    MODE_GUIDED,
    MODE_OFFLINE,
    ConfigError,
    SearchConfig,
    construct_initial_front,
    run_guided,
    run_offline,
)


def _parse_range(text: str, kind=float) -> tuple:
    try:
        lo, hi = text.split(":")
        return (kind(lo), kind(hi))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from exc


def _parse_rp(text: str) -> ReferencePoint:
    try:
        g1, g2 = text.split(",")
        return ReferencePoint(float(g1), float(g2))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected g1,g2 got {text!r}") from exc


def _write_out(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _load_instance(path: str):
    try:
        return parse_instance(Path(path).read_text(encoding="utf-8"))
    except (OSError, InstanceError) as exc:
        raise SystemExit(f"error: {exc}")


def _run_batch(args, mode: str) -> int:
    instance = _load_instance(args.instance)
    evaluator = Evaluator(instance)
    start = construct_initial_front(evaluator)
    rp = args.rp if mode == MODE_GUIDED else getattr(args, "rp", None)
    try:
        config = SearchConfig(
            mode=mode,
            evaluation_budget=args.budget,
            reference_point=rp,
            cone_warmup_evals=args.warmup,
            seed=args.seed,
            trace_stride=args.stride,
        )
    except ConfigError as exc:
        raise SystemExit(f"error: {exc}")
    weights = None
    if rp is not None:
        weights = compute_weights([e.outcome for e in start.entries])
    runner = run_guided if mode == MODE_GUIDED else run_offline
    result = runner(evaluator, start, config, weights=weights)
    _write_out(format_run_log(instance.name, config, result), args.out)
    best = result.trace.points[-1].best_achievement
    print(
        f"{mode}: {result.evaluations} evaluations, archive {len(result.archive)}, "
        f"reason {result.trace.termination_reason}"
        + (f", best achievement {best}" if best is not None else ""),
        file=sys.stderr,
    )
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="invroute",
        description="Bi-objective inventory routing: front construction and guided/offline search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a random instance file")
    p_gen.add_argument("--n", type=int, required=True, help="number of customers")
    p_gen.add_argument("--horizon", type=int, required=True, help="number of periods")
    p_gen.add_argument("--mean", type=lambda s: _parse_range(s, int), default=(4, 20),
                       metavar="LO:HI", help="per-customer mean demand range (default 4:20)")
    p_gen.add_argument("--noise", type=float, default=0.25, help="demand noise fraction (default 0.25)")
    p_gen.add_argument("--coords", type=_parse_range, default=(0.0, 100.0),
                       metavar="LO:HI", help="coordinate range (default 0:100)")
    p_gen.add_argument("--capacity", type=int, required=True, help="vehicle capacity")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=None, help="output file (default stdout)")

    p_approx = sub.add_parser("approx", help="construct and print the rough front")
    p_approx.add_argument("--instance", required=True)
    p_approx.add_argument("--out", default=None, help="CSV output (default stdout)")

    for name, help_text in ((MODE_OFFLINE, "full-front baseline run"), (MODE_GUIDED, "reference-point guided run")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--instance", required=True)
        p.add_argument("--budget", type=int, required=True, help="evaluation budget")
        p.add_argument("--rp", type=_parse_rp, default=None, metavar="G1,G2",
                       help="reference point" + (" (required)" if name == MODE_GUIDED else " (trace reporting only)"))
        p.add_argument("--warmup", type=int, default=None,
                       help="evaluations before cone exit may fire (default 1%% of budget, min 100)")
        p.add_argument("--stride", type=int, default=100, help="trace stride (default 100)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="run log output (default stdout)")

    p_serve = sub.add_parser("serve", help="start the HTTP+JSON API host")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8734)
    p_serve.add_argument("--logdir", default=None, help="directory for per-run append-only logs")
    p_serve.add_argument("--run-limit", type=int, default=4, help="concurrent runs per session (default 4)")

    args = parser.parse_args(argv)

    if args.command == "gen":
        cfg = GeneratorConfig(
            n_customers=args.n,
            horizon=args.horizon,
            mean_demand_range=args.mean,
            vehicle_capacity=args.capacity,
            noise_fraction=args.noise,
            coordinate_range=args.coords,
            seed=args.seed,
        )
        try:
            instance = generate(cfg)
        except InstanceError as exc:
            raise SystemExit(f"error: {exc}")
        _write_out(serialize_instance(instance), args.out)
        return 0

    if args.command == "approx":
        instance = _load_instance(args.instance)
        archive = construct_initial_front(Evaluator(instance))
        _write_out(archive_csv(archive), args.out)
        print(f"front of {len(archive)} points (construction stopped after "
              f"{archive.insert_counter} probes)", file=sys.stderr)
        return 0

    if args.command == MODE_OFFLINE:
        return _run_batch(args, MODE_OFFLINE)

    if args.command == MODE_GUIDED:
        if args.rp is None:
            parser.error("guided requires --rp g1,g2")
        return _run_batch(args, MODE_GUIDED)

    if args.command == "serve":
        from .http_api import serve
        from .service import SessionService

        service = SessionService(log_dir=args.logdir, run_limit=args.run_limit)
        if args.logdir is not None:
            loaded = service.load_persisted()
            if loaded:
                print(f"restored {loaded} session(s) from {args.logdir}", file=sys.stderr)
        serve(service, host=args.host, port=args.port)
        return 0

    return 2


if __name__ == "__main__":
    raise SystemExit(main())
