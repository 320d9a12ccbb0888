"""Command-line entry point.

Exit codes: 0 on success, 1 for domain errors (invalid network, oracle size
guard, precondition failures, unreadable files), 2 for usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import statespace
from .engine import TraversalConfig, dump_result, traverse
from .model import NetworkError, load_network, serialize_network
from .oracle import OracleSizeError, diff_results, enumerate_paths_bruteforce
from .topology import KINDS, TopologySpec, generate_topology, run_experiment, write_report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _caps(text: str) -> list[int]:
    try:
        caps = [int(c) for c in text.split(",") if c.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid cap list {text!r}") from None
    if not caps or any(c < 1 for c in caps):
        raise argparse.ArgumentTypeError(f"invalid cap list {text!r}")
    return caps


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="realitypaths", description="Attack-path enumeration over Blackboard networks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="enumerate attack paths in a network file")
    run.add_argument("--network", required=True)
    run.add_argument("--link-cap", type=_positive_int, required=True)
    run.add_argument("--node-cap", type=_positive_int)
    run.add_argument("--time-limit", type=float)
    run.add_argument("--out")
    run.add_argument("--no-runtime", action="store_true",
                     help="write runtime_seconds as null so output is reproducible byte for byte")

    count = sub.add_parser("count", help="state-space and path-count figures")
    count.add_argument("--containers", type=int, required=True)
    count.add_argument("--facts", type=int, required=True)
    which = count.add_mutually_exclusive_group()
    which.add_argument("--exact", action="store_true")
    which.add_argument("--approx", action="store_true")
    which.add_argument("--states", action="store_true")
    which.add_argument("--k", type=int)

    gen = sub.add_parser("gen", help="write a generated network document")
    _topology_args(gen)
    gen.add_argument("--out", required=True)

    verify = sub.add_parser("verify", help="compare the engine with the brute-force oracle")
    verify.add_argument("--network", required=True)
    verify.add_argument("--link-cap", type=_positive_int, required=True)

    bench = sub.add_parser("bench", help="run the topology experiment protocol")
    _topology_args(bench, defaults=True)
    bench.add_argument("--caps", type=_caps, default=[1, 2, 3])
    bench.add_argument("--trials", type=_positive_int, default=20)
    bench.add_argument("--time-limit", type=float, default=3600.0)
    bench.add_argument("--out", required=True)
    return parser


def _topology_args(p: argparse.ArgumentParser, defaults: bool = False) -> None:
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--containers", type=int, required=not defaults, default=6 if defaults else None)
    p.add_argument("--facts", type=int, required=not defaults, default=1 if defaults else None)
    p.add_argument("--rules", type=int, required=not defaults, default=4 if defaults else None)
    p.add_argument("--seed", type=int, required=not defaults, default=0 if defaults else None)
    p.add_argument("--guard-fraction", type=float, default=0.0)


def _spec(args) -> TopologySpec:
    return TopologySpec(args.kind, args.containers, args.facts, args.rules, args.guard_fraction, args.seed)


def _read_network(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise NetworkError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return load_network(text)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_run(args) -> int:
    net = _read_network(args.network)
    cfg = TraversalConfig(args.link_cap, args.node_cap, args.time_limit)
    result = traverse(net, cfg)
    _emit(dump_result(result, include_runtime=not args.no_runtime), args.out)
    print(
        f"{len(result.attack_paths)} attack paths, {result.total_paths_generated} reality paths, "
        f"{result.total_variants_created} variants ({result.termination.value})",
        file=sys.stderr,
    )
    return 0


def _cmd_count(args) -> int:
    params = statespace.StateSpaceParams(args.containers, args.facts)
    if args.states:
        value = statespace.possible_states(params)
    elif args.approx:
        value = statespace.approx_path_count(params)
    elif args.k is not None:
        value = statespace.paths_with_k_intermediates(params, args.k)
    else:
        value = statespace.exact_path_count(params)
    print(statespace.format_count(value))
    return 0


def _cmd_gen(args) -> int:
    net = generate_topology(_spec(args))
    Path(args.out).write_text(serialize_network(net), encoding="utf-8")
    return 0


def _cmd_verify(args) -> int:
    net = _read_network(args.network)
    cfg = TraversalConfig(args.link_cap)
    diff = diff_results(traverse(net, cfg), enumerate_paths_bruteforce(net, cfg))
    print(diff)
    return 0 if diff.equivalent else 1


def _cmd_bench(args) -> int:
    rows = run_experiment(_spec(args), args.caps, args.trials, args.time_limit)
    try:
        write_report(rows, args.out)
    except OSError as exc:
        raise NetworkError(f"cannot write {args.out}: {exc.strerror or exc}") from exc
    return 0


_COMMANDS = {"run": _cmd_run, "count": _cmd_count, "gen": _cmd_gen, "verify": _cmd_verify, "bench": _cmd_bench}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (NetworkError, OracleSizeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
