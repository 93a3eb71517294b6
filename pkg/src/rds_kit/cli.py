"""Command-line interface; every subcommand emits one JSON report.

Exit codes: 0 success, 1 negative decision (e.g. not graphical), 2 usage or
input error, 3 exhaustive-search guard breach.  Reports echo the full
configuration including seeds, so identical invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import counting, oracle, paths
from .chain import default_burn_in, exact_kernel, run_chain
from .construct import greedy_construct
from .core import (
    ProblemInstance,
    Realization,
    instance_to_json,
    make_realization,
    validate_instance,
)
from .errors import RdsKitError, TooLarge, ValidationError

SCHEMA = "rds-kit/1"

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


class _CliFailure(Exception):
    def __init__(self, code: int, payload: dict):
        self.code = code
        self.payload = payload


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _read_json(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
            return json.loads(text)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise _CliFailure(
            EXIT_USAGE,
            {
                "error": "malformed JSON",
                "path": path,
                "line": exc.lineno,
                "column": exc.colno,
                "message": exc.msg,
            },
        ) from None
    except OSError as exc:
        raise _CliFailure(EXIT_USAGE, {"error": str(exc), "path": path}) from None


def _load_instance(path: str) -> ProblemInstance:
    try:
        return validate_instance(_read_json(path))
    except ValidationError as exc:
        raise _CliFailure(
            EXIT_USAGE, {"error": type(exc).__name__, "message": str(exc)}
        ) from None


def _load_realization(inst: ProblemInstance, arg: str) -> Realization:
    """A realization from an inline JSON edge list or a file holding one."""
    if arg.lstrip().startswith(("[", "{")):
        try:
            data = json.loads(arg)
        except json.JSONDecodeError as exc:
            raise _CliFailure(
                EXIT_USAGE, {"error": "malformed JSON", "message": exc.msg}
            ) from None
    else:
        data = _read_json(arg)
    pairs = data.get("edges") if isinstance(data, dict) else data
    if not isinstance(pairs, list) or not all(
        isinstance(p, (list, tuple)) and len(p) == 2 for p in pairs
    ):
        raise _CliFailure(
            EXIT_USAGE,
            {"error": "BadRealization", "message": "expected an edge list of pairs"},
        )
    try:
        return make_realization(inst, pairs)
    except RdsKitError as exc:
        raise _CliFailure(
            EXIT_USAGE, {"error": type(exc).__name__, "message": str(exc)}
        ) from None


def _config_echo(args: argparse.Namespace) -> dict:
    keep = ("seed", "steps", "burn_in", "samples", "max_states", "max_delta", "threads")
    return {k: getattr(args, k) for k in keep if hasattr(args, k)}


def _cmd_check(args) -> tuple[int, dict]:
    inst = _load_instance(args.instance)
    real = greedy_construct(inst)
    payload = {"graphical": real is not None}
    return (EXIT_OK if real is not None else EXIT_NEGATIVE), payload


def _cmd_construct(args) -> tuple[int, dict]:
    inst = _load_instance(args.instance)
    real = greedy_construct(inst)
    if real is None:
        return EXIT_NEGATIVE, {"graphical": False}
    return EXIT_OK, {"graphical": True, "edges": real.to_pairs()}


def _cmd_sample(args) -> tuple[int, dict]:
    inst = _load_instance(args.instance)
    start = greedy_construct(inst)
    if start is None:
        return EXIT_NEGATIVE, {"graphical": False}
    steps = args.steps if args.steps is not None else default_burn_in(inst)
    seeds = np.random.SeedSequence(args.seed).generate_state(args.samples, dtype=np.uint64)

    def one(chain_seed: int) -> list[list[int]]:
        return run_chain(inst, start, steps, int(chain_seed)).to_pairs()

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            samples = list(pool.map(one, seeds))
    else:
        samples = [one(s) for s in seeds]
    return EXIT_OK, {"samples": samples, "steps": steps, "warn_not_half_regular": not inst.half_regular}


def _cmd_enumerate(args) -> tuple[int, dict]:
    inst = _load_instance(args.instance)
    states = oracle.enumerate_all(inst, max_chords=args.max_delta or 40)
    return EXIT_OK, {
        "count": str(len(states)),
        "realizations": [s.to_pairs() for s in states],
    }


def _cmd_count(args) -> tuple[int, dict]:
    inst = _load_instance(args.instance)
    if args.exact:
        report = counting.exact_count_report(inst)
        code = EXIT_OK if report.value else EXIT_NEGATIVE
        return code, report.to_json_dict()
    report = counting.approx_count(
        inst,
        samples_per_level=args.samples,
        burn_in=args.burn_in,
        seed=args.seed,
    )
    code = EXIT_OK if report.graphical else EXIT_NEGATIVE
    return code, report.to_json_dict()


def _cmd_distance(args) -> tuple[int, dict]:
    inst = _load_instance(args.instance)
    G = _load_realization(inst, args.from_real)
    H = _load_realization(inst, args.to_real)
    from .swaps import max_alternating_circuit_count, swap_distance

    delta = len(G.edges ^ H.edges)
    mc = max_alternating_circuit_count(G, H, max_delta=args.max_delta)
    return EXIT_OK, {
        "weight": swap_distance(G, H, max_delta=args.max_delta),
        "delta": delta,
        "mc": mc,
    }


def _cmd_kernel(args) -> tuple[int, dict]:
    inst = _load_instance(args.instance)
    report = exact_kernel(inst, max_states=args.max_states)
    return EXIT_OK, report.to_json_dict()


def _cmd_audit_paths(args) -> tuple[int, dict]:
    inst = _load_instance(args.instance)
    states = oracle.enumerate_all(inst)
    if args.max_states and len(states) > args.max_states:
        raise TooLarge(f"{len(states)} states exceed --max-states {args.max_states}")
    pair_reports = []
    max_h = 0
    for X in states:
        for Y in states:
            if X.key == Y.key:
                continue
            rep = paths.verify_theta_omega(X, Y, states)
            max_h = max(max_h, rep.max_hamming)
            pair_reports.append(
                {
                    "from": X.to_pairs(),
                    "to": Y.to_pairs(),
                    "moves": len(rep.steps),
                    "max_hamming": rep.max_hamming,
                    "theta_ok": rep.theta_ok,
                    "omega_ok": rep.omega_ok,
                }
            )
    return EXIT_OK, {
        "states": len(states),
        "ordered_pairs": len(pair_reports),
        "max_hamming": max_h,
        "hamming_bound": paths.HAMMING_BOUND,
        "pairs": pair_reports if args.verbose else None,
        "all_ok": True,
    }


def _cmd_convert_directed(args) -> tuple[int, dict]:
    inst = _load_instance(args.instance)
    if inst.kind != "directed":
        raise _CliFailure(
            EXIT_USAGE, {"error": "NotDirectedKind", "message": "instance is not directed"}
        )
    bip = instance_to_json(inst)
    bip["kind"] = "bipartite"
    bip["u_degrees"] = bip.pop("out_degrees")
    bip["w_degrees"] = bip.pop("in_degrees")
    return EXIT_OK, {"instance": bip}


def _cmd_bench(args) -> tuple[int, dict]:
    inst = _load_instance(args.instance)
    start = greedy_construct(inst)
    if start is None:
        return EXIT_NEGATIVE, {"graphical": False}
    t0 = time.perf_counter()
    run_chain(inst, start, args.steps, args.seed)
    chain_secs = time.perf_counter() - t0
    payload = {
        "proposals": args.steps,
        "proposals_per_second": round(args.steps / chain_secs, 1),
    }
    try:
        t0 = time.perf_counter()
        exact_kernel(inst, max_states=args.max_states)
        payload["kernel_seconds"] = round(time.perf_counter() - t0, 4)
    except TooLarge:
        payload["kernel_seconds"] = None
    return EXIT_OK, payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rds-kit",
        description="construct, sample, audit and count restricted degree sequence realizations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("instance", help="instance JSON path, or - for stdin")
        p.add_argument("--format", choices=["json"], default="json")
        p.set_defaults(func=func)
        return p

    add("check", _cmd_check, help="greedy graphicality decision")
    add("construct", _cmd_construct, help="emit one deterministic realization")

    p = add("sample", _cmd_sample, help="run the chain and emit realizations")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)

    p = add("enumerate", _cmd_enumerate, help="exhaustively list realizations")
    p.add_argument("--max-delta", type=int, default=40, dest="max_delta")

    p = add("count", _cmd_count, help="count realizations")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--approx", action="store_true")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--burn-in", type=int, default=None, dest="burn_in")
    p.add_argument("--seed", type=int, default=0)

    p = add("distance", _cmd_distance, help="minimum swap weight between realizations")
    p.add_argument("--from", required=True, dest="from_real", metavar="REAL")
    p.add_argument("--to", required=True, dest="to_real", metavar="REAL")
    p.add_argument("--max-delta", type=int, default=16, dest="max_delta")

    p = add("kernel", _cmd_kernel, help="exact rational transition matrix")
    p.add_argument("--max-states", type=int, default=4096, dest="max_states")

    p = add("audit-paths", _cmd_audit_paths, help="canonical path audits over all pairs")
    p.add_argument("--max-states", type=int, default=256, dest="max_states")
    p.add_argument("--verbose", action="store_true")

    add("convert-directed", _cmd_convert_directed, help="directed instance to bipartite form")

    p = add("bench", _cmd_bench, help="machine-dependent throughput numbers")
    p.add_argument("--steps", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-states", type=int, default=64, dest="max_states")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    base = {"schema": SCHEMA, "command": args.command}
    try:
        code, payload = args.func(args)
    except _CliFailure as exc:
        _emit({**base, **exc.payload})
        return exc.code
    except TooLarge as exc:
        _emit({**base, "error": type(exc).__name__, "message": str(exc)})
        return EXIT_GUARD
    except RdsKitError as exc:
        _emit({**base, "error": type(exc).__name__, "message": str(exc)})
        return EXIT_USAGE
    payload = {**base, "config": _config_echo(args), **payload}
    _emit(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
