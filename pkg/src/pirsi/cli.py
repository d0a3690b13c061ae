"""Command-line interface.

Subcommands: ``rate`` (closed-form plan), ``simulate`` (one full retrieval
round against a database file), ``privacy-exact`` (rational-arithmetic
posterior check), ``privacy-mc`` (sampled total-variation check), and
``oracle`` (brute force vs closed form sweep).  All canonical output goes
to stdout and is byte-identical across runs with the same flags and seed;
diagnostics and timings go to stderr.  Exit codes: 0 success, 1 violated
invariant, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time

from . import wire
from .oracle import DEFAULT_K_CAP, argmin_solutions, brute_force_rate
from .privacy import monte_carlo_tvd, posterior
from .rate import ProblemParams, compute_plan
from .scheme import DemandSpec, build_layout

EXACT_K_CAP = 13


def _parse_indices(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("PIR_SEED")
    if env is not None:
        return int(env)
    return 0


def _params_from(args, parser) -> ProblemParams:
    try:
        return ProblemParams(k=args.k, m=args.m, n=args.n)
    except ValueError as err:
        parser.error(str(err))


def _add_instance_flags(sub):
    sub.add_argument("--k", type=int, required=True, help="total message count")
    sub.add_argument("--m", type=int, required=True, help="side-information count")
    sub.add_argument("--n", type=int, required=True, help="demand count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pirsi",
        description="Multi-message private information retrieval with side information",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_rate = subs.add_parser("rate", help="closed-form plan and minimum download")
    _add_instance_flags(p_rate)

    p_sim = subs.add_parser("simulate", help="run one retrieval round against a database file")
    _add_instance_flags(p_sim)
    p_sim.add_argument("--demands", type=_parse_indices, required=True, help="e.g. 2,5")
    p_sim.add_argument("--side", type=_parse_indices, default=(), help="e.g. 1,4,6,7,9")
    p_sim.add_argument("--db", required=True, help="database file path")
    p_sim.add_argument("--seed", type=int, default=None, help="RNG seed (default: $PIR_SEED or 0)")

    p_exact = subs.add_parser("privacy-exact", help="exact posterior-uniformity check")
    _add_instance_flags(p_exact)
    p_exact.add_argument("--seed", type=int, default=None, help="seed for the sampled layout")

    p_mc = subs.add_parser("privacy-mc", help="sampled query-distribution comparison")
    _add_instance_flags(p_mc)
    p_mc.add_argument("--wa", type=_parse_indices, required=True, help="first demand set")
    p_mc.add_argument("--wb", type=_parse_indices, required=True, help="second demand set")
    p_mc.add_argument("--trials", type=int, default=10000)
    p_mc.add_argument("--null-rounds", type=int, default=20)
    p_mc.add_argument("--seed", type=int, default=None)

    p_oracle = subs.add_parser("oracle", help="brute force vs closed form sweep")
    p_oracle.add_argument("--k-max", type=int, required=True)
    p_oracle.add_argument(
        "--exhaustive",
        action="store_true",
        help="also require the plan profile among the brute-force argmins",
    )
    return parser


def _cmd_rate(args, parser) -> int:
    params = _params_from(args, parser)
    plan = compute_plan(params)
    print(wire.canonical(wire.plan_doc(params, plan)))
    return 0


def _cmd_simulate(args, parser) -> int:
    params = _params_from(args, parser)
    try:
        with open(args.db, "r", encoding="ascii") as fh:
            db = wire.read_db(fh)
    except OSError as err:
        parser.error(f"cannot read database: {err}")
    if db.k != params.k:
        parser.error(f"database holds {db.k} messages but --k is {params.k}")
    widest = max(compute_plan(params).size_profile)
    if db.field.p <= widest:
        parser.error(
            f"database modulus {db.field.p} must exceed the widest subspace ({widest})"
        )
    try:
        spec = DemandSpec(
            demands=args.demands,
            side=frozenset(args.side),
            side_values={idx: db[idx] for idx in args.side},
        )
        spec.validate_against(params)
    except ValueError as err:
        parser.error(str(err))

    seed = _resolve_seed(args.seed)
    started = time.perf_counter()
    result = wire.wire_round(params, spec, db, random.Random(seed))
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    print(wire.canonical(wire.transcript_doc(params, seed, result)))
    print(f"timing_ms={elapsed_ms:.3f}", file=sys.stderr)

    mismatches = [idx for idx in spec.demands if result.decoded[idx] != db[idx]]
    if mismatches:
        print(f"decode mismatch at indices {mismatches}", file=sys.stderr)
        return 1
    transmissions = result.query.total_rows
    if transmissions != result.layout.plan.r_star:
        print(
            f"transmitted {transmissions} symbols, plan says {result.layout.plan.r_star}",
            file=sys.stderr,
        )
        return 1
    return 0


def _cmd_privacy_exact(args, parser) -> int:
    params = _params_from(args, parser)
    if params.k > EXACT_K_CAP:
        parser.error(
            f"exact mode enumerates all C({params.k},{params.n}) demand sets and is "
            f"capped at k <= {EXACT_K_CAP}; use privacy-mc for larger instances"
        )
    rng = random.Random(_resolve_seed(args.seed))
    demands = tuple(sorted(rng.sample(range(1, params.k + 1), params.n)))
    complement = [i for i in range(1, params.k + 1) if i not in demands]
    side = frozenset(rng.sample(complement, params.m))
    layout = build_layout(params, DemandSpec(demands, side), rng)
    report = posterior(layout, params)
    print(wire.canonical(wire.posterior_doc(report, layout)))
    if not report.uniform:
        print(
            f"posterior deviates from uniform by {wire.frac_str(report.max_deviation)}",
            file=sys.stderr,
        )
        return 1
    return 0


def _cmd_privacy_mc(args, parser) -> int:
    params = _params_from(args, parser)
    if args.trials < 1:
        parser.error("--trials must be positive")
    try:
        report = monte_carlo_tvd(
            params,
            args.wa,
            args.wb,
            trials=args.trials,
            rng=random.Random(_resolve_seed(args.seed)),
            null_rounds=args.null_rounds,
        )
    except ValueError as err:
        parser.error(str(err))
    print(wire.canonical(wire.tvd_doc(report)))
    return 0


def _cmd_oracle(args, parser) -> int:
    if not 1 <= args.k_max <= DEFAULT_K_CAP:
        parser.error(f"--k-max must be in 1..{DEFAULT_K_CAP}")
    failures = 0
    instances = 0
    print("k m n oracle formula match")
    for k in range(1, args.k_max + 1):
        for n in range(1, k + 1):
            for m in range(0, k - n + 1):
                params = ProblemParams(k=k, m=m, n=n)
                plan = compute_plan(params)
                found = brute_force_rate(params)
                match = found == plan.r_star
                if match and args.exhaustive:
                    sols = argmin_solutions(params)
                    match = any(
                        s.parts == plan.size_profile and s.m_vector == plan.side_profile
                        for s in sols
                    )
                instances += 1
                if not match:
                    failures += 1
                print(f"{k} {m} {n} {found} {plan.r_star} {'true' if match else 'false'}")
    print(f"checked {instances} instances, {failures} mismatches", file=sys.stderr)
    return 1 if failures else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "rate": _cmd_rate,
        "simulate": _cmd_simulate,
        "privacy-exact": _cmd_privacy_exact,
        "privacy-mc": _cmd_privacy_mc,
        "oracle": _cmd_oracle,
    }
    try:
        return handlers[args.command](args, parser)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
