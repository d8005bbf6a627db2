"""Command-line entry point: ``linkbalance <subcommand> ...``.

Exit status: 0 success, 2 invalid input, 3 search budget exceeded,
1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench
from .baselines import BF_BUDGET, brute_force, dspa_route
from .errors import BudgetExceeded, InputError
from .ga import GAConfig, optimize
from .topology import (
    PROFILES,
    TopologyProfile,
    connectivity,
    generate_flows,
    generate_topology,
    get_profile,
    read_flows,
    read_topology,
    weights_document,
    write_flows,
    write_topology,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _u64(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return value


def _ga_flags(p, weight_max_default=9):
    g = p.add_argument_group("genetic algorithm")
    g.add_argument("--pop-size", type=int, default=50)
    g.add_argument("--mutation-prob", type=float, default=0.10)
    g.add_argument("--generations", type=int, default=500)
    g.add_argument("--stagnation", type=int, default=100)
    g.add_argument("--weight-max", type=int, default=weight_max_default)


def _profile_flags(p):
    g = p.add_argument_group("topology profile")
    g.add_argument("--profile", choices=sorted(PROFILES), help="named network profile")
    g.add_argument("--nodes", type=int, help="custom profile: node count")
    g.add_argument("--edges", type=int, help="custom profile: directed edge count")


def _profile(args, flow_count=None) -> TopologyProfile:
    if args.nodes is not None or args.edges is not None:
        if args.nodes is None or args.edges is None:
            raise InputError("--nodes and --edges must be given together")
        base = get_profile(args.profile) if args.profile else None
        v = getattr(args, "weight_max", None) or (base.weight_max if base else 9)
        fc = flow_count if flow_count is not None else (base.flow_count if base else args.nodes)
        profile = TopologyProfile(f"n{args.nodes}e{args.edges}", args.nodes, args.edges, v, fc)
    elif args.profile:
        profile = get_profile(args.profile)
    else:
        raise InputError("give --profile or --nodes/--edges")
    profile.check()
    return profile


def _ga_config(args, seed) -> GAConfig:
    return GAConfig(
        population_size=args.pop_size,
        mutation_prob=args.mutation_prob,
        max_generations=args.generations,
        stagnation_limit=args.stagnation,
        weight_max=args.weight_max or 9,
        rng_seed=seed,
    )


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_optimize(args):
    graph = read_topology(args.topology)
    flows = read_flows(args.flows, graph)
    config = _ga_config(args, bench.derive_seed(args.seed, "ga"))
    before = dspa_route(graph, flows, config.weight_max, bench.derive_seed(args.seed, "before"))
    result = optimize(graph, flows, config)
    doc = json.dumps(weights_document(graph, result.best_weights))
    _emit(doc + "\n", args.out)
    print(
        f"before_max_load={before.max_load} after_max_load={result.best_fitness} "
        f"elapsed={result.elapsed:.6f}s generations={result.generations_run} stop={result.stop_reason}",
        file=sys.stderr,
    )


def cmd_bruteforce(args):
    graph = read_topology(args.topology)
    flows = read_flows(args.flows, graph)
    result = brute_force(graph, flows, args.weight_max, args.budget)
    _emit(f"optimum={result.max_load} weights={list(result.weights.weights)}\n", args.out)
    print(f"elapsed={result.elapsed:.6f}s candidates={args.weight_max ** graph.edge_count}", file=sys.stderr)


def _report(report, args):
    _emit(report.to_csv(), args.out)
    for row in report.aggregates():
        ants = f" ants={row['ants']}" if row["ants"] else ""
        eff = row["effectiveness_pct"]
        eff = f" effectiveness={'NA' if eff is None else str(eff) + '%'}" if row["before_max_load"] is not None else ""
        print(
            f"{row['profile']} {row['algorithm']}{ants} flows={row['flow_count']} runs={row['runs']} "
            f"mean_max_load={row['after_max_load']:.3f}{eff} mean_elapsed={row['elapsed_s']:.6f}s",
            file=sys.stderr,
        )


def cmd_compare(args):
    profile = _profile(args, args.flow_count)
    fc = args.flow_count if args.flow_count is not None else profile.flow_count
    report = bench.run_compare(
        profile, fc, args.runs, args.seed, _ga_config(args, 0), ants=args.ants,
        aco_iterations=args.iterations, weight_max=args.weight_max,
    )
    _report(report, args)


def cmd_effectiveness(args):
    profile = _profile(args)
    report = bench.run_effectiveness(
        profile, args.flow_counts, args.runs, args.seed, _ga_config(args, 0), weight_max=args.weight_max
    )
    _report(report, args)


def cmd_timing(args):
    profiles = [get_profile(name) for name in args.profiles]
    config = _ga_config(args, 0)
    report = bench.run_timing(profiles, args.runs, args.seed, config, weight_max=args.weight_max)
    _report(report, args)


def cmd_generate(args):
    profile = _profile(args, args.flow_count)
    graph = generate_topology(profile, bench.derive_seed(args.seed, "topology"))
    fc = args.flow_count if args.flow_count is not None else profile.flow_count
    flows = generate_flows(graph, fc, bench.derive_seed(args.seed, "flows"))
    write_topology(graph, args.topology)
    if args.flows:
        write_flows(flows, args.flows)
    print(
        f"{profile.name}: nodes={graph.node_count} edges={graph.edge_count} "
        f"connectivity={connectivity(graph)}% flows={len(flows)}",
        file=sys.stderr,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linkbalance", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="optimize link weights for a topology and flow set")
    p.add_argument("--topology", required=True)
    p.add_argument("--flows", required=True)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--out", help="weights document path (default: stdout)")
    _ga_flags(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("bruteforce", help="exhaustive optimum for a small instance")
    p.add_argument("--topology", required=True)
    p.add_argument("--flows", required=True)
    p.add_argument("--weight-max", type=int, default=5)
    p.add_argument("--budget", type=int, default=BF_BUDGET)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bruteforce)

    p = sub.add_parser("compare", help="GA vs ant colony vs random weights")
    _profile_flags(p)
    p.add_argument("--flow-count", type=int)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--out")
    p.add_argument("--ants", type=int, nargs="+", default=[5])
    p.add_argument("--iterations", type=int, default=50)
    _ga_flags(p, None)
    p.set_defaults(func=cmd_compare, profile="n10e39")

    p = sub.add_parser("effectiveness", help="max load before/after optimization by flow count")
    _profile_flags(p)
    p.add_argument("--flow-counts", type=int, nargs="+", default=[20, 30, 40, 50, 100, 200])
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--out")
    _ga_flags(p, None)
    p.set_defaults(func=cmd_effectiveness, profile="n10e39")

    p = sub.add_parser("timing", help="mean optimization time per profile")
    p.add_argument("--profiles", nargs="+", default=list(PROFILES), choices=sorted(PROFILES))
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--out")
    _ga_flags(p, None)
    p.set_defaults(func=cmd_timing)

    p = sub.add_parser("generate", help="write a random topology and flow set")
    _profile_flags(p)
    p.add_argument("--flow-count", type=int)
    p.add_argument("--weight-max", type=int)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--topology", required=True, help="output topology path")
    p.add_argument("--flows", help="output flows path")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
