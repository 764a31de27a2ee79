"""Command-line frontend.

Subcommands wire the pipeline end to end: gen makes instances, analyze
reports structure, design solves placement and topology, verify runs the
numeric observability trials, oracle compares against the brute-force
solvers, export-dot renders an instance for Graphviz. All documents are
JSON on explicit paths; exit codes are stable: 0 success, 2 infeasible,
3 guard exceeded, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .design import design_instance
from .errors import (
    GuardError,
    InfeasibleError,
    ObsnetError,
    ScopeError,
    ShapeError,
    ValidationError,
)
from .generate import generate_instance
from .graphs import (
    export_instance_dot,
    parse_design,
    parse_instance,
    serialize_design,
    serialize_instance,
)
from .network import brute_force_msss, brute_force_mst, msss_best_root, mst_solve
from .sensing import brute_force_assignment, build_parent_cost_matrix, hungarian_solve
from .structural import (
    digraph_from_pattern,
    is_strongly_connected,
    is_structurally_full_rank,
    scc_decompose,
)
from .verification import verify_design_numeric

__all__ = ["build_parser", "run", "main"]


def _canonical(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _load_instance(path: str):
    return parse_instance(_read(path))


def _error_kind(exc: BaseException) -> str:
    if isinstance(exc, GuardError):
        return "guard"
    if isinstance(exc, ScopeError):
        return "scope"
    if isinstance(exc, InfeasibleError):
        return "infeasible"
    if isinstance(exc, ShapeError):
        return "shape"
    if isinstance(exc, ValidationError):
        return "validation"
    if isinstance(exc, ObsnetError):
        return "error"
    if isinstance(exc, OSError):
        return "io"
    return "internal"


def _print_error(exc: BaseException) -> None:
    body = {"error": {"kind": _error_kind(exc), "message": str(exc)}}
    print(json.dumps(body, indent=2, sort_keys=True), file=sys.stderr)


# --- subcommands ------------------------------------------------------------


def cmd_analyze(args: argparse.Namespace) -> int:
    instance = _load_instance(args.input)
    partition = scc_decompose(digraph_from_pattern(instance.system_pattern))
    doc = {
        "n": instance.n,
        "m": instance.m,
        "structurally_full_rank": is_structurally_full_rank(instance.system_pattern),
        "network_strongly_connected": is_strongly_connected(
            instance.network.unweighted()
        ),
        "network_undirected": instance.network_undirected,
    }
    doc.update(partition.to_json_dict())
    sys.stdout.write(_canonical(doc))
    return 0


def cmd_design(args: argparse.Namespace) -> int:
    instance = _load_instance(args.input)
    root = None
    if args.root is not None:
        if not 1 <= args.root <= instance.m:
            raise ValidationError(
                f"--root must name a sensor in 1..{instance.m}, got {args.root}"
            )
        root = args.root - 1
    result = design_instance(instance, root=root, exact=args.exact)
    _write(args.out, serialize_design(result))
    print(
        f"design written to {args.out}: sensing cost {result.sensing_cost},"
        f" networking cost {result.networking_cost} ({result.network_optimality})"
    )
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    instance = _load_instance(args.input)
    design = parse_design(_read(args.design), instance.n, instance.m)
    report = verify_design_numeric(
        instance, design, trials=args.trials, seed=args.seed, tolerance=args.tol
    )
    sys.stdout.write(_canonical(report.to_json_dict()))
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    instance = _load_instance(args.input)
    if not is_structurally_full_rank(instance.system_pattern):
        raise ScopeError(
            "system pattern is not structurally full rank; oracle comparison"
            " covers structurally full-rank systems only"
        )
    partition = scc_decompose(digraph_from_pattern(instance.system_pattern))
    matrix = build_parent_cost_matrix(instance, partition)
    fast = hungarian_solve(matrix)
    slow = brute_force_assignment(matrix)

    if instance.m == 1:
        heuristic_cost, oracle_cost, method = 0.0, 0.0, "mst"
    elif instance.network_undirected:
        heuristic = mst_solve(instance.network)
        oracle = brute_force_mst(instance.network)
        heuristic_cost, oracle_cost, method = (
            heuristic.total_cost, oracle.total_cost, heuristic.method,
        )
    else:
        heuristic = msss_best_root(instance.network)
        oracle = brute_force_msss(instance.network)
        heuristic_cost, oracle_cost, method = (
            heuristic.total_cost, oracle.total_cost, heuristic.method,
        )
    gap = 0.0 if oracle_cost == 0 else (heuristic_cost - oracle_cost) / oracle_cost
    doc = {
        "sensing": {
            "hungarian_cost": fast.total_cost,
            "brute_force_cost": slow.total_cost,
            "match": fast.total_cost == slow.total_cost,
        },
        "networking": {
            "method": method,
            "heuristic_cost": heuristic_cost,
            "brute_force_cost": oracle_cost,
            "gap": gap,
        },
    }
    sys.stdout.write(_canonical(doc))
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    instance = generate_instance(args.n, args.m, args.density, args.seed)
    _write(args.out, serialize_instance(instance))
    print(f"instance written to {args.out}")
    return 0


def cmd_export_dot(args: argparse.Namespace) -> int:
    instance = _load_instance(args.input)
    _write(args.out, export_instance_dot(instance))
    print(f"DOT graph written to {args.out}")
    return 0


# --- parser and entry point -------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="obsnet",
        description=(
            "Cost-optimal sensor placement and strongly connected"
            " communication topologies for distributed state estimation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("analyze", help="structural report for an instance")
    p.add_argument("--in", dest="input", required=True, metavar="F",
                   help="instance JSON file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("design", help="solve sensor placement and topology")
    p.add_argument("--in", dest="input", required=True, metavar="F",
                   help="instance JSON file")
    p.add_argument("--out", required=True, metavar="F", help="design JSON output path")
    roots = p.add_mutually_exclusive_group()
    roots.add_argument("--root", type=int, metavar="K",
                       help="fix the branching root to sensor K (1-based)")
    roots.add_argument("--all-roots", action="store_true",
                       help="try every root and keep the cheapest union (default)")
    p.add_argument("--exact", action="store_true",
                   help="solve the directed topology exactly by brute force"
                        " (small networks only; overrides root flags)")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("verify", help="numeric observability trials for a design")
    p.add_argument("--in", dest="input", required=True, metavar="F",
                   help="instance JSON file")
    p.add_argument("--design", required=True, metavar="F", help="design JSON file")
    p.add_argument("--trials", type=int, default=20, metavar="T",
                   help="number of random realizations (default 20)")
    p.add_argument("--seed", type=int, default=0, metavar="S",
                   help="seed for the realization streams (default 0)")
    p.add_argument("--tol", type=float, default=1e-8, metavar="X",
                   help="relative rank tolerance (default 1e-8)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="compare solvers against brute force")
    p.add_argument("--in", dest="input", required=True, metavar="F",
                   help="instance JSON file")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate a random solvable instance")
    p.add_argument("--n", type=int, required=True, metavar="N", help="number of states")
    p.add_argument("--m", type=int, required=True, metavar="M", help="number of sensors")
    p.add_argument("--density", type=float, default=0.3, metavar="D",
                   help="probability of optional extra edges (default 0.3)")
    p.add_argument("--seed", type=int, default=0, metavar="S",
                   help="generator seed (default 0)")
    p.add_argument("--out", required=True, metavar="F", help="instance JSON output path")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("export-dot", help="render an instance as Graphviz DOT")
    p.add_argument("--in", dest="input", required=True, metavar="F",
                   help="instance JSON file")
    p.add_argument("--out", required=True, metavar="F", help="DOT output path")
    p.set_defaults(func=cmd_export_dot)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 means infeasible here, so remap
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except ObsnetError as exc:
        _print_error(exc)
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001 - exit-code contract over traceback
        _print_error(exc)
        return 1


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))
