"""Command-line front end tying the solvers together.

Machine-readable results go to standard output, diagnostics to standard
error.  Exit codes: 0 success, 1 invalid input, 2 a decision-style
command answered false (decide below threshold, unsatisfiable formula,
invalid alignment), 3 exact-search budget exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import bench as bench_mod
from .approx import STRATEGIES, approx_align
from .core import validate_alignment
from .errors import BudgetExceededError, DagAlignError
from .exact import DEFAULT_NODE_BUDGET, decide_alignment, exact_align, exact_align_isomorphic
from .sat_gadget import (
    alignment_to_assignment,
    evaluate,
    parse_dimacs,
    sat_brute,
    sat_to_alignment,
)
from .serialize import (
    format_weight,
    parse_alignment,
    parse_instance,
    serialize_alignment,
    serialize_instance,
)
from .trees import chain_align_table, tree_align_tables

__all__ = ["cli_main", "main"]


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        print(text)
    else:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


def _table_csv(values) -> str:
    return "\n".join(",".join(format_weight(x) for x in row) for row in values)


def _cmd_solve(args) -> int:
    instance = parse_instance(_read(args.instance))
    if args.decide is not None:
        x, y = args.decide
        answer = decide_alignment(instance, x, int(y), node_budget=args.budget)
        print(
            '{{"decision": {}, "x": {}, "y": {}}}'.format(
                "true" if answer else "false", format_weight(x), int(y)
            )
        )
        return 0 if answer else 2
    if args.restricted:
        alignment = exact_align_isomorphic(instance, node_budget=args.budget)
        print(serialize_alignment(instance, alignment))
        return 0
    alignment, stats = exact_align(instance, node_budget=args.budget)
    print(serialize_alignment(instance, alignment))
    print(
        f"nodes_expanded={stats.nodes_expanded} elapsed={stats.elapsed:.3f}s",
        file=sys.stderr,
    )
    return 0


def _cmd_approx(args) -> int:
    instance = parse_instance(_read(args.instance))
    alignment = approx_align(instance, args.strategy)
    extra = None
    if args.compare_exact:
        exact, _ = exact_align(instance)
        if alignment.total_weight > 0:
            ratio = format_weight(exact.total_weight / alignment.total_weight)
        elif exact.total_weight == 0:
            ratio = format_weight(1.0)
        else:
            ratio = "null"
        extra = [("ratio", ratio)]
    print(serialize_alignment(instance, alignment, extra_fields=extra))
    return 0


def _cmd_tree(args) -> int:
    instance = parse_instance(_read(args.instance))
    alignment, tables = tree_align_tables(instance)
    print(serialize_alignment(instance, alignment))
    if args.dump_table:
        print(_table_csv(tables.values), file=sys.stderr)
    return 0


def _cmd_chain(args) -> int:
    instance = parse_instance(_read(args.instance))
    alignment, table = chain_align_table(instance)
    print(serialize_alignment(instance, alignment))
    if args.dump_table:
        print(_table_csv(table), file=sys.stderr)
    return 0


def _cmd_gen(args) -> int:
    spec = bench_mod.GenSpec(
        kind=args.kind,
        n1=args.n1,
        n2=args.n2,
        edge_prob=args.edge_prob,
        beta_density=args.beta_density,
        seed=args.seed,
    )
    _emit(serialize_instance(bench_mod.gen_instance(spec)), args.out)
    return 0


def _cmd_sat_gadget(args) -> int:
    formula = parse_dimacs(_read(args.formula))
    gadget = sat_to_alignment(formula)
    labels1, labels2 = gadget.label_strings()
    _emit(serialize_instance(gadget.instance, labels1, labels2), args.out)
    print(
        f"target_weight={format_weight(gadget.target_weight)} target_size={gadget.target_size}",
        file=sys.stderr,
    )
    return 0


def _cmd_sat_check(args) -> int:
    formula = parse_dimacs(_read(args.formula))
    gadget = sat_to_alignment(formula)
    reachable = decide_alignment(
        gadget.instance, gadget.target_weight, gadget.target_size
    )
    brute = sat_brute(formula)
    if reachable:
        alignment, _ = exact_align(gadget.instance)
        assignment = alignment_to_assignment(gadget, alignment)
        if evaluate(formula, assignment) and brute is not None:
            bits = "".join("1" if v else "0" for v in assignment)
            print(f"PASS satisfiable assignment={bits}")
            return 0
        print("FAIL gadget and brute force disagree")
        return 1
    if brute is None:
        print("PASS unsatisfiable")
        return 2
    print("FAIL gadget and brute force disagree")
    return 1


def _cmd_validate(args) -> int:
    instance = parse_instance(_read(args.instance))
    alignment = parse_alignment(_read(args.alignment), instance)
    report = validate_alignment(instance, alignment.chosen)
    dups = ", ".join(f"[{i}, {j}]" for i, j in report.duplicate_vertex_violations)
    confs = ", ".join(f"[{i}, {j}, {c}]" for i, j, c in report.conflict_violations)
    print(
        "{{"
        '"valid": {}, "duplicate_vertex_violations": [{}], '
        '"conflict_violations": [{}], "recomputed_weight": {}'
        "}}".format(
            "true" if report.valid else "false",
            dups,
            confs,
            format_weight(report.recomputed_weight),
        )
    )
    return 0 if report.valid else 2


def _parse_sizes(text: str) -> list[tuple[int, int]]:
    sizes = []
    for token in text.split(","):
        left, _, right = token.partition("x")
        try:
            sizes.append((int(left), int(right)))
        except ValueError as exc:
            raise DagAlignError(f"bad size {token!r}, expected like 4x4") from exc
    return sizes


def _cmd_bench(args) -> int:
    kinds = args.kinds.split(",")
    solvers = args.solvers.split(",")
    sizes = _parse_sizes(args.sizes)
    specs = []
    seed = args.seed
    for kind in kinds:
        for n1, n2 in sizes:
            for _ in range(args.count):
                specs.append(
                    bench_mod.GenSpec(
                        kind=kind,
                        n1=n1,
                        n2=n2,
                        edge_prob=args.edge_prob,
                        beta_density=args.beta_density,
                        seed=seed,
                    )
                )
                seed += 1
    report = bench_mod.run_benchmark(specs, solvers, args.exact_cutoff)
    csv_text = report.to_csv()
    if args.out is None:
        sys.stdout.write(csv_text)
    else:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(csv_text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dagalign",
        description="Solvers for weighted hierarchy-preserving DAG alignment",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="exact maximum-weight alignment")
    p.add_argument("instance")
    p.add_argument("--decide", nargs=2, type=float, metavar=("X", "Y"))
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--restricted", action="store_true",
                   help="solve over the ancestry-isomorphic class")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("approx", help="approximate alignment")
    p.add_argument("instance")
    p.add_argument("--strategy", required=True, choices=STRATEGIES)
    p.add_argument("--compare-exact", action="store_true")
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("tree", help="tree dynamic program")
    p.add_argument("instance")
    p.add_argument("--dump-table", action="store_true")
    p.set_defaults(func=_cmd_tree)

    p = sub.add_parser("chain", help="chain dynamic program")
    p.add_argument("instance")
    p.add_argument("--dump-table", action="store_true")
    p.set_defaults(func=_cmd_chain)

    p = sub.add_parser("gen", help="generate a seeded random instance")
    p.add_argument("--kind", required=True, choices=bench_mod.KINDS)
    p.add_argument("--n1", required=True, type=int)
    p.add_argument("--n2", required=True, type=int)
    p.add_argument("--edge-prob", type=float, default=0.3)
    p.add_argument("--beta-density", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("sat-gadget", help="encode a 3-CNF formula as an instance")
    p.add_argument("formula")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_sat_gadget)

    p = sub.add_parser("sat-check", help="round-trip a formula through the gadget")
    p.add_argument("formula")
    p.set_defaults(func=_cmd_sat_check)

    p = sub.add_parser("validate", help="check an alignment file against its instance")
    p.add_argument("instance")
    p.add_argument("alignment")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("bench", help="sweep solvers over generated instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sizes", default="3x3,4x4")
    p.add_argument("--kinds", default="tree,chain,dag")
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--solvers", default="exact,wsp-greedy")
    p.add_argument("--exact-cutoff", type=int, default=14)
    p.add_argument("--beta-density", type=float, default=0.5)
    p.add_argument("--edge-prob", type=float, default=0.3)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bench)

    return parser


def cli_main(argv=None) -> int:
    """Dispatch one CLI invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; map those to invalid input.
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DagAlignError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())
