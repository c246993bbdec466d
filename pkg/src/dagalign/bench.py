"""Seeded instance generation and the benchmark harness.

Generation is reproducible by construction: every instance comes from a
``random.Random(seed)`` stream (the documented MT19937 generator) with a
fixed draw order, so identical specs always give identical instances.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .approx import STRATEGIES, approx_align
from .core import Alignment, AlignmentInstance, build_dag, make_instance, validate_alignment
from .errors import DagAlignError, InvalidSpecError
from .exact import exact_align
from .serialize import format_weight
from .trees import chain_align, tree_align

KINDS = ("tree", "chain", "dag")
SOLVER_NAMES = ("exact",) + STRATEGIES + ("tree", "chain")
CSV_HEADER = "instance_id,solver,weight,millis,ratio_to_exact"

__all__ = [
    "KINDS",
    "SOLVER_NAMES",
    "CSV_HEADER",
    "GenSpec",
    "BenchRow",
    "BenchReport",
    "gen_instance",
    "run_benchmark",
]


@dataclass(frozen=True)
class GenSpec:
    """Parameters of one generated instance."""

    kind: str
    n1: int
    n2: int
    edge_prob: float = 0.0  # used only for kind="dag"
    beta_density: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpecError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.n1 < 1 or self.n2 < 1:
            raise InvalidSpecError("vertex counts must be at least 1")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise InvalidSpecError(f"edge_prob {self.edge_prob} outside [0, 1]")
        if not 0.0 <= self.beta_density <= 1.0:
            raise InvalidSpecError(f"beta_density {self.beta_density} outside [0, 1]")


def _gen_graph(kind: str, n: int, edge_prob: float, rng: random.Random):
    if kind == "chain":
        return build_dag(n, [(i, i + 1) for i in range(n - 1)])
    if kind == "tree":
        # Uniform random recursive tree: vertex i >= 1 picks a parent below it.
        return build_dag(n, [(rng.randrange(i), i) for i in range(1, n)])
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < edge_prob
    ]
    return build_dag(n, edges)


def gen_instance(spec: GenSpec) -> AlignmentInstance:
    """Generate an instance deterministically from its spec.

    Draw order on the MT19937 stream: first the g1 structure, then g2,
    then for each (left, right) pair in row-major order one draw for
    inclusion and, if included, one draw for the weight (uniform in
    [0, 1], rounded to 3 decimals).
    """
    rng = random.Random(spec.seed)
    g1 = _gen_graph(spec.kind, spec.n1, spec.edge_prob, rng)
    g2 = _gen_graph(spec.kind, spec.n2, spec.edge_prob, rng)
    beta = []
    for i in range(spec.n1):
        for j in range(spec.n2):
            if rng.random() < spec.beta_density:
                beta.append((i, j, round(rng.random(), 3)))
    return make_instance(g1, g2, beta)


@dataclass(frozen=True)
class BenchRow:
    """One (instance, solver) measurement."""

    instance_id: str
    solver: str
    weight: float | None
    millis: float
    ratio_to_exact: float | None
    error: str | None = None


@dataclass(frozen=True)
class BenchReport:
    """All rows of one benchmark run, sorted by (instance_id, solver)."""

    rows: tuple[BenchRow, ...]

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for row in self.rows:
            weight = "" if row.weight is None else format_weight(row.weight)
            ratio = "" if row.ratio_to_exact is None else format_weight(row.ratio_to_exact)
            lines.append(
                f"{row.instance_id},{row.solver},{weight},{row.millis:.3f},{ratio}"
            )
        return "\n".join(lines) + "\n"


def _run_solver(name: str, instance: AlignmentInstance) -> Alignment:
    if name == "exact":
        return exact_align(instance)[0]
    if name in STRATEGIES:
        return approx_align(instance, name)
    if name == "tree":
        return tree_align(instance)
    if name == "chain":
        return chain_align(instance)
    raise InvalidSpecError(f"unknown solver {name!r}, expected one of {SOLVER_NAMES}")


def instance_id(index: int, spec: GenSpec) -> str:
    return f"{index:04d}-{spec.kind}-{spec.n1}x{spec.n2}-s{spec.seed}"


def run_benchmark(
    specs: list[GenSpec], solvers: list[str], exact_cutoff: int
) -> BenchReport:
    """Run every requested solver on every generated instance.

    The exact solver is skipped on instances with more than exact_cutoff
    candidate edges.  Each produced alignment is validated before it is
    recorded; solver errors are captured per row instead of aborting the
    run.  ratio_to_exact is exact weight / solver weight, present only
    where the exact solve ran.
    """
    for name in solvers:
        if name not in SOLVER_NAMES:
            raise InvalidSpecError(f"unknown solver {name!r}, expected one of {SOLVER_NAMES}")
    rows: list[BenchRow] = []
    for index, spec in enumerate(specs):
        instance = gen_instance(spec)
        iid = instance_id(index, spec)
        exact_weight: float | None = None
        run_list = [s for s in solvers if s != "exact"]
        if "exact" in solvers and len(instance.beta) <= exact_cutoff:
            run_list.insert(0, "exact")
        results: dict[str, BenchRow] = {}
        for name in run_list:
            start = time.perf_counter()
            try:
                alignment = _run_solver(name, instance)
            except DagAlignError as exc:
                millis = (time.perf_counter() - start) * 1000.0
                results[name] = BenchRow(iid, name, None, millis, None, type(exc).__name__)
                continue
            millis = (time.perf_counter() - start) * 1000.0
            if not validate_alignment(instance, alignment.chosen).valid:
                results[name] = BenchRow(iid, name, None, millis, None, "InvalidAlignment")
                continue
            if name == "exact":
                exact_weight = alignment.total_weight
            results[name] = BenchRow(iid, name, alignment.total_weight, millis, None)
        for name, row in results.items():
            ratio = None
            if exact_weight is not None and row.weight is not None:
                if row.weight > 0:
                    ratio = exact_weight / row.weight
                else:
                    ratio = 1.0 if exact_weight == 0 else float("inf")
            rows.append(
                BenchRow(row.instance_id, row.solver, row.weight, row.millis, ratio, row.error)
            )
    rows.sort(key=lambda r: (r.instance_id, r.solver))
    return BenchReport(rows=tuple(rows))
