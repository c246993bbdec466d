"""Hardness gadget: 3-CNF formulas encoded as alignment instances.

A formula with m clauses becomes an instance whose left graph has one
vertex per literal occurrence and whose right graph has, per variable
and clause, a positive and a negative anchor plus two slots per clause.
Every candidate edge has weight one, and the formula is satisfiable
exactly when some valid alignment reaches weight 3m with at most 3m
edges: edges between opposite literal occurrences of the same variable
on the left, and from negative anchors through positive anchors to the
clause slots on the right, make simultaneous positive and negative
anchor matches conflict.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Alignment, AlignmentInstance, CandidateEdge, build_dag
from .errors import (
    EmptyFormulaError,
    NotCertificateError,
    ParseError,
    TooManyVariablesError,
)

POSITIVE = 0
NEGATIVE = 1

Literal = tuple[int, int]  # (variable index, polarity); polarity 0 is the plain variable

__all__ = [
    "POSITIVE",
    "NEGATIVE",
    "Cnf3Formula",
    "GadgetInstance",
    "sat_to_alignment",
    "alignment_to_assignment",
    "sat_brute",
    "evaluate",
    "parse_dimacs",
    "serialize_dimacs",
]


@dataclass(frozen=True)
class Cnf3Formula:
    """A CNF formula whose clauses each hold exactly three literals."""

    variable_count: int
    clauses: tuple[tuple[Literal, Literal, Literal], ...]

    def __post_init__(self):
        clauses = tuple(tuple((int(v), int(p)) for v, p in clause) for clause in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        for clause in clauses:
            if len(clause) != 3:
                raise ValueError(f"clause {clause} must have exactly 3 literals")
            for v, p in clause:
                if not 0 <= v < self.variable_count:
                    raise IndexError(f"variable {v} outside 0..{self.variable_count - 1}")
                if p not in (POSITIVE, NEGATIVE):
                    raise ValueError(f"polarity must be 0 or 1, got {p}")


def evaluate(formula: Cnf3Formula, assignment) -> bool:
    """True when the assignment (one bool per variable) satisfies every clause."""
    return all(
        any(bool(assignment[v]) == (p == POSITIVE) for v, p in clause)
        for clause in formula.clauses
    )


@dataclass(frozen=True)
class GadgetInstance:
    """An alignment instance generated from a formula, plus its bookkeeping.

    v1_labels[v] is (literal, clause index) for each occurrence vertex;
    v2_labels[v] is ("y" | "z", variable, clause) for anchors and
    ("c", clause, slot) for clause slots.  A valid alignment of weight
    target_weight certifies satisfiability.
    """

    instance: AlignmentInstance
    v1_labels: tuple[tuple[Literal, int], ...]
    v2_labels: tuple[tuple[str, int, int], ...]
    target_weight: float
    target_size: int

    def label_strings(self) -> tuple[list[str], list[str]]:
        """Human-readable vertex labels for serialization."""
        left = [
            ("x{}@c{}" if p == POSITIVE else "~x{}@c{}").format(v, c)
            for (v, p), c in self.v1_labels
        ]
        right = [
            f"{tag}{a}@c{b}" if tag in ("y", "z") else f"c{a}#{b}"
            for tag, a, b in self.v2_labels
        ]
        return left, right


def _y_id(j: int, i: int, m: int) -> int:
    return j * m + i


def _z_id(j: int, i: int, n: int, m: int) -> int:
    return n * m + j * m + i


def _c_id(i: int, slot: int, n: int, m: int) -> int:
    return 2 * n * m + 2 * i + slot


def sat_to_alignment(formula: Cnf3Formula) -> GadgetInstance:
    """Encode a 3-CNF formula as a unit-weight alignment instance.

    The left graph gets 3m occurrence vertices and an edge from each
    positive occurrence of a variable to each of its negative
    occurrences.  The right graph gets anchors (y, z) for every variable
    and clause plus two slots per clause, with edges z -> y within a
    variable and y -> slot everywhere.  Each occurrence vertex offers
    three candidates: its own anchor and both slots of its clause.

    Raises:
        EmptyFormulaError: the formula has no clauses.
    """
    n = formula.variable_count
    m = len(formula.clauses)
    if m == 0:
        raise EmptyFormulaError("cannot build a gadget from an empty clause list")

    v1_labels: list[tuple[Literal, int]] = []
    pos_occ: dict[int, list[int]] = {}
    neg_occ: dict[int, list[int]] = {}
    for i, clause in enumerate(formula.clauses):
        for lit in clause:
            vid = len(v1_labels)
            v1_labels.append((lit, i))
            bucket = pos_occ if lit[1] == POSITIVE else neg_occ
            bucket.setdefault(lit[0], []).append(vid)
    e1 = [
        (u, v)
        for j in range(n)
        for u in pos_occ.get(j, [])
        for v in neg_occ.get(j, [])
    ]
    g1 = build_dag(3 * m, e1)

    v2_labels: list[tuple[str, int, int]] = []
    for j in range(n):
        for i in range(m):
            v2_labels.append(("y", j, i))
    for j in range(n):
        for i in range(m):
            v2_labels.append(("z", j, i))
    for i in range(m):
        v2_labels.append(("c", i, 1))
        v2_labels.append(("c", i, 2))
    e2 = []
    for j in range(n):
        for i in range(m):
            for t in range(m):
                e2.append((_z_id(j, i, n, m), _y_id(j, t, m)))
    for j in range(n):
        for t in range(m):
            for i in range(m):
                e2.append((_y_id(j, t, m), _c_id(i, 0, n, m)))
                e2.append((_y_id(j, t, m), _c_id(i, 1, n, m)))
    g2 = build_dag(2 * n * m + 2 * m, e2)

    beta = []
    for vid, ((j, p), i) in enumerate(v1_labels):
        anchor = _y_id(j, i, m) if p == POSITIVE else _z_id(j, i, n, m)
        beta.append(CandidateEdge(vid, anchor, 1.0))
        beta.append(CandidateEdge(vid, _c_id(i, 0, n, m), 1.0))
        beta.append(CandidateEdge(vid, _c_id(i, 1, n, m), 1.0))

    instance = AlignmentInstance(g1, g2, tuple(beta))
    return GadgetInstance(
        instance=instance,
        v1_labels=tuple(v1_labels),
        v2_labels=tuple(v2_labels),
        target_weight=float(3 * m),
        target_size=3 * m,
    )


def alignment_to_assignment(gadget: GadgetInstance, alignment: Alignment):
    """Read a truth assignment off a target-weight alignment.

    A variable is set true when some positive occurrence maps to its
    anchor, false when some negative occurrence does; variables the
    alignment never pins default to true.

    Raises:
        NotCertificateError: the alignment weight is below the target.
    """
    if alignment.total_weight < gadget.target_weight - 1e-9:
        raise NotCertificateError(
            f"alignment weight {alignment.total_weight} below target {gadget.target_weight}"
        )
    m = gadget.target_size // 3
    n = (gadget.instance.g2.vertex_count - 2 * m) // (2 * m)
    assignment = [True] * n
    for idx in alignment.chosen:
        edge = gadget.instance.beta[idx]
        (j, p), i = gadget.v1_labels[edge.left]
        anchor = _y_id(j, i, m) if p == POSITIVE else _z_id(j, i, n, m)
        if edge.right == anchor:
            assignment[j] = p == POSITIVE
    return tuple(assignment)


def sat_brute(formula: Cnf3Formula):
    """Exhaustively search all assignments, in ascending binary order.

    Bit j of the enumeration counter is the value of variable j.
    Returns the first satisfying assignment or None when unsatisfiable.

    Raises:
        TooManyVariablesError: more than 24 variables.
    """
    n = formula.variable_count
    if n > 24:
        raise TooManyVariablesError(f"{n} variables exceed the brute-force cap of 24")
    for bits in range(1 << n):
        assignment = tuple(bool((bits >> j) & 1) for j in range(n))
        if evaluate(formula, assignment):
            return assignment
    return None


def parse_dimacs(text: str) -> Cnf3Formula:
    """Parse DIMACS CNF restricted to exactly three literals per clause."""
    n = None
    declared_m = None
    tokens: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"bad problem line: {line!r}")
            try:
                n, declared_m = int(parts[2]), int(parts[3])
            except ValueError as exc:
                raise ParseError(f"bad problem line: {line!r}") from exc
            continue
        try:
            tokens.extend(int(tok) for tok in line.split())
        except ValueError as exc:
            raise ParseError(f"bad clause line: {line!r}") from exc
    if n is None:
        raise ParseError("missing 'p cnf' problem line")
    clauses: list[tuple[Literal, ...]] = []
    current: list[Literal] = []
    for tok in tokens:
        if tok == 0:
            if len(current) != 3:
                raise ParseError(f"clause {current} must have exactly 3 literals")
            clauses.append(tuple(current))
            current = []
            continue
        v = abs(tok)
        if not 1 <= v <= n:
            raise ParseError(f"literal {tok} names variable outside 1..{n}")
        current.append((v - 1, POSITIVE if tok > 0 else NEGATIVE))
    if current:
        raise ParseError("last clause is not terminated by 0")
    if declared_m is not None and declared_m != len(clauses):
        raise ParseError(f"header declares {declared_m} clauses, found {len(clauses)}")
    return Cnf3Formula(variable_count=n, clauses=tuple(clauses))


def serialize_dimacs(formula: Cnf3Formula) -> str:
    """Render a formula in DIMACS CNF."""
    lines = [f"p cnf {formula.variable_count} {len(formula.clauses)}"]
    for clause in formula.clauses:
        lits = " ".join(str((v + 1) if p == POSITIVE else -(v + 1)) for v, p in clause)
        lines.append(f"{lits} 0")
    return "\n".join(lines) + "\n"
