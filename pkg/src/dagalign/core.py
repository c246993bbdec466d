"""Graph model and validity rules for hierarchy-preserving DAG matching.

An alignment instance pairs two DAGs with a weighted set of candidate
vertex-to-vertex edges.  A selection of candidates is a valid alignment
when no vertex is reused and no two selected edges conflict: an ancestor
relation between the left endpoints must be mirrored by the right
endpoints, and likewise for descendant relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    CyclicGraphError,
    DuplicatePairError,
    IndexOutOfRangeError,
    SameEdgeError,
    WeightOutOfRangeError,
)

# Absolute tolerance for comparing sums of weights (each weight is a
# 64-bit real in [0, 1]; desk-scale sums stay far inside this margin).
WEIGHT_TOL = 1e-9


def _bits_to_set(mask: int) -> frozenset[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


@dataclass(frozen=True)
class DagGraph:
    """A DAG over dense vertex ids 0..vertex_count-1 with precomputed reachability.

    Ancestor, descendant, and child sets are stored as one bitmask per
    vertex so that the conflict predicate, the innermost operation of
    every solver, runs on integer bit tests.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    _anc: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _desc: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _children: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _topo: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.vertex_count
        if n < 0:
            raise IndexOutOfRangeError(f"vertex_count must be non-negative, got {n}")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise IndexOutOfRangeError(f"edge ({u}, {v}) outside 0..{n - 1}")

        children = [0] * n
        parents = [0] * n
        indeg = [0] * n
        for u, v in edges:
            if not (children[u] >> v) & 1:
                indeg[v] += 1
            children[u] |= 1 << v
            parents[v] |= 1 << u

        # Kahn's algorithm; leftover vertices witness a directed cycle.
        topo: list[int] = [v for v in range(n) if indeg[v] == 0]
        head = 0
        while head < len(topo):
            u = topo[head]
            head += 1
            m = children[u]
            while m:
                low = m & -m
                v = low.bit_length() - 1
                m ^= low
                indeg[v] -= 1
                if indeg[v] == 0:
                    topo.append(v)
        if len(topo) != n:
            raise CyclicGraphError("edge list contains a directed cycle")

        desc = [0] * n
        for u in reversed(topo):
            m = children[u]
            acc = m
            while m:
                low = m & -m
                acc |= desc[low.bit_length() - 1]
                m ^= low
            desc[u] = acc
        anc = [0] * n
        for v in topo:
            m = parents[v]
            acc = m
            while m:
                low = m & -m
                acc |= anc[low.bit_length() - 1]
                m ^= low
            anc[v] = acc

        object.__setattr__(self, "_anc", tuple(anc))
        object.__setattr__(self, "_desc", tuple(desc))
        object.__setattr__(self, "_children", tuple(children))
        object.__setattr__(self, "_topo", tuple(topo))

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.vertex_count):
            raise IndexOutOfRangeError(f"vertex {v} outside 0..{self.vertex_count - 1}")

    def ancestors(self, v: int) -> frozenset[int]:
        """Vertices with a directed path into v."""
        self._check_vertex(v)
        return _bits_to_set(self._anc[v])

    def descendants(self, v: int) -> frozenset[int]:
        """Vertices reachable from v along directed paths."""
        self._check_vertex(v)
        return _bits_to_set(self._desc[v])

    def children(self, v: int) -> frozenset[int]:
        """Direct successors of v."""
        self._check_vertex(v)
        return _bits_to_set(self._children[v])

    def is_ancestor(self, u: int, v: int) -> bool:
        """True when u lies on a directed path into v."""
        return bool((self._anc[v] >> u) & 1)

    def is_descendant(self, u: int, v: int) -> bool:
        """True when u is reachable from v."""
        return bool((self._desc[v] >> u) & 1)

    def topological_order(self) -> tuple[int, ...]:
        return self._topo


def build_dag(vertex_count: int, edges: Iterable[tuple[int, int]]) -> DagGraph:
    """Construct a DagGraph, rejecting cyclic or out-of-range input.

    Raises:
        CyclicGraphError: the edges contain a directed cycle.
        IndexOutOfRangeError: an edge endpoint is not in 0..vertex_count-1.
    """
    return DagGraph(vertex_count, tuple(edges))


def reachability(dag: DagGraph, v: int):
    """Return (ancestors, descendants, children) of v as frozensets."""
    return dag.ancestors(v), dag.descendants(v), dag.children(v)


@dataclass(frozen=True)
class CandidateEdge:
    """A permissible match between a left-graph and a right-graph vertex."""

    left: int
    right: int
    weight: float

    def __post_init__(self):
        if not 0.0 <= self.weight <= 1.0:
            raise WeightOutOfRangeError(f"weight {self.weight} outside [0, 1]")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.left, self.right)


@dataclass(frozen=True)
class AlignmentInstance:
    """Two DAGs plus the weighted candidate-edge set between them."""

    g1: DagGraph
    g2: DagGraph
    beta: tuple[CandidateEdge, ...]

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(self.beta))
        seen: set[tuple[int, int]] = set()
        for e in self.beta:
            if not (0 <= e.left < self.g1.vertex_count):
                raise IndexOutOfRangeError(f"candidate left vertex {e.left} out of range")
            if not (0 <= e.right < self.g2.vertex_count):
                raise IndexOutOfRangeError(f"candidate right vertex {e.right} out of range")
            if e.pair in seen:
                raise DuplicatePairError(f"duplicate candidate pair {e.pair}")
            seen.add(e.pair)

    @cached_property
    def pair_index(self) -> dict[tuple[int, int], int]:
        """Map (left, right) vertex pairs to their index in beta."""
        return {e.pair: i for i, e in enumerate(self.beta)}

    @property
    def is_complete(self) -> bool:
        """True when beta covers every vertex pair of g1 x g2."""
        return len(self.beta) == self.g1.vertex_count * self.g2.vertex_count

    def _check_edge_index(self, i: int) -> None:
        if not (0 <= i < len(self.beta)):
            raise IndexOutOfRangeError(f"edge index {i} outside 0..{len(self.beta) - 1}")


def make_instance(
    g1: DagGraph,
    g2: DagGraph,
    beta: Iterable[tuple[int, int, float] | CandidateEdge],
) -> AlignmentInstance:
    """Build an AlignmentInstance from (left, right, weight) triples."""
    edges = tuple(
        e if isinstance(e, CandidateEdge) else CandidateEdge(int(e[0]), int(e[1]), float(e[2]))
        for e in beta
    )
    return AlignmentInstance(g1, g2, edges)


def is_conflict(
    instance: AlignmentInstance, e: CandidateEdge, d: CandidateEdge
) -> int | None:
    """Test whether two candidate edges conflict.

    With e = (a, b) and d = (f, g), the four conflict conditions are
    checked in order and the lowest matching number is returned:

    1. a is an ancestor of f but b is not an ancestor of g
    2. a is a descendant of f but b is not a descendant of g
    3. a = f
    4. b = g

    Returns None when the edges are compatible.

    Raises:
        SameEdgeError: e and d name the same (left, right) pair.
    """
    if e.pair == d.pair:
        raise SameEdgeError(f"conflict test needs two distinct edges, got {e.pair} twice")
    g1, g2 = instance.g1, instance.g2
    if g1.is_ancestor(e.left, d.left) and not g2.is_ancestor(e.right, d.right):
        return 1
    if g1.is_descendant(e.left, d.left) and not g2.is_descendant(e.right, d.right):
        return 2
    if e.left == d.left:
        return 3
    if e.right == d.right:
        return 4
    return None


def conflict_set(instance: AlignmentInstance, edge_index: int) -> frozenset[int]:
    """Indices of every beta entry that conflicts with beta[edge_index]."""
    instance._check_edge_index(edge_index)
    e = instance.beta[edge_index]
    out = []
    for j, d in enumerate(instance.beta):
        if j == edge_index:
            continue
        if is_conflict(instance, e, d) is not None:
            out.append(j)
    return frozenset(out)


@dataclass(frozen=True)
class Alignment:
    """A selected subset of beta, identified by index, with its total weight."""

    chosen: tuple[int, ...]
    total_weight: float

    def __post_init__(self):
        object.__setattr__(self, "chosen", tuple(self.chosen))


def make_alignment(instance: AlignmentInstance, chosen: Iterable[int]) -> Alignment:
    """Build an Alignment with the weight recomputed from the instance."""
    idx = tuple(sorted(chosen))
    for i in idx:
        instance._check_edge_index(i)
    total = sum(instance.beta[i].weight for i in idx)
    return Alignment(idx, total)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking a chosen edge set against the matching rules.

    conflict_violations carry the lowest conflict-condition number for
    each offending pair; duplicate_vertex_violations list pairs that
    reuse a left or right vertex.  The report is valid exactly when both
    lists are empty.
    """

    valid: bool
    duplicate_vertex_violations: tuple[tuple[int, int], ...]
    conflict_violations: tuple[tuple[int, int, int], ...]
    recomputed_weight: float


def validate_alignment(
    instance: AlignmentInstance, chosen: Sequence[int]
) -> ValidationReport:
    """Check a candidate selection pairwise against the matching rules.

    Every violating pair is reported, not just the first; the check is
    quadratic in the number of chosen edges.
    """
    for i in chosen:
        instance._check_edge_index(i)
    idx = sorted(chosen)
    dups: list[tuple[int, int]] = []
    confs: list[tuple[int, int, int]] = []
    for p in range(len(idx)):
        for q in range(p + 1, len(idx)):
            i, j = idx[p], idx[q]
            e, d = instance.beta[i], instance.beta[j]
            if i == j:
                # The same candidate listed twice reuses both endpoints.
                dups.append((i, j))
                confs.append((i, j, 3))
                continue
            if e.left == d.left or e.right == d.right:
                dups.append((i, j))
            cond = is_conflict(instance, e, d)
            if cond is not None:
                confs.append((i, j, cond))
    total = sum(instance.beta[i].weight for i in chosen)
    return ValidationReport(
        valid=not dups and not confs,
        duplicate_vertex_violations=tuple(dups),
        conflict_violations=tuple(confs),
        recomputed_weight=total,
    )


def complete_beta(instance: AlignmentInstance) -> AlignmentInstance:
    """Extend beta with zero-weight entries until every vertex pair is covered.

    Existing entries keep their order and weights; missing pairs are
    appended in (left, right) lexicographic order.  An already complete
    instance is returned unchanged.
    """
    if instance.is_complete:
        return instance
    present = instance.pair_index
    extra = [
        CandidateEdge(i, j, 0.0)
        for i in range(instance.g1.vertex_count)
        for j in range(instance.g2.vertex_count)
        if (i, j) not in present
    ]
    return AlignmentInstance(instance.g1, instance.g2, instance.beta + tuple(extra))


def strip_zero(alignment: Alignment, instance: AlignmentInstance) -> Alignment:
    """Drop chosen edges whose weight is exactly zero; the total is unchanged."""
    kept = tuple(i for i in alignment.chosen if instance.beta[i].weight != 0.0)
    return Alignment(kept, alignment.total_weight)
