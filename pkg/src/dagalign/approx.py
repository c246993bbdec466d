"""Approximation pipeline built on two reductions of the matching problem.

The conflict graph has one node per candidate edge and an edge between
every conflicting pair, so its independent sets are exactly the valid
alignments.  The set-packing view wraps each candidate together with its
conflict set, so pairwise-disjoint picks are conflict-free.  Both views
are served by deterministic weighted greedy rules, plus the recursive
clique-removal heuristic for independent sets.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable

from .core import Alignment, AlignmentInstance, is_conflict, make_alignment, validate_alignment

STRATEGIES = ("wis-greedy", "wis-ramsey", "wsp-greedy")

__all__ = [
    "ConflictGraph",
    "WspInstance",
    "STRATEGIES",
    "build_conflict_graph",
    "wis_greedy",
    "wis_ramsey",
    "build_wsp",
    "wsp_greedy",
    "approx_align",
]


@dataclass(frozen=True)
class ConflictGraph:
    """Vertex-weighted graph whose independent sets are the valid alignments."""

    node_count: int
    node_weights: tuple[float, ...]
    edges: frozenset[tuple[int, int]]  # normalized with i < j

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.node_count)]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return tuple(frozenset(s) for s in nbrs)


def build_conflict_graph(instance: AlignmentInstance) -> ConflictGraph:
    """One node per candidate edge, adjacency wherever two candidates conflict."""
    beta = instance.beta
    edges = set()
    for i in range(len(beta)):
        for j in range(i + 1, len(beta)):
            if is_conflict(instance, beta[i], beta[j]) is not None:
                edges.add((i, j))
    return ConflictGraph(
        node_count=len(beta),
        node_weights=tuple(e.weight for e in beta),
        edges=frozenset(edges),
    )


def wis_greedy(graph: ConflictGraph) -> set[int]:
    """Greedy independent set by the weight/(degree+1) rule.

    Repeatedly takes the surviving node with the best ratio (ties to the
    lower index), then deletes it together with its neighbors.
    """
    adj = graph.adjacency
    w = graph.node_weights
    surviving = set(range(graph.node_count))
    picked: set[int] = set()
    while surviving:
        best = None
        best_ratio = -1.0
        for v in sorted(surviving):
            ratio = w[v] / (len(adj[v] & surviving) + 1)
            if ratio > best_ratio:
                best, best_ratio = v, ratio
        picked.add(best)
        surviving -= adj[best]
        surviving.discard(best)
    return picked


def wis_ramsey(
    graph: ConflictGraph,
    *,
    on_return: Callable[[frozenset[int], set[int], set[int]], None] | None = None,
) -> set[int]:
    """Clique-removal independent set heuristic.

    Each recursion picks the heaviest surviving node as pivot, extends a
    clique through its neighborhood and an independent set through its
    non-neighborhood, and returns the heavier option on each side.  The
    independent set is recorded, the clique is deleted, and the loop
    repeats until the graph is empty; the heaviest recorded independent
    set wins.

    on_return, when given, is called with (nodes, clique, independent_set)
    at every recursion exit; it exists for instrumentation and testing.
    """
    adj = graph.adjacency
    w = graph.node_weights

    def weight_of(nodes: Iterable[int]) -> float:
        return sum(w[v] for v in nodes)

    def ramsey(nodes: frozenset[int]) -> tuple[set[int], set[int]]:
        if not nodes:
            result: tuple[set[int], set[int]] = (set(), set())
        else:
            pivot = max(sorted(nodes), key=lambda v: w[v])
            nbrs = adj[pivot] & nodes
            rest = nodes - nbrs - {pivot}
            c1, i1 = ramsey(frozenset(nbrs))
            c2, i2 = ramsey(frozenset(rest))
            c1.add(pivot)
            i2.add(pivot)
            clique = c1 if weight_of(c1) >= weight_of(c2) else c2
            iset = i1 if weight_of(i1) >= weight_of(i2) else i2
            result = (clique, iset)
        if on_return is not None:
            on_return(nodes, result[0], result[1])
        return result

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * graph.node_count + 200))
    try:
        remaining = set(range(graph.node_count))
        best: set[int] = set()
        best_w = -1.0
        while remaining:
            clique, iset = ramsey(frozenset(remaining))
            if weight_of(iset) > best_w:
                best, best_w = iset, weight_of(iset)
            remaining -= clique
    finally:
        sys.setrecursionlimit(old_limit)
    return best


@dataclass(frozen=True)
class WspInstance:
    """Set-packing view: one weighted set per candidate edge.

    Set i holds i itself plus every index conflicting with it; disjoint
    sets therefore name mutually compatible candidates.
    """

    base_count: int
    sets: tuple[tuple[frozenset[int], float], ...]


def build_wsp(instance: AlignmentInstance) -> WspInstance:
    """Wrap each candidate edge with its conflict set."""
    sets = []
    for i, e in enumerate(instance.beta):
        members = {i}
        for j, d in enumerate(instance.beta):
            if j != i and is_conflict(instance, e, d) is not None:
                members.add(j)
        sets.append((frozenset(members), e.weight))
    return WspInstance(base_count=len(instance.beta), sets=tuple(sets))


def wsp_greedy(wsp: WspInstance) -> list[int]:
    """Greedy set packing by the weight/sqrt(size) score.

    Repeatedly selects the surviving set with the best score (ties to
    the lower index), then discards every set intersecting it.  The
    returned sets are pairwise disjoint, in selection order.
    """
    surviving = list(range(len(wsp.sets)))
    picked: list[int] = []
    while surviving:
        best = None
        best_score = -1.0
        for i in surviving:
            members, weight = wsp.sets[i]
            score = weight / math.sqrt(len(members))
            if score > best_score:
                best, best_score = i, score
        picked.append(best)
        chosen_members = wsp.sets[best][0]
        surviving = [i for i in surviving if wsp.sets[i][0].isdisjoint(chosen_members)]
    return picked


def approx_align(instance: AlignmentInstance, strategy: str) -> Alignment:
    """Run one approximation pipeline and map its picks back to candidates.

    The result is zero-stripped and re-checked against the matching
    rules before being returned.
    """
    if strategy == "wis-greedy":
        indices = wis_greedy(build_conflict_graph(instance))
    elif strategy == "wis-ramsey":
        indices = wis_ramsey(build_conflict_graph(instance))
    elif strategy == "wsp-greedy":
        indices = set(wsp_greedy(build_wsp(instance)))
    else:
        raise ValueError(f"unknown strategy {strategy!r}, expected one of {STRATEGIES}")
    kept = sorted(i for i in indices if instance.beta[i].weight > 0.0)
    report = validate_alignment(instance, kept)
    if not report.valid:
        raise AssertionError(f"{strategy} produced a conflicting selection: {report}")
    return make_alignment(instance, kept)
