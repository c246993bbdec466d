"""Polynomial-time alignment of rooted trees and chains.

The tree solver runs a bottom-up dynamic program over all pairs of
subtree roots, using a maximum-weight bipartite matching to combine
child subtrees.  Cells are filled in lexicographic order after numbering
vertices deepest level first, so every value a cell needs is already
known.  Missing candidate pairs are completed with zero weight before
the recursion; a zero-weight self-map is what lets several children of
an unmapped vertex match simultaneously.

The solver is exact on mappings that embed sibling subtrees into
disjoint child subtrees.  Two known gaps against wider notions of
optimality are documented in the test suite: vertices that are
incomparable on the left may map to comparable vertices on the right
(which the general validity rules allow), and two sibling subtrees may
both map into a single child subtree (which pairwise ancestry
isomorphism allows); the dynamic program expresses neither.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import (
    WEIGHT_TOL,
    Alignment,
    AlignmentInstance,
    DagGraph,
    complete_beta,
    make_alignment,
    validate_alignment,
)
from .errors import BetaIncompleteError, NegativeWeightError, NotAChainError, NotATreeError

__all__ = [
    "TreeOrder",
    "DpTables",
    "level_order",
    "hungarian_max",
    "tree_align",
    "tree_align_tables",
    "chain_align",
    "chain_align_table",
]


@dataclass(frozen=True)
class TreeOrder:
    """Deepest-level-first numbering of a rooted tree.

    order[t] is the original vertex id at position t; children always
    precede their parent and the root comes last.  Within a level,
    vertices keep ascending id order.
    """

    order: tuple[int, ...]
    depth: tuple[int, ...]
    is_tree: bool = True


def _in_degrees(dag: DagGraph) -> list[int]:
    indeg = [0] * dag.vertex_count
    for _, v in dag.edges:
        indeg[v] += 1
    return indeg


def level_order(dag: DagGraph) -> TreeOrder:
    """Number the vertices of a rooted tree by strictly decreasing depth.

    Raises:
        NotATreeError: not exactly one root, or some vertex has more
            than one parent.
    """
    n = dag.vertex_count
    if n == 0:
        raise NotATreeError("a rooted tree needs at least one vertex")
    indeg = _in_degrees(dag)
    roots = [v for v in range(n) if indeg[v] == 0]
    if len(roots) != 1:
        raise NotATreeError(f"expected exactly one root, found {len(roots)}")
    if any(d > 1 for d in indeg):
        raise NotATreeError("some vertex has more than one parent")
    root = roots[0]
    depth = [-1] * n
    depth[root] = 0
    queue = [root]
    while queue:
        u = queue.pop()
        for c in dag.children(u):
            depth[c] = depth[u] + 1
            queue.append(c)
    # In-degree constraints plus acyclicity force connectivity, so every
    # vertex gets a depth; keep the check as a guard.
    if any(d < 0 for d in depth):
        raise NotATreeError("graph is not connected to the root")
    order = sorted(range(n), key=lambda v: (-depth[v], v))
    return TreeOrder(order=tuple(order), depth=tuple(depth), is_tree=True)


def hungarian_max(weights) -> tuple[float, list[tuple[int, int]]]:
    """Maximum-weight bipartite matching of a non-negative p x q matrix.

    The matching need not be perfect; rows and columns are used at most
    once and only pairs with positive weight are reported.

    Raises:
        NegativeWeightError: some entry is negative.
    """
    arr = np.asarray(weights, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    if arr.size == 0:
        return 0.0, []
    if arr.min() < 0:
        raise NegativeWeightError("matching weights must be non-negative")
    rows, cols = linear_sum_assignment(arr, maximize=True)
    pairs = [(int(r), int(c)) for r, c in zip(rows, cols) if arr[r, c] > 0]
    value = float(sum(arr[r, c] for r, c in pairs))
    return value, pairs


@dataclass(frozen=True, eq=False)
class DpTables:
    """The filled dynamic-programming state of one tree alignment.

    values[i, j] is the best weight aligning the subtree rooted at
    order1.order[i] with the subtree rooted at order2.order[j];
    matching(i, j) rebuilds the candidate-edge indices realizing it by
    walking the recorded per-cell choices.
    """

    order1: TreeOrder
    order2: TreeOrder
    values: np.ndarray
    _choices: tuple
    _instance: AlignmentInstance
    _weights: np.ndarray

    def matching(self, i: int, j: int) -> tuple[int, ...]:
        """Candidate-edge indices (into the original beta) realizing values[i, j]."""
        acc: list[int] = []
        self._rebuild(i, j, acc)
        return tuple(sorted(acc))

    def _rebuild(self, i: int, j: int, acc: list[int]) -> None:
        kind = self._choices[i][j]
        if kind[0] == "empty":
            return
        if kind[0] == "skip":
            self._rebuild(kind[1], j, acc)
            return
        _, k2, pairs = kind
        if self._weights[i, k2] > 0:
            pair = (self.order1.order[i], self.order2.order[k2])
            acc.append(self._instance.pair_index[pair])
        for s, t in pairs:
            self._rebuild(s, t, acc)


def _prepare_tree_dp(instance: AlignmentInstance, auto_complete: bool):
    order1 = level_order(instance.g1)
    order2 = level_order(instance.g2)
    if not instance.is_complete:
        if not auto_complete:
            raise BetaIncompleteError(
                "candidate set must cover every vertex pair; enable auto_complete"
            )
        full = complete_beta(instance)
    else:
        full = instance
    n = instance.g1.vertex_count
    k = instance.g2.vertex_count
    pos1 = {v: t for t, v in enumerate(order1.order)}
    pos2 = {v: t for t, v in enumerate(order2.order)}
    W = np.zeros((n, k))
    for e in full.beta:
        W[pos1[e.left], pos2[e.right]] = e.weight
    children1 = [sorted(pos1[c] for c in instance.g1.children(v)) for v in order1.order]
    children2 = [sorted(pos2[c] for c in instance.g2.children(v)) for v in order2.order]
    desc2 = [sorted((pos2[d] for d in instance.g2.descendants(v)), reverse=True)
             for v in order2.order]
    return order1, order2, W, children1, children2, desc2


def tree_align_tables(
    instance: AlignmentInstance, *, auto_complete: bool = True
) -> tuple[Alignment, DpTables]:
    """Tree alignment returning the DP tables alongside the alignment.

    Cell (i, j) takes the maximum over two cases: leave vertex i of the
    left tree unmapped and descend into one of its children, or map it
    onto position j itself or any descendant k and combine the child
    subtrees through a maximum-weight bipartite matching of their
    already-computed cell values.  The answer sits in the root cell.
    """
    order1, order2, W, children1, children2, desc2 = _prepare_tree_dp(
        instance, auto_complete
    )
    n, k = W.shape
    C = np.zeros((n, k))
    choices: list[list[tuple]] = [[("empty",)] * k for _ in range(n)]
    for i in range(n):
        ch1 = children1[i]
        assert all(t < i for t in ch1), "child cells must precede their parent"
        for j in range(k):
            if ch1:
                best = -1.0
                choice: tuple = ("empty",)
                for t in ch1:
                    if C[t, j] > best:
                        best, choice = C[t, j], ("skip", t)
            else:
                best, choice = 0.0, ("empty",)
            for k2 in [j] + desc2[j]:
                ch2 = children2[k2]
                if ch1 and ch2:
                    sub = C[np.ix_(ch1, ch2)]
                    s, raw_pairs = hungarian_max(sub)
                    pairs = tuple((ch1[r], ch2[c]) for r, c in raw_pairs)
                else:
                    s, pairs = 0.0, ()
                val = W[i, k2] + s
                if val > best:
                    best, choice = val, ("map", k2, pairs)
            C[i, j] = best
            choices[i][j] = choice
    tables = DpTables(
        order1=order1,
        order2=order2,
        values=C,
        _choices=tuple(tuple(row) for row in choices),
        _instance=instance,
        _weights=W,
    )
    chosen = tables.matching(n - 1, k - 1)
    alignment = make_alignment(instance, chosen)
    if abs(alignment.total_weight - C[n - 1, k - 1]) > WEIGHT_TOL:
        raise AssertionError("rebuilt matching does not realize the root cell value")
    if not validate_alignment(instance, chosen).valid:
        raise AssertionError("tree alignment produced a conflicting selection")
    return alignment, tables


def tree_align(instance: AlignmentInstance, *, auto_complete: bool = True) -> Alignment:
    """Align two rooted trees bottom-up; see tree_align_tables for details.

    Raises:
        NotATreeError: either graph is not a rooted tree.
        BetaIncompleteError: beta is partial and auto_complete is off.
    """
    alignment, _ = tree_align_tables(instance, auto_complete=auto_complete)
    return alignment


def _chain_order(dag: DagGraph, which: str) -> list[int]:
    n = dag.vertex_count
    if n == 0:
        raise NotAChainError(f"{which} must have at least one vertex")
    indeg = _in_degrees(dag)
    roots = [v for v in range(n) if indeg[v] == 0]
    if len(roots) != 1 or any(d > 1 for d in indeg):
        raise NotAChainError(f"{which} is not a single directed path")
    if any(len(dag.children(v)) > 1 for v in range(n)):
        raise NotAChainError(f"{which} has a branching vertex")
    order = [roots[0]]
    while True:
        nxt = dag.children(order[-1])
        if not nxt:
            break
        order.append(next(iter(nxt)))
    if len(order) != n:
        raise NotAChainError(f"{which} is not a single directed path")
    return order


def chain_align_table(
    instance: AlignmentInstance, *, auto_complete: bool = True
) -> tuple[Alignment, np.ndarray]:
    """Chain alignment returning the DP table alongside the alignment.

    Every pair of vertices within a chain is comparable, so any valid
    alignment preserves order on both sides; the classic quadratic
    recurrence over chain prefixes is therefore exact:

        C[i][j] = max(C[i-1][j], C[i][j-1], C[i-1][j-1] + w(i, j))
    """
    chain1 = _chain_order(instance.g1, "g1")
    chain2 = _chain_order(instance.g2, "g2")
    if not instance.is_complete:
        if not auto_complete:
            raise BetaIncompleteError(
                "candidate set must cover every vertex pair; enable auto_complete"
            )
        full = complete_beta(instance)
    else:
        full = instance
    n, k = len(chain1), len(chain2)
    pos1 = {v: t for t, v in enumerate(chain1)}
    pos2 = {v: t for t, v in enumerate(chain2)}
    W = np.zeros((n, k))
    for e in full.beta:
        W[pos1[e.left], pos2[e.right]] = e.weight
    C = np.zeros((n + 1, k + 1))
    for i in range(1, n + 1):
        for j in range(1, k + 1):
            C[i, j] = max(C[i - 1, j], C[i, j - 1], C[i - 1, j - 1] + W[i - 1, j - 1])
    chosen: list[int] = []
    i, j = n, k
    while i > 0 and j > 0:
        if C[i, j] == C[i - 1, j - 1] + W[i - 1, j - 1]:
            if W[i - 1, j - 1] > 0:
                chosen.append(instance.pair_index[(chain1[i - 1], chain2[j - 1])])
            i, j = i - 1, j - 1
        elif C[i, j] == C[i - 1, j]:
            i -= 1
        else:
            j -= 1
    alignment = make_alignment(instance, sorted(chosen))
    if abs(alignment.total_weight - C[n, k]) > WEIGHT_TOL:
        raise AssertionError("chain traceback does not realize the table value")
    if not validate_alignment(instance, alignment.chosen).valid:
        raise AssertionError("chain alignment produced a conflicting selection")
    return alignment, C


def chain_align(instance: AlignmentInstance, *, auto_complete: bool = True) -> Alignment:
    """Order-preserving maximum-weight matching of two chains.

    Raises:
        NotAChainError: either graph is not a single directed path.
        BetaIncompleteError: beta is partial and auto_complete is off.
    """
    alignment, _ = chain_align_table(instance, auto_complete=auto_complete)
    return alignment
