"""Exact branch-and-bound solvers; the ground truth for every other solver.

Zero-weight candidates are never branched on: validity is closed under
taking subsets, so some optimum contains no zero-weight edge, and the
returned alignment is zero-stripped by contract anyway.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .core import WEIGHT_TOL, Alignment, AlignmentInstance, is_conflict, make_alignment
from .errors import BudgetExceededError

DEFAULT_NODE_BUDGET = 100_000_000

__all__ = [
    "SearchStats",
    "DEFAULT_NODE_BUDGET",
    "exact_align",
    "decide_alignment",
    "exact_align_isomorphic",
]


@dataclass(frozen=True)
class SearchStats:
    """Search effort counters for one exact solve."""

    nodes_expanded: int
    best_bound: float
    elapsed: float  # seconds


class _Candidates:
    """Positive-weight candidates sorted by descending weight, index tiebreak."""

    def __init__(self, instance: AlignmentInstance):
        beta = instance.beta
        self.order = sorted(
            (i for i in range(len(beta)) if beta[i].weight > 0.0),
            key=lambda i: (-beta[i].weight, i),
        )
        self.lefts = [beta[i].left for i in self.order]
        self.rights = [beta[i].right for i in self.order]
        self.weights = [beta[i].weight for i in self.order]

    def conflict_masks(self, instance: AlignmentInstance) -> list[int]:
        """For each position, the positions it cannot coexist with (self included)."""
        beta = instance.beta
        k = len(self.order)
        masks = [1 << p for p in range(k)]
        for p in range(k):
            e = beta[self.order[p]]
            for q in range(p + 1, k):
                if is_conflict(instance, e, beta[self.order[q]]) is not None:
                    masks[p] |= 1 << q
                    masks[q] |= 1 << p
        return masks

    def isomorphism_masks(self, instance: AlignmentInstance) -> list[int]:
        """Positions that break the pairwise ancestry-isomorphism class."""
        beta = instance.beta
        g1, g2 = instance.g1, instance.g2
        k = len(self.order)
        masks = [1 << p for p in range(k)]
        for p in range(k):
            e = beta[self.order[p]]
            for q in range(p + 1, k):
                d = beta[self.order[q]]
                ok = (
                    e.left != d.left
                    and e.right != d.right
                    and g1.is_ancestor(e.left, d.left) == g2.is_ancestor(e.right, d.right)
                    and g1.is_descendant(e.left, d.left)
                    == g2.is_descendant(e.right, d.right)
                )
                if not ok:
                    masks[p] |= 1 << q
                    masks[q] |= 1 << p
        return masks

    def bound(self, allowed: int, pos: int, cap: int | None = None) -> float:
        """Admissible bound on extra weight from positions >= pos.

        Any valid extension picks at most one edge per left vertex and one
        per right vertex; the smaller of the two per-group sums is returned.
        With a cardinality cap only the heaviest `cap` groups count.
        """
        by_left: dict[int, float] = {}
        by_right: dict[int, float] = {}
        m = allowed >> pos << pos
        while m:
            low = m & -m
            p = low.bit_length() - 1
            m ^= low
            # Descending-weight order makes the first edge per group its max.
            if self.lefts[p] not in by_left:
                by_left[self.lefts[p]] = self.weights[p]
            if self.rights[p] not in by_right:
                by_right[self.rights[p]] = self.weights[p]
        if cap is None:
            return min(sum(by_left.values()), sum(by_right.values()))
        top_l = sorted(by_left.values(), reverse=True)[:cap]
        top_r = sorted(by_right.values(), reverse=True)[:cap]
        return min(sum(top_l), sum(top_r))


def _maximize(instance, masks, cand, node_budget):
    """Shared DFS: maximize weight, break ties by the smallest index tuple."""
    k = len(cand.order)
    weights = cand.weights
    order = cand.order
    state = {"nodes": 0, "best_w": 0.0, "best_idx": ()}

    def visit(pos: int, allowed: int, cur_w: float, picked: list[int]) -> None:
        state["nodes"] += 1
        if state["nodes"] > node_budget:
            raise BudgetExceededError(state["nodes"], node_budget)
        rest = allowed >> pos << pos
        if rest == 0:
            chosen = tuple(sorted(order[p] for p in picked))
            if cur_w > state["best_w"] + WEIGHT_TOL:
                state["best_w"], state["best_idx"] = cur_w, chosen
            elif cur_w >= state["best_w"] - WEIGHT_TOL and chosen < state["best_idx"]:
                state["best_w"] = max(state["best_w"], cur_w)
                state["best_idx"] = chosen
            return
        low = rest & -rest
        p = low.bit_length() - 1
        # Keep ties alive: prune only strictly worse subtrees.
        if cur_w + cand.bound(allowed, p) < state["best_w"] - WEIGHT_TOL:
            return
        picked.append(p)
        visit(p + 1, allowed & ~masks[p], cur_w + weights[p], picked)
        picked.pop()
        visit(p + 1, allowed & ~(1 << p), cur_w, picked)

    visit(0, (1 << k) - 1, 0.0, [])
    return state


def exact_align(
    instance: AlignmentInstance, *, node_budget: int = DEFAULT_NODE_BUDGET
) -> tuple[Alignment, SearchStats]:
    """Find a maximum-weight valid alignment.

    Branch and bound over candidates sorted by descending weight;
    including an edge immediately removes everything it conflicts with.
    Among equal-weight optima the lexicographically smallest chosen index
    set is returned, and zero-weight edges never appear in the result.

    Raises:
        BudgetExceededError: the node budget ran out before the search
            finished; exactness is never silently compromised.
    """
    t0 = time.perf_counter()
    cand = _Candidates(instance)
    masks = cand.conflict_masks(instance)
    state = _maximize(instance, masks, cand, node_budget)
    alignment = make_alignment(instance, state["best_idx"])
    stats = SearchStats(
        nodes_expanded=state["nodes"],
        best_bound=alignment.total_weight,
        elapsed=time.perf_counter() - t0,
    )
    return alignment, stats


def decide_alignment(
    instance: AlignmentInstance,
    x: float,
    y: int,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> bool:
    """Decide whether some valid alignment has weight >= x using at most y edges.

    Returns as soon as a witness is found; proving the negative explores
    the pruned search tree exhaustively.
    """
    cand = _Candidates(instance)
    masks = cand.conflict_masks(instance)
    k = len(cand.order)
    weights = cand.weights
    state = {"nodes": 0}

    def visit(pos: int, allowed: int, cur_w: float, count: int) -> bool:
        state["nodes"] += 1
        if state["nodes"] > node_budget:
            raise BudgetExceededError(state["nodes"], node_budget)
        if cur_w >= x - WEIGHT_TOL and count <= y:
            return True
        if count >= y:
            return False
        rest = allowed >> pos << pos
        if rest == 0:
            return False
        low = rest & -rest
        p = low.bit_length() - 1
        if cur_w + cand.bound(allowed, p, cap=y - count) < x - WEIGHT_TOL:
            return False
        if visit(p + 1, allowed & ~masks[p], cur_w + weights[p], count + 1):
            return True
        return visit(p + 1, allowed & ~(1 << p), cur_w, count)

    return visit(0, (1 << k) - 1, 0.0, 0)


def exact_align_isomorphic(
    instance: AlignmentInstance, *, node_budget: int = DEFAULT_NODE_BUDGET
) -> Alignment:
    """Maximum-weight alignment over the ancestry-isomorphic class.

    Every pair of chosen edges (a, b), (f, g) must satisfy both
    "a ancestor of f iff b ancestor of g" and "a descendant of f iff
    b descendant of g", in addition to distinct endpoints.  This is a
    restricted oracle, enumerative by design and meant for small
    candidate sets (roughly 20 positive edges).
    """
    cand = _Candidates(instance)
    masks = cand.isomorphism_masks(instance)
    state = _maximize(instance, masks, cand, node_budget)
    return make_alignment(instance, state["best_idx"])
