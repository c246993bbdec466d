"""Shared fixtures: the two hand-checked reference instances.

E0 pairs two 2-chains with crossing candidates; its optimum is the
parallel matching of weight 1.0 and the crossing pair conflicts under
condition 1.  E1 pairs a two-leaf star with a 2-chain and separates the
general optimum (2.0) from what the tree dynamic program can express
(1.0); both values are pinned by enumeration in the tests.
"""

import pytest

from dagalign import build_dag, complete_beta, make_instance

# E0 beta indices, in construction order.
U1, U2, U3, U4 = 0, 1, 2, 3


@pytest.fixture
def e0():
    return make_instance(
        build_dag(2, [(0, 1)]),
        build_dag(2, [(0, 1)]),
        [(0, 0, 0.5), (1, 1, 0.5), (0, 1, 0.9), (1, 0, 0.9)],
    )


@pytest.fixture
def e1():
    # g1: root 0 with leaf children 1 and 2; g2: chain 0 -> 1.
    partial = make_instance(
        build_dag(3, [(0, 1), (0, 2)]),
        build_dag(2, [(0, 1)]),
        [(1, 0, 1.0), (2, 1, 1.0)],
    )
    return complete_beta(partial)
