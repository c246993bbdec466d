"""Weighted hierarchy-preserving alignment of directed acyclic graphs.

Exact branch-and-bound, independent-set and set-packing approximations,
polynomial dynamic programs for trees and chains, and a 3-CNF hardness
gadget, all over one shared graph-and-candidate model.
"""

from .core import (
    WEIGHT_TOL,
    Alignment,
    AlignmentInstance,
    CandidateEdge,
    DagGraph,
    ValidationReport,
    build_dag,
    complete_beta,
    conflict_set,
    is_conflict,
    make_alignment,
    make_instance,
    reachability,
    strip_zero,
    validate_alignment,
)
from .errors import (
    BetaIncompleteError,
    BudgetExceededError,
    CyclicGraphError,
    DagAlignError,
    DuplicatePairError,
    EmptyFormulaError,
    IndexOutOfRangeError,
    InvalidSpecError,
    NegativeWeightError,
    NotAChainError,
    NotATreeError,
    NotCertificateError,
    ParseError,
    SameEdgeError,
    TooManyVariablesError,
    WeightOutOfRangeError,
)
from .exact import (
    DEFAULT_NODE_BUDGET,
    SearchStats,
    decide_alignment,
    exact_align,
    exact_align_isomorphic,
)
from .approx import (
    STRATEGIES,
    ConflictGraph,
    WspInstance,
    approx_align,
    build_conflict_graph,
    build_wsp,
    wis_greedy,
    wis_ramsey,
    wsp_greedy,
)
from .trees import (
    DpTables,
    TreeOrder,
    chain_align,
    chain_align_table,
    hungarian_max,
    level_order,
    tree_align,
    tree_align_tables,
)
from .sat_gadget import (
    Cnf3Formula,
    GadgetInstance,
    alignment_to_assignment,
    evaluate,
    parse_dimacs,
    sat_brute,
    sat_to_alignment,
    serialize_dimacs,
)
from .bench import (
    BenchReport,
    BenchRow,
    GenSpec,
    gen_instance,
    run_benchmark,
)
from .serialize import (
    format_weight,
    parse_alignment,
    parse_instance,
    parse_instance_with_labels,
    serialize_alignment,
    serialize_instance,
)

__version__ = "0.1.0"
