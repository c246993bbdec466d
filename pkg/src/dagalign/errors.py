"""Exception hierarchy shared by all dagalign modules."""


class DagAlignError(Exception):
    """Base class for every error raised by this package."""


class CyclicGraphError(DagAlignError):
    """The edge list contains a directed cycle, so no DAG can be built."""


class IndexOutOfRangeError(DagAlignError, IndexError):
    """A vertex or candidate-edge index falls outside its valid range."""


class SameEdgeError(DagAlignError, ValueError):
    """The conflict relation was queried with two identical candidate edges."""


class WeightOutOfRangeError(DagAlignError, ValueError):
    """A candidate-edge weight lies outside the closed interval [0, 1]."""


class DuplicatePairError(DagAlignError, ValueError):
    """Two candidate edges share the same (left, right) vertex pair."""


class ParseError(DagAlignError, ValueError):
    """Text input does not conform to the documented file format."""


class BudgetExceededError(DagAlignError):
    """An exact search exhausted its node budget before finishing."""

    def __init__(self, nodes_expanded: int, budget: int):
        super().__init__(f"search expanded {nodes_expanded} nodes, budget {budget}")
        self.nodes_expanded = nodes_expanded
        self.budget = budget


class NotATreeError(DagAlignError, ValueError):
    """The graph is not a rooted tree with all edges directed away from the root."""


class NotAChainError(DagAlignError, ValueError):
    """The graph is not a single directed path."""


class BetaIncompleteError(DagAlignError, ValueError):
    """The candidate set does not cover every vertex pair and auto-completion is off."""


class NegativeWeightError(DagAlignError, ValueError):
    """A bipartite matching weight matrix contains a negative entry."""


class EmptyFormulaError(DagAlignError, ValueError):
    """A CNF formula with no clauses cannot be turned into a gadget."""


class NotCertificateError(DagAlignError, ValueError):
    """The alignment does not reach the gadget target weight."""


class TooManyVariablesError(DagAlignError, ValueError):
    """The brute-force satisfiability check is capped at 24 variables."""


class InvalidSpecError(DagAlignError, ValueError):
    """An instance-generator specification has out-of-range parameters."""
