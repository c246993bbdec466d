"""Formula encoding, certificate extraction, brute-force satisfiability."""

import random

import pytest

from dagalign import (
    Cnf3Formula,
    EmptyFormulaError,
    NotCertificateError,
    ParseError,
    TooManyVariablesError,
    alignment_to_assignment,
    decide_alignment,
    evaluate,
    exact_align,
    make_alignment,
    parse_dimacs,
    sat_brute,
    sat_to_alignment,
    serialize_dimacs,
    validate_alignment,
)

PHI1 = Cnf3Formula(2, [((0, 0), (1, 0), (1, 1))])  # (x1 or x2 or not x2)
PHI2 = Cnf3Formula(1, [((0, 0), (0, 0), (0, 0)), ((0, 1), (0, 1), (0, 1))])


def random_formula(rng: random.Random, max_n=4, max_m=4) -> Cnf3Formula:
    n = rng.randint(1, max_n)
    m = rng.randint(1, max_m)
    clauses = [
        tuple((rng.randrange(n), rng.randrange(2)) for _ in range(3)) for _ in range(m)
    ]
    return Cnf3Formula(n, clauses)


class TestConstruction:
    def test_phi1_sizes(self):
        gadget = sat_to_alignment(PHI1)
        assert gadget.instance.g1.vertex_count == 3
        assert gadget.instance.g2.vertex_count == 6
        assert len(gadget.instance.beta) == 9
        assert gadget.target_weight == 3.0 and gadget.target_size == 3

    def test_phi2_sizes(self):
        gadget = sat_to_alignment(PHI2)
        assert gadget.instance.g1.vertex_count == 6
        assert gadget.instance.g2.vertex_count == 8
        assert len(gadget.instance.beta) == 18
        assert gadget.target_weight == 6.0

    def test_size_formulas_and_acyclicity_on_random_formulas(self):
        rng = random.Random(5)
        for _ in range(100):
            formula = random_formula(rng)
            n, m = formula.variable_count, len(formula.clauses)
            gadget = sat_to_alignment(formula)  # build_dag rejects cycles
            assert gadget.instance.g1.vertex_count == 3 * m
            assert gadget.instance.g2.vertex_count == 2 * n * m + 2 * m
            assert len(gadget.instance.beta) == 9 * m
            assert all(e.weight == 1.0 for e in gadget.instance.beta)

    def test_empty_formula_rejected(self):
        with pytest.raises(EmptyFormulaError):
            sat_to_alignment(Cnf3Formula(1, []))

    def test_duplicate_literals_make_distinct_vertices(self):
        gadget = sat_to_alignment(Cnf3Formula(1, [((0, 0), (0, 0), (0, 0))]))
        assert gadget.instance.g1.vertex_count == 3
        assert len({lab for lab in gadget.v1_labels}) == 1


class TestDecideDirection:
    def test_phi1_reaches_target(self):
        gadget = sat_to_alignment(PHI1)
        assert decide_alignment(gadget.instance, gadget.target_weight,
                                gadget.target_size)

    def test_phi2_unsat_misses_target(self):
        gadget = sat_to_alignment(PHI2)
        assert sat_brute(PHI2) is None
        assert not decide_alignment(gadget.instance, gadget.target_weight,
                                    gadget.target_size)

    def test_feasible_implies_satisfiable(self):
        # The sound direction of the encoding: reaching the target weight
        # certifies satisfiability (the converse does not hold, see below).
        rng = random.Random(17)
        for _ in range(60):
            formula = random_formula(rng)
            gadget = sat_to_alignment(formula)
            if decide_alignment(gadget.instance, gadget.target_weight,
                                gadget.target_size):
                assert sat_brute(formula) is not None

    def test_known_incompleteness_of_the_encoding(self):
        # Satisfiable formula whose gadget cannot reach the target: every
        # witness for the first clause is a negative occurrence of a
        # variable that also occurs positively, and such an occurrence can
        # only map to a clause slot, of which there are two for three
        # occurrence vertices.  Pinned by exhaustive enumeration in the
        # acceptance suite analysis.
        formula = Cnf3Formula(3, [((0, 1), (1, 1), (2, 1)),
                                  ((0, 0), (1, 0), (2, 0))])
        assert sat_brute(formula) is not None
        gadget = sat_to_alignment(formula)
        assert not decide_alignment(gadget.instance, gadget.target_weight,
                                    gadget.target_size)
        best, _ = exact_align(gadget.instance)
        assert best.total_weight == pytest.approx(5.0)

    def test_mutual_exclusion_of_opposite_anchors(self):
        # No valid gadget alignment pins a variable both true and false.
        rng = random.Random(23)
        for _ in range(30):
            formula = random_formula(rng, max_n=3, max_m=3)
            gadget = sat_to_alignment(formula)
            best, _ = exact_align(gadget.instance)
            assert validate_alignment(gadget.instance, best.chosen).valid
            n, m = formula.variable_count, len(formula.clauses)
            pinned_true, pinned_false = set(), set()
            for idx in best.chosen:
                edge = gadget.instance.beta[idx]
                (j, p), i = gadget.v1_labels[edge.left]
                anchor = j * m + i if p == 0 else n * m + j * m + i
                if edge.right == anchor:
                    (pinned_true if p == 0 else pinned_false).add(j)
            assert not (pinned_true & pinned_false)


class TestExtraction:
    def test_phi1_round_trip(self):
        gadget = sat_to_alignment(PHI1)
        alignment, _ = exact_align(gadget.instance)
        assert alignment.total_weight == pytest.approx(gadget.target_weight)
        assignment = alignment_to_assignment(gadget, alignment)
        assert evaluate(PHI1, assignment)

    def test_below_target_rejected(self):
        gadget = sat_to_alignment(PHI1)
        with pytest.raises(NotCertificateError):
            alignment_to_assignment(gadget, make_alignment(gadget.instance, [0]))

    def test_unused_variable_defaults_true(self):
        formula = Cnf3Formula(2, [((0, 0), (0, 0), (0, 0))])  # x2 never occurs
        gadget = sat_to_alignment(formula)
        alignment, _ = exact_align(gadget.instance)
        assignment = alignment_to_assignment(gadget, alignment)
        assert assignment[1] is True
        assert evaluate(formula, assignment)


class TestSatBrute:
    def test_phi1_satisfiable(self):
        assert sat_brute(PHI1) is not None

    def test_phi2_unsat(self):
        assert sat_brute(PHI2) is None

    def test_first_assignment_in_binary_order(self):
        # (x1 or x1 or x1): smallest satisfying counter is 1 -> x1 only.
        formula = Cnf3Formula(2, [((0, 0), (0, 0), (0, 0))])
        assert sat_brute(formula) == (True, False)

    def test_variable_cap(self):
        with pytest.raises(TooManyVariablesError):
            sat_brute(Cnf3Formula(25, [((0, 0), (1, 0), (2, 0))]))


class TestDimacs:
    def test_round_trip(self):
        text = serialize_dimacs(PHI1)
        assert parse_dimacs(text) == PHI1

    def test_parse_with_comments(self):
        text = "c header comment\np cnf 2 1\n1 2 -2 0\n"
        assert parse_dimacs(text) == PHI1

    def test_rejects_non_three_literal_clause(self):
        with pytest.raises(ParseError):
            parse_dimacs("p cnf 2 1\n1 2 0\n")

    def test_rejects_missing_header(self):
        with pytest.raises(ParseError):
            parse_dimacs("1 2 -2 0\n")

    def test_rejects_out_of_range_literal(self):
        with pytest.raises(ParseError):
            parse_dimacs("p cnf 2 1\n1 2 3 0\n")

    def test_rejects_clause_count_mismatch(self):
        with pytest.raises(ParseError):
            parse_dimacs("p cnf 2 2\n1 2 -2 0\n")
