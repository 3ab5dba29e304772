import random

import pytest

from circres.core import (
    Assignment,
    Clause,
    CnfFormula,
    IncompleteAssignmentError,
    Literal,
    MalformedLiteralError,
    TooLargeError,
    all_assignments,
    evaluate,
    implies_oracle,
    normalize_clause,
)


def clause(*ints):
    return Clause.from_ints(*ints)


def test_literal_rejects_bad_variable():
    with pytest.raises(MalformedLiteralError):
        Literal(0)
    with pytest.raises(MalformedLiteralError):
        Literal(-3)
    with pytest.raises(MalformedLiteralError):
        Literal.from_int(0)


def test_normalize_deduplicates():
    c = normalize_clause([Literal(1), Literal(1), Literal(2)])
    assert c == clause(1, 2)
    assert c.width == 2


def test_normalize_keeps_complementary_pair():
    c = normalize_clause([Literal(1), Literal(1, False)])
    assert c.width == 2
    assert c.is_tautological


def test_empty_clause():
    c = normalize_clause([])
    assert c.is_empty and c.width == 0 and not c.is_tautological


def test_normalize_idempotent():
    rng = random.Random(5)
    for _ in range(200):
        lits = [
            Literal(rng.randint(1, 6), rng.random() < 0.5) for _ in range(rng.randint(0, 8))
        ]
        once = normalize_clause(lits)
        assert normalize_clause(once.literals) == once


def test_evaluate_examples():
    alpha = Assignment({1: 0, 2: 0})
    assert evaluate(clause(1, -2), alpha)
    assert not evaluate(Clause(()), alpha)
    assert evaluate(clause(1, -1), alpha)


def test_evaluate_matches_disjunction_semantics():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(1, 6)
        lits = [Literal(rng.randint(1, n), rng.random() < 0.5) for _ in range(rng.randint(0, 6))]
        c = normalize_clause(lits)
        for alpha in all_assignments(n):
            want = any(alpha.satisfies(l) for l in lits)
            assert evaluate(c, alpha) == want


def test_evaluate_incomplete_assignment():
    with pytest.raises(IncompleteAssignmentError):
        evaluate(clause(3), Assignment({1: 1}))


def test_implies_oracle_unit_propagation():
    hyp = CnfFormula.of(2, [clause(1), clause(-1, 2)])
    assert implies_oracle(hyp, clause(2))


def test_implies_oracle_no_hypotheses():
    assert not implies_oracle(CnfFormula.of(1, []), clause(1))


def test_implies_oracle_small_pigeonhole():
    # Two pigeons, one hole: every assignment of the two edge variables
    # falsifies some clause, so the empty clause follows.
    hyp = CnfFormula.of(2, [clause(1), clause(2), clause(-1, -2)])
    assert implies_oracle(hyp, Clause(()))


def test_implies_oracle_guard():
    with pytest.raises(TooLargeError):
        implies_oracle(CnfFormula.of(30, []), Clause(()))


def _implies_second_opinion(hyp: CnfFormula, goal: Clause) -> bool:
    """Independent route: hypotheses plus the negated goal are unsatisfiable."""
    n = max(hyp.num_variables, max(goal.variables(), default=0))
    negated = [normalize_clause([l.complement]) for l in goal.literals]
    for alpha in all_assignments(n):
        if all(evaluate(c, alpha) for c in hyp.clauses) and all(
            evaluate(u, alpha) for u in negated
        ):
            return False
    return True


def test_implies_oracle_against_negated_goal_enumeration():
    rng = random.Random(3)
    for _ in range(80):
        n = rng.randint(1, 8)
        clauses = []
        for _ in range(rng.randint(0, 5)):
            k = rng.randint(1, min(3, n))
            vs = rng.sample(range(1, n + 1), k)
            clauses.append(Clause.from_signed(v if rng.random() < 0.5 else -v for v in vs))
        hyp = CnfFormula.of(n, clauses)
        k = rng.randint(0, min(3, n))
        vs = rng.sample(range(1, n + 1), k)
        goal = Clause.from_signed(v if rng.random() < 0.5 else -v for v in vs)
        assert implies_oracle(hyp, goal) == _implies_second_opinion(hyp, goal)


def test_cnf_rejects_out_of_range_literal():
    with pytest.raises(MalformedLiteralError):
        CnfFormula.of(1, [clause(2)])
