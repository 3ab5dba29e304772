import pytest

from circres.core import Clause, CnfFormula, implies_oracle
from circres.flowcheck import verify_flow
from circres.generators import complete_bipartite, gen_php, near_cubic_bipartite
from circres.proofgraph import validate_rules
from circres.search import (
    SearchBudgetError,
    WidthError,
    circular_search,
    daglike_width_saturate,
    lattice_size,
)


def clause(*ints):
    return Clause.from_ints(*ints)


def unit_contradiction():
    return CnfFormula.of(1, [clause(1), clause(-1)])


def test_unit_contradiction_width_one():
    res = circular_search(unit_contradiction(), Clause(()), 1)
    assert res is not None
    graph, flow = res
    assert validate_rules(graph) == []
    assert verify_flow(graph, flow, graph.goal_id)
    assert graph.width <= 1


def test_satisfiable_formula_never_refuted():
    cnf = CnfFormula.of(2, [clause(1, 2)])
    assert circular_search(cnf, Clause(()), 2) is None
    assert circular_search(cnf, Clause(()), 2 + 1) is None


def test_goal_derivation_non_refutation():
    # (x2) follows from {(x2|x1), (x2|~x1)}
    cnf = CnfFormula.of(2, [clause(2, 1), clause(2, -1)])
    res = circular_search(cnf, clause(2), 2)
    assert res is not None
    graph, flow = res
    assert verify_flow(graph, flow, graph.goal_id)
    assert graph.goal_clause() == clause(2)


def test_unimplied_goal_not_found():
    cnf = CnfFormula.of(2, [clause(1, 2)])
    assert circular_search(cnf, clause(1), 2) is None


def test_width_error_below_inputs():
    cnf = CnfFormula.of(3, [clause(1, 2, 3)])
    with pytest.raises(WidthError):
        circular_search(cnf, Clause(()), 2)
    with pytest.raises(WidthError):
        daglike_width_saturate(cnf, 2)


def test_budget_guard():
    cnf = gen_php(complete_bipartite(3, 2))
    with pytest.raises(SearchBudgetError) as err:
        circular_search(cnf, Clause(()), 3, row_budget=10)
    assert err.value.rows > 0 and err.value.cols > 0


def test_lattice_size_matches_enumeration():
    import itertools
    from circres.search import _proper_clauses

    for n, w in [(3, 2), (4, 3), (5, 2)]:
        formulas, infs = lattice_size(n, w)
        clauses = list(_proper_clauses(n, w))
        assert formulas == len(clauses) + n
        expected_infs = n + 2 * n  # axioms plus collapsing unit splits
        for c in clauses:
            if c.width <= w - 1:
                expected_infs += 2 * (n - len(c.variables()))
        assert infs == expected_infs


def test_php_search_finds_width_three_sparse():
    g = near_cubic_bipartite(4, 0)
    cnf = gen_php(g)
    res = circular_search(cnf, Clause(()), 3)
    assert res is not None
    graph, flow = res
    assert verify_flow(graph, flow, graph.goal_id)
    assert validate_rules(graph) == []
    assert graph.width <= 3


def test_php_complete_width_three():
    cnf = gen_php(complete_bipartite(3, 2))
    res = circular_search(cnf, Clause(()), 3)
    assert res is not None
    assert res[0].width <= 3


def test_monotone_in_width():
    cnf = unit_contradiction()
    for w in (1, 2, 3):
        assert circular_search(cnf, Clause(()), w) is not None


def test_search_agrees_with_oracle_on_refutability():
    import itertools
    import random

    rng = random.Random(13)
    for _ in range(15):
        n = 3
        clauses = []
        for _ in range(rng.randint(2, 5)):
            k = rng.randint(1, 2)
            vs = rng.sample(range(1, n + 1), k)
            clauses.append(Clause.from_signed(v if rng.random() < 0.5 else -v for v in vs))
        cnf = CnfFormula.of(n, clauses)
        unsat = implies_oracle(cnf, Clause(()))
        found = circular_search(cnf, Clause(()), 3) is not None
        if found:
            assert unsat
        if not unsat:
            assert not found


# ---------------------------------------------------------------------------
# dag-like width saturation

def test_saturate_unit_contradiction():
    out = daglike_width_saturate(unit_contradiction(), 1)
    assert Clause(()) in out


def test_saturate_satisfiable_never_empty():
    cnf = CnfFormula.of(2, [clause(1, 2), clause(-1, 2)])
    out = daglike_width_saturate(cnf, 2)
    assert Clause(()) not in out
    assert clause(2) in out  # the resolvent appears


def test_saturate_contains_weakenings():
    cnf = CnfFormula.of(2, [clause(1)])
    out = daglike_width_saturate(cnf, 2)
    assert clause(1, 2) in out and clause(1, -2) in out


def test_saturate_derivations_are_sound():
    cnf = CnfFormula.of(3, [clause(1, 2), clause(-1, 3), clause(-2, 3)])
    out = daglike_width_saturate(cnf, 3)
    for c in out:
        assert implies_oracle(cnf, c)


def test_daglike_goal_implies_circular_success_for_refutations():
    # For refutations a dag-like width-w derivation embeds in the circular
    # lattice at the same width.
    cases = [
        unit_contradiction(),
        CnfFormula.of(2, [clause(1), clause(-1, 2), clause(-2)]),
        gen_php(complete_bipartite(3, 2)),
    ]
    for cnf in cases:
        w = max(3, max(c.width for c in cnf.clauses))
        if Clause(()) in daglike_width_saturate(cnf, w):
            assert circular_search(cnf, Clause(()), w) is not None
