import random
from fractions import Fraction

import pytest

from circres.core import Clause
from circres.generators import random_circular_proof, unsound_cycle_example
from circres.proofgraph import (
    AXIOM,
    CUT,
    SPLIT,
    FormulaVertex,
    IncompleteFlowError,
    InferenceVertex,
    ProofGraph,
    ProofGraphBuilder,
    Rule,
    StructureError,
    balance,
    balances,
    export_dot,
    sources_and_sinks,
    validate_rules,
)


def clause(*ints):
    return Clause.from_ints(*ints)


def single_cut():
    b = ProofGraphBuilder()
    x = b.vertex(clause(1))
    nx = b.vertex(clause(-1))
    b.mark_hypothesis(x)
    b.mark_hypothesis(nx)
    e = b.cut(x, nx, Clause(()), 1)
    b.set_goal(e)
    return b.build()


def test_valid_cut_template():
    b = ProofGraphBuilder()
    a = b.vertex(clause(1, 2))
    c = b.vertex(clause(1, -2))
    out = b.cut(a, c, clause(1), 2)
    b.set_goal(out)
    graph, _ = b.build()
    assert validate_rules(graph) == []


def test_cut_with_mismatched_side_clauses():
    graph = ProofGraph(
        (
            FormulaVertex(0, clause(1, 2)),
            FormulaVertex(1, clause(3, -2)),
            FormulaVertex(2, clause(1, 3)),
        ),
        (InferenceVertex(0, Rule(CUT, 2), (0, 1), (2,)),),
        frozenset(),
        2,
    )
    problems = validate_rules(graph)
    assert len(problems) == 1 and "side clause" in problems[0].message


def test_collapsing_split_is_valid():
    # Splitting (x1) on x1 keeps one consequent equal to the antecedent and
    # the other the elementary tautology.
    graph = ProofGraph(
        (FormulaVertex(0, clause(1)), FormulaVertex(1, clause(1, -1))),
        (InferenceVertex(0, Rule(SPLIT, 1), (0,), (0, 1)),),
        frozenset({0}),
        1,
    )
    assert validate_rules(graph) == []


def test_axiom_template():
    graph = ProofGraph(
        (FormulaVertex(0, clause(2, -2)),),
        (InferenceVertex(0, Rule(AXIOM, 2), (), (0,)),),
        frozenset(),
        0,
    )
    assert validate_rules(graph) == []
    bad = ProofGraph(
        (FormulaVertex(0, clause(2)),),
        (InferenceVertex(0, Rule(AXIOM, 2), (), (0,)),),
        frozenset(),
        0,
    )
    assert validate_rules(bad)


def test_dangling_reference_rejected():
    with pytest.raises(StructureError):
        ProofGraph(
            (FormulaVertex(0, clause(1)),),
            (InferenceVertex(0, Rule(SPLIT, 2), (0,), (7,)),),
            frozenset(),
            0,
        )


def test_validation_order_invariant():
    for seed in range(10):
        graph, _ = random_circular_proof(seed, 5, 9)
        shuffled = ProofGraph(
            tuple(reversed(graph.formula_vertices)),
            tuple(reversed(graph.inference_vertices)),
            graph.hypothesis_ids,
            graph.goal_id,
        )
        assert validate_rules(graph) == []
        assert validate_rules(shuffled) == []


def test_balance_examples():
    b = ProofGraphBuilder()
    out = b.axiom(1)
    b.set_goal(out)
    graph, flows = b.build()
    assert balance(graph, flows, out) == 1

    graph, flows = single_cut()
    bal = balances(graph, flows)
    assert bal[graph.goal_id] == 1
    sources, sinks = sources_and_sinks(graph, flows)
    assert sinks == {graph.goal_id}
    assert {graph.formula(u).clause for u in sources} == {clause(1), clause(-1)}


def test_unsound_cycle_balances_always_negative():
    graph = unsound_cycle_example()
    assert validate_rules(graph) == []
    x_id = next(v.id for v in graph.formula_vertices if v.clause == clause(1))
    for trial in range(20):
        rng = random.Random(trial)
        flows = {w.id: Fraction(rng.randint(1, 9), rng.randint(1, 9))
                 for w in graph.inference_vertices}
        assert balance(graph, flows, x_id) < 0


def test_pass_through_balance_zero():
    b = ProofGraphBuilder()
    src = b.vertex(clause(1))
    b.mark_hypothesis(src)
    (mid,) = b.split(src, 2, keep_negative=False, flow=3)
    (top,) = b.split(mid, 3, keep_negative=False, flow=3)
    b.set_goal(top)
    graph, flows = b.build()
    assert balance(graph, flows, mid) == 0


def test_missing_flow_entry():
    graph, flows = single_cut()
    flows.popitem()
    with pytest.raises(IncompleteFlowError):
        balances(graph, flows)


def test_double_counting_identity():
    # Sum of balances equals sum over rules of flow times (outdegree minus
    # indegree), exactly.
    for seed in range(25):
        graph, flow = random_circular_proof(seed, 6, 10)
        total = sum(balances(graph, flow).values())
        expected = sum(
            flow[w.id] * (len(w.out_neighbors) - len(w.in_neighbors))
            for w in graph.inference_vertices
        )
        assert total == expected


def test_no_inference_vertices_no_sources_or_sinks():
    graph = ProofGraph((FormulaVertex(0, clause(1)),), (), frozenset(), 0)
    assert sources_and_sinks(graph, {}) == (frozenset(), frozenset())


DOT_EDGE = r"^\s+[fi]\d+ -> [fi]\d+;$"
DOT_NODE = r'^\s+[fi]\d+ \[shape=(box|circle), label=".*"\];$'


def _check_dot_shape(text: str) -> tuple[int, int, int]:
    import re

    lines = text.strip().splitlines()
    assert lines[0] == "digraph proof {"
    assert lines[-1] == "}"
    boxes = circles = edges = 0
    for line in lines[1:-1]:
        if re.match(DOT_EDGE, line):
            edges += 1
        elif re.match(DOT_NODE, line):
            if "shape=box" in line:
                boxes += 1
            else:
                circles += 1
        else:
            raise AssertionError(f"unparsed DOT line: {line!r}")
    return boxes, circles, edges


def test_dot_empty_graph():
    graph = ProofGraph((), (), frozenset(), 0)
    text = export_dot(graph)
    assert text.startswith("digraph proof {") and text.rstrip().endswith("}")


def test_dot_unsound_cycle_counts():
    graph = unsound_cycle_example()
    boxes, circles, edges = _check_dot_shape(export_dot(graph))
    assert boxes == 4 and circles == 4 and edges >= 8


def test_dot_with_flows_reparses():
    graph, flows = single_cut()
    _check_dot_shape(export_dot(graph, flows))
