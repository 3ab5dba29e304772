"""Checking circular proofs: a sound one, and the classic unsound cycle.

A circular proof is a directed bipartite graph of clauses and rule
applications (axiom, symmetric cut, split) in which cycles are allowed.
What separates a proof from a mere pre-proof is a flow assignment: positive
weights on the rules such that only hypothesis clauses are consumed on net
and the goal clause is produced on net.  This demo builds both kinds of
graph and runs the exact-arithmetic certifier on them.
"""

from circres import (
    Clause,
    FlowAssignment,
    ProofGraphBuilder,
    balances,
    export_dot,
    find_witness,
    unsound_cycle_example,
    verify_flow,
)


def show(graph, flow=None):
    bal = balances(graph, flow.flows) if flow else None
    for v in graph.formula_vertices:
        marks = []
        if v.id in graph.hypothesis_ids:
            marks.append("hypothesis")
        if v.id == graph.goal_id:
            marks.append("goal")
        line = f"  [{v.id}] {v.clause}"
        if marks:
            line += f"  ({', '.join(marks)})"
        if bal is not None:
            line += f"  balance {bal[v.id]}"
        print(line)


print("A sound derivation of (x2) from (x2 | x1) and (x2 | ~x1):")
b = ProofGraphBuilder()
left = b.vertex(Clause.from_ints(2, 1))
right = b.vertex(Clause.from_ints(2, -1))
b.mark_hypothesis(left)
b.mark_hypothesis(right)
goal = b.cut(left, right, Clause.from_ints(2), principal=1)
b.set_goal(goal)
graph, flows = b.build()
flow = FlowAssignment(flows)
show(graph, flow)
print(f"verify_flow: {verify_flow(graph, flow, graph.goal_id)}")
print()

print("The unsound cycle: empty clause from no hypotheses.")
print("Each rule application is locally valid; the flow condition is what fails.")
cycle = unsound_cycle_example()
show(cycle)
report = find_witness(cycle)
print(f"find_witness -> witnessed = {report.witnessed}")
for message in report.violations:
    print(f"  {message}")
print()
print("DOT rendering of the unsound cycle (paste into graphviz):")
print(export_dot(cycle))
