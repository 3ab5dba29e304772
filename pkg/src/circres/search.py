"""Bounded-width proof search and a dag-like width-saturation oracle.

``circular_search`` lays down one formula vertex per clause of width at most
``w`` (proper clauses plus the elementary tautologies), one axiom vertex per
variable, and every cut and split whose participating clauses all fit, then
asks the exact LP for flows giving the goal positive balance while keeping
every non-hypothesis balance nonnegative.  A feasible point, pruned to its
positive-flow support, is a checked circular proof.

``daglike_width_saturate`` is the classical comparison point: the least fixed
point of width-bounded resolution and weakening over the hypotheses.  A
formula has a dag-like width-``w`` refutation exactly when the saturation
contains the empty clause, which makes the pair of procedures a practical
probe for instances where circular width beats dag-like width.
"""

from __future__ import annotations

import itertools
from typing import Optional

from . import lp
from .core import Clause, CnfFormula, Literal
from .flowcheck import FlowAssignment, verify_flow
from .proofgraph import (
    AXIOM,
    CUT,
    SPLIT,
    FormulaVertex,
    InferenceVertex,
    ProofGraph,
    Rule,
)

DEFAULT_ROW_BUDGET = 2_000_000


class WidthError(ValueError):
    """Requested width below the width of the hypotheses or goal."""


class SearchBudgetError(RuntimeError):
    """The lattice LP would exceed the configured budget."""

    def __init__(self, rows: int, cols: int, budget: int) -> None:
        self.rows = rows
        self.cols = cols
        self.budget = budget
        super().__init__(
            f"search LP needs {rows} balance rows and {cols} flow variables, "
            f"exceeding the budget of {budget}"
        )


def lattice_size(num_vars: int, width: int) -> tuple[int, int]:
    """Formula and inference vertex counts of the search lattice."""
    import math

    formulas = n_infs = 0
    for k in range(min(width, num_vars) + 1):
        formulas += math.comb(num_vars, k) * 2 ** k
        if k <= width - 1:
            n_infs += 2 * math.comb(num_vars, k) * 2 ** k * (num_vars - k)
    formulas += num_vars          # elementary tautologies
    n_infs += num_vars            # axioms
    n_infs += 2 * num_vars        # collapsing unit splits
    return formulas, n_infs


def _proper_clauses(num_vars: int, width: int):
    """All non-tautological clauses of width at most ``width``, canonically ordered."""
    for k in range(width + 1):
        for vs in itertools.combinations(range(1, num_vars + 1), k):
            for signs in itertools.product((1, -1), repeat=k):
                yield Clause.from_signed(v * s for v, s in zip(vs, signs))


def circular_search(
    hypotheses: CnfFormula,
    goal: Clause,
    width: int,
    row_budget: int = DEFAULT_ROW_BUDGET,
) -> Optional[tuple[ProofGraph, FlowAssignment]]:
    """Search for a width-bounded circular proof of ``goal`` by linear feasibility.

    Returns the witnessed proof restricted to inference vertices of positive
    flow, or ``None`` when no flow exists (by soundness, in particular, when
    the goal does not follow).  Raises :class:`SearchBudgetError` if the
    lattice would be too large and :class:`WidthError` if ``width`` cannot
    even accommodate the inputs.
    """
    n = hypotheses.num_variables
    needed = max(
        [c.width for c in hypotheses.clauses] + [goal.width]
    ) if (hypotheses.clauses or goal.literals) else 0
    if width < needed:
        raise WidthError(f"width {width} below input width {needed}")
    if goal.is_tautological:
        raise WidthError("goal clause must not be tautological")

    clauses = list(_proper_clauses(n, width))
    taut = [Clause.from_ints(v, -v) for v in range(1, n + 1)]
    vid: dict[Clause, int] = {}
    formulas: list[FormulaVertex] = []
    for c in clauses + taut:
        vid[c] = len(formulas)
        formulas.append(FormulaVertex(vid[c], c))

    inferences: list[InferenceVertex] = []

    def add(kind: str, principal: int, ins: tuple[int, ...], outs: tuple[int, ...]) -> None:
        inferences.append(
            InferenceVertex(len(inferences), Rule(kind, principal), ins, outs)
        )

    for v in range(1, n + 1):
        add(AXIOM, v, (), (vid[Clause.from_ints(v, -v)],))
    for c in clauses:
        if c.width > width - 1:
            continue
        free = [v for v in range(1, n + 1) if v not in c.variables()]
        for x in free:
            pos = c.with_literal(Literal(x, True))
            neg = c.with_literal(Literal(x, False))
            add(CUT, x, (vid[pos], vid[neg]), (vid[c],))
            add(SPLIT, x, (vid[c],), (vid[pos], vid[neg]))
    # Splits from unit clauses onto their elementary tautologies keep the
    # lattice closed under the collapsing rule shape.
    for v in range(1, n + 1):
        for sign in (1, -1):
            unit = Clause.from_ints(sign * v)
            add(SPLIT, v, (vid[unit],), (vid[unit], vid[Clause.from_ints(v, -v)]))

    hyp_clauses = set(hypotheses.clauses)
    rows = sum(1 for c in vid if c not in hyp_clauses or c == goal)
    if rows + len(inferences) > row_budget:
        raise SearchBudgetError(rows, len(inferences), row_budget)

    goal_vertex = vid[goal]
    program = lp.LinearProgram(len(inferences))
    rowmap: dict[int, dict[int, int]] = {f.id: {} for f in formulas}
    for w in inferences:
        for u in w.out_neighbors:
            rowmap[u][w.id] = rowmap[u].get(w.id, 0) + 1
        for u in w.in_neighbors:
            rowmap[u][w.id] = rowmap[u].get(w.id, 0) - 1
    program.add_geq(rowmap[goal_vertex], 1)
    for f in formulas:
        if f.id == goal_vertex or f.clause in hyp_clauses:
            continue
        program.add_geq(rowmap[f.id], 0)
    for w in inferences:
        program.add_geq({w.id: 1}, 0)

    point = lp.feasible(program)
    if point is None:
        return None
    kept = [w for w in inferences if point[w.id] > 0]
    flow_values = {w.id: point[w.id] for w in kept}
    return _pruned(formulas, kept, flow_values, goal_vertex, hyp_clauses)


def _pruned(formulas, kept, flow_values, goal_vertex: int, hyp_clauses):
    touched = {goal_vertex}
    for w in kept:
        touched.update(w.in_neighbors)
        touched.update(w.out_neighbors)
    remap = {old: new for new, old in enumerate(sorted(touched))}
    new_formulas = tuple(
        FormulaVertex(remap[f.id], f.clause) for f in formulas if f.id in touched
    )
    new_infs = tuple(
        InferenceVertex(
            k,
            w.rule,
            tuple(remap[u] for u in w.in_neighbors),
            tuple(remap[u] for u in w.out_neighbors),
        )
        for k, w in enumerate(kept)
    )
    hyp_ids = frozenset(f.id for f in new_formulas if f.clause in hyp_clauses)
    graph = ProofGraph(new_formulas, new_infs, hyp_ids, remap[goal_vertex])
    flow = FlowAssignment({k: flow_values[w.id] for k, w in enumerate(kept)})
    if not verify_flow(graph, flow, graph.goal_id):
        raise AssertionError("pruned search solution fails its own flow check")
    return graph, flow


def daglike_width_saturate(hypotheses: CnfFormula, width: int) -> set[Clause]:
    """Least fixed point of width-bounded resolution and weakening.

    Tautological resolvents and weakenings are never useful for deriving
    further clauses of the closure and are skipped.  The result contains the
    empty clause exactly when a dag-like resolution refutation of width at
    most ``width`` exists.
    """
    needed = max((c.width for c in hypotheses.clauses), default=0)
    if width < needed:
        raise WidthError(f"width {width} below hypothesis width {needed}")
    n = hypotheses.num_variables

    seen: set[frozenset[int]] = set()
    by_literal: dict[int, list[frozenset[int]]] = {}
    queue: list[frozenset[int]] = []

    def push(c: frozenset[int]) -> None:
        if c in seen:
            return
        seen.add(c)
        queue.append(c)
        for lit in c:
            by_literal.setdefault(lit, []).append(c)

    for c in hypotheses.clauses:
        if not c.is_tautological:
            push(c.signed())

    while queue:
        c = queue.pop()
        if not c:
            continue
        for lit in c:
            for d in list(by_literal.get(-lit, ())):
                resolvent = (c - {lit}) | (d - {-lit})
                if len(resolvent) > width:
                    continue
                if any(-l in resolvent for l in resolvent):
                    continue
                push(resolvent)
        if len(c) < width:
            for v in range(1, n + 1):
                for lit in (v, -v):
                    if lit in c or -lit in c:
                        continue
                    push(c | {lit})

    return {Clause.from_signed(c) for c in seen}
