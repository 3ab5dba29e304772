"""Certification of circular proofs through flow assignments.

A flow assignment gives every inference vertex a positive weight.  It
witnesses a proof when every formula vertex of strictly negative balance is
labelled by a hypothesis clause and the goal vertex has strictly positive
balance.  Witness search is an exact linear feasibility question; once a
witness exists the proof is sound, and this module also produces the two
artifacts that make soundness auditable:

* a falsified-source trace: given an assignment falsifying a sink, walk the
  graph (decreasing total flow) to a falsified hypothesis vertex;
* a dual certificate: multipliers that collapse the semantic inequalities of
  the rules into the contradiction ``0 >= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import lp
from .core import Assignment, evaluate
from .proofgraph import (
    IncompleteFlowError,
    ProofGraph,
    balances,
    validate_rules,
)


class ValidationError(ValueError):
    """The graph fails its local rule templates."""


class NotWitnessError(ValueError):
    """A flow assignment expected to witness a proof does not."""


class PreconditionError(ValueError):
    """An operation was called outside its stated precondition."""


@dataclass(frozen=True)
class FlowAssignment:
    """Positive rational flow per inference vertex id."""

    flows: dict[int, Fraction]

    def __getitem__(self, iid: int) -> Fraction:
        try:
            return self.flows[iid]
        except KeyError:
            raise IncompleteFlowError(f"no flow for inference vertex {iid}") from None

    def __contains__(self, iid: int) -> bool:
        return iid in self.flows

    def is_total(self, graph: ProofGraph) -> bool:
        return all(w.id in self.flows for w in graph.inference_vertices)

    def is_positive(self) -> bool:
        return all(f > 0 for f in self.flows.values())

    def is_integral(self) -> bool:
        return all(f.denominator == 1 for f in self.flows.values())

    def total(self) -> Fraction:
        return sum(self.flows.values(), Fraction(0))

    def bit_size(self) -> int:
        """Diagnostic size of the weights themselves."""
        return sum(
            f.numerator.bit_length() + f.denominator.bit_length()
            for f in self.flows.values()
        )

    @staticmethod
    def uniform(graph: ProofGraph, value: Fraction | int = 1) -> "FlowAssignment":
        return FlowAssignment({w.id: Fraction(value) for w in graph.inference_vertices})


@dataclass(frozen=True)
class CheckReport:
    witnessed: bool
    flow: Optional[FlowAssignment]
    balances: dict[int, Fraction] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)


def _witness_program(graph: ProofGraph, goal_vertex: int,
                     positive_lower_bound: int = 1) -> tuple[lp.LinearProgram, list[int]]:
    """Feasibility program for flows witnessing a proof at ``goal_vertex``.

    Rows: goal balance >= 1; balance >= 0 for every non-hypothesis,
    non-goal formula vertex; each flow variable >= ``positive_lower_bound``.
    Returns the program and the inference-vertex ids in variable order.
    """
    order = sorted(w.id for w in graph.inference_vertices)
    var_of = {iid: k for k, iid in enumerate(order)}
    program = lp.LinearProgram(len(order))
    hyp_clauses = graph.hypothesis_clauses()

    rowmap: dict[int, dict[int, Fraction]] = {v.id: {} for v in graph.formula_vertices}
    for w in graph.inference_vertices:
        k = var_of[w.id]
        for u in w.out_neighbors:
            rowmap[u][k] = rowmap[u].get(k, Fraction(0)) + 1
        for u in w.in_neighbors:
            rowmap[u][k] = rowmap[u].get(k, Fraction(0)) - 1

    program.add_geq(rowmap[goal_vertex], 1)
    for v in graph.formula_vertices:
        if v.id == goal_vertex:
            continue
        if v.clause in hyp_clauses:
            continue
        program.add_geq(rowmap[v.id], 0)
    for iid in order:
        program.add_geq({var_of[iid]: 1}, positive_lower_bound)
    return program, order


def find_witness(graph: ProofGraph) -> CheckReport:
    """Search for a witnessing flow by exact linear feasibility.

    The goal clause may label several vertices; each is tried in id order and
    the first success is reported.  Refuses graphs with rule violations.
    """
    problems = validate_rules(graph)
    if problems:
        raise ValidationError("; ".join(str(p) for p in problems))
    goal_clause = graph.goal_clause()
    candidates = sorted(
        v.id for v in graph.formula_vertices if v.clause == goal_clause
    )
    for a in candidates:
        program, order = _witness_program(graph, a)
        point = lp.feasible(program)
        if point is not None:
            flow = FlowAssignment({iid: point[k] for k, iid in enumerate(order)})
            return CheckReport(True, flow, balances(graph, flow))
    return CheckReport(
        False, None, {}, [f"no flow assignment witnesses goal clause {goal_clause}"]
    )


def verify_flow(graph: ProofGraph, flow: FlowAssignment, goal_id: int) -> bool:
    """Arithmetic re-check, no solver: positive total flow, hypothesis-only
    sources, strictly positive goal balance."""
    if not flow.is_total(graph):
        raise IncompleteFlowError("flow assignment does not cover all inference vertices")
    if not flow.is_positive():
        return False
    bal = balances(graph, flow)
    hyp_clauses = graph.hypothesis_clauses()
    for v in graph.formula_vertices:
        if bal[v.id] < 0 and v.clause not in hyp_clauses:
            return False
    return bal[goal_id] > 0


def integralize(graph: ProofGraph, flow: FlowAssignment,
                goal_id: Optional[int] = None) -> FlowAssignment:
    """Scale a witnessing flow to positive integers.

    Uniform positive scaling by the common denominator preserves the sign of
    every balance, hence the source and sink sets.
    """
    if not flow.is_total(graph):
        raise IncompleteFlowError("flow assignment does not cover all inference vertices")
    if not flow.is_positive():
        raise NotWitnessError("flows must be strictly positive")
    if goal_id is not None and not verify_flow(graph, flow, goal_id):
        raise NotWitnessError("flow assignment does not witness the proof")
    scale = math.lcm(*(f.denominator for f in flow.flows.values())) if flow.flows else 1
    return FlowAssignment({iid: f * scale for iid, f in flow.flows.items()})


def trace_falsified_source(graph: ProofGraph, integral_flow: FlowAssignment,
                           sink_id: int, alpha: Assignment) -> int:
    """Walk from a falsified sink to a falsified source.

    Works on a private copy of the integral flow: at each step it picks an
    in-neighbour ``r`` of the current falsified sink, moves to a falsified
    antecedent of ``r``, and removes ``min(balance(sink), flow(r))`` units of
    flow through ``r``.  The total flow strictly decreases each step, so the
    walk terminates; it stops at the first vertex of negative balance, which
    is returned.
    """
    vid, _ = _trace_with_stats(graph, integral_flow, sink_id, alpha)
    return vid


def _trace_with_stats(graph: ProofGraph, integral_flow: FlowAssignment,
                      sink_id: int, alpha: Assignment) -> tuple[int, int]:
    if not integral_flow.is_total(graph):
        raise IncompleteFlowError("flow assignment does not cover all inference vertices")
    if not integral_flow.is_integral() or not integral_flow.is_positive():
        raise PreconditionError("tracer requires positive integral flows")
    if evaluate(graph.formula(sink_id).clause, alpha):
        raise PreconditionError("assignment satisfies the sink clause")

    flows = dict(integral_flow.flows)
    bal = balances(graph, flows)
    if bal[sink_id] <= 0:
        raise PreconditionError("sink vertex must have strictly positive balance")

    s = sink_id
    steps = 0
    while True:
        # Invariant: alpha falsifies clause(s) and bal[s] > 0.
        r = None
        for cand in sorted(graph.producers(s)):
            if flows.get(cand, Fraction(0)) > 0:
                r = cand
                break
        if r is None:
            raise AssertionError("positive balance without a flowing producer")
        rule_vertex = graph.inference(r)
        u = None
        for cand in sorted(rule_vertex.in_neighbors):
            if not evaluate(graph.formula(cand).clause, alpha):
                u = cand
                break
        if u is None:
            raise AssertionError(
                "falsified consequent with all antecedents satisfied; unsound rule"
            )
        if bal[u] < 0:
            return u, steps
        # Each reduction removes at least one unit of total flow.
        steps += 1
        delta = min(bal[s], flows[r])
        flows[r] -= delta
        for v in rule_vertex.in_neighbors:
            bal[v] += delta
        for v in rule_vertex.out_neighbors:
            bal[v] -= delta
        if bal[u] <= 0:
            raise AssertionError("degenerate rule broke the sink invariant")
        s = u


@dataclass(frozen=True)
class DualCertificate:
    """Multipliers for the semantic inequality system of a checked proof.

    ``formula_multipliers`` weight one inequality per formula vertex (role
    dependent: goal, source, or interior) and ``rule_multipliers`` weight the
    validity inequality of each inference vertex.
    """

    goal_id: int
    source_ids: frozenset[int]
    formula_multipliers: dict[int, Fraction]
    rule_multipliers: dict[int, Fraction]


def dual_certificate(graph: ProofGraph, flow: FlowAssignment, goal_id: int) -> DualCertificate:
    """Multipliers ``balance(u)/balance(goal)`` and ``flow(w)/balance(goal)``.

    Sources take weight ``-balance/balance(goal)`` so every multiplier is
    nonnegative; :func:`verify_dual_certificate` checks the combination.
    """
    if not verify_flow(graph, flow, goal_id):
        raise NotWitnessError("flow assignment does not witness the proof")
    bal = balances(graph, flow)
    bs = bal[goal_id]
    sources = frozenset(u for u, b in bal.items() if b < 0)
    b_mult = {
        u: (-b / bs if u in sources else b / bs) for u, b in bal.items()
    }
    c_mult = {w.id: flow[w.id] / bs for w in graph.inference_vertices}
    return DualCertificate(goal_id, sources, b_mult, c_mult)


def certificate_combination(graph: ProofGraph,
                            cert: DualCertificate) -> tuple[dict[int, Fraction], Fraction]:
    """Expand the weighted sum of semantic inequalities symbolically.

    Every formula vertex ``u`` carries an indeterminate for the truth value of
    its clause.  The inequalities (all in ``expr >= 0`` form):

    * goal vertex: ``-Z_goal``;
    * source vertex: ``Z_u - 1``;
    * any other formula vertex: ``1 - Z_u``;
    * inference vertex ``w``: ``sum(1 - Z_a, antecedents) - sum(1 - Z_b, consequents)``.

    Returns the coefficient of every indeterminate and the constant term of
    the combination.
    """
    coeff: dict[int, Fraction] = {v.id: Fraction(0) for v in graph.formula_vertices}
    const = Fraction(0)
    for v in graph.formula_vertices:
        b = cert.formula_multipliers.get(v.id, Fraction(0))
        if not b:
            continue
        if v.id == cert.goal_id:
            coeff[v.id] -= b
        elif v.id in cert.source_ids:
            coeff[v.id] += b
            const -= b
        else:
            coeff[v.id] -= b
            const += b
    for w in graph.inference_vertices:
        c = cert.rule_multipliers.get(w.id, Fraction(0))
        if not c:
            continue
        for u in w.in_neighbors:
            coeff[u] -= c
            const += c
        for u in w.out_neighbors:
            coeff[u] += c
            const -= c
    return coeff, const


def verify_dual_certificate(graph: ProofGraph, cert: DualCertificate) -> bool:
    """True iff the combination collapses exactly to ``0 >= 1``.

    All multipliers must be nonnegative, every indeterminate must cancel, and
    the constant must be exactly ``-1`` (the combined inequality reads
    ``-1 >= 0``, equivalently ``0 >= 1``).
    """
    if any(b < 0 for b in cert.formula_multipliers.values()):
        return False
    if any(c < 0 for c in cert.rule_multipliers.values()):
        return False
    coeff, const = certificate_combination(graph, cert)
    return all(c == 0 for c in coeff.values()) and const == Fraction(-1)
