"""Circular pre-proof graphs: rules axiom / symmetric cut / split, plus local
rule validation, balances, and DOT export.

A proof graph is a directed bipartite graph between formula vertices (each
holding a clause) and inference vertices (each holding a rule).  Cycles are
permitted; the graph stores the compact representation in which backedges
between equal formulas have already been contracted.  Whether such a graph
constitutes an actual proof is decided by the flow machinery in
:mod:`circres.flowcheck`; nothing here penalizes circularity itself.

Rule shapes, with principal variable ``x`` and side clause ``C`` (all clause
matching happens after normalization, so idempotent collapses like
``C | x == C`` when ``x`` already occurs in ``C`` are legal):

* axiom: no antecedent, one consequent ``x | ~x``;
* cut: antecedents ``C | x`` and ``C | ~x``, consequent ``C``;
* split: antecedent ``C``, consequents among ``C | x`` and ``C | ~x``
  (one of the two may be suppressed).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import Clause, Literal

AXIOM = "axiom"
CUT = "cut"
SPLIT = "split"


class StructureError(ValueError):
    """A vertex referenced a neighbor id that does not exist."""


class IncompleteFlowError(KeyError):
    """A flow assignment is missing an inference vertex."""


@dataclass(frozen=True)
class Rule:
    """An inference rule tag: one of axiom / cut / split with its principal variable."""

    kind: str
    principal: int

    def __post_init__(self) -> None:
        if self.kind not in (AXIOM, CUT, SPLIT):
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if self.principal < 1:
            raise ValueError(f"principal variable must be >= 1, got {self.principal}")


@dataclass(frozen=True)
class FormulaVertex:
    id: int
    clause: Clause


@dataclass(frozen=True)
class InferenceVertex:
    id: int
    rule: Rule
    in_neighbors: tuple[int, ...]
    out_neighbors: tuple[int, ...]


@dataclass(frozen=True)
class RuleViolation:
    vertex_id: int
    message: str

    def __str__(self) -> str:
        return f"inference {self.vertex_id}: {self.message}"


@dataclass(frozen=True)
class ProofGraph:
    """Immutable circular pre-proof graph with designated hypotheses and goal."""

    formula_vertices: tuple[FormulaVertex, ...]
    inference_vertices: tuple[InferenceVertex, ...]
    hypothesis_ids: frozenset[int]
    goal_id: int

    def __post_init__(self) -> None:
        fids = [v.id for v in self.formula_vertices]
        iids = [w.id for w in self.inference_vertices]
        if len(set(fids)) != len(fids):
            raise StructureError("duplicate formula-vertex id")
        if len(set(iids)) != len(iids):
            raise StructureError("duplicate inference-vertex id")
        fid_set = set(fids)
        for w in self.inference_vertices:
            for u in (*w.in_neighbors, *w.out_neighbors):
                if u not in fid_set:
                    raise StructureError(f"inference {w.id} references unknown formula id {u}")
        for h in self.hypothesis_ids:
            if h not in fid_set:
                raise StructureError(f"hypothesis mark references unknown formula id {h}")
        if self.formula_vertices and self.goal_id not in fid_set:
            raise StructureError(f"goal id {self.goal_id} is not a formula vertex")

    # -- lookups ------------------------------------------------------------

    def formula(self, fid: int) -> FormulaVertex:
        return self._formula_map[fid]

    def inference(self, iid: int) -> InferenceVertex:
        return self._inference_map[iid]

    @property
    def _formula_map(self) -> dict[int, FormulaVertex]:
        m = getattr(self, "_fmap", None)
        if m is None:
            m = {v.id: v for v in self.formula_vertices}
            object.__setattr__(self, "_fmap", m)
        return m

    @property
    def _inference_map(self) -> dict[int, InferenceVertex]:
        m = getattr(self, "_imap", None)
        if m is None:
            m = {w.id: w for w in self.inference_vertices}
            object.__setattr__(self, "_imap", m)
        return m

    def producers(self, fid: int) -> tuple[int, ...]:
        """Inference vertices with an edge into formula vertex ``fid``."""
        return self._producer_map.get(fid, ())

    def consumers(self, fid: int) -> tuple[int, ...]:
        """Inference vertices consuming formula vertex ``fid``."""
        return self._consumer_map.get(fid, ())

    @property
    def _producer_map(self) -> dict[int, tuple[int, ...]]:
        m = getattr(self, "_pmap", None)
        if m is None:
            acc: dict[int, list[int]] = {}
            for w in self.inference_vertices:
                for u in w.out_neighbors:
                    acc.setdefault(u, []).append(w.id)
            m = {u: tuple(ws) for u, ws in acc.items()}
            object.__setattr__(self, "_pmap", m)
        return m

    @property
    def _consumer_map(self) -> dict[int, tuple[int, ...]]:
        m = getattr(self, "_cmap", None)
        if m is None:
            acc: dict[int, list[int]] = {}
            for w in self.inference_vertices:
                for u in w.in_neighbors:
                    acc.setdefault(u, []).append(w.id)
            m = {u: tuple(ws) for u, ws in acc.items()}
            object.__setattr__(self, "_cmap", m)
        return m

    def hypothesis_clauses(self) -> frozenset[Clause]:
        return frozenset(self.formula(h).clause for h in self.hypothesis_ids)

    def goal_clause(self) -> Clause:
        return self.formula(self.goal_id).clause

    # -- measures -----------------------------------------------------------

    @property
    def length(self) -> int:
        """Number of vertices of the graph, formula and inference alike."""
        return len(self.formula_vertices) + len(self.inference_vertices)

    @property
    def width(self) -> int:
        """Largest number of literals in any clause label."""
        return max((v.clause.width for v in self.formula_vertices), default=0)


def _expected_pair(side: Clause, principal: int) -> tuple[Clause, Clause]:
    pos = side.with_literal(Literal(principal, True))
    neg = side.with_literal(Literal(principal, False))
    return pos, neg


def rule_violations(graph: ProofGraph, w: InferenceVertex) -> list[RuleViolation]:
    """Check a single inference vertex against its rule template."""
    out: list[RuleViolation] = []
    kind = w.rule.kind
    x = w.rule.principal
    ins = [graph.formula(u).clause for u in w.in_neighbors]
    outs = [graph.formula(u).clause for u in w.out_neighbors]
    if kind == AXIOM:
        if ins:
            out.append(RuleViolation(w.id, "axiom must have no antecedents"))
        if len(outs) != 1:
            out.append(RuleViolation(w.id, "axiom must have exactly one consequent"))
        elif outs[0] != Clause.from_ints(x, -x):
            out.append(RuleViolation(w.id, f"axiom consequent must be x{x} | ~x{x}, got {outs[0]}"))
    elif kind == CUT:
        if len(outs) != 1:
            out.append(RuleViolation(w.id, "cut must have exactly one consequent"))
        elif len(ins) != 2:
            out.append(RuleViolation(w.id, "cut must have exactly two antecedents"))
        else:
            side = outs[0]
            pos, neg = _expected_pair(side, x)
            if {ins[0], ins[1]} != {pos, neg}:
                out.append(
                    RuleViolation(
                        w.id,
                        f"cut antecedents must be {{{pos}}} and {{{neg}}} "
                        f"sharing side clause {side}, got {ins[0]} and {ins[1]}",
                    )
                )
    elif kind == SPLIT:
        if len(ins) != 1:
            out.append(RuleViolation(w.id, "split must have exactly one antecedent"))
        elif not 1 <= len(outs) <= 2:
            out.append(RuleViolation(w.id, "split must have one or two consequents"))
        else:
            side = ins[0]
            pos, neg = _expected_pair(side, x)
            if len(outs) == 2 and outs[0] == outs[1]:
                out.append(RuleViolation(w.id, "split consequents must be distinct"))
            for c in outs:
                if c not in (pos, neg):
                    out.append(
                        RuleViolation(
                            w.id,
                            f"split consequent {c} is neither {pos} nor {neg}",
                        )
                    )
    return out


def validate_rules(graph: ProofGraph) -> list[RuleViolation]:
    """All local rule-template violations; empty iff every vertex matches its rule."""
    out: list[RuleViolation] = []
    for w in graph.inference_vertices:
        out.extend(rule_violations(graph, w))
    return out


def _flow_value(flows, iid: int) -> Fraction:
    mapping = getattr(flows, "flows", flows)
    try:
        return Fraction(mapping[iid])
    except KeyError:
        raise IncompleteFlowError(f"no flow assigned to inference vertex {iid}") from None


def balance(graph: ProofGraph, flows, vertex_id: int) -> Fraction:
    """Inflow minus outflow of formula vertex ``vertex_id`` under ``flows``.

    ``flows`` may be a plain mapping from inference id to number or a
    :class:`circres.flowcheck.FlowAssignment`.
    """
    if vertex_id not in graph._formula_map:
        raise StructureError(f"no formula vertex with id {vertex_id}")
    inflow = sum((_flow_value(flows, w) for w in graph.producers(vertex_id)), Fraction(0))
    outflow = sum((_flow_value(flows, w) for w in graph.consumers(vertex_id)), Fraction(0))
    return inflow - outflow


def balances(graph: ProofGraph, flows) -> dict[int, Fraction]:
    """Balance of every formula vertex, computed in one sweep."""
    acc = {v.id: Fraction(0) for v in graph.formula_vertices}
    for w in graph.inference_vertices:
        f = _flow_value(flows, w.id)
        for u in w.out_neighbors:
            acc[u] += f
        for u in w.in_neighbors:
            acc[u] -= f
    return acc


def sources_and_sinks(graph: ProofGraph, flows) -> tuple[frozenset[int], frozenset[int]]:
    """Partition formula vertices by balance sign; zero-balance vertices in neither."""
    bal = balances(graph, flows)
    sources = frozenset(u for u, b in bal.items() if b < 0)
    sinks = frozenset(u for u, b in bal.items() if b > 0)
    return sources, sinks


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph: ProofGraph, flows=None) -> str:
    """Render the graph as a DOT digraph.

    Formula vertices are boxes, inference vertices circles; when ``flows`` is
    given each inference vertex is labelled with its flow.
    """
    lines = ["digraph proof {"]
    for v in graph.formula_vertices:
        marks = []
        if v.id in graph.hypothesis_ids:
            marks.append("hyp")
        if v.id == graph.goal_id:
            marks.append("goal")
        label = str(v.clause) + (f"  [{','.join(marks)}]" if marks else "")
        lines.append(f"  f{v.id} [shape=box, label={_dot_quote(label)}];")
    for w in graph.inference_vertices:
        label = f"{w.rule.kind} x{w.rule.principal}"
        if flows is not None:
            label += f"\\nflow={_flow_value(flows, w.id)}"
        lines.append(f"  i{w.id} [shape=circle, label={_dot_quote(label)}];")
    for w in graph.inference_vertices:
        for u in w.in_neighbors:
            lines.append(f"  f{u} -> i{w.id};")
        for u in w.out_neighbors:
            lines.append(f"  i{w.id} -> f{u};")
    lines.append("}")
    return "\n".join(lines) + "\n"


class ProofGraphBuilder:
    """Incremental construction helper with optional clause deduplication.

    ``vertex(clause)`` reuses the existing vertex for an equal clause unless
    ``fresh=True``; inference vertices with identical shape are merged and
    their flows summed, which keeps patched constructions compact.
    """

    def __init__(self) -> None:
        self._formulas: list[FormulaVertex] = []
        self._by_clause: dict[Clause, int] = {}
        self._inferences: list[InferenceVertex] = []
        self._by_shape: dict[tuple, int] = {}
        self._flows: dict[int, Fraction] = {}
        self._hypotheses: set[int] = set()
        self._goal: Optional[int] = None

    def vertex(self, clause: Clause, fresh: bool = False) -> int:
        if not fresh and clause in self._by_clause:
            return self._by_clause[clause]
        fid = len(self._formulas)
        self._formulas.append(FormulaVertex(fid, clause))
        if clause not in self._by_clause:
            self._by_clause[clause] = fid
        return fid

    def inference(
        self,
        kind: str,
        principal: int,
        ins: Sequence[int],
        outs: Sequence[int],
        flow: Fraction | int = 1,
        merge: bool = True,
    ) -> int:
        shape = (kind, principal, tuple(sorted(ins)), tuple(sorted(outs)))
        if merge and shape in self._by_shape:
            iid = self._by_shape[shape]
            self._flows[iid] += Fraction(flow)
            return iid
        iid = len(self._inferences)
        self._inferences.append(
            InferenceVertex(iid, Rule(kind, principal), tuple(ins), tuple(outs))
        )
        self._by_shape[shape] = iid
        self._flows[iid] = Fraction(flow)
        return iid

    def axiom(self, variable: int, flow: Fraction | int = 1) -> int:
        out = self.vertex(Clause.from_ints(variable, -variable))
        self.inference(AXIOM, variable, (), (out,), flow)
        return out

    def split(
        self,
        source_id: int,
        principal: int,
        keep_positive: bool = True,
        keep_negative: bool = True,
        flow: Fraction | int = 1,
    ) -> tuple[int, ...]:
        side = self._formulas[source_id].clause
        outs: list[int] = []
        if keep_positive:
            outs.append(self.vertex(side.with_literal(Literal(principal, True))))
        if keep_negative:
            outs.append(self.vertex(side.with_literal(Literal(principal, False))))
        if len(outs) == 2 and outs[0] == outs[1]:
            outs = outs[:1]
        self.inference(SPLIT, principal, (source_id,), tuple(outs), flow)
        return tuple(outs)

    def cut(self, pos_id: int, neg_id: int, side: Clause, principal: int,
            flow: Fraction | int = 1) -> int:
        out = self.vertex(side)
        self.inference(CUT, principal, (pos_id, neg_id), (out,), flow)
        return out

    def mark_hypothesis(self, fid: int) -> None:
        self._hypotheses.add(fid)

    def set_goal(self, fid: int) -> None:
        self._goal = fid

    def lookup(self, clause: Clause) -> Optional[int]:
        return self._by_clause.get(clause)

    def clause_at(self, fid: int) -> Clause:
        return self._formulas[fid].clause

    @property
    def num_inferences(self) -> int:
        return len(self._inferences)

    def clause_index(self) -> list[tuple[Clause, int]]:
        return list(self._by_clause.items())

    def build(self) -> tuple[ProofGraph, dict[int, Fraction]]:
        if self._goal is None:
            raise ValueError("goal vertex was never set")
        graph = ProofGraph(
            tuple(self._formulas),
            tuple(self._inferences),
            frozenset(self._hypotheses),
            self._goal,
        )
        return graph, dict(self._flows)
