"""Instance and proof generators: graph pigeonhole formulas, their compact
circular refutations, and seeded random proofs for fuzzing.

The pigeonhole refutation is assembled from one piece per pigeon and one per
hole, every inference carrying flow 1:

* the pigeon piece turns the pigeon clause into one unit of the empty clause
  while demanding one unit of ``~edge`` for each incident edge;
* the hole piece consumes one unit of the empty clause and produces one unit
  of every incident ``~edge``, consuming hole clauses along the way.

Identifying equal clause labels across pieces makes every ``~edge`` vertex
balance to zero, leaves the pigeon and hole clauses as the only sources, and
gives the empty clause balance ``|U| - |V| > 0``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Clause, CnfFormula, Literal, normalize_clause
from .flowcheck import FlowAssignment
from .proofgraph import (
    CUT,
    SPLIT,
    ProofGraph,
    ProofGraphBuilder,
)


class IsolatedVertexError(ValueError):
    """A pigeon with no candidate hole has no clause and no refutation piece."""


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite graph on pigeons ``1..left_size`` and holes ``1..right_size``."""

    left_size: int
    right_size: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if not (1 <= u <= self.left_size and 1 <= v <= self.right_size):
                raise ValueError(f"edge ({u},{v}) out of range")

    def left_neighbors(self, u: int) -> list[int]:
        return sorted(v for (a, v) in self.edges if a == u)

    def right_neighbors(self, v: int) -> list[int]:
        return sorted(u for (u, b) in self.edges if b == v)

    def max_degree(self) -> int:
        degs = [len(self.left_neighbors(u)) for u in range(1, self.left_size + 1)]
        degs += [len(self.right_neighbors(v)) for v in range(1, self.right_size + 1)]
        return max(degs, default=0)


def complete_bipartite(left: int, right: int) -> BipartiteGraph:
    edges = frozenset(
        (u, v) for u in range(1, left + 1) for v in range(1, right + 1)
    )
    return BipartiteGraph(left, right, edges)


def edge_variables(g: BipartiteGraph) -> dict[tuple[int, int], int]:
    """Edge-to-variable numbering, lexicographic by (pigeon, hole)."""
    return {edge: i + 1 for i, edge in enumerate(sorted(g.edges))}


def gen_php(g: BipartiteGraph) -> CnfFormula:
    """The pigeonhole contradiction of ``g``: every pigeon somewhere, no hole
    doubly used.  One variable per edge."""
    var = edge_variables(g)
    clauses: list[Clause] = []
    for u in range(1, g.left_size + 1):
        nbrs = g.left_neighbors(u)
        if not nbrs:
            raise IsolatedVertexError(f"pigeon {u} has no incident edge")
        clauses.append(Clause.from_signed(var[(u, v)] for v in nbrs))
    for v in range(1, g.right_size + 1):
        nbrs = g.right_neighbors(v)
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                clauses.append(
                    Clause.from_signed([-var[(nbrs[i], v)], -var[(nbrs[j], v)]])
                )
    return CnfFormula.of(len(var), clauses)


# ---------------------------------------------------------------------------
# pigeonhole refutation pieces

_Record = tuple[str, int, list[Clause], list[Clause]]


def _pigeon_records(xs: Sequence[int]) -> list[_Record]:
    """Derive the empty clause from the pigeon clause over edge variables
    ``xs``, demanding one unit of each ``~x``."""
    recs: list[_Record] = []
    ell = len(xs)
    for k in range(ell, 0, -1):
        cur = Clause.from_ints(-xs[k - 1])
        for j in range(k - 1):
            nxt = cur.with_literal(Literal(xs[j], True))
            recs.append((SPLIT, xs[j], [cur], [nxt]))
            cur = nxt
        side = Clause.from_signed(xs[:k - 1])
        full = Clause.from_signed(xs[:k])
        recs.append((CUT, xs[k - 1], [cur, full], [side]))
    return recs


def _hole_records(ys: Sequence[int]) -> list[_Record]:
    """Produce one unit of each ``~y`` from one unit of the empty clause,
    consuming the pairwise exclusion clauses of the hole.

    Built level by level: each level prefixes the previous piece with the next
    edge literal (with weakening repairs so that exclusion clauses are always
    consumed in their original form), resolves the prefixed surpluses against
    the exclusion clauses, and re-splits the empty clause.
    """
    empty = Clause(())
    y0 = ys[0]
    recs: list[_Record] = [
        (SPLIT, y0, [empty], [Clause.from_ints(y0), Clause.from_ints(-y0)])
    ]
    hyp_uses: list[Clause] = []
    for idx in range(1, len(ys)):
        y = ys[idx]
        ylit = Literal(y, True)
        recs = [
            (
                kind,
                principal,
                [c.with_literal(ylit) for c in ins],
                [c.with_literal(ylit) for c in outs],
            )
            for (kind, principal, ins, outs) in recs
        ]
        repairs: list[_Record] = [
            (SPLIT, y, [h], [h.with_literal(ylit)]) for h in hyp_uses
        ]
        cuts: list[_Record] = []
        for j in range(idx):
            side = Clause.from_ints(-ys[j])
            pos_ante = side.with_literal(Literal(y, True))
            exclusion = side.with_literal(Literal(y, False))
            cuts.append((CUT, y, [pos_ante, exclusion], [side]))
            hyp_uses.append(exclusion)
        resplit: _Record = (
            SPLIT, y, [empty], [Clause.from_ints(y), Clause.from_ints(-y)]
        )
        recs = recs + repairs + cuts + [resplit]
    return recs


def _materialize(b: ProofGraphBuilder, recs: Iterable[_Record]) -> None:
    for kind, principal, ins, outs in recs:
        in_ids = [b.vertex(c) for c in ins]
        out_ids = [b.vertex(c) for c in outs]
        b.inference(kind, principal, in_ids, out_ids, flow=1)


def php_refutation(g: BipartiteGraph) -> tuple[ProofGraph, FlowAssignment]:
    """Pieced refutation of the pigeonhole contradiction, all flows 1.

    Requires more pigeons than holes.  Width is bounded by the maximum degree
    of ``g`` and the empty clause ends with balance ``|U| - |V|``.
    """
    if g.left_size <= g.right_size:
        raise ValueError("refutation needs more pigeons than holes")
    cnf = gen_php(g)  # also validates pigeon degrees
    var = edge_variables(g)
    b = ProofGraphBuilder()
    for u in range(1, g.left_size + 1):
        xs = [var[(u, v)] for v in g.left_neighbors(u)]
        _materialize(b, _pigeon_records(xs))
    for v in range(1, g.right_size + 1):
        nbrs = g.right_neighbors(v)
        if len(nbrs) == 0:
            continue
        ys = [var[(u, v)] for u in nbrs]
        _materialize(b, _hole_records(ys))
    for clause, fid in b.clause_index():
        if clause in set(cnf.clauses):
            b.mark_hypothesis(fid)
    goal = b.vertex(Clause(()))
    b.set_goal(goal)
    graph, flows = b.build()
    return graph, FlowAssignment(flows)


def near_cubic_bipartite(n: int, seed: int) -> BipartiteGraph:
    """Random bipartite graph with ``n + 1`` pigeons, ``n`` holes, and both
    sides of degree at most 3.

    Holes are exactly 3-regular; ``n - 2`` pigeons have degree 3 and three
    have degree 2 (the largest edge count a max-degree-3 unbalanced bipartite
    graph allows).  Deterministic in ``seed``; sampled by shuffling hole
    stubs until the pairing is a simple graph.
    """
    if n < 3:
        raise ValueError("need at least 3 holes for a degree-3 instance")
    rng = random.Random(seed)
    pigeons = list(range(1, n + 2))
    low_degree = rng.sample(pigeons, 3)
    stubs = []
    for u in pigeons:
        stubs.extend([u] * (2 if u in low_degree else 3))
    hole_stubs = [v for v in range(1, n + 1) for _ in range(3)]
    for _ in range(10_000):
        rng.shuffle(hole_stubs)
        edges = set(zip(stubs, hole_stubs))
        if len(edges) == 3 * n:
            return BipartiteGraph(n + 1, n, frozenset(edges))
    raise RuntimeError(f"no simple pairing found for n={n}, seed={seed}")


# ---------------------------------------------------------------------------
# the classic unsound cycle

def unsound_cycle_example() -> ProofGraph:
    """The textbook unsound pre-proof: the empty clause from no hypotheses.

    An axiom feeds ``x | ~x``; two collapsed cuts derive ``x`` and ``~x``
    using those very clauses cyclically; a final cut derives the empty
    clause.  Every rule application is locally valid, yet whatever positive
    flows are chosen, ``x`` and ``~x`` keep negative balance, so no flow
    assignment witnesses the refutation.
    """
    b = ProofGraphBuilder()
    taut = b.axiom(1)
    x = b.vertex(Clause.from_ints(1))
    nx = b.vertex(Clause.from_ints(-1))
    b.inference(CUT, 1, (x, taut), (x,))
    b.inference(CUT, 1, (taut, nx), (nx,))
    empty = b.vertex(Clause(()))
    b.inference(CUT, 1, (x, nx), (empty,))
    b.set_goal(empty)
    graph, _ = b.build()
    return graph


# ---------------------------------------------------------------------------
# random witnessed proofs

def _demand_flows(graph: ProofGraph, goal_id: int) -> dict[int, Fraction]:
    """Flows for a dag-built graph: walk inferences newest-first, covering the
    accumulated demand of each consequent (at least 1 everywhere)."""
    deficit = {v.id: Fraction(0) for v in graph.formula_vertices}
    deficit[goal_id] = Fraction(1)
    flows: dict[int, Fraction] = {}
    for w in sorted(graph.inference_vertices, key=lambda w: -w.id):
        need = max([deficit[u] for u in w.out_neighbors] + [Fraction(1)])
        flows[w.id] = need
        for u in w.out_neighbors:
            deficit[u] -= need
        for u in w.in_neighbors:
            deficit[u] += need
    return flows


def random_circular_proof(
    seed: int,
    num_vars: int,
    size_budget: int,
    max_width: int = 4,
) -> tuple[ProofGraph, FlowAssignment]:
    """Deterministic random witnessed proof with ``size_budget`` inferences.

    Built dag-like (every consequent vertex is created by its rule), flows
    assigned newest-first to keep all derived balances nonnegative and the
    goal balance at least 1, then optionally rewired with a balance-neutral
    split/cut cycle.  Always passes rule validation and the flow check.
    """
    if size_budget < 1:
        raise ValueError("size budget must be at least 1")
    if num_vars < 1:
        raise ValueError("need at least one variable")
    rng = random.Random(seed)
    b = ProofGraphBuilder()

    if size_budget == 1:
        out = b.axiom(rng.randint(1, num_vars))
        b.set_goal(out)
        graph, _ = b.build()
        return graph, FlowAssignment(_demand_flows(graph, graph.goal_id))

    # Hypotheses: a few short proper clauses.
    hyp_width = max(1, min(max_width - 1, 2))
    n_hyp = rng.randint(1, 3)
    pool: list[int] = []
    hyp_clauses: set[Clause] = set()
    for _ in range(n_hyp):
        k = rng.randint(1, hyp_width)
        vs = rng.sample(range(1, num_vars + 1), min(k, num_vars))
        clause = Clause.from_signed(v if rng.random() < 0.5 else -v for v in vs)
        fid = b.vertex(clause)
        b.mark_hypothesis(fid)
        hyp_clauses.add(clause)
        if fid not in pool:
            pool.append(fid)

    derived: list[int] = []
    want_pump = size_budget >= 4 and rng.random() < 0.5
    budget = size_budget - (2 if want_pump else 0)

    def clause_of(fid: int) -> Clause:
        return b.clause_at(fid)

    while b.num_inferences < budget:
        roll = rng.random()
        if roll < 0.15 and max_width >= 2:
            out = b.axiom(rng.randint(1, num_vars))
            if out not in pool:
                pool.append(out)
                derived.append(out)
            continue
        if roll < 0.60:
            fid = rng.choice(pool)
            c = clause_of(fid)
            # Weakening a tautology would create non-elementary tautological
            # clauses, which the polynomial translation cannot encode.
            if c.width >= max_width or c.is_tautological:
                continue
            candidates = [v for v in range(1, num_vars + 1) if v not in c.variables()]
            if not candidates:
                continue
            x = rng.choice(candidates)
            both = rng.random() < 0.6
            keep_pos = both or rng.random() < 0.5
            outs = b.split(
                fid, x,
                keep_positive=both or keep_pos,
                keep_negative=both or not keep_pos,
            )
            for out in outs:
                if out not in pool:
                    pool.append(out)
                derived.append(out)
            continue
        # Cut: look for a resolvable pair already in the pool.
        fid = rng.choice(pool)
        c = clause_of(fid)
        if c.is_empty:
            continue
        lit = rng.choice(c.literals)
        side = normalize_clause([l for l in c.literals if l != lit])
        partner = side.with_literal(lit.complement)
        pid = b.lookup(partner)
        if pid is None or pid not in pool:
            continue
        pos_id, neg_id = (fid, pid) if lit.positive else (pid, fid)
        out = b.cut(pos_id, neg_id, side, lit.variable)
        if out not in pool:
            pool.append(out)
        derived.append(out)

    # A useful goal is derived, proper, and not itself a hypothesis clause
    # (hypothesis vertices absorb demand instead of accumulating balance).
    goal_candidates = [
        fid
        for fid in dict.fromkeys(derived)
        if not clause_of(fid).is_tautological and clause_of(fid) not in hyp_clauses
    ]
    if not goal_candidates:
        # Force one derivation: copy a hypothesis through a collapsing split
        # (the kept consequent normalizes back to the same clause).
        fid = pool[0]
        c = clause_of(fid)
        lit = c.literals[0]
        fresh = b.vertex(c, fresh=True)
        b.inference(SPLIT, lit.variable, (fid,), (fresh,))
        goal_candidates = [fresh]
    goal_id = goal_candidates[-1]
    b.set_goal(goal_id)

    if want_pump:
        pumpable = [
            fid for fid in pool
            if not clause_of(fid).is_tautological
            and clause_of(fid).width < max_width
            and len(clause_of(fid).variables()) < num_vars
        ]
        if pumpable:
            fid = rng.choice(pumpable)
            c = clause_of(fid)
            x = next(v for v in range(1, num_vars + 1) if v not in c.variables())
            p = Fraction(rng.randint(1, 3))
            pos = b.vertex(c.with_literal(Literal(x, True)))
            neg = b.vertex(c.with_literal(Literal(x, False)))
            b.inference(SPLIT, x, (fid,), (pos, neg), flow=p)
            b.inference(CUT, x, (pos, neg), (fid,), flow=p)

    graph, _ = b.build()
    # Demand propagation assigns the pump pair equal flows on its own, so the
    # cycle stays balance-neutral.
    flows = _demand_flows(graph, goal_id)
    return graph, FlowAssignment(flows)
