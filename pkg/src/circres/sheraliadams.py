"""Twin-variable polynomial proofs and the two clause-proof translations.

Polynomials live over ``2n`` formally independent variables: ``X_i`` and its
twin ``Xb_i`` (intended as the negation of ``X_i`` on 0-1 points, but never
substituted).  A clause maps to the product encoding

    enc(C) = - prod(Xb_j for positive literals) * prod(X_j for negative ones)

so that ``enc(C) >= 0`` holds on a consistent 0-1 point exactly when ``C`` is
satisfied.  A polynomial proof of ``A`` from hypotheses ``A_1..A_m`` is a
list of terms ``(a_j, q_j, P_j)`` with ``a_j > 0`` rational, ``q_j`` a
monomial, and ``P_j`` a hypothesis encoding or a basic polynomial, such that

    sum a_j * q_j * poly(P_j)  ==  enc(A)

holds as an exact formal identity.  Degree is the maximum degree among the
expanded products, monomial size the sum of their term counts.

``circular_to_sa`` rewrites a flow-checked circular proof into such an
identity term by term (degree equals proof width); ``sa_to_circular`` goes
back by normalizing the identity and reading each normalized term as a rule
application (width equals proof degree).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import Clause, Literal, normalize_clause
from .flowcheck import FlowAssignment, NotWitnessError, verify_flow
from .proofgraph import (
    AXIOM,
    CUT,
    SPLIT,
    ProofGraph,
    ProofGraphBuilder,
    balances,
)


class TautologicalClauseError(ValueError):
    """The product encoding of a tautological clause was requested where the
    translation requires proper clauses."""


class MalformedProofError(ValueError):
    """A polynomial proof violates its structural invariants."""


class InconsistencyError(ValueError):
    """A proof-to-graph translation could not reconcile its goal accounting."""


# ---------------------------------------------------------------------------
# monomials and polynomials

@dataclass(frozen=True)
class Monomial:
    """Sparse power product over twin variables.

    Factors are ``(token, exponent)`` pairs with token ``+i`` for ``X_i`` and
    ``-i`` for ``Xb_i``, sorted canonically; exponents are positive.  The
    empty product is the constant monomial 1.
    """

    factors: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def of(powers: dict[int, int] | Iterable[tuple[int, int]]) -> "Monomial":
        items = powers.items() if isinstance(powers, dict) else powers
        acc: dict[int, int] = {}
        for tok, e in items:
            if tok == 0:
                raise ValueError("token 0 is not a twin variable")
            if e < 0:
                raise ValueError("exponents must be nonnegative")
            if e:
                acc[tok] = acc.get(tok, 0) + e
        return Monomial(tuple(sorted(acc.items(), key=_token_key)))

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.factors)

    def mul(self, other: "Monomial") -> "Monomial":
        if not self.factors:
            return other
        if not other.factors:
            return self
        acc = dict(self.factors)
        for tok, e in other.factors:
            acc[tok] = acc.get(tok, 0) + e
        return Monomial(tuple(sorted(acc.items(), key=_token_key)))

    def tokens(self) -> frozenset[int]:
        return frozenset(tok for tok, _ in self.factors)

    def without(self, drop: Iterable[int]) -> "Monomial":
        gone = set(drop)
        return Monomial(tuple((t, e) for t, e in self.factors if t not in gone))

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for tok, e in self.factors:
            name = f"X{tok}" if tok > 0 else f"Xb{-tok}"
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)


def _token_key(item: tuple[int, int]) -> tuple[int, int]:
    tok = item[0]
    return (abs(tok), 0 if tok > 0 else 1)


MONOMIAL_ONE = Monomial()


def multilinearize(m: Monomial) -> Monomial:
    """Clamp every exponent to 1."""
    return Monomial(tuple((tok, 1) for tok, _ in m.factors))


@dataclass(frozen=True)
class Polynomial:
    """Canonical sparse polynomial: monomial -> nonzero rational coefficient."""

    terms: tuple[tuple[Monomial, Fraction], ...] = ()

    @staticmethod
    def of(items: Iterable[tuple[Monomial, Fraction | int]]) -> "Polynomial":
        acc: dict[Monomial, Fraction] = {}
        for mono, coef in items:
            c = acc.get(mono, Fraction(0)) + Fraction(coef)
            if c:
                acc[mono] = c
            elif mono in acc:
                del acc[mono]
        return Polynomial(tuple(sorted(acc.items(), key=lambda t: (t[0].degree, t[0].factors))))

    @staticmethod
    def constant(c: Fraction | int) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(((MONOMIAL_ONE, c),)) if c else Polynomial()

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((m.degree for m, _ in self.terms), default=0)

    @property
    def monomial_size(self) -> int:
        return len(self.terms)

    def add(self, other: "Polynomial") -> "Polynomial":
        return Polynomial.of([*self.terms, *other.terms])

    def scale(self, c: Fraction | int) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial()
        return Polynomial(tuple((m, k * c) for m, k in self.terms))

    def mul_monomial(self, mono: Monomial) -> "Polynomial":
        return Polynomial(tuple((m.mul(mono), k) for m, k in self.terms))

    def evaluate(self, point: dict[int, Fraction | int]) -> Fraction:
        total = Fraction(0)
        for m, k in self.terms:
            value = Fraction(k)
            for tok, e in m.factors:
                value *= Fraction(point[tok]) ** e
            total += value
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{k}*{m}" for m, k in self.terms)


class _PolyAcc:
    """Mutable accumulator used while expanding proof terms."""

    def __init__(self) -> None:
        self.acc: dict[Monomial, Fraction] = {}

    def add(self, mono: Monomial, coef: Fraction) -> None:
        c = self.acc.get(mono, Fraction(0)) + coef
        if c:
            self.acc[mono] = c
        elif mono in self.acc:
            del self.acc[mono]

    def to_polynomial(self) -> Polynomial:
        return Polynomial.of(self.acc.items())


# ---------------------------------------------------------------------------
# clause encodings

def falsified_monomial(c: Clause) -> Monomial:
    """The product whose value is 1 exactly on points falsifying ``c``.

    Positive literal ``x_i`` contributes the twin factor ``Xb_i``; negative
    ``~x_i`` contributes ``X_i``.  Defined for tautological clauses as well,
    where the product contains both twins of a variable.
    """
    return Monomial.of([(-lit.to_int(), 1) for lit in c.literals])


def clause_of_monomial(m: Monomial) -> Clause:
    """Inverse of :func:`falsified_monomial` on multilinear monomials."""
    lits = []
    for tok, e in m.factors:
        if e != 1:
            raise ValueError(f"monomial {m} is not multilinear")
        lits.append(Literal.from_int(-tok))
    return normalize_clause(lits)


def _encode_any(c: Clause) -> Polynomial:
    return Polynomial(((falsified_monomial(c), Fraction(-1)),))


def encode_clause(c: Clause) -> Polynomial:
    """Product encoding ``enc(c)``: minus the falsified-point monomial.

    Rejects tautological clauses, whose encoding would conflate a variable
    with its twin inside one monomial; the translations only ever encode
    proper clauses (elementary tautologies are handled by dedicated gadgets).
    """
    if c.is_tautological:
        raise TautologicalClauseError(f"cannot encode tautological clause {c}")
    return _encode_any(c)


# ---------------------------------------------------------------------------
# reference polynomials and proofs

HYPOTHESIS = "hyp"
X_MINUS_XSQ = "x_minus_xsq"
XSQ_MINUS_X = "xsq_minus_x"
ONE_MINUS_X_XBAR = "one_minus_x_xbar"
X_XBAR_MINUS_ONE = "x_xbar_minus_one"
ONE = "one"
MINUS_X_XBAR = "minus_x_xbar"  # appears only in normalized proofs

_INDEXED_KINDS = {
    HYPOTHESIS,
    X_MINUS_XSQ,
    XSQ_MINUS_X,
    ONE_MINUS_X_XBAR,
    X_XBAR_MINUS_ONE,
    MINUS_X_XBAR,
}


@dataclass(frozen=True)
class RefPoly:
    """Reference polynomial of a proof term: a hypothesis or a basic one."""

    kind: str
    index: int = 0

    def __post_init__(self) -> None:
        if self.kind in _INDEXED_KINDS:
            if self.index < 1:
                raise ValueError(f"{self.kind} needs a positive index")
        elif self.kind == ONE:
            pass
        else:
            raise ValueError(f"unknown reference polynomial kind {self.kind!r}")


def hyp(i: int) -> RefPoly:
    return RefPoly(HYPOTHESIS, i)


def ref_polynomial(ref: RefPoly, hypotheses: Sequence[Clause]) -> Polynomial:
    i = ref.index
    one = MONOMIAL_ONE
    if ref.kind == HYPOTHESIS:
        if not 1 <= i <= len(hypotheses):
            raise MalformedProofError(f"hypothesis index {i} out of range")
        return encode_clause(hypotheses[i - 1])
    if ref.kind == ONE:
        return Polynomial.of([(one, 1)])
    x = Monomial.of({i: 1})
    xb = Monomial.of({-i: 1})
    xsq = Monomial.of({i: 2})
    if ref.kind == X_MINUS_XSQ:
        return Polynomial.of([(x, 1), (xsq, -1)])
    if ref.kind == XSQ_MINUS_X:
        return Polynomial.of([(xsq, 1), (x, -1)])
    if ref.kind == ONE_MINUS_X_XBAR:
        return Polynomial.of([(one, 1), (x, -1), (xb, -1)])
    if ref.kind == X_XBAR_MINUS_ONE:
        return Polynomial.of([(x, 1), (xb, 1), (one, -1)])
    return Polynomial.of([(x.mul(xb), -1)])


@dataclass(frozen=True)
class SATerm:
    coefficient: Fraction
    monomial: Monomial
    ref: RefPoly


@dataclass(frozen=True)
class SAProof:
    """Terms of a polynomial identity proving the goal clause's encoding."""

    num_variables: int
    hypotheses: tuple[Clause, ...]
    goal: Optional[Clause]
    terms: tuple[SATerm, ...]

    @staticmethod
    def of(num_variables: int, hypotheses: Iterable[Clause], goal: Optional[Clause],
           terms: Iterable[SATerm | tuple]) -> "SAProof":
        norm_terms = []
        for t in terms:
            if not isinstance(t, SATerm):
                coef, mono, ref = t
                t = SATerm(Fraction(coef), mono, ref)
            norm_terms.append(t)
        return SAProof(num_variables, tuple(hypotheses), goal, tuple(norm_terms))


def _expanded_terms(proof: SAProof):
    for t in proof.terms:
        if t.coefficient <= 0:
            raise MalformedProofError(f"term coefficient {t.coefficient} is not positive")
        base = ref_polynomial(t.ref, proof.hypotheses)
        yield t, base.mul_monomial(t.monomial).scale(t.coefficient)


def proof_sum(proof: SAProof) -> Polynomial:
    acc = _PolyAcc()
    for _, expanded in _expanded_terms(proof):
        for mono, coef in expanded.terms:
            acc.add(mono, coef)
    return acc.to_polynomial()


def check_sa(proof: SAProof, raw_target: Optional[Polynomial] = None) -> bool:
    """Exact identity check: the expanded term sum must equal the target.

    The target is the goal clause's encoding, or ``raw_target`` when given
    (used to exercise gadgets whose natural targets involve tautological
    clauses).  No twin substitution and no multilinearization happen here;
    the comparison is between formal polynomials.
    """
    if raw_target is None:
        if proof.goal is None:
            raise MalformedProofError("proof has no goal clause and no raw target was given")
        target = encode_clause(proof.goal)
    else:
        target = raw_target
    for h in proof.hypotheses:
        if h.is_tautological:
            raise TautologicalClauseError(f"tautological hypothesis {h}")
    return proof_sum(proof) == target


def sa_degree(proof: SAProof) -> int:
    """Max degree among the expanded products ``a_j * q_j * poly(P_j)``."""
    out = 0
    for _, expanded in _expanded_terms(proof):
        out = max(out, expanded.degree)
    return out


def sa_monomial_size(proof: SAProof) -> int:
    """Sum of the term counts of the expanded products."""
    return sum(expanded.monomial_size for _, expanded in _expanded_terms(proof))


# ---------------------------------------------------------------------------
# the four basic gadget families

def clause_gadget(kind: int, side_clause: Clause, principal: int) -> list[SATerm]:
    """Term lists proving the four basic clause inequalities from nothing.

    With ``m`` the falsified-point monomial of ``side_clause`` and ``x`` the
    principal variable:

    1. ``enc(x | ~x) >= 0``            -> ``(1-x-xb) * x + (x^2 - x)``
    2. ``-enc(C|~x) - enc(C|x) + enc(C) >= 0``  -> ``(x + xb - 1) * m``
    3. ``-enc(C) + enc(C|~x) + enc(C|x) >= 0``  -> ``(1 - x - xb) * m``
    4. ``-enc(C) >= 0``                -> ``1 * m``

    Kinds 1-3 require the principal not to occur in the side clause; the side
    clause must not be tautological.
    """
    if side_clause.is_tautological:
        raise TautologicalClauseError(f"tautological side clause {side_clause}")
    if kind in (1, 2, 3) and principal in side_clause.variables():
        raise ValueError(f"principal x{principal} occurs in side clause {side_clause}")
    m = falsified_monomial(side_clause)
    one = Fraction(1)
    if kind == 1:
        return [
            SATerm(one, Monomial.of({principal: 1}), RefPoly(ONE_MINUS_X_XBAR, principal)),
            SATerm(one, MONOMIAL_ONE, RefPoly(XSQ_MINUS_X, principal)),
        ]
    if kind == 2:
        return [SATerm(one, m, RefPoly(X_XBAR_MINUS_ONE, principal))]
    if kind == 3:
        return [SATerm(one, m, RefPoly(ONE_MINUS_X_XBAR, principal))]
    if kind == 4:
        return [SATerm(one, m, RefPoly(ONE))]
    raise ValueError(f"gadget kind must be 1..4, got {kind}")


def gadget_target(kind: int, side_clause: Clause, principal: int) -> Polynomial:
    """The inequality left-hand side each gadget family expands to."""
    pos = side_clause.with_literal(Literal(principal, True))
    neg = side_clause.with_literal(Literal(principal, False))
    if kind == 1:
        return _encode_any(Clause.from_ints(principal, -principal))
    if kind == 2:
        return _encode_any(neg).scale(-1).add(_encode_any(pos).scale(-1)).add(
            _encode_any(side_clause)
        )
    if kind == 3:
        return _encode_any(side_clause).scale(-1).add(_encode_any(neg)).add(_encode_any(pos))
    if kind == 4:
        return _encode_any(side_clause).scale(-1)
    raise ValueError(f"gadget kind must be 1..4, got {kind}")


# ---------------------------------------------------------------------------
# circular proof -> polynomial proof

def _rule_terms(graph: ProofGraph, w, coef: Fraction) -> list[SATerm]:
    """Proof terms expanding to the rule polynomial of inference vertex ``w``:
    consequent encodings minus antecedent encodings, weighted by ``coef``."""
    x = w.rule.principal
    ins = [graph.formula(u).clause for u in w.in_neighbors]
    outs = [graph.formula(u).clause for u in w.out_neighbors]
    if w.rule.kind == AXIOM:
        return [
            SATerm(coef, Monomial.of({x: 1}), RefPoly(ONE_MINUS_X_XBAR, x)),
            SATerm(coef, MONOMIAL_ONE, RefPoly(XSQ_MINUS_X, x)),
        ]
    if w.rule.kind == CUT:
        side = outs[0]
        if x not in side.variables():
            return [SATerm(coef, falsified_monomial(side), RefPoly(X_XBAR_MINUS_ONE, x))]
        # Collapsed cut: one antecedent equals the consequent, the other is
        # the elementary tautology; the rule polynomial is +x*xb times the
        # side remainder.
        other = next(c for c in ins if c != side) if any(c != side for c in ins) else side
        return [SATerm(coef, falsified_monomial(other), RefPoly(ONE))]
    # Split.
    side = ins[0]
    m = falsified_monomial(side)
    if x not in side.variables():
        terms = [SATerm(coef, m, RefPoly(ONE_MINUS_X_XBAR, x))]
        if len(outs) == 1:
            # Suppressed consequent: add back its encoding, a plain monomial.
            kept = outs[0]
            missing_tok = -next(
                lit.to_int() for lit in kept.literals if lit.variable == x
            )
            terms.append(SATerm(coef, m.mul(Monomial.of({-missing_tok: 1})), RefPoly(ONE)))
        return terms
    # Collapsed split on a variable of the side clause.
    if len(outs) == 1 and outs[0] == side:
        return []  # rule polynomial is identically zero
    if len(outs) == 1:
        # Kept only the tautological side: side must be the unit clause of x.
        lit_tok = next(lit.to_int() for lit in side.literals if lit.variable == x)
        rest = m.without({-lit_tok})
        return [
            SATerm(coef, rest.mul(Monomial.of({-lit_tok: 1})),
                   RefPoly(ONE_MINUS_X_XBAR, x)),
            SATerm(coef, rest.mul(Monomial.of({-lit_tok: 2})), RefPoly(ONE)),
        ]
    # Both consequents present: one collapsed to side, other the elementary
    # tautology (side must be a unit clause on x).
    return [
        SATerm(coef, Monomial.of({x: 1}), RefPoly(ONE_MINUS_X_XBAR, x)),
        SATerm(coef, MONOMIAL_ONE, RefPoly(XSQ_MINUS_X, x)),
    ]


def circular_to_sa(graph: ProofGraph, flow: FlowAssignment) -> SAProof:
    """Rewrite a flow-checked circular proof as a polynomial identity.

    Every inference vertex contributes its rule polynomial weighted by
    ``flow/goal_balance``; every non-goal formula vertex with nonzero balance
    contributes ``|balance|/goal_balance`` times its clause encoding (as a
    hypothesis reference for sources, as a monomial otherwise).  The result
    passes :func:`check_sa` with degree equal to the proof width.
    """
    goal_id = graph.goal_id
    goal = graph.goal_clause()
    if goal.is_tautological:
        raise TautologicalClauseError(f"tautological goal {goal}")
    hyp_clauses = sorted(graph.hypothesis_clauses(), key=lambda c: tuple(sorted(c.signed())))
    for h in hyp_clauses:
        if h.is_tautological:
            raise TautologicalClauseError(f"tautological hypothesis {h}")
    if not verify_flow(graph, flow, goal_id):
        raise NotWitnessError("flow assignment does not witness the proof")
    hyp_index = {h: i + 1 for i, h in enumerate(hyp_clauses)}
    elementary = {
        Clause.from_ints(v, -v)
        for v in range(1, _max_variable(graph) + 1)
    }
    for v in graph.formula_vertices:
        if v.clause.is_tautological and v.clause not in elementary:
            raise TautologicalClauseError(
                f"non-elementary tautological clause {v.clause} cannot be translated"
            )

    bal = balances(graph, flow)
    bs = bal[goal_id]
    terms: list[SATerm] = []
    for w in graph.inference_vertices:
        terms.extend(_rule_terms(graph, w, flow[w.id] / bs))
    for v in graph.formula_vertices:
        if v.id == goal_id:
            continue
        b = bal[v.id]
        if b == 0:
            continue
        if b < 0:
            terms.append(SATerm(-b / bs, MONOMIAL_ONE, hyp(hyp_index[v.clause])))
        else:
            terms.append(SATerm(b / bs, falsified_monomial(v.clause), RefPoly(ONE)))
    num_vars = _max_variable(graph)
    return SAProof(num_vars, tuple(hyp_clauses), goal, tuple(terms))


def _max_variable(graph: ProofGraph) -> int:
    top = 0
    for v in graph.formula_vertices:
        for lit in v.clause.literals:
            top = max(top, lit.variable)
    for w in graph.inference_vertices:
        top = max(top, w.rule.principal)
    return top


# ---------------------------------------------------------------------------
# normalization and polynomial proof -> circular proof

def normalize_sa(proof: SAProof) -> SAProof:
    """Rewrite terms so every product is multilinear and every reference
    polynomial is a hypothesis or one of ``-x*xb``, ``1-x-xb``, ``x+xb-1``,
    ``1``.

    Each rewritten product agrees with the original on all 0-1 points of the
    2n twin variables, and the rewritten sum is again an exact identity for
    the same target (the target is multilinear, and multilinear polynomials
    agreeing on 0-1 points are equal).
    """
    out: list[SATerm] = []
    for t in proof.terms:
        if t.coefficient <= 0:
            raise MalformedProofError(f"term coefficient {t.coefficient} is not positive")
        m = multilinearize(t.monomial)
        kind = t.ref.kind
        i = t.ref.index
        has_x = i in {tok for tok in m.tokens()}
        has_xb = -i in m.tokens()
        if kind == HYPOTHESIS:
            hmono = falsified_monomial(proof.hypotheses[i - 1])
            out.append(SATerm(t.coefficient, m.without(hmono.tokens()), t.ref))
        elif kind == ONE_MINUS_X_XBAR:
            if not has_x and not has_xb:
                out.append(SATerm(t.coefficient, m, t.ref))
            else:
                out.append(
                    SATerm(t.coefficient, m.without({i, -i}), RefPoly(MINUS_X_XBAR, i))
                )
        elif kind == X_XBAR_MINUS_ONE:
            if not has_x and not has_xb:
                out.append(SATerm(t.coefficient, m, t.ref))
            elif has_x and has_xb:
                out.append(SATerm(t.coefficient, m, RefPoly(ONE)))
            else:
                twin = Monomial.of({-i if has_x else i: 1})
                out.append(SATerm(t.coefficient, m.mul(twin), RefPoly(ONE)))
        elif kind == ONE:
            out.append(SATerm(t.coefficient, m, t.ref))
        elif kind == MINUS_X_XBAR:
            out.append(SATerm(t.coefficient, m.without({i, -i}), t.ref))
        elif kind in (X_MINUS_XSQ, XSQ_MINUS_X):
            continue  # identically zero on 0-1 points; dropped
        else:  # pragma: no cover
            raise MalformedProofError(f"unknown reference kind {kind}")
    return SAProof(proof.num_variables, proof.hypotheses, proof.goal, tuple(out))


def sa_to_circular(proof: SAProof) -> tuple[ProofGraph, FlowAssignment]:
    """Read a checked polynomial proof as a circular proof of its goal.

    After normalization each term becomes a rule application: hypothesis
    terms become chains of literal-introducing splits, ``-x*xb`` terms an
    axiom plus such a chain, ``1-x-xb`` terms a split, ``x+xb-1`` terms a
    cut; constant-reference terms only feed balances.  Vertices are
    identified by clause.  The width of the result equals the proof degree.
    """
    if proof.goal is None:
        raise MalformedProofError("translation needs a goal clause")
    if proof.goal.is_tautological:
        raise TautologicalClauseError(f"tautological goal {proof.goal}")
    if not check_sa(proof):
        raise InconsistencyError("polynomial proof does not check")
    norm = normalize_sa(proof)

    b = ProofGraphBuilder()
    goal_vertex = b.vertex(proof.goal)
    hyp_set = set(proof.hypotheses)

    def weaken_chain(start: int, extension: Clause, flow: Fraction) -> int:
        cur = start
        for lit in extension.literals:
            (out,) = b.split(
                cur, lit.variable,
                keep_positive=lit.positive, keep_negative=not lit.positive,
                flow=flow,
            )
            cur = out
        return cur

    identity_budget = Fraction(0)
    for t in norm.terms:
        a = t.coefficient
        kind = t.ref.kind
        i = t.ref.index
        c_j = clause_of_monomial(t.monomial)
        if kind == HYPOTHESIS:
            base_clause = proof.hypotheses[i - 1]
            base = b.vertex(base_clause)
            if c_j.is_empty:
                if base_clause == proof.goal:
                    identity_budget += a
                continue
            weaken_chain(base, c_j, a)
        elif kind == MINUS_X_XBAR:
            taut = b.axiom(i, flow=a)
            if not c_j.is_empty:
                weaken_chain(taut, c_j, a)
        elif kind == ONE_MINUS_X_XBAR:
            # Split shape: consumes the side clause, produces both extensions.
            src = b.vertex(c_j)
            b.split(src, i, flow=a)
        elif kind == X_XBAR_MINUS_ONE:
            # Cut shape: consumes both extensions, produces the side clause.
            pos = b.vertex(c_j.with_literal(Literal(i, True)))
            neg = b.vertex(c_j.with_literal(Literal(i, False)))
            b.cut(pos, neg, c_j, i, flow=a)
        elif kind == ONE:
            b.vertex(c_j)  # sink slack only; no rule
        else:  # pragma: no cover
            raise MalformedProofError(f"unexpected normalized kind {kind}")

    for clause, fid in b.clause_index():
        if clause in hyp_set:
            b.mark_hypothesis(fid)
    b.set_goal(goal_vertex)
    graph, flows = b.build()

    if not graph.inference_vertices or not verify_flow(
        graph, FlowAssignment(flows), goal_vertex
    ):
        if proof.goal in hyp_set:
            graph, flows, goal_vertex = _pad_identity(
                b, proof, goal_vertex, max(identity_budget, Fraction(1))
            )
        else:
            raise InconsistencyError(
                "normalized terms do not yield a witnessing flow for the goal"
            )
    flow = FlowAssignment(flows)
    if not verify_flow(graph, flow, goal_vertex):
        raise InconsistencyError("translated graph fails its own flow check")
    return graph, flow


def _pad_identity(b: ProofGraphBuilder, proof: SAProof, hyp_vertex: int,
                  amount: Fraction) -> tuple[ProofGraph, dict, int]:
    """Route flow from a hypothesis copy of the goal to a distinct goal vertex.

    Used when the goal is itself a hypothesis and the term list produced no
    inference vertices for it: a split/cut detour (or a collapsing split when
    every variable occurs in the goal) gives the goal positive balance while
    keeping every other balance intact.
    """
    goal = proof.goal
    spare = None
    for v in range(1, proof.num_variables + 1):
        if v not in goal.variables():
            spare = v
            break
    fresh_goal = b.vertex(goal, fresh=True)
    if spare is not None:
        pos = b.vertex(goal.with_literal(Literal(spare, True)))
        neg = b.vertex(goal.with_literal(Literal(spare, False)))
        b.inference(SPLIT, spare, (hyp_vertex,), (pos, neg), flow=amount)
        b.inference(CUT, spare, (pos, neg), (fresh_goal,), flow=amount)
    else:
        # No unused variable: introduce a literal already present, which
        # collapses the kept consequent back onto the goal clause.
        lit = goal.literals[0]
        b.inference(SPLIT, lit.variable, (hyp_vertex,), (fresh_goal,), flow=amount)
    b.set_goal(fresh_goal)
    graph, flows = b.build()
    return graph, flows, fresh_goal
