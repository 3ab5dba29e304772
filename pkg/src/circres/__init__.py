"""Circular resolution proofs: representation, exact flow certification,
pigeonhole refutation generators, polynomial-proof translations, and
bounded-width proof search."""

from .core import (
    Assignment,
    Clause,
    CnfFormula,
    Literal,
    evaluate,
    implies_oracle,
    normalize_clause,
)
from .flowcheck import (
    CheckReport,
    DualCertificate,
    FlowAssignment,
    dual_certificate,
    find_witness,
    integralize,
    trace_falsified_source,
    verify_dual_certificate,
    verify_flow,
)
from .generators import (
    BipartiteGraph,
    complete_bipartite,
    gen_php,
    php_refutation,
    random_circular_proof,
    unsound_cycle_example,
)
from .lp import LinearProgram, farkas_certificate, feasible
from .proofgraph import (
    FormulaVertex,
    InferenceVertex,
    ProofGraph,
    ProofGraphBuilder,
    Rule,
    balance,
    balances,
    export_dot,
    sources_and_sinks,
    validate_rules,
)
from .search import circular_search, daglike_width_saturate
from .sheraliadams import (
    Monomial,
    Polynomial,
    RefPoly,
    SAProof,
    SATerm,
    check_sa,
    circular_to_sa,
    clause_gadget,
    encode_clause,
    multilinearize,
    normalize_sa,
    sa_degree,
    sa_monomial_size,
    sa_to_circular,
)

__version__ = "0.1.0"
