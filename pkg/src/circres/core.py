"""Clauses, literals, CNF formulas, assignments, and brute-force semantic oracles.

Variables are dense positive integers.  A literal is a signed variable; a
clause is a canonically ordered, duplicate-free disjunction of literals.
Tautological clauses (containing some ``x`` together with ``~x``) are legal
first-class values and carry a queryable flag, since elementary tautologies
``x | ~x`` arise as rule consequents.  The empty clause is a valid clause of
width 0 and is false under every assignment.

All values here are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

# Exhaustive oracles refuse instances above this many variables.
ORACLE_GUARD = 24


class MalformedLiteralError(ValueError):
    """A literal referenced variable index 0 or a negative index."""


class IncompleteAssignmentError(KeyError):
    """An assignment did not cover every variable it was asked about."""


class TooLargeError(ValueError):
    """An exhaustive oracle was asked to enumerate too many variables."""


@dataclass(frozen=True, order=True)
class Literal:
    """A variable occurrence, positive or negated.  ``variable >= 1``."""

    variable: int
    positive: bool = True

    def __post_init__(self) -> None:
        if self.variable < 1:
            raise MalformedLiteralError(f"variable index must be >= 1, got {self.variable}")

    @property
    def complement(self) -> "Literal":
        return Literal(self.variable, not self.positive)

    @staticmethod
    def from_int(n: int) -> "Literal":
        if n == 0:
            raise MalformedLiteralError("literal 0 is reserved as a terminator")
        return Literal(abs(n), n > 0)

    def to_int(self) -> int:
        return self.variable if self.positive else -self.variable

    def __str__(self) -> str:
        return f"x{self.variable}" if self.positive else f"~x{self.variable}"


# Canonical order inside a clause: by variable, positive phase first.
def _lit_key(lit: Literal) -> tuple[int, int]:
    return (lit.variable, 0 if lit.positive else 1)


@dataclass(frozen=True)
class Clause:
    """A disjunction of literals, deduplicated and canonically sorted.

    Construct through :func:`normalize_clause` (or :meth:`from_ints`), which
    enforces the canonical form.  Complementary pairs are retained, so a
    clause may be tautological.
    """

    literals: tuple[Literal, ...]

    @property
    def width(self) -> int:
        return len(self.literals)

    @property
    def is_empty(self) -> bool:
        return not self.literals

    @property
    def is_tautological(self) -> bool:
        seen: set[int] = set()
        for lit in self.literals:
            if lit.variable in seen:
                return True
            seen.add(lit.variable)
        return False

    def variables(self) -> frozenset[int]:
        return frozenset(lit.variable for lit in self.literals)

    def signed(self) -> frozenset[int]:
        """The clause as a frozenset of signed integers."""
        return frozenset(lit.to_int() for lit in self.literals)

    def with_literal(self, lit: Literal) -> "Clause":
        return normalize_clause((*self.literals, lit))

    @staticmethod
    def from_ints(*ints: int) -> "Clause":
        return normalize_clause([Literal.from_int(n) for n in ints])

    @staticmethod
    def from_signed(ints: Iterable[int]) -> "Clause":
        return normalize_clause([Literal.from_int(n) for n in ints])

    def __str__(self) -> str:
        if not self.literals:
            return "_|_"
        return " | ".join(str(lit) for lit in self.literals)


EMPTY_CLAUSE = Clause(())


def normalize_clause(literals: Iterable[Literal]) -> Clause:
    """Sort and deduplicate ``literals`` into a canonical clause.

    Duplicate literals collapse; complementary pairs are kept, so the result
    may be tautological.  An empty iterable yields the empty clause.
    """
    lits = list(literals)
    for lit in lits:
        if not isinstance(lit, Literal):
            raise MalformedLiteralError(f"not a literal: {lit!r}")
    return Clause(tuple(sorted(set(lits), key=_lit_key)))


@dataclass(frozen=True)
class CnfFormula:
    """A conjunction of clauses over variables ``1..num_variables``."""

    num_variables: int
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        for clause in self.clauses:
            for lit in clause.literals:
                if lit.variable > self.num_variables:
                    raise MalformedLiteralError(
                        f"literal {lit} exceeds declared variable count {self.num_variables}"
                    )

    @staticmethod
    def of(num_variables: int, clauses: Iterable[Clause]) -> "CnfFormula":
        return CnfFormula(num_variables, tuple(clauses))

    def clause_set(self) -> frozenset[Clause]:
        return frozenset(self.clauses)


@dataclass(frozen=True)
class Assignment:
    """A total truth assignment, mapping variables to 0 or 1."""

    values: Mapping[int, int] = field(default_factory=dict)

    def value(self, variable: int) -> int:
        try:
            return self.values[variable]
        except KeyError:
            raise IncompleteAssignmentError(
                f"assignment does not cover variable {variable}"
            ) from None

    def satisfies(self, lit: Literal) -> bool:
        val = self.value(lit.variable)
        return bool(val) == lit.positive

    @staticmethod
    def from_bits(bits: Iterable[int]) -> "Assignment":
        return Assignment({i + 1: int(b) for i, b in enumerate(bits)})


def evaluate(clause: Clause, alpha: Assignment) -> bool:
    """True iff some literal of ``clause`` is satisfied; the empty clause is false."""
    return any(alpha.satisfies(lit) for lit in clause.literals)


def all_assignments(num_variables: int) -> Iterator[Assignment]:
    for bits in itertools.product((0, 1), repeat=num_variables):
        yield Assignment.from_bits(bits)


def implies_oracle(hypotheses: CnfFormula, goal: Clause, guard: int = ORACLE_GUARD) -> bool:
    """Exhaustively test whether every model of ``hypotheses`` satisfies ``goal``.

    Enumerates all assignments over the formula's variables, so it refuses
    instances above ``guard`` variables.
    """
    num_vars = max(
        hypotheses.num_variables,
        max((v for v in goal.variables()), default=0),
    )
    if num_vars > guard:
        raise TooLargeError(f"{num_vars} variables exceed oracle guard of {guard}")
    for alpha in all_assignments(num_vars):
        if all(evaluate(c, alpha) for c in hypotheses.clauses) and not evaluate(goal, alpha):
            return False
    return True
