"""CNF formulas: representation, DIMACS parsing/serialization, validation.

Clauses are stored as tuples of signed DIMACS-style integers (e.g. -3 means
"not x3"). A :class:`Literal` helper is provided for code that prefers the
(var, negated) view.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .errors import ClauseCountMismatch, EmptyClause, MissingHeader, VarOutOfRange


class Literal(NamedTuple):
    var: int  # 1-based
    negated: bool

    @classmethod
    def from_signed(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is the clause terminator, not a literal")
        return cls(abs(lit), lit < 0)

    @property
    def signed(self) -> int:
        return -self.var if self.negated else self.var


@dataclass(frozen=True)
class Cnf:
    """An immutable CNF formula.

    num_vars is N; clauses hold signed literals with abs value in [1, N].
    Duplicate literals within a clause are not allowed (deduplicated on
    ingest); empty clauses are rejected.
    """

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise ValueError("num_vars must be >= 0")
        for clause in self.clauses:
            if not clause:
                raise EmptyClause("empty clause")
            seen = set()
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise VarOutOfRange(f"literal {lit} out of range for N={self.num_vars}")
                if lit in seen:
                    raise ValueError(f"duplicate literal {lit} within a clause")
                seen.add(lit)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def alpha(self) -> float:
        return self.num_clauses / self.num_vars

    def literals(self, clause_idx: int) -> list[Literal]:
        return [Literal.from_signed(lit) for lit in self.clauses[clause_idx]]


@dataclass
class ValidationReport:
    """Ingest statistics: duplicate-literal removals and tautology flags."""

    dedup_count: int = 0
    tautology_count: int = 0
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "dedup_count": self.dedup_count,
                "tautology_count": self.tautology_count,
                "warnings": self.warnings,
            }
        )


def parse_dimacs_verbose(data: bytes | str) -> tuple[Cnf, ValidationReport]:
    """Parse DIMACS CNF, returning the formula plus a validation report.

    Comment lines start with 'c'; exactly one 'p cnf N M' header must precede
    the clauses. Clauses are 0-terminated and may span lines. Duplicate
    literals within a clause are dropped (counted in the report); tautological
    clauses are kept but flagged.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")

    report = ValidationReport()
    num_vars = None
    declared_clauses = None
    tokens: list[int] = []

    for lineno, line in enumerate(data.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("p"):
            if num_vars is not None:
                raise MissingHeader(f"line {lineno}: duplicate header")
            parts = stripped.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise MissingHeader(f"line {lineno}: malformed header {stripped!r}")
            num_vars, declared_clauses = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise MissingHeader(f"line {lineno}: clause data before 'p cnf' header")
        for tok in stripped.split():
            tokens.append(int(tok))

    if num_vars is None:
        raise MissingHeader("no 'p cnf' header found")

    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    seen: set[int] = set()
    for lit in tokens:
        if lit == 0:
            if not current:
                raise EmptyClause(f"clause {len(clauses) + 1} is empty")
            if any(-l in seen for l in current):
                report.tautology_count += 1
                report.warnings.append(f"clause {len(clauses) + 1} is tautological")
            clauses.append(tuple(current))
            current = []
            seen = set()
            continue
        if abs(lit) > num_vars:
            raise VarOutOfRange(f"literal {lit} exceeds declared N={num_vars}")
        if lit in seen:
            report.dedup_count += 1
        else:
            seen.add(lit)
            current.append(lit)
    if current:
        raise ClauseCountMismatch("trailing clause without 0 terminator")

    if len(clauses) != declared_clauses:
        raise ClauseCountMismatch(
            f"header declares {declared_clauses} clauses, found {len(clauses)}"
        )
    return Cnf(num_vars, tuple(clauses)), report


def parse_dimacs(data: bytes | str) -> Cnf:
    """Parse DIMACS CNF text; see :func:`parse_dimacs_verbose`."""
    return parse_dimacs_verbose(data)[0]


def write_dimacs(cnf: Cnf) -> str:
    """Canonical DIMACS serialization: header, one clause per line, trailing newline."""
    lines = [f"p cnf {cnf.num_vars} {cnf.num_clauses}"]
    for clause in cnf.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def write_dimacs_bytes(cnf: Cnf) -> bytes:
    return write_dimacs(cnf).encode("ascii")


def clause_from_literals(lits: Iterable[Literal]) -> tuple[int, ...]:
    return tuple(l.signed for l in lits)
