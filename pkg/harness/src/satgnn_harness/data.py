"""File-format adapters: DIMACS CNF instances and dataset manifests.

These mirror the producer's external formats; nothing here imports the
producer package. Literal ids follow the shared convention
``2*(var-1) + (1 if negated else 0)``, so a literal and its negation differ
in the lowest bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import torch


class DataError(ValueError):
    """Malformed instance or manifest input."""


@dataclass(frozen=True)
class Formula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


def parse_dimacs(path: str | Path) -> Formula:
    num_vars = num_clauses = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise DataError(f"bad header in {path}: {line!r}")
            num_vars, num_clauses = int(fields[2]), int(fields[3])
            continue
        if num_vars is None:
            raise DataError(f"clause before header in {path}")
        for token in line.split():
            lit = int(token)
            if lit == 0:
                if not current:
                    raise DataError(f"empty clause in {path}")
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > num_vars:
                    raise DataError(f"literal {lit} out of range in {path}")
                current.append(lit)
    if num_vars is None:
        raise DataError(f"missing header in {path}")
    if current:
        raise DataError(f"unterminated clause in {path}")
    if len(clauses) != num_clauses:
        raise DataError(
            f"{path}: declared {num_clauses} clauses, found {len(clauses)}"
        )
    return Formula(num_vars, tuple(clauses))


def lit_index(lit: int) -> int:
    return 2 * (abs(lit) - 1) + (1 if lit < 0 else 0)


def incidence(formula: Formula) -> tuple[torch.Tensor, torch.Tensor]:
    """(lit_ids, clause_ids) index tensors, one entry per clause membership."""
    lits, clauses = [], []
    for c, clause in enumerate(formula.clauses):
        for lit in clause:
            lits.append(lit_index(lit))
            clauses.append(c)
    return torch.tensor(lits, dtype=torch.long), torch.tensor(clauses, dtype=torch.long)


def satisfies(formula: Formula, assignment: list[bool]) -> bool:
    """True when the 0-indexed assignment satisfies every clause."""
    if len(assignment) != formula.num_vars:
        raise DataError("assignment length must equal the variable count")
    return all(
        any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause)
        for clause in formula.clauses
    )


@dataclass(frozen=True)
class ManifestDataset:
    root: Path
    k: int
    n_vars: int
    alpha: float
    paths: tuple[Path, ...]
    labels: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.paths)

    def formulas(self) -> list[Formula]:
        return [parse_dimacs(p) for p in self.paths]


def load_manifest(path: str | Path) -> ManifestDataset:
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read manifest {path}: {exc}") from exc
    for key in ("k", "n_vars", "alpha", "instances"):
        if key not in payload:
            raise DataError(f"manifest {path} missing field {key!r}")
    root = path.parent
    entries = payload["instances"]
    if not entries:
        raise DataError(f"manifest {path} lists no instances")
    paths = tuple(root / e["path"] for e in entries)
    labels = tuple(e.get("label", "unknown") for e in entries)
    missing = [p for p in paths if not p.exists()]
    if missing:
        raise DataError(f"manifest {path} references missing files: {missing[:3]}")
    return ManifestDataset(
        root, int(payload["k"]), int(payload["n_vars"]), float(payload["alpha"]),
        paths, labels,
    )
