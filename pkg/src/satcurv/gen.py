"""Random k-SAT instance generation and labeled dataset production.

Two models:

* ``fixed-k`` — each clause draws k distinct variables uniformly without
  replacement and negates each independently with probability 1/2 (standard
  random k-SAT).
* ``bernoulli`` — every (clause, literal-slot) pair among M x 2N is connected
  independently with probability p = k/(2N); empty clauses are resampled.
  Literal degrees then follow a zero-truncated Poisson law with rate
  alpha*k/2 in the large-N limit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidSpec
from .formula import Cnf, write_dimacs

FIXED_K = "fixed-k"
BERNOULLI = "bernoulli"
MODELS = (FIXED_K, BERNOULLI)


@dataclass(frozen=True)
class GenSpec:
    n_vars: int
    k: int
    alpha: float
    model: str = FIXED_K
    seed: int = 0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidSpec("k must be >= 1")
        if self.alpha <= 0:
            raise InvalidSpec("alpha must be > 0")
        if self.model not in MODELS:
            raise InvalidSpec(f"unknown model {self.model!r}")
        if self.model == FIXED_K and self.n_vars < self.k:
            raise InvalidSpec(f"fixed-k needs N >= k, got N={self.n_vars}, k={self.k}")
        if self.num_clauses < 1:
            raise InvalidSpec("round(alpha*N) must be >= 1")

    @property
    def num_clauses(self) -> int:
        # round-half-to-even, alpha is a real control parameter
        return round(self.alpha * self.n_vars)


def _slot_to_lit(slot: int) -> int:
    """Literal slot s in [0, 2N) -> signed literal; even slots positive."""
    var = slot // 2 + 1
    return -var if slot % 2 else var


def generate(spec: GenSpec, rng: np.random.Generator | None = None) -> Cnf:
    """Draw one instance. Deterministic for a fixed spec (and seed)."""
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(spec.seed))
    n, k, m = spec.n_vars, spec.k, spec.num_clauses
    clauses: list[tuple[int, ...]] = []
    if spec.model == FIXED_K:
        for _ in range(m):
            variables = rng.choice(n, size=k, replace=False) + 1
            signs = rng.integers(0, 2, size=k)
            clauses.append(tuple(int(v) if s == 0 else -int(v) for v, s in zip(variables, signs)))
    else:
        p = k / (2 * n)
        for _ in range(m):
            width = int(rng.binomial(2 * n, p))
            while width == 0:
                width = int(rng.binomial(2 * n, p))
            slots = rng.choice(2 * n, size=width, replace=False)
            clauses.append(tuple(_slot_to_lit(int(s)) for s in sorted(slots)))
    return Cnf(n, tuple(clauses))


def instance_rng(seed: int, index: int) -> np.random.Generator:
    """Independent per-instance stream derived from (seed, index)."""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def generate_dataset(
    spec: GenSpec,
    count: int,
    label: bool,
    out_dir: str | Path,
    budget: int = 10_000_000,
) -> dict:
    """Write ``count`` DIMACS files plus a JSON manifest; returns the manifest.

    With label=True, instances are labeled SAT/UNSAT by the DPLL solver;
    budget exhaustion records the label as "unknown".
    """
    from .solver import solve_dpll  # local import: solver depends on formula only

    if count < 1:
        raise InvalidSpec("count must be >= 1")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    instances = []
    for idx in range(count):
        cnf = generate(spec, rng=instance_rng(spec.seed, idx))
        path = out_dir / f"instance_{idx:05d}.cnf"
        path.write_text(write_dimacs(cnf))
        entry = {"path": path.name, "label": "unknown", "m_clauses": cnf.num_clauses}
        if label:
            result = solve_dpll(cnf, budget=budget)
            entry["label"] = result.status
        instances.append(entry)
    manifest = {
        "model": spec.model,
        "k": spec.k,
        "n_vars": spec.n_vars,
        "alpha": spec.alpha,
        "seed": spec.seed,
        "instances": instances,
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest
