"""Ground-truth SAT/UNSAT labeling: DPLL with unit propagation and
pure-literal elimination, plus the Monte Carlo P(SAT) curve."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from time import perf_counter
from typing import Optional

import numpy as np

from . import kernels
from .errors import IncompleteAssignment
from .formula import Cnf
from .gen import GenSpec, generate, instance_rng

STATUS = {kernels.SAT: "SAT", kernels.UNSAT: "UNSAT", kernels.UNKNOWN: "unknown"}

DEFAULT_BUDGET = 10_000_000


@dataclass
class SolveResult:
    status: str  # "SAT" | "UNSAT" | "unknown"
    assignment: Optional[dict[int, bool]]
    stats: dict = field(default_factory=dict)


def _flatten(cnf: Cnf) -> tuple[np.ndarray, np.ndarray]:
    flat = np.fromiter((lit for clause in cnf.clauses for lit in clause), dtype=np.int32)
    ptr = np.zeros(cnf.num_clauses + 1, dtype=np.int64)
    np.cumsum([len(c) for c in cnf.clauses], out=ptr[1:])
    return flat, ptr


def solve_dpll(cnf: Cnf, budget: int = DEFAULT_BUDGET) -> SolveResult:
    """Solve; SAT results carry a verified assignment, budget excess -> unknown."""
    start = perf_counter()
    flat, ptr = _flatten(cnf)
    status, assignment, decisions, propagations = kernels.dpll(
        cnf.num_vars, flat, ptr, budget
    )
    elapsed = perf_counter() - start
    result = SolveResult(
        STATUS[status],
        None,
        {"decisions": int(decisions), "propagations": int(propagations), "elapsed": elapsed},
    )
    if status == kernels.SAT:
        result.assignment = {v: bool(assignment[v]) for v in range(1, cnf.num_vars + 1)}
        assert verify(cnf, result.assignment), "solver returned an unverifiable assignment"
    return result


def verify(cnf: Cnf, assignment: dict[int, bool]) -> bool:
    """True iff every clause contains a satisfied literal."""
    for clause in cnf.clauses:
        for lit in clause:
            var = abs(lit)
            if var not in assignment:
                raise IncompleteAssignment(f"variable {var} unassigned")
        if not any(assignment[abs(lit)] != (lit < 0) for lit in clause):
            return False
    return True


def brute_force(cnf: Cnf) -> SolveResult:
    """2^N enumeration oracle; only for small N."""
    n = cnf.num_vars
    if n > 26:
        raise ValueError("brute force limited to N <= 26")
    for bits in range(1 << n):
        assignment = {v: bool((bits >> (v - 1)) & 1) for v in range(1, n + 1)}
        if verify(cnf, assignment):
            return SolveResult("SAT", assignment)
    return SolveResult("UNSAT", None)


def _solve_one(args) -> str:
    cnf, budget = args
    return solve_dpll(cnf, budget=budget).status


def sat_probability_curve(
    k: int,
    n_vars: int,
    alpha_grid,
    samples: int,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> list[dict]:
    """Monte Carlo estimate of P(SAT) per alpha with binomial standard errors.

    Budget-exhausted instances are recorded as unknown and excluded from the
    fraction (with a count in the row).
    """
    rows = []
    for a_idx, alpha in enumerate(alpha_grid):
        spec = GenSpec(n_vars=n_vars, k=k, alpha=float(alpha), seed=seed)
        cnfs = [
            generate(spec, rng=instance_rng(seed, a_idx * samples + s)) for s in range(samples)
        ]
        if threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                labels = list(pool.map(_solve_one, [(c, budget) for c in cnfs]))
        else:
            labels = [solve_dpll(c, budget=budget).status for c in cnfs]
        n_sat = sum(1 for s in labels if s == "SAT")
        n_unknown = sum(1 for s in labels if s == "unknown")
        n_decided = samples - n_unknown
        frac = n_sat / n_decided if n_decided else float("nan")
        stderr = (
            (frac * (1.0 - frac) / n_decided) ** 0.5 if n_decided else float("nan")
        )
        rows.append(
            {
                "alpha": float(alpha),
                "frac_sat": frac,
                "stderr": stderr,
                "samples": n_decided,
                "unknown": n_unknown,
            }
        )
    return rows
