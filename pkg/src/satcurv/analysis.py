"""Hardness heuristics, correlation, and the (k, alpha) sweep driver.

The two heuristics combine curvature moments with clause density:
omega = (-E[Ric]) * alpha and omega* = omega / V[Ric]; dataset-level scores
are arithmetic means of per-instance values. The sweep driver aggregates
edge-level curvature means over sampled instances on a (k, alpha) grid.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .curvature import curvature_report, expected_lower_bound
from .errors import DegenerateVariance, EmptyGraph
from .formula import parse_dimacs
from .gen import GenSpec, generate, instance_rng
from .graph import LcgGraph, build_lcg
from .solver import DEFAULT_BUDGET, solve_dpll


@dataclass(frozen=True)
class HardnessScores:
    omega: float
    omega_star: float  # +inf sentinel when var_ric == 0
    alpha: float
    mean_ric: float
    var_ric: float
    var_zero: bool = False


def hardness(g: LcgGraph, report=None) -> HardnessScores:
    """omega/omega* scores of one graph; alpha is taken as M/N."""
    if g.n_edges == 0:
        raise EmptyGraph("graph has no edges")
    if report is None:
        report = curvature_report(g, measures=("bfc",))
    mean_ric = report.moments.mean_bfc
    var_ric = report.moments.var_bfc
    if mean_ric is None or var_ric is None:
        raise ValueError("report must contain BFC moments")
    alpha = g.n_clauses / g.n_vars
    omega = -mean_ric * alpha
    if var_ric > 0:
        return HardnessScores(omega, omega / var_ric, alpha, mean_ric, var_ric)
    return HardnessScores(omega, math.inf, alpha, mean_ric, var_ric, var_zero=True)


def instance_hardness(path: str | Path) -> HardnessScores:
    cnf = parse_dimacs(Path(path).read_text())
    return hardness(build_lcg(cnf))


def dataset_hardness(manifest: dict | str | Path) -> tuple[float, float, float]:
    """(omega-bar, omega*-bar, alpha-bar): means over a manifest's instances."""
    if not isinstance(manifest, dict):
        manifest_path = Path(manifest)
        manifest = json.loads(manifest_path.read_text())
        base = manifest_path.parent
    else:
        base = Path(".")
    instances = manifest["instances"]
    if not instances:
        raise ValueError("manifest lists no instances")
    scores = [instance_hardness(base / entry["path"]) for entry in instances]
    omega_bar = sum(s.omega for s in scores) / len(scores)
    omega_star_bar = sum(s.omega_star for s in scores) / len(scores)
    alpha_bar = sum(s.alpha for s in scores) / len(scores)
    return omega_bar, omega_star_bar, alpha_bar


def pearson(xs, ys) -> float:
    """Sample Pearson correlation; affine-invariant in either argument."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1 or len(xs) < 2:
        raise ValueError("inputs must be equal-length 1-d sequences of length >= 2")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sx = float(np.sqrt((dx * dx).sum()))
    sy = float(np.sqrt((dy * dy).sum()))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateVariance("pearson undefined for constant input")
    return float((dx * dy).sum() / (sx * sy))


@dataclass(frozen=True)
class SweepSpec:
    k_list: tuple
    alpha_grid: tuple
    n_vars: int
    samples: int = 20
    seed: int = 0
    measures: tuple = ("bfc",)
    model: str = "fixed-k"

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        grid = tuple(self.alpha_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("alpha grid must be strictly increasing")


@dataclass(frozen=True)
class SweepRow:
    k: int
    alpha: float
    measure: str
    mean: float
    var: float
    stderr: float
    samples: int
    analytic_lb: float
    error: str = ""


def sweep(spec: SweepSpec, threads: int = 1) -> list[SweepRow]:
    """Mean edge curvature per (k, alpha) cell over sampled instances.

    The per-cell mean is the average over instances of each instance's
    edge-level mean; stderr is the sample standard deviation of the
    instance means divided by sqrt(samples).
    """
    cells = [(k, float(a)) for k in spec.k_list for a in spec.alpha_grid]
    rows: list[SweepRow] = []
    work = [(spec, idx, k, alpha) for idx, (k, alpha) in enumerate(cells)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_cell_rows, work))
    else:
        results = [_cell_rows(w) for w in work]
    for cell_rows in results:
        rows.extend(cell_rows)
    return rows


def _cell_rows(args) -> list[SweepRow]:
    spec, cell_index, k, alpha = args
    lb = expected_lower_bound(alpha, k)
    try:
        per_measure = {m: [] for m in spec.measures}
        for s in range(spec.samples):
            rng = instance_rng(spec.seed, cell_index * spec.samples + s)
            cnf = generate(
                GenSpec(n_vars=spec.n_vars, k=k, alpha=alpha, model=spec.model),
                rng=rng,
            )
            report = curvature_report(build_lcg(cnf), measures=spec.measures)
            for m in spec.measures:
                per_measure[m].append(float(report.values[m].mean()))
    except Exception as exc:  # record the failure, keep sweeping
        return [
            SweepRow(k, alpha, m, math.nan, math.nan, math.nan, 0, lb, error=str(exc))
            for m in spec.measures
        ]
    out = []
    for m in spec.measures:
        vals = np.array(per_measure[m])
        var = float(vals.var(ddof=1)) if len(vals) > 1 else 0.0
        out.append(
            SweepRow(
                k,
                alpha,
                m,
                float(vals.mean()),
                var,
                math.sqrt(var / len(vals)),
                len(vals),
                lb,
            )
        )
    return out


def sweep_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "alpha", "measure", "mean", "var", "stderr", "samples", "analytic_lb"])
    for r in rows:
        writer.writerow(
            [r.k, repr(r.alpha), r.measure, repr(r.mean), repr(r.var), repr(r.stderr), r.samples, repr(r.analytic_lb)]
        )
    return buf.getvalue()


def sweep_json(rows: list[SweepRow]) -> str:
    return json.dumps(
        [
            {
                "k": r.k,
                "alpha": r.alpha,
                "measure": r.measure,
                "mean": r.mean,
                "var": r.var,
                "stderr": r.stderr,
                "samples": r.samples,
                "analytic_lb": r.analytic_lb,
                **({"error": r.error} if r.error else {}),
            }
            for r in rows
        ]
    )


def hardness_csv(paths, scores) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["path", "alpha", "mean_ric", "var_ric", "omega", "omega_star"])
    for path, s in zip(paths, scores):
        writer.writerow(
            [path, repr(s.alpha), repr(s.mean_ric), repr(s.var_ric), repr(s.omega),
             "inf" if math.isinf(s.omega_star) else repr(s.omega_star)]
        )
    return buf.getvalue()


def moments_vs_solvability(
    k: int,
    n_vars: int,
    alpha_grid,
    samples: int,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> list[dict]:
    """Join BFC moments with the Monte Carlo solvability fraction per alpha.

    Curvature and labels are computed on the same instances so the moments
    and frac_sat columns describe one population.
    """
    rows = []
    for a_idx, alpha in enumerate(alpha_grid):
        alpha = float(alpha)
        spec = GenSpec(n_vars=n_vars, k=k, alpha=alpha, seed=seed)
        means, variances, labels = [], [], []
        for s in range(samples):
            cnf = generate(spec, rng=instance_rng(seed, a_idx * samples + s))
            report = curvature_report(build_lcg(cnf), measures=("bfc",))
            means.append(report.moments.mean_bfc)
            variances.append(report.moments.var_bfc)
            labels.append(solve_dpll(cnf, budget=budget).status)
        n_unknown = labels.count("unknown")
        n_decided = samples - n_unknown
        frac = labels.count("SAT") / n_decided if n_decided else math.nan
        rows.append(
            {
                "alpha": alpha,
                "mean_bfc": float(np.mean(means)),
                "var_bfc": float(np.mean(variances)),
                "frac_sat": frac,
                "samples": n_decided,
                "unknown": n_unknown,
            }
        )
    return rows


__all__ = [
    "HardnessScores",
    "SweepRow",
    "SweepSpec",
    "dataset_hardness",
    "hardness",
    "hardness_csv",
    "instance_hardness",
    "moments_vs_solvability",
    "pearson",
    "sweep",
    "sweep_csv",
    "sweep_json",
]
