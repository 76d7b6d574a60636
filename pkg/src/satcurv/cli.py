"""Command-line interface: one subcommand per library operation.

Subcommands are thin adapters over the library; all randomness flows from
--seed and outputs are byte-stable for a fixed seed. Exit codes: 0 success,
1 domain error, 2 usage error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import analysis, probe as probe_mod, rewire as rewire_mod, solver
from .curvature import MEASURES, curvature_report
from .errors import SatcurvError
from .formula import parse_dimacs, parse_dimacs_verbose, write_dimacs
from .gen import MODELS, GenSpec, generate, generate_dataset, instance_rng
from .graph import build_lcg


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _read_cnf(path: str):
    return parse_dimacs(Path(path).read_text())


class _Cli(click.Group):
    def __call__(self, *args, **kwargs):
        try:
            return self.main(*args, standalone_mode=False, **kwargs)
        except click.UsageError as exc:
            click.echo(f"error: {exc.format_message()}", err=True)
            sys.exit(2)
        except click.exceptions.Abort:
            sys.exit(2)
        except click.exceptions.Exit as exc:
            sys.exit(exc.exit_code)
        except (SatcurvError, ValueError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)


@click.group(cls=_Cli)
def main() -> None:
    """Discrete Ricci curvature toolkit for random k-SAT graphs."""


@main.command()
@click.option("--k", type=int, required=True)
@click.option("--n", "n_vars", type=int, required=True)
@click.option("--alpha", type=float, required=True)
@click.option("--model", type=click.Choice(MODELS), default="fixed-k", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--count", type=int, default=1, show_default=True,
              help="With --count > 1, --out is a dataset directory.")
@click.option("--label/--no-label", default=False, help="Label dataset instances with the solver.")
@click.option("--out", required=True)
def gen(k, n_vars, alpha, model, seed, count, label, out):
    """Generate random k-SAT instances as DIMACS."""
    spec = GenSpec(n_vars=n_vars, k=k, alpha=alpha, model=model, seed=seed)
    if count == 1 and not label:
        cnf = generate(spec, rng=instance_rng(seed, 0))
        Path(out).write_text(write_dimacs(cnf))
    else:
        generate_dataset(spec, count, label, out)


@main.command("parse-check")
@click.option("--in", "path", required=True)
@click.option("--out", default=None)
def parse_check(path, out):
    """Validate a DIMACS file and report dedup/tautology statistics."""
    _, report = parse_dimacs_verbose(Path(path).read_text())
    _emit(report.to_json() + "\n", out)


@main.command()
@click.option("--in", "path", required=True)
@click.option("--measures", default="bfc,lower", show_default=True,
              help=f"Comma-separated subset of {','.join(MEASURES)}.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json", show_default=True)
@click.option("--out", default=None)
def curvature(path, measures, fmt, out):
    """Per-edge curvature report for the literal-clause graph of a formula."""
    g = build_lcg(_read_cnf(path))
    report = curvature_report(g, measures=tuple(measures.split(",")))
    _emit(report.to_json() + "\n" if fmt == "json" else report.to_csv(), out)


@main.command()
@click.option("--in", "path", required=True)
@click.option("--iters", type=int, default=None, help="Default: ceil(0.2 |E|).")
@click.option("--p", type=float, default=0.3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--delete-prob", type=float, default=0.0, show_default=True)
@click.option("--out", required=True)
@click.option("--trace", "trace_path", default=None)
@click.option("--graph-json", default=None, help="Also write the rewired graph as JSON.")
def rewire(path, iters, p, seed, delete_prob, out, trace_path, graph_json):
    """Curvature-guided stochastic rewiring; writes the rewired DIMACS."""
    cnf = _read_cnf(path)
    g = build_lcg(cnf)
    cfg = rewire_mod.RewireConfig(
        iterations=iters, random_prob=p, seed=seed, delete_prob=delete_prob
    )
    g2, trace = rewire_mod.rewire(g, cfg)
    Path(out).write_text(write_dimacs(rewire_mod.rewired_to_cnf(g2, cnf)))
    if trace_path:
        Path(trace_path).write_text(trace.to_json() + "\n")
    if graph_json:
        Path(graph_json).write_text(g2.to_json() + "\n")


@main.command()
@click.option("--in", "path", required=True)
@click.option("--budget", type=int, default=solver.DEFAULT_BUDGET, show_default=True)
@click.option("--out", default=None)
def solve(path, budget, out):
    """DPLL-solve a formula; prints the status and a 'v' line when SAT."""
    result = solver.solve_dpll(_read_cnf(path), budget=budget)
    lines = [f"s {result.status}"]
    if result.assignment is not None:
        lits = [v if val else -v for v, val in sorted(result.assignment.items())]
        lines.append("v " + " ".join(str(l) for l in lits) + " 0")
    _emit("\n".join(lines) + "\n", out)
    if result.status == "unknown":
        sys.exit(1)


@main.command()
@click.option("--k", "k_list", type=int, multiple=True, required=True)
@click.option("--alphas", required=True, help="Comma-separated strictly increasing grid.")
@click.option("--n", "n_vars", type=int, required=True)
@click.option("--samples", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--measures", default="bfc", show_default=True)
@click.option("--model", type=click.Choice(MODELS), default="fixed-k", show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", default=None)
def sweep(k_list, alphas, n_vars, samples, seed, measures, model, threads, fmt, out):
    """Curvature statistics over a (k, alpha) grid."""
    spec = analysis.SweepSpec(
        k_list=tuple(k_list),
        alpha_grid=tuple(float(a) for a in alphas.split(",")),
        n_vars=n_vars,
        samples=samples,
        seed=seed,
        measures=tuple(measures.split(",")),
        model=model,
    )
    rows = analysis.sweep(spec, threads=threads)
    _emit(
        analysis.sweep_csv(rows) if fmt == "csv" else analysis.sweep_json(rows) + "\n",
        out,
    )


@main.command()
@click.option("--manifest", default=None, help="Dataset manifest JSON.")
@click.option("--in", "paths", multiple=True, help="Individual DIMACS files.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", default=None)
def hardness(manifest, paths, fmt, out):
    """Curvature hardness scores per instance (and dataset averages)."""
    if bool(manifest) == bool(paths):
        raise click.UsageError("provide exactly one of --manifest or --in")
    if manifest:
        base = Path(manifest).parent
        entries = json.loads(Path(manifest).read_text())["instances"]
        files = [str(base / e["path"]) for e in entries]
    else:
        files = list(paths)
    scores = [analysis.instance_hardness(f) for f in files]
    if fmt == "csv":
        _emit(analysis.hardness_csv(files, scores), out)
    else:
        rows = [
            {
                "path": f,
                "alpha": s.alpha,
                "mean_ric": s.mean_ric,
                "var_ric": s.var_ric,
                "omega": s.omega,
                "omega_star": None if s.var_zero else s.omega_star,
            }
            for f, s in zip(files, scores)
        ]
        _emit(json.dumps(rows) + "\n", out)


@main.command()
@click.option("--in", "path", required=True)
@click.option("--layers", type=int, default=6, show_default=True)
@click.option("--dim", type=int, default=8, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--pairs", type=int, default=10, show_default=True)
@click.option("--edges", "edge_samples", type=int, default=30, show_default=True)
@click.option("--aggregation", type=click.Choice(["mean", "sum"]), default="mean", show_default=True)
@click.option("--out", default=None)
def probe(path, layers, dim, seed, pairs, edge_samples, aggregation, out):
    """Curvature vs message-passing sensitivity profile (CSV)."""
    g = build_lcg(_read_cnf(path))
    cfg = probe_mod.ProbeConfig(
        layers=layers, hidden_dim=dim, seed=seed, aggregation=aggregation
    )
    rows = probe_mod.curvature_sensitivity_profile(
        g, cfg, pair_samples=pairs, edge_samples=edge_samples
    )
    _emit(probe_mod.profile_csv(rows), out)


@main.command("sat-curve")
@click.option("--k", type=int, required=True)
@click.option("--n", "n_vars", type=int, required=True)
@click.option("--alphas", required=True)
@click.option("--samples", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--budget", type=int, default=solver.DEFAULT_BUDGET, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", default=None)
def sat_curve(k, n_vars, alphas, samples, seed, budget, threads, fmt, out):
    """Monte Carlo P(SAT) estimate over an alpha grid."""
    rows = solver.sat_probability_curve(
        k,
        n_vars,
        [float(a) for a in alphas.split(",")],
        samples,
        seed=seed,
        budget=budget,
        threads=threads,
    )
    if fmt == "json":
        _emit(json.dumps(rows) + "\n", out)
    else:
        lines = ["alpha,frac_sat,stderr,samples,unknown"]
        for r in rows:
            lines.append(
                f"{r['alpha']!r},{r['frac_sat']!r},{r['stderr']!r},{r['samples']},{r['unknown']}"
            )
        _emit("\n".join(lines) + "\n", out)


if __name__ == "__main__":
    main()
