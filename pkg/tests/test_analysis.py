import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satcurv import analysis, gen, graph
from satcurv.errors import DegenerateVariance
from tests.conftest import random_lcg


def pearson_textbook(xs, ys):
    """Independent implementation: raw-moment formula."""
    n = len(xs)
    sx, sy = sum(xs), sum(ys)
    sxx = sum(x * x for x in xs)
    syy = sum(y * y for y in ys)
    sxy = sum(x * y for x, y in zip(xs, ys))
    num = n * sxy - sx * sy
    den = math.sqrt(n * sxx - sx * sx) * math.sqrt(n * syy - sy * sy)
    return num / den


def test_pearson_published_columns():
    errors = (0.31, 0.56, 0.27, 0.25)
    assert analysis.pearson((4.59, 9.08, 6.09, 9.73), errors) == pytest.approx(0.32, abs=0.01)
    assert analysis.pearson((4.12, 9.81, 5.30, 6.30), errors) == pytest.approx(0.86, abs=0.01)
    assert analysis.pearson((97.41, 612.32, 125.30, 123.27), errors) == pytest.approx(0.98, abs=0.01)


def test_pearson_perfect_and_degenerate():
    assert analysis.pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    assert analysis.pearson([1, 2, 3], [-2, -4, -6]) == pytest.approx(-1.0)
    with pytest.raises(DegenerateVariance):
        analysis.pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        analysis.pearson([1], [2])


@given(
    st.lists(st.floats(-50, 50), min_size=3, max_size=12),
    st.floats(0.1, 9.0),
    st.floats(-5.0, 5.0),
)
@settings(max_examples=60, deadline=None)
def test_pearson_affine_invariance_and_oracle(xs, scale, shift):
    ys = [x * 2 + 1 for x in xs]  # arbitrary companion series
    if max(xs) - min(xs) < 1e-6 or len(set(ys)) < 2:
        return
    rho = analysis.pearson(xs, ys)
    assert rho == pytest.approx(pearson_textbook(xs, ys), abs=1e-12)
    assert analysis.pearson([x * scale + shift for x in xs], ys) == pytest.approx(
        rho, abs=1e-9
    )
    assert analysis.pearson(ys, xs) == pytest.approx(rho, abs=1e-12)


def test_hardness_identity(small_lcg):
    _, g = small_lcg
    scores = analysis.hardness(g)
    assert scores.omega == pytest.approx(-scores.mean_ric * scores.alpha, abs=1e-12)
    assert scores.omega_star * scores.var_ric == pytest.approx(scores.omega, abs=1e-12)
    assert not scores.var_zero


def test_hardness_flat_graph_var_zero_sentinel():
    # N disjoint single-literal clauses: every edge has degree-1 endpoints
    cnf_clauses = tuple((v,) for v in range(1, 6))
    from satcurv.formula import Cnf

    g = graph.build_lcg(Cnf(5, cnf_clauses))
    scores = analysis.hardness(g)
    assert scores.mean_ric == 0.0 and scores.omega == 0.0
    assert scores.var_zero and math.isinf(scores.omega_star)


def test_dataset_hardness_mean_idempotence(tmp_path):
    spec = gen.GenSpec(n_vars=20, k=3, alpha=3.0, seed=0)
    m1 = gen.generate_dataset(spec, 1, False, tmp_path / "one")
    omega1, star1, alpha1 = analysis.dataset_hardness(tmp_path / "one" / "manifest.json")
    single = analysis.instance_hardness(tmp_path / "one" / m1["instances"][0]["path"])
    assert omega1 == pytest.approx(single.omega)
    assert star1 == pytest.approx(single.omega_star)
    assert alpha1 == pytest.approx(single.alpha)


def test_dataset_hardness_direction(tmp_path):
    for alpha, name in ((3.0, "lo"), (6.0, "hi")):
        gen.generate_dataset(
            gen.GenSpec(n_vars=60, k=3, alpha=alpha, seed=1), 5, False, tmp_path / name
        )
    lo, _, _ = analysis.dataset_hardness(tmp_path / "lo" / "manifest.json")
    hi, _, _ = analysis.dataset_hardness(tmp_path / "hi" / "manifest.json")
    assert hi > lo


def test_sweep_rows_and_csv_stability():
    spec = analysis.SweepSpec(
        k_list=(3,), alpha_grid=(1.0, 3.0), n_vars=40, samples=4, seed=0,
        measures=("bfc", "lower"),
    )
    rows = analysis.sweep(spec)
    assert len(rows) == 4  # 2 cells x 2 measures
    assert [r.alpha for r in rows] == [1.0, 1.0, 3.0, 3.0]
    csv_a = analysis.sweep_csv(rows)
    csv_b = analysis.sweep_csv(analysis.sweep(spec))
    assert csv_a == csv_b
    assert csv_a.splitlines()[0] == "k,alpha,measure,mean,var,stderr,samples,analytic_lb"


def test_sweep_parallel_matches_serial():
    spec = analysis.SweepSpec(
        k_list=(3,), alpha_grid=(2.0, 4.0), n_vars=30, samples=3, seed=1
    )
    assert analysis.sweep(spec, threads=1) == analysis.sweep(spec, threads=2)


def test_sweep_grid_validation():
    with pytest.raises(ValueError):
        analysis.SweepSpec(k_list=(3,), alpha_grid=(2.0, 1.0), n_vars=10)
    with pytest.raises(ValueError):
        analysis.SweepSpec(k_list=(3,), alpha_grid=(1.0,), n_vars=10, samples=0)


def test_moments_vs_solvability():
    rows = analysis.moments_vs_solvability(3, 25, [2.0, 6.0], samples=6, seed=0)
    assert [r["alpha"] for r in rows] == [2.0, 6.0]
    assert rows[0]["frac_sat"] >= rows[1]["frac_sat"]
    assert rows[0]["mean_bfc"] > rows[1]["mean_bfc"]  # flatter when easy
    assert analysis.moments_vs_solvability(3, 25, [], samples=3) == []
