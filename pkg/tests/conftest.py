import numpy as np
import pytest

from satcurv import gen, graph


@pytest.fixture
def small_lcg():
    spec = gen.GenSpec(n_vars=20, k=3, alpha=4.2, seed=11)
    cnf = gen.generate(spec, rng=gen.instance_rng(11, 0))
    return cnf, graph.build_lcg(cnf)


def random_lcg(n_vars, k, alpha, seed, model=gen.FIXED_K, index=0):
    spec = gen.GenSpec(n_vars=n_vars, k=k, alpha=alpha, model=model, seed=seed)
    cnf = gen.generate(spec, rng=gen.instance_rng(seed, index))
    return cnf, graph.build_lcg(cnf)


def random_simple_graph(rng, n_nodes, p):
    """Erdos-Renyi simple graph with every node degree >= 1."""
    from satcurv.curvature import simple_graph

    while True:
        edges = [
            (u, v)
            for u in range(n_nodes)
            for v in range(u + 1, n_nodes)
            if rng.random() < p
        ]
        g = simple_graph(n_nodes, edges)
        if len(edges) and all(g.degree(u) >= 1 for u in range(n_nodes)):
            return g, edges
