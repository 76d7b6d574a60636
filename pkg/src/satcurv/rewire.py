"""Curvature-guided stochastic rewiring of literal-clause graphs.

Each iteration targets the edge with the most negative Balanced Forman
curvature and adds one new (clause, literal) edge chosen from the target's
one-hop neighborhoods — at random with probability p, greedily by curvature
improvement otherwise. Additions only; the graph stays bipartite and simple.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from ._kernels_py import _bfc_from_stats, _edge_stats
from .errors import BipartitenessViolated
from .formula import Cnf
from .graph import LcgGraph, build_lcg, from_edge_list, lit_id_to_signed


@dataclass(frozen=True)
class RewireConfig:
    iterations: Optional[int] = None  # None -> ceil(0.2 * |E|)
    random_prob: float = 0.3
    seed: int = 0
    recompute_radius: int = 2
    # extension point, off by default: probability of dropping the most
    # negative edge instead of adding a supporting one. Addition alone lowers
    # the mean curvature through degree growth; interleaving deletions is what
    # actually flattens the graph.
    delete_prob: float = 0.0

    def __post_init__(self) -> None:
        if self.iterations is not None and self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if not 0.0 <= self.random_prob <= 1.0:
            raise ValueError("random_prob must be in [0, 1]")
        if self.recompute_radius < 0:
            raise ValueError("recompute_radius must be >= 0")
        if not 0.0 <= self.delete_prob <= 1.0:
            raise ValueError("delete_prob must be in [0, 1]")


@dataclass
class RewireTrace:
    """Per-iteration log of Algorithm 1 plus the count of skipped iterations."""

    records: list = field(default_factory=list)
    skipped_count: int = 0

    def to_json(self) -> str:
        return json.dumps(
            {"records": self.records, "skipped_count": self.skipped_count}
        )


def default_iterations(n_edges: int) -> int:
    return math.ceil(0.2 * n_edges)


def _ball_nodes(adj, centers, radius):
    """All nodes within `radius` hops of any center."""
    seen = set(centers)
    frontier = list(centers)
    for _ in range(radius):
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return seen


class _MutableLcg:
    """Set-based adjacency mirror of an LcgGraph that supports edge insertion."""

    def __init__(self, g: LcgGraph):
        self.n_vars = g.n_vars
        self.n_clauses = g.n_clauses
        self.n_lits = g.n_literals
        self.adj = [set(int(v) for v in g.neighbors(u)) for u in range(g.n_nodes)]
        # curvature cache keyed by (lit_node, clause_node)
        self.bfc = {}
        for lit, clause in g.edges:
            self._recompute_edge(int(lit), int(clause) + self.n_lits)

    def _recompute_edge(self, lit_node, clause_node):
        di, dj, tri, sqi, sqj, gam = _edge_stats(self.adj, lit_node, clause_node)
        self.bfc[(lit_node, clause_node)] = _bfc_from_stats(di, dj, tri, sqi, sqj, gam)

    def edge_bfc(self, lit_node, clause_node):
        di, dj, tri, sqi, sqj, gam = _edge_stats(self.adj, lit_node, clause_node)
        return _bfc_from_stats(di, dj, tri, sqi, sqj, gam)

    def _csr(self):
        n_nodes = len(self.adj)
        counts = np.fromiter((len(s) for s in self.adj), dtype=np.int64, count=n_nodes)
        indptr = np.zeros(n_nodes + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        indices = np.empty(int(indptr[-1]), dtype=np.int64)
        for u, nbrs in enumerate(self.adj):
            indices[indptr[u] : indptr[u + 1]] = sorted(nbrs)
        return indptr, indices

    def _refresh_ball(self, centers, radius):
        # exact update: BFC depends only on 2-hop structure, so refreshing the
        # ball around both endpoints covers every affected edge
        ball = _ball_nodes(self.adj, centers, radius)
        affected = set()
        for u in ball:
            if u < self.n_lits:
                affected.update((u, v) for v in self.adj[u])
            else:
                affected.update((v, u) for v in self.adj[u])
        if not affected:
            return
        pairs = sorted(affected)
        indptr, indices = self._csr()
        eu = np.fromiter((p[0] for p in pairs), dtype=np.int64, count=len(pairs))
        ev = np.fromiter((p[1] for p in pairs), dtype=np.int64, count=len(pairs))
        bfc, *_ = kernels.bfc_edges(indptr, indices, eu, ev)
        for pair, val in zip(pairs, bfc):
            self.bfc[pair] = float(val)

    def add_edge(self, lit_node, clause_node, radius):
        self.adj[lit_node].add(clause_node)
        self.adj[clause_node].add(lit_node)
        self._refresh_ball((lit_node, clause_node), radius)

    def remove_edge(self, lit_node, clause_node, radius):
        self.adj[lit_node].discard(clause_node)
        self.adj[clause_node].discard(lit_node)
        del self.bfc[(lit_node, clause_node)]
        self._refresh_ball((lit_node, clause_node), radius)

    def most_negative_edge(self):
        best = None
        best_val = math.inf
        for (lit, clause), val in self.bfc.items():
            key = (lit, clause)
            if val < best_val or (val == best_val and (best is None or key < best)):
                best = key
                best_val = val
        return best, best_val

    def mean_bfc(self):
        return sum(self.bfc.values()) / len(self.bfc)

    def to_graph(self) -> LcgGraph:
        pairs = [(lit, clause - self.n_lits) for lit, clause in self.bfc]
        return from_edge_list(self.n_vars, self.n_clauses, pairs)


def _candidate_evaluator(state, i, j, ric_ij):
    """Closure computing delta = Ric'(i,j) - Ric(i,j) for a candidate (k, l).

    Adding (k, l) with k a clause neighbor of i and l a literal of clause j
    leaves d_i, d_j and the (zero) triangle count unchanged; it only gives k
    one more 4-cycle partner (l) and l one more partner (k), so the updated
    square statistics follow from the base per-neighbor partner counts.
    """
    adj = state.adj
    si, sj = adj[i], adj[j]
    # per-neighbor 4-cycle partner counts around the target edge; in a
    # bipartite graph the only same-side exclusion that bites is the endpoint
    partners_i = {x: len(adj[x] & sj) - 1 for x in si if x != j}
    partners_j = {y: len(adj[y] & si) - 1 for y in sj if y != i}
    di, dj = len(si), len(sj)
    dmax, dmin = max(di, dj), min(di, dj)
    base_gamma = max(
        max(partners_i.values(), default=0), max(partners_j.values(), default=0)
    )

    def evaluate(k, l):
        pk = partners_i[k] + 1
        pl = partners_j[l] + 1
        sqi = sum(1 for v in partners_i.values() if v >= 1) + (partners_i[k] == 0)
        sqj = sum(1 for v in partners_j.values() if v >= 1) + (partners_j[l] == 0)
        gamma = max(base_gamma, pk, pl)
        if dmin == 1:
            return 0.0 - ric_ij
        val = 2.0 / di + 2.0 / dj - 2.0
        if sqi + sqj > 0:
            val += (sqi + sqj) / (gamma * dmax)
        return val - ric_ij

    return evaluate


def rewire(g: LcgGraph, cfg: RewireConfig) -> tuple[LcgGraph, RewireTrace]:
    """Balanced Forman curvature stochastic rewiring (additions only).

    Returns the rewired graph and a trace with one record per performed
    iteration. Deterministic for a fixed (graph, config) pair.
    """
    trace = RewireTrace()
    if g.n_edges == 0:
        return g, trace
    iters = cfg.iterations if cfg.iterations is not None else default_iterations(g.n_edges)
    if iters == 0:
        return g, trace

    state = _MutableLcg(g)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    for _ in range(iters):
        (i, j), ric_ij = state.most_negative_edge()
        if cfg.delete_prob > 0 and rng.random() < cfg.delete_prob:
            # never empty a clause: skip instead
            if len(state.adj[j]) <= 1:
                trace.skipped_count += 1
                continue
            state.remove_edge(i, j, cfg.recompute_radius)
            trace.records.append(
                {
                    "target_edge": [i, j - state.n_lits],
                    "chosen_edge": None,
                    "mode": "delete",
                    "delta": 0.0,
                    "mean_bfc_after": state.mean_bfc(),
                }
            )
            continue
        # candidates: clause neighbor of literal i x literal neighbor of clause j
        candidates = sorted(
            (k, l)
            for k in state.adj[i]
            for l in state.adj[j]
            if l not in state.adj[k]
        )
        if not candidates:
            trace.skipped_count += 1
            continue
        evaluate = _candidate_evaluator(state, i, j, ric_ij)
        if rng.random() < cfg.random_prob:
            mode = "random"
            k, l = candidates[int(rng.integers(len(candidates)))]
            delta = evaluate(k, l)
        else:
            mode = "greedy"
            best = None
            best_delta = -math.inf
            for k, l in candidates:
                d = evaluate(k, l)
                if d > best_delta:
                    best, best_delta = (k, l), d
            k, l = best
            delta = best_delta
        state.add_edge(l, k, cfg.recompute_radius)
        trace.records.append(
            {
                "target_edge": [i, j - state.n_lits],
                "chosen_edge": [l, k - state.n_lits],
                "mode": mode,
                "delta": delta,
                "mean_bfc_after": state.mean_bfc(),
            }
        )

    out = state.to_graph()
    for lit, clause in out.edges:
        if not (0 <= lit < out.n_literals and 0 <= clause < out.n_clauses):
            raise BipartitenessViolated(f"edge ({lit}, {clause}) leaves the bipartition")
    return out, trace


def rewired_to_cnf(g: LcgGraph, original: Cnf) -> Cnf:
    """Formula whose clause literal sets equal the clause neighborhoods of g.

    Rewiring only adds literals to clauses, so every model of the original
    formula remains a model of the result.
    """
    base = build_lcg(original)
    if g.n_vars != base.n_vars or g.n_clauses != base.n_clauses:
        raise BipartitenessViolated("graph shape does not match the formula")
    have = set(map(tuple, g.edges.tolist()))
    for pair in map(tuple, base.edges.tolist()):
        if pair not in have:
            raise BipartitenessViolated(f"graph is missing original edge {pair}")
    clauses = []
    for c in range(g.n_clauses):
        node = g.clause_node(c)
        lits = sorted(int(l) for l in g.neighbors(node))
        clauses.append(tuple(lit_id_to_signed(l) for l in lits))
    return Cnf(original.num_vars, tuple(clauses))


__all__ = [
    "RewireConfig",
    "RewireTrace",
    "default_iterations",
    "rewire",
    "rewired_to_cnf",
]
