"""Literal-clause bipartite graph (LCG) construction and neighborhood queries.

Node numbering: literal of variable v (1-based) has id 2*(v-1) for the
positive polarity and 2*(v-1)+1 for the negated one; clause c gets the global
node id 2N + c. The graph is immutable after construction; adjacency is kept
as sorted CSR arrays so that intersections are linear-time merges.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

import numpy as np

from .formula import Cnf


def lit_id(var: int, negated: bool) -> int:
    return 2 * (var - 1) + (1 if negated else 0)


def signed_to_lit_id(lit: int) -> int:
    return lit_id(abs(lit), lit < 0)


def lit_id_to_signed(lid: int) -> int:
    var = lid // 2 + 1
    return -var if lid % 2 else var


@dataclass(frozen=True)
class LcgGraph:
    n_vars: int
    n_clauses: int
    # edges[e] = (lit_id, clause_index); sorted lexicographically
    edges: np.ndarray
    # CSR over the 2N + M global node ids, neighbor lists sorted
    indptr: np.ndarray
    indices: np.ndarray

    @property
    def n_literals(self) -> int:
        return 2 * self.n_vars

    @property
    def n_nodes(self) -> int:
        return self.n_literals + self.n_clauses

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def clause_node(self, clause_idx: int) -> int:
        return self.n_literals + clause_idx

    def degree(self, node: int) -> int:
        return int(self.indptr[node + 1] - self.indptr[node])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, node: int) -> np.ndarray:
        return self.indices[self.indptr[node] : self.indptr[node + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        pos = np.searchsorted(nbrs, v)
        return pos < len(nbrs) and nbrs[pos] == v

    def to_json(self) -> str:
        return json.dumps(
            {
                "n_vars": self.n_vars,
                "n_clauses": self.n_clauses,
                "edges": [[int(l), int(c)] for l, c in self.edges],
            }
        )


def from_edge_list(n_vars: int, n_clauses: int, pairs) -> LcgGraph:
    """Build an LcgGraph from (lit_id, clause_index) pairs (deduplicated, sorted)."""
    n_lits = 2 * n_vars
    uniq = sorted(set((int(l), int(c)) for l, c in pairs))
    edges = np.array(uniq, dtype=np.int64).reshape(-1, 2)
    n_nodes = n_lits + n_clauses
    counts = np.zeros(n_nodes, dtype=np.int64)
    for l, c in uniq:
        counts[l] += 1
        counts[n_lits + c] += 1
    indptr = np.zeros(n_nodes + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    indices = np.empty(int(indptr[-1]), dtype=np.int64)
    fill = indptr[:-1].copy()
    for l, c in uniq:
        g = n_lits + c
        indices[fill[l]] = g
        fill[l] += 1
        indices[fill[g]] = l
        fill[g] += 1
    # literal rows fill in clause order (sorted); clause rows in lit order (sorted)
    return LcgGraph(n_vars, n_clauses, edges, indptr, indices)


def build_lcg(cnf: Cnf) -> LcgGraph:
    """Bipartite literal-clause graph of a CNF; clause degree equals clause width."""
    pairs = []
    for c_idx, clause in enumerate(cnf.clauses):
        for lit in clause:
            pairs.append((signed_to_lit_id(lit), c_idx))
    return from_edge_list(cnf.num_vars, cnf.num_clauses, pairs)


def bfs_distances(g: LcgGraph, source: int) -> np.ndarray:
    """Exact unweighted shortest-path distances from source; inf if unreachable."""
    if not 0 <= source < g.n_nodes:
        raise IndexError(f"source {source} not a node")
    dist = np.full(g.n_nodes, np.inf)
    dist[source] = 0.0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in g.neighbors(u):
            if np.isinf(dist[v]):
                dist[v] = du + 1.0
                queue.append(v)
    return dist


def sphere(g: LcgGraph, node: int, r: int) -> set[int]:
    """S_r(node): all nodes at exact distance r."""
    if r < 0:
        raise ValueError("r must be >= 0")
    if r == 0:
        return {node}
    if r == 1:
        return set(int(v) for v in g.neighbors(node))
    dist = bfs_distances(g, node)
    return set(np.flatnonzero(dist == r).tolist())
