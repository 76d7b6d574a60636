"""Per-edge Balanced Forman and Ollivier-Ricci curvature, the bipartite
lower/upper bounds, and the analytic expectation formulas.

Edge-level conventions: curvature functions take global node ids. For an
LcgGraph the literal node ids are 0..2N-1 and clause c is node 2N + c.
All count statistics (triangles, 4-cycles, the 4-cycle multiplicity
normalizer) are exact integers; curvature values are float64.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import EmptyGraph, NotAnEdge
from .graph import LcgGraph

MEASURES = ("bfc", "orc", "lower", "upper")


@dataclass(frozen=True)
class SimpleGraph:
    """Minimal CSR view of a simple undirected graph (general, not bipartite)."""

    n_nodes: int
    indptr: np.ndarray
    indices: np.ndarray

    def neighbors(self, node: int) -> np.ndarray:
        return self.indices[self.indptr[node] : self.indptr[node + 1]]

    def degree(self, node: int) -> int:
        return int(self.indptr[node + 1] - self.indptr[node])

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        pos = np.searchsorted(nbrs, v)
        return pos < len(nbrs) and nbrs[pos] == v


def simple_graph(n_nodes: int, edges) -> SimpleGraph:
    """Build a SimpleGraph from an iterable of (u, v) pairs."""
    uniq = sorted(set((min(int(u), int(v)), max(int(u), int(v))) for u, v in edges if u != v))
    counts = np.zeros(n_nodes, dtype=np.int64)
    for u, v in uniq:
        counts[u] += 1
        counts[v] += 1
    indptr = np.zeros(n_nodes + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    indices = np.empty(int(indptr[-1]), dtype=np.int64)
    fill = indptr[:-1].copy()
    for u, v in uniq:
        indices[fill[u]] = v
        fill[u] += 1
        indices[fill[v]] = u
        fill[v] += 1
    for u in range(n_nodes):
        indices[indptr[u] : indptr[u + 1]].sort()
    return SimpleGraph(n_nodes, indptr, indices)


@dataclass(frozen=True)
class EdgeCurvature:
    edge: tuple[int, int]
    bfc: float
    orc: Optional[float]
    lower: float
    upper: Optional[float]
    triangles: int
    sq_i: int
    sq_j: int
    gamma_max: int


@dataclass(frozen=True)
class CurvatureMoments:
    edge_count: int
    mean_bfc: Optional[float] = None
    var_bfc: Optional[float] = None
    mean_orc: Optional[float] = None
    mean_lower: Optional[float] = None
    mean_upper: Optional[float] = None


@dataclass(frozen=True)
class CurvatureReport:
    """Per-edge values for the requested measures plus edge-set moments."""

    edges: np.ndarray  # (E, 2) of (lit_id, clause_index)
    values: dict  # measure -> float64 array aligned with edges
    moments: CurvatureMoments

    def to_json(self) -> str:
        rows = []
        for e, (lit, clause) in enumerate(self.edges):
            row = {"lit": int(lit), "clause": int(clause)}
            for m, arr in self.values.items():
                row[m] = float(arr[e])
            rows.append(row)
        mom = {"edge_count": self.moments.edge_count}
        for name in ("mean_bfc", "var_bfc", "mean_orc", "mean_lower", "mean_upper"):
            val = getattr(self.moments, name)
            if val is not None:
                mom[name] = val
        return json.dumps({"edges": rows, "moments": mom})

    def to_csv(self) -> str:
        buf = io.StringIO()
        measures = list(self.values)
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["lit", "clause", *measures])
        for e, (lit, clause) in enumerate(self.edges):
            writer.writerow([int(lit), int(clause), *(repr(float(self.values[m][e])) for m in measures)])
        return buf.getvalue()


def _require_edge(g, i: int, j: int) -> None:
    if not g.has_edge(i, j):
        raise NotAnEdge(f"({i}, {j}) is not an edge")


def edge_stats(g, i: int, j: int) -> tuple[int, int, int, int, int, int]:
    """(d_i, d_j, triangles, sq_i, sq_j, gamma_max) for one edge."""
    _require_edge(g, i, j)
    eu = np.array([i], dtype=np.int64)
    ev = np.array([j], dtype=np.int64)
    _, tri, sqi, sqj, gam = kernels.bfc_edges(g.indptr, g.indices, eu, ev)
    return g.degree(i), g.degree(j), int(tri[0]), int(sqi[0]), int(sqj[0]), int(gam[0])


def bfc_edge(g, i: int, j: int) -> float:
    """Balanced Forman curvature of edge (i, j); zero when an endpoint has degree 1."""
    _require_edge(g, i, j)
    eu = np.array([i], dtype=np.int64)
    ev = np.array([j], dtype=np.int64)
    bfc, *_ = kernels.bfc_edges(g.indptr, g.indices, eu, ev)
    return float(bfc[0])


def _orc_cost_matrix(g, i: int, j: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cost matrix of shortest-path distances between N(i) and N(j).

    Every z1 in N(i), z2 in N(j) is within distance 3 via the path
    z1 - i - j - z2, so the exact distance is 0 (equal), 1 (adjacent),
    2 (common neighbor) or 3.
    """
    rows = np.asarray(g.neighbors(i))
    cols = np.asarray(g.neighbors(j))
    cost = np.full((len(rows), len(cols)), 3, dtype=np.int64)
    row_sets = [set(int(x) for x in g.neighbors(int(r))) for r in rows]
    for a, z1 in enumerate(rows):
        for b, z2 in enumerate(cols):
            if z1 == z2:
                cost[a, b] = 0
            elif int(z2) in row_sets[a]:
                cost[a, b] = 1
            elif row_sets[a] & set(int(x) for x in g.neighbors(int(z2))):
                cost[a, b] = 2
    return rows, cols, cost


def _w1_exact(cost: np.ndarray, di: int, dj: int) -> float:
    """Exact W1 between uniform neighbor measures via integer network simplex.

    Masses are scaled by di*dj so supplies/demands and the optimum are
    integers; the result is exact up to one float division.
    """
    import networkx as nx

    G = nx.DiGraph()
    for a in range(di):
        G.add_node(("r", a), demand=-dj)
    for b in range(dj):
        G.add_node(("c", b), demand=di)
    for a in range(di):
        for b in range(dj):
            G.add_edge(("r", a), ("c", b), weight=int(cost[a, b]))
    flow_cost, _ = nx.network_simplex(G)
    return flow_cost / (di * dj)


def orc_edge(g, i: int, j: int) -> float:
    """Ollivier-Ricci curvature kappa(i, j) = 1 - W1(m_i, m_j) with exact transport."""
    _require_edge(g, i, j)
    di, dj = g.degree(i), g.degree(j)
    if isinstance(g, LcgGraph):
        eu = np.array([i], dtype=np.int64)
        ev = np.array([j], dtype=np.int64)
        return float(kernels.orc_bipartite_edges(g.indptr, g.indices, eu, ev)[0])
    _, _, cost = _orc_cost_matrix(g, i, j)
    return 1.0 - _w1_exact(cost, di, dj)


def lower_bound(d_i: int, d_j: int) -> float:
    """Shared ORC/BFC lower bound of a bipartite edge from endpoint degrees."""
    if d_i < 1 or d_j < 1:
        raise ValueError("degrees must be >= 1")
    if min(d_i, d_j) == 1:
        return 0.0
    return 2.0 / d_i + 2.0 / d_j - 2.0


def upper_bound(d_i: int, k: int, m_clauses: int) -> float:
    """Degree-based upper bound on the BFC of a literal-clause edge."""
    if d_i < 1 or k < 1 or m_clauses < 1:
        raise ValueError("d_i, k, M must be >= 1")
    denom = max(k - 1, m_clauses - 1)
    if denom == 0:
        denom = 1  # k = 1, M = 1 corner
    return 2.0 / d_i + 2.0 / k - 2.0 + (d_i + k - 2.0) / (denom * max(d_i, k))


def bfc_limit(k: int) -> float:
    """Large-density limit of the average BFC at clause width k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return 2.0 / k - 2.0


def expected_literal_degree(alpha: float, k: int) -> float:
    """Mean degree of a literal that appears at least once; rate is alpha*k/2."""
    lam = 0.5 * alpha * k
    return lam / -math.expm1(-lam)


def _zt_poisson_pmf(lam: float, h: int) -> float:
    # lambda^h / (h! (e^lambda - 1)), computed in log space
    log_denom = lam + math.log1p(-math.exp(-lam))
    return math.exp(h * math.log(lam) - math.lgamma(h + 1) - log_denom)


def expected_lower_bound(alpha: float, k: int, tail_tol: float = 1e-12) -> float:
    """Zero-truncated-Poisson expectation of the curvature lower bound.

    Sums P*(d_i = h) * f(h, k) with f = 0 when min(h, k) = 1 and
    2/h + 2/k - 2 otherwise, truncating once the remaining tail mass drops
    below tail_tol. The clause-side degree is the nominal width k.
    """
    if tail_tol <= 0:
        raise ValueError("tail_tol must be > 0")
    if k == 1:
        return 0.0
    lam = 0.5 * alpha * k
    total = 0.0
    mass = 0.0
    h = 1
    while mass < 1.0 - tail_tol:
        p = _zt_poisson_pmf(lam, h)
        mass += p
        if h >= 2:
            total += p * (2.0 / h + 2.0 / k - 2.0)
        h += 1
        if h > 100 * (lam + 10):  # safety stop; tail is long gone by here
            break
    # assign the untruncated tail the limiting value of f to tighten the cut
    total += (1.0 - mass) * (2.0 / k - 2.0)
    return total


def curvature_report(g: LcgGraph, measures=("bfc", "lower", "upper")) -> CurvatureReport:
    """Per-edge curvature values and moments for an LCG.

    ORC is only computed when requested; it is the expensive measure.
    """
    measures = tuple(measures)
    if not measures or any(m not in MEASURES for m in measures):
        raise ValueError(f"measures must be a nonempty subset of {MEASURES}")
    if g.n_edges == 0:
        raise EmptyGraph("graph has no edges")

    lit_ids = g.edges[:, 0].astype(np.int64)
    clause_ids = g.edges[:, 1].astype(np.int64)
    eu = lit_ids
    ev = clause_ids + g.n_literals
    deg = g.degrees
    d_lit = deg[eu]
    d_clause = deg[ev]

    values: dict[str, np.ndarray] = {}
    if "bfc" in measures:
        values["bfc"], *_ = kernels.bfc_edges(g.indptr, g.indices, eu, ev)
    if "orc" in measures:
        values["orc"] = kernels.orc_bipartite_edges(g.indptr, g.indices, eu, ev)
    if "lower" in measures:
        low = np.where(
            np.minimum(d_lit, d_clause) == 1, 0.0, 2.0 / d_lit + 2.0 / d_clause - 2.0
        )
        values["lower"] = low
    if "upper" in measures:
        denom = np.maximum(np.maximum(d_clause - 1, g.n_clauses - 1), 1)
        values["upper"] = (
            2.0 / d_lit + 2.0 / d_clause - 2.0
            + (d_lit + d_clause - 2.0) / (denom * np.maximum(d_lit, d_clause))
        )

    kwargs: dict = {"edge_count": g.n_edges}
    if "bfc" in values:
        kwargs["mean_bfc"] = float(values["bfc"].mean())
        kwargs["var_bfc"] = float(values["bfc"].var())
    if "orc" in values:
        kwargs["mean_orc"] = float(values["orc"].mean())
    if "lower" in values:
        kwargs["mean_lower"] = float(values["lower"].mean())
    if "upper" in values:
        kwargs["mean_upper"] = float(values["upper"].mean())
    return CurvatureReport(g.edges, values, CurvatureMoments(**kwargs))


def lcg_as_simple_graph(g: LcgGraph) -> SimpleGraph:
    """View an LCG as a generic simple graph over its global node ids."""
    return SimpleGraph(g.n_nodes, g.indptr, g.indices)


__all__ = [
    "CurvatureMoments",
    "CurvatureReport",
    "EdgeCurvature",
    "SimpleGraph",
    "bfc_edge",
    "bfc_limit",
    "curvature_report",
    "edge_stats",
    "expected_literal_degree",
    "expected_lower_bound",
    "lower_bound",
    "lcg_as_simple_graph",
    "orc_edge",
    "simple_graph",
    "upper_bound",
]
