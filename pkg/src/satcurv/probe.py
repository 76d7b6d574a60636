"""Fixed-weight message-passing probe and Jacobian sensitivity analysis.

The probe runs L rounds of bipartite message passing with frozen random
affine maps (spectral norm scaled to 0.9) and measures how strongly a
target node's final representation depends on a source node's input — the
normalized Frobenius norm of the input-output Jacobian. Sensitivities
decay through negatively curved edges, which is the oversquashing signal
this module exists to exhibit.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .curvature import curvature_report
from .errors import DimensionMismatch
from .graph import LcgGraph, bfs_distances


@dataclass(frozen=True)
class ProbeConfig:
    layers: int = 4
    hidden_dim: int = 8
    seed: int = 0
    aggregation: str = "mean"
    nonlinearity: str = "tanh"

    def __post_init__(self) -> None:
        if self.layers < 0:
            raise ValueError("layers must be >= 0")
        if self.hidden_dim < 1:
            raise ValueError("hidden_dim must be >= 1")
        if self.aggregation not in ("mean", "sum"):
            raise ValueError("aggregation must be 'mean' or 'sum'")
        if self.nonlinearity not in ("tanh", "identity"):
            raise ValueError("nonlinearity must be 'tanh' or 'identity'")


@dataclass(frozen=True)
class SensitivityRecord:
    source: int
    target: int
    distance: float
    jacobian_norm: float


def _spectral_scale(w: np.ndarray, target: float = 0.9) -> np.ndarray:
    norm = np.linalg.norm(w, ord=2)
    return w * (target / norm) if norm > 0 else w


def _weights(cfg: ProbeConfig):
    """Per-layer affine maps, one (self, neighbor, bias) triple per partition."""
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 0x5E11]))
    d = cfg.hidden_dim
    layers = []
    for _ in range(cfg.layers):
        layer = {}
        for part in ("clause", "literal"):
            layer[part] = (
                _spectral_scale(rng.standard_normal((d, d)) / np.sqrt(d)),
                _spectral_scale(rng.standard_normal((d, d)) / np.sqrt(d)),
                rng.standard_normal(d) * 0.1,
            )
        layers.append(layer)
    return layers


def _check_features(g: LcgGraph, features: np.ndarray, d: int) -> np.ndarray:
    features = np.asarray(features, dtype=np.float64)
    if features.shape != (g.n_nodes, d):
        raise DimensionMismatch(
            f"features must have shape {(g.n_nodes, d)}, got {features.shape}"
        )
    return features


def _forward_trace(g: LcgGraph, features: np.ndarray, cfg: ProbeConfig):
    """All layer activations and pre-activations (for Jacobian propagation)."""
    h = features
    deg = np.maximum(g.degrees, 1).astype(np.float64)
    states = [(h, None)]
    for layer in _weights(cfg):
        pre = np.empty_like(h)
        for node in range(g.n_nodes):
            part = "clause" if node >= g.n_literals else "literal"
            w_self, w_nbr, bias = layer[part]
            nbrs = g.neighbors(node)
            agg = h[nbrs].sum(axis=0) if len(nbrs) else np.zeros(h.shape[1])
            if cfg.aggregation == "mean":
                agg = agg / deg[node]
            pre[node] = w_self @ h[node] + w_nbr @ agg + bias
        h = np.tanh(pre) if cfg.nonlinearity == "tanh" else pre.copy()
        states.append((h, pre))
    return states


def forward(g: LcgGraph, features: np.ndarray, cfg: ProbeConfig) -> np.ndarray:
    """L rounds of partition-specialized message passing; L=0 is the identity."""
    features = _check_features(g, features, cfg.hidden_dim)
    return _forward_trace(g, features, cfg)[-1][0]


def _jacobian(g: LcgGraph, features: np.ndarray, source: int, cfg: ProbeConfig):
    """d x d blocks dh_v^(L)/dx_source for every node v, by forward accumulation."""
    d = cfg.hidden_dim
    deg = np.maximum(g.degrees, 1).astype(np.float64)
    states = _forward_trace(g, features, cfg)
    jac = {source: np.eye(d)}
    for layer_idx, layer in enumerate(_weights(cfg)):
        _, pre = states[layer_idx + 1]
        new_jac = {}
        touched = set(jac)
        for v in list(jac):
            touched.update(int(u) for u in g.neighbors(v))
        for v in touched:
            part = "clause" if v >= g.n_literals else "literal"
            w_self, w_nbr, _ = layer[part]
            acc = w_self @ jac[v] if v in jac else np.zeros((d, d))
            nbr_sum = np.zeros((d, d))
            hit = False
            for u in g.neighbors(v):
                u = int(u)
                if u in jac:
                    nbr_sum += jac[u]
                    hit = True
            if hit:
                scale = 1.0 / deg[v] if cfg.aggregation == "mean" else 1.0
                acc = acc + w_nbr @ (nbr_sum * scale)
            if cfg.nonlinearity == "tanh":
                acc = (1.0 - np.tanh(pre[v]) ** 2)[:, None] * acc
            new_jac[v] = acc
        jac = new_jac
    return jac


def sensitivity(g: LcgGraph, source: int, target: int, cfg: ProbeConfig,
                features: np.ndarray | None = None) -> float:
    """Normalized Frobenius norm of dh_target^(L)/dx_source.

    The norm is divided by sqrt(hidden_dim) so the L=0 self-sensitivity is
    exactly 1. Zero whenever target lies beyond the L-hop receptive field.
    """
    if features is None:
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 0xFEA7]))
        features = rng.standard_normal((g.n_nodes, cfg.hidden_dim))
    features = _check_features(g, features, cfg.hidden_dim)
    if cfg.layers == 0:
        return 1.0 if source == target else 0.0
    jac = _jacobian(g, features, source, cfg)
    if target not in jac:
        return 0.0
    return float(np.linalg.norm(jac[target]) / np.sqrt(cfg.hidden_dim))


def sensitivity_fd(g: LcgGraph, source: int, target: int, cfg: ProbeConfig,
                   features: np.ndarray, step: float = 1e-5) -> float:
    """Central finite-difference estimate of the same Jacobian norm."""
    d = cfg.hidden_dim
    jac = np.zeros((d, d))
    for col in range(d):
        bumped = features.copy()
        bumped[source, col] += step
        hi = forward(g, bumped, cfg)[target]
        bumped[source, col] -= 2 * step
        lo = forward(g, bumped, cfg)[target]
        jac[:, col] = (hi - lo) / (2 * step)
    return float(np.linalg.norm(jac) / np.sqrt(d))


@dataclass(frozen=True)
class ProfileRow:
    edge_lit: int
    edge_clause: int
    bfc: float
    decile: int
    mean_sensitivity: float
    pairs: int


def curvature_sensitivity_profile(
    g: LcgGraph, cfg: ProbeConfig, pair_samples: int, edge_samples: int = 30
) -> list[ProfileRow]:
    """Cross-edge sensitivity of distance-4 literal pairs, grouped by edge BFC.

    For each sampled edge (lit, clause) we pick literal sources two hops
    before the edge and literal targets one hop after it, keep pairs at true
    distance 4, and average their source-to-target sensitivities. The edge's
    decile is its BFC rank among all edges (0 = most negative).
    """
    if pair_samples < 1:
        raise ValueError("pair_samples must be >= 1")
    report = curvature_report(g, measures=("bfc",))
    bfc = report.values["bfc"]
    order = np.argsort(bfc, kind="stable")
    decile_of = np.empty(len(bfc), dtype=np.int64)
    for rank, e in enumerate(order):
        decile_of[e] = min(9, rank * 10 // len(bfc))

    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 0xA11]))
    rows: list[ProfileRow] = []
    edge_ids = rng.choice(g.n_edges, size=min(edge_samples, g.n_edges), replace=False)
    for e in sorted(int(x) for x in edge_ids):
        lit, clause = int(g.edges[e, 0]), int(g.edges[e, 1])
        lit_node, clause_node = lit, g.clause_node(clause)
        dist_lit = bfs_distances(g, lit_node)
        sources = np.flatnonzero(dist_lit[: g.n_literals] == 2)
        targets = [int(t) for t in g.neighbors(clause_node) if t != lit_node]
        if len(sources) == 0 or not targets:
            continue
        sens = []
        tries = 0
        while len(sens) < pair_samples and tries < pair_samples * 10:
            tries += 1
            s = int(sources[int(rng.integers(len(sources)))])
            t = targets[int(rng.integers(len(targets)))]
            if bfs_distances(g, s)[t] != 4:
                continue
            sens.append(sensitivity(g, s, t, cfg))
        if sens:
            rows.append(
                ProfileRow(lit, clause, float(bfc[e]), int(decile_of[e]),
                           float(np.mean(sens)), len(sens))
            )
    return rows


def profile_csv(rows: list[ProfileRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["edge_lit", "edge_clause", "bfc", "decile", "mean_sensitivity", "pairs"])
    for r in rows:
        writer.writerow(
            [r.edge_lit, r.edge_clause, repr(r.bfc), r.decile, repr(r.mean_sensitivity), r.pairs]
        )
    return buf.getvalue()


def mean_profile_sensitivity(rows: list[ProfileRow]) -> float:
    """Pair-weighted mean sensitivity of a profile."""
    total = sum(r.mean_sensitivity * r.pairs for r in rows)
    pairs = sum(r.pairs for r in rows)
    return total / pairs if pairs else float("nan")


__all__ = [
    "ProbeConfig",
    "ProfileRow",
    "SensitivityRecord",
    "curvature_sensitivity_profile",
    "forward",
    "mean_profile_sensitivity",
    "profile_csv",
    "sensitivity",
    "sensitivity_fd",
]
