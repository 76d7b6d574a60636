"""Pure-Python kernels: per-edge curvature statistics, exact bipartite
transport, and the DPLL search loop.

This module mirrors the API of the compiled extension ``satcurv._kernels``
and is selected at import time when the extension is unavailable (or when
SATCURV_FORCE_PY is set). Semantics are identical; only speed differs.
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "python"

# solver status codes shared with the compiled kernel
UNSAT, SAT, UNKNOWN = 0, 1, 2


def _neighbor_sets(indptr, indices):
    return [set(int(v) for v in indices[indptr[u] : indptr[u + 1]]) for u in range(len(indptr) - 1)]


def _edge_stats(adj, i, j):
    """Triangle/4-cycle statistics of one edge of a simple unweighted graph.

    Returns (d_i, d_j, triangles, sq_i, sq_j, gamma_max). sq counts follow
    the no-inner-diagonal rule; gamma_max is the largest number of 4-cycles
    through a common neighbor-of-endpoint node, at least 1 whenever any
    4-cycle exists.
    """
    si, sj = adj[i], adj[j]
    tri = len(si & sj)
    sq_i = 0
    sq_j = 0
    gamma = 0
    for k in si:
        if k == j or k in sj:
            continue
        partners = len((adj[k] & sj) - si) - (1 if i in adj[k] and i in sj else 0)
        # i is always in adj[k] (k ~ i) and in sj (i ~ j); kept explicit for clarity
        if partners >= 1:
            sq_i += 1
            if partners > gamma:
                gamma = partners
    for w in sj:
        if w == i or w in si:
            continue
        partners = len((adj[w] & si) - sj) - (1 if j in adj[w] and j in si else 0)
        if partners >= 1:
            sq_j += 1
            if partners > gamma:
                gamma = partners
    if (sq_i + sq_j) > 0 and gamma < 1:
        gamma = 1  # guard; unreachable since membership implies >= 1 partner
    return len(si), len(sj), tri, sq_i, sq_j, gamma


def _bfc_from_stats(di, dj, tri, sq_i, sq_j, gamma):
    if min(di, dj) == 1:
        return 0.0
    dmax = max(di, dj)
    dmin = min(di, dj)
    val = 2.0 / di + 2.0 / dj - 2.0 + 2.0 * tri / dmax + tri / dmin
    if sq_i + sq_j > 0:
        val += (sq_i + sq_j) / (gamma * dmax)
    return val


def bfc_edges(indptr, indices, eu, ev):
    """Balanced-Forman curvature plus raw counts for a batch of edges.

    Returns (bfc, tri, sq_i, sq_j, gamma) aligned with (eu, ev).
    """
    adj = _neighbor_sets(indptr, indices)
    n = len(eu)
    bfc = np.empty(n, dtype=np.float64)
    tri = np.empty(n, dtype=np.int64)
    sqi = np.empty(n, dtype=np.int64)
    sqj = np.empty(n, dtype=np.int64)
    gam = np.empty(n, dtype=np.int64)
    for e in range(n):
        i, j = int(eu[e]), int(ev[e])
        di, dj, t, a, b, g = _edge_stats(adj, i, j)
        bfc[e] = _bfc_from_stats(di, dj, t, a, b, g)
        tri[e], sqi[e], sqj[e], gam[e] = t, a, b, g
    return bfc, tri, sqi, sqj, gam


def _bipartite_w1_flow(rows, cols, adj):
    """Max integer flow over cost-1 (adjacent) row/col pairs.

    Supplies are dj per row and di per column (total di*dj), so the returned
    flow divided by di*dj is the probability mass shipped at distance 1; the
    rest moves at distance 3 by bipartite parity.
    """
    di, dj = len(rows), len(cols)
    supply = [dj] * di
    demand = [di] * dj
    arcs = [[c in adj[r] for c in cols] for r in rows]
    flow = [[0] * dj for _ in range(di)]
    total = 0
    while True:
        # BFS for an augmenting path from any row with residual supply
        parent_row = [-1] * di
        parent_col = [-1] * dj
        queue = [r for r in range(di) if supply[r] > 0]
        for r in queue:
            parent_row[r] = -2  # source marker
        target = -1
        qi = 0
        while qi < len(queue) and target < 0:
            r = queue[qi]
            qi += 1
            for c in range(dj):
                if parent_col[c] < 0 and arcs[r][c]:
                    parent_col[c] = r
                    if demand[c] > 0:
                        target = c
                        break
                    for r2 in range(di):
                        if parent_row[r2] == -1 and flow[r2][c] > 0:
                            parent_row[r2] = c
                            queue.append(r2)
        if target < 0:
            break
        # augment by 1 along the alternating path (unit augmentation keeps it simple)
        bottleneck = demand[target]
        c = target
        while True:
            r = parent_col[c]
            if parent_row[r] == -2:
                bottleneck = min(bottleneck, supply[r])
                break
            c2 = parent_row[r]
            bottleneck = min(bottleneck, flow[r][c2])
            c = c2
        c = target
        demand[target] -= bottleneck
        while True:
            r = parent_col[c]
            flow[r][c] += bottleneck
            if parent_row[r] == -2:
                supply[r] -= bottleneck
                break
            c2 = parent_row[r]
            flow[r][c2] -= bottleneck
            c = c2
        total += bottleneck
    return total


def orc_bipartite_edges(indptr, indices, eu, ev):
    """Exact Ollivier-Ricci curvature for edges of a bipartite graph.

    Uses the parity fact that distances between the two neighborhoods are
    either 1 (adjacent) or 3, which reduces the transport problem to a max
    flow over adjacent pairs: W1 = 3 - 2*f and kappa = -2*(1-f).
    """
    adj = _neighbor_sets(indptr, indices)
    n = len(eu)
    out = np.empty(n, dtype=np.float64)
    for e in range(n):
        i, j = int(eu[e]), int(ev[e])
        rows = sorted(adj[i])
        cols = sorted(adj[j])
        di, dj = len(rows), len(cols)
        f_int = _bipartite_w1_flow(rows, cols, adj)
        out[e] = -2.0 * (1.0 - f_int / (di * dj))
    return out


class _DpllState:
    __slots__ = (
        "n_vars", "clause_lits", "occ", "assign", "sat_count", "n_unassigned",
        "n_satisfied", "trail", "decisions", "propagations",
    )

    def __init__(self, n_vars, clauses):
        self.n_vars = n_vars
        self.clause_lits = clauses
        self.occ = [[] for _ in range(2 * n_vars + 2)]
        for ci, clause in enumerate(clauses):
            for lit in clause:
                self.occ[self._lit_index(lit)].append(ci)
        self.assign = [-1] * (n_vars + 1)
        self.sat_count = [0] * len(clauses)
        self.n_unassigned = [len(c) for c in clauses]
        self.n_satisfied = 0
        self.trail = []
        self.decisions = 0
        self.propagations = 0

    @staticmethod
    def _lit_index(lit):
        return 2 * abs(lit) + (1 if lit < 0 else 0)

    def _set(self, var, value):
        self.assign[var] = value
        self.trail.append(var)
        sat_lit = var if value == 1 else -var
        for ci in self.occ[self._lit_index(sat_lit)]:
            if self.sat_count[ci] == 0:
                self.n_satisfied += 1
            self.sat_count[ci] += 1
            self.n_unassigned[ci] -= 1
        conflict = -1
        for ci in self.occ[self._lit_index(-sat_lit)]:
            self.n_unassigned[ci] -= 1
            if self.sat_count[ci] == 0 and self.n_unassigned[ci] == 0:
                conflict = ci
        return conflict

    def _unset_to(self, mark):
        while len(self.trail) > mark:
            var = self.trail.pop()
            value = self.assign[var]
            self.assign[var] = -1
            sat_lit = var if value == 1 else -var
            for ci in self.occ[self._lit_index(sat_lit)]:
                self.sat_count[ci] -= 1
                if self.sat_count[ci] == 0:
                    self.n_satisfied -= 1
                self.n_unassigned[ci] += 1
            for ci in self.occ[self._lit_index(-sat_lit)]:
                self.n_unassigned[ci] += 1

    def _propagate(self):
        """Unit propagation to fixpoint; returns True on conflict."""
        changed = True
        while changed:
            changed = False
            for ci, clause in enumerate(self.clause_lits):
                if self.sat_count[ci] > 0 or self.n_unassigned[ci] != 1:
                    continue
                for lit in clause:
                    if self.assign[abs(lit)] == -1:
                        self.propagations += 1
                        if self._set(abs(lit), 1 if lit > 0 else 0) >= 0:
                            return True
                        changed = True
                        break
        return False

    def _pure_literals(self):
        """Assign variables appearing with a single polarity in active clauses."""
        pos = [0] * (self.n_vars + 1)
        neg = [0] * (self.n_vars + 1)
        for ci, clause in enumerate(self.clause_lits):
            if self.sat_count[ci] > 0:
                continue
            for lit in clause:
                if self.assign[abs(lit)] == -1:
                    if lit > 0:
                        pos[abs(lit)] += 1
                    else:
                        neg[abs(lit)] += 1
        conflict = False
        for var in range(1, self.n_vars + 1):
            if self.assign[var] != -1:
                continue
            if pos[var] > 0 and neg[var] == 0:
                conflict = conflict or self._set(var, 1) >= 0
            elif neg[var] > 0 and pos[var] == 0:
                conflict = conflict or self._set(var, 0) >= 0
        return conflict

    def _pick_branch(self):
        pos = [0] * (self.n_vars + 1)
        neg = [0] * (self.n_vars + 1)
        for ci, clause in enumerate(self.clause_lits):
            if self.sat_count[ci] > 0:
                continue
            for lit in clause:
                if self.assign[abs(lit)] == -1:
                    if lit > 0:
                        pos[abs(lit)] += 1
                    else:
                        neg[abs(lit)] += 1
        best_var, best_score = 0, -1
        for var in range(1, self.n_vars + 1):
            if self.assign[var] == -1:
                score = pos[var] + neg[var]
                if score > best_score:
                    best_var, best_score = var, score
        value = 1 if pos[best_var] >= neg[best_var] else 0
        return best_var, value


def dpll(n_vars, clause_flat, clause_ptr, budget):
    """DPLL with unit propagation and pure-literal elimination.

    Returns (status, assignment, decisions, propagations); assignment is a
    full 0/1 vector over vars 1..N when status == SAT.
    """
    clauses = [
        tuple(int(x) for x in clause_flat[clause_ptr[c] : clause_ptr[c + 1]])
        for c in range(len(clause_ptr) - 1)
    ]
    st = _DpllState(n_vars, clauses)
    # stack entries: (trail_mark, var, next_value or -1 when both tried)
    stack = []
    conflict = st._propagate()
    if not conflict:
        conflict = st._pure_literals() or st._propagate()
    while True:
        if conflict:
            while stack and stack[-1][2] == -1:
                stack.pop()
            if not stack:
                return UNSAT, np.zeros(n_vars + 1, dtype=np.int8), st.decisions, st.propagations
            mark, var, value = stack.pop()
            st._unset_to(mark)
            stack.append((mark, var, -1))
            conflict = st._set(var, value) >= 0 or st._propagate()
            if not conflict:
                conflict = st._pure_literals() or st._propagate()
            continue
        if st.n_satisfied == len(clauses):
            out = np.zeros(n_vars + 1, dtype=np.int8)
            for var in range(1, n_vars + 1):
                out[var] = 1 if st.assign[var] == 1 else 0
            return SAT, out, st.decisions, st.propagations
        if st.decisions >= budget:
            return UNKNOWN, np.zeros(n_vars + 1, dtype=np.int8), st.decisions, st.propagations
        var, value = st._pick_branch()
        st.decisions += 1
        stack.append((len(st.trail), var, 1 - value))
        conflict = st._set(var, value) >= 0 or st._propagate()
        if not conflict:
            conflict = st._pure_literals() or st._propagate()
