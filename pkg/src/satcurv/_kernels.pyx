# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: per-edge curvature statistics, exact bipartite
transport, and the DPLL search loop. API-identical to ``_kernels_py``."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

IMPLEMENTATION = "cython"

UNSAT = 0
SAT = 1
UNKNOWN = 2


def bfc_edges(indptr_obj, indices_obj, eu_obj, ev_obj):
    cdef cnp.int64_t[:] indptr = np.ascontiguousarray(indptr_obj, dtype=np.int64)
    cdef cnp.int64_t[:] indices = np.ascontiguousarray(indices_obj, dtype=np.int64)
    cdef cnp.int64_t[:] eu = np.ascontiguousarray(eu_obj, dtype=np.int64)
    cdef cnp.int64_t[:] ev = np.ascontiguousarray(ev_obj, dtype=np.int64)
    cdef Py_ssize_t n_nodes = indptr.shape[0] - 1
    cdef Py_ssize_t n_edges = eu.shape[0]

    bfc_arr = np.empty(n_edges, dtype=np.float64)
    tri_arr = np.empty(n_edges, dtype=np.int64)
    sqi_arr = np.empty(n_edges, dtype=np.int64)
    sqj_arr = np.empty(n_edges, dtype=np.int64)
    gam_arr = np.empty(n_edges, dtype=np.int64)
    cdef cnp.float64_t[:] bfc = bfc_arr
    cdef cnp.int64_t[:] tri_v = tri_arr
    cdef cnp.int64_t[:] sqi_v = sqi_arr
    cdef cnp.int64_t[:] sqj_v = sqj_arr
    cdef cnp.int64_t[:] gam_v = gam_arr

    mark_i_arr = np.zeros(n_nodes, dtype=np.uint8)
    mark_j_arr = np.zeros(n_nodes, dtype=np.uint8)
    cdef cnp.uint8_t[:] in_si = mark_i_arr
    cdef cnp.uint8_t[:] in_sj = mark_j_arr

    cdef Py_ssize_t e, idx, idx2
    cdef cnp.int64_t i, j, k, w
    cdef long di, dj, tri, sqi, sqj, gamma, cnt, dmin, dmax
    cdef double val

    for e in range(n_edges):
        i = eu[e]
        j = ev[e]
        di = <long>(indptr[i + 1] - indptr[i])
        dj = <long>(indptr[j + 1] - indptr[j])
        for idx in range(indptr[i], indptr[i + 1]):
            in_si[indices[idx]] = 1
        for idx in range(indptr[j], indptr[j + 1]):
            in_sj[indices[idx]] = 1

        tri = 0
        sqi = 0
        sqj = 0
        gamma = 0
        for idx in range(indptr[i], indptr[i + 1]):
            k = indices[idx]
            if in_sj[k]:
                tri += 1
                continue
            if k == j:
                continue
            cnt = 0
            for idx2 in range(indptr[k], indptr[k + 1]):
                w = indices[idx2]
                if in_sj[w] and not in_si[w] and w != i:
                    cnt += 1
            if cnt >= 1:
                sqi += 1
                if cnt > gamma:
                    gamma = cnt
        for idx in range(indptr[j], indptr[j + 1]):
            k = indices[idx]
            if in_si[k] or k == i:
                continue
            cnt = 0
            for idx2 in range(indptr[k], indptr[k + 1]):
                w = indices[idx2]
                if in_si[w] and not in_sj[w] and w != j:
                    cnt += 1
            if cnt >= 1:
                sqj += 1
                if cnt > gamma:
                    gamma = cnt
        if sqi + sqj > 0 and gamma < 1:
            gamma = 1

        if di < dj:
            dmin = di
            dmax = dj
        else:
            dmin = dj
            dmax = di
        if dmin == 1:
            val = 0.0
        else:
            val = 2.0 / di + 2.0 / dj - 2.0 + 2.0 * tri / dmax + (<double>tri) / dmin
            if sqi + sqj > 0:
                val += (<double>(sqi + sqj)) / (gamma * dmax)
        bfc[e] = val
        tri_v[e] = tri
        sqi_v[e] = sqi
        sqj_v[e] = sqj
        gam_v[e] = gamma

        for idx in range(indptr[i], indptr[i + 1]):
            in_si[indices[idx]] = 0
        for idx in range(indptr[j], indptr[j + 1]):
            in_sj[indices[idx]] = 0

    return bfc_arr, tri_arr, sqi_arr, sqj_arr, gam_arr


def orc_bipartite_edges(indptr_obj, indices_obj, eu_obj, ev_obj):
    cdef cnp.int64_t[:] indptr = np.ascontiguousarray(indptr_obj, dtype=np.int64)
    cdef cnp.int64_t[:] indices = np.ascontiguousarray(indices_obj, dtype=np.int64)
    cdef cnp.int64_t[:] eu = np.ascontiguousarray(eu_obj, dtype=np.int64)
    cdef cnp.int64_t[:] ev = np.ascontiguousarray(ev_obj, dtype=np.int64)
    cdef Py_ssize_t n_nodes = indptr.shape[0] - 1
    cdef Py_ssize_t n_edges = eu.shape[0]

    out_arr = np.empty(n_edges, dtype=np.float64)
    cdef cnp.float64_t[:] out = out_arr

    # column-position lookup: node id -> column index + 1 (0 = absent)
    colpos_arr = np.zeros(n_nodes, dtype=np.int64)
    cdef cnp.int64_t[:] colpos = colpos_arr

    cdef long max_deg = 0
    cdef Py_ssize_t u
    for u in range(n_nodes):
        if indptr[u + 1] - indptr[u] > max_deg:
            max_deg = <long>(indptr[u + 1] - indptr[u])

    arcs_arr = np.zeros((max_deg, max_deg), dtype=np.uint8)
    flow_arr = np.zeros((max_deg, max_deg), dtype=np.int64)
    supply_arr = np.zeros(max_deg, dtype=np.int64)
    demand_arr = np.zeros(max_deg, dtype=np.int64)
    prow_arr = np.zeros(max_deg, dtype=np.int64)
    pcol_arr = np.zeros(max_deg, dtype=np.int64)
    queue_arr = np.zeros(max_deg, dtype=np.int64)
    cdef cnp.uint8_t[:, :] arcs = arcs_arr
    cdef cnp.int64_t[:, :] flow = flow_arr
    cdef cnp.int64_t[:] supply = supply_arr
    cdef cnp.int64_t[:] demand = demand_arr
    cdef cnp.int64_t[:] prow = prow_arr
    cdef cnp.int64_t[:] pcol = pcol_arr
    cdef cnp.int64_t[:] queue = queue_arr

    cdef Py_ssize_t e, idx, a, b
    cdef cnp.int64_t i, j, r, c
    cdef long di, dj, total, target, qlen, qi, bottleneck, r2, c2, rr, cc
    cdef long f

    for e in range(n_edges):
        i = eu[e]
        j = ev[e]
        di = <long>(indptr[i + 1] - indptr[i])
        dj = <long>(indptr[j + 1] - indptr[j])
        for b in range(dj):
            colpos[indices[indptr[j] + b]] = b + 1
        for a in range(di):
            r = indices[indptr[i] + a]
            for b in range(dj):
                arcs[a, b] = 0
                flow[a, b] = 0
            for idx in range(indptr[r], indptr[r + 1]):
                c = colpos[indices[idx]]
                if c > 0:
                    arcs[a, c - 1] = 1
        for a in range(di):
            supply[a] = dj
        for b in range(dj):
            demand[b] = di

        total = 0
        while True:
            for a in range(di):
                prow[a] = -1
            for b in range(dj):
                pcol[b] = -1
            qlen = 0
            for a in range(di):
                if supply[a] > 0:
                    prow[a] = -2  # source marker
                    queue[qlen] = a
                    qlen += 1
            target = -1
            qi = 0
            while qi < qlen and target < 0:
                rr = <long>queue[qi]
                qi += 1
                for b in range(dj):
                    if pcol[b] < 0 and arcs[rr, b]:
                        pcol[b] = rr
                        if demand[b] > 0:
                            target = b
                            break
                        for r2 in range(di):
                            if prow[r2] == -1 and flow[r2, b] > 0:
                                prow[r2] = b
                                queue[qlen] = r2
                                qlen += 1
            if target < 0:
                break
            bottleneck = demand[target]
            cc = target
            while True:
                rr = pcol[cc]
                if prow[rr] == -2:
                    if supply[rr] < bottleneck:
                        bottleneck = supply[rr]
                    break
                c2 = prow[rr]
                if flow[rr, c2] < bottleneck:
                    bottleneck = flow[rr, c2]
                cc = c2
            cc = target
            demand[target] -= bottleneck
            while True:
                rr = pcol[cc]
                flow[rr, cc] += bottleneck
                if prow[rr] == -2:
                    supply[rr] -= bottleneck
                    break
                c2 = prow[rr]
                flow[rr, c2] -= bottleneck
                cc = c2
            total += bottleneck

        out[e] = -2.0 * (1.0 - (<double>total) / (di * dj))
        for b in range(dj):
            colpos[indices[indptr[j] + b]] = 0

    return out_arr


cdef struct DpllCtx:
    long n_vars
    long n_clauses
    cnp.int32_t* clause_flat
    cnp.int64_t* clause_ptr
    cnp.int64_t* occ_ptr
    cnp.int32_t* occ
    cnp.int8_t* assign
    cnp.int32_t* sat_count
    cnp.int32_t* n_unassigned
    long n_satisfied
    cnp.int32_t* trail
    long trail_len
    cnp.int32_t* unit_queue
    long uq_head
    long uq_tail
    long decisions
    long propagations


cdef inline long _lit_index(long lit) nogil:
    if lit > 0:
        return 2 * lit
    return -2 * lit + 1


cdef int _set_var(DpllCtx* ctx, long var, int value) nogil:
    """Assign var; update counters; enqueue new unit clauses; 1 on conflict."""
    cdef long sat_lit, fal_lit, li, idx, ci
    cdef int conflict = 0
    ctx.assign[var] = value
    ctx.trail[ctx.trail_len] = <cnp.int32_t>var
    ctx.trail_len += 1
    sat_lit = var if value == 1 else -var
    fal_lit = -sat_lit
    li = _lit_index(sat_lit)
    for idx in range(ctx.occ_ptr[li], ctx.occ_ptr[li + 1]):
        ci = ctx.occ[idx]
        if ctx.sat_count[ci] == 0:
            ctx.n_satisfied += 1
        ctx.sat_count[ci] += 1
        ctx.n_unassigned[ci] -= 1
    li = _lit_index(fal_lit)
    for idx in range(ctx.occ_ptr[li], ctx.occ_ptr[li + 1]):
        ci = ctx.occ[idx]
        ctx.n_unassigned[ci] -= 1
        if ctx.sat_count[ci] == 0:
            if ctx.n_unassigned[ci] == 0:
                conflict = 1
            elif ctx.n_unassigned[ci] == 1:
                ctx.unit_queue[ctx.uq_tail] = <cnp.int32_t>ci
                ctx.uq_tail += 1
    return conflict


cdef int _propagate(DpllCtx* ctx) nogil:
    """Drain the unit queue; 1 on conflict (queue is reset either way)."""
    cdef long ci, idx, lit, var
    while ctx.uq_head < ctx.uq_tail:
        ci = ctx.unit_queue[ctx.uq_head]
        ctx.uq_head += 1
        if ctx.sat_count[ci] > 0 or ctx.n_unassigned[ci] != 1:
            continue
        for idx in range(ctx.clause_ptr[ci], ctx.clause_ptr[ci + 1]):
            lit = ctx.clause_flat[idx]
            var = lit if lit > 0 else -lit
            if ctx.assign[var] == -1:
                ctx.propagations += 1
                if _set_var(ctx, var, 1 if lit > 0 else 0):
                    ctx.uq_head = 0
                    ctx.uq_tail = 0
                    return 1
                break
    ctx.uq_head = 0
    ctx.uq_tail = 0
    return 0


cdef void _unset_to(DpllCtx* ctx, long mark) nogil:
    cdef long var, sat_lit, li, idx, ci
    cdef int value
    while ctx.trail_len > mark:
        ctx.trail_len -= 1
        var = ctx.trail[ctx.trail_len]
        value = ctx.assign[var]
        ctx.assign[var] = -1
        sat_lit = var if value == 1 else -var
        li = _lit_index(sat_lit)
        for idx in range(ctx.occ_ptr[li], ctx.occ_ptr[li + 1]):
            ci = ctx.occ[idx]
            ctx.sat_count[ci] -= 1
            if ctx.sat_count[ci] == 0:
                ctx.n_satisfied -= 1
            ctx.n_unassigned[ci] += 1
        li = _lit_index(-sat_lit)
        for idx in range(ctx.occ_ptr[li], ctx.occ_ptr[li + 1]):
            ctx.n_unassigned[ctx.occ[idx]] += 1


cdef int _scan_polarity(DpllCtx* ctx, cnp.int32_t* pos, cnp.int32_t* neg) nogil:
    """Occurrence counts of unassigned vars over active clauses.

    Also assigns pure literals (single active polarity); returns 1 on
    conflict during the induced propagation, 2 if any pure was assigned
    (counts are then stale), 0 otherwise.
    """
    cdef long v, ci, idx, lit, var
    cdef int any_pure = 0
    for v in range(ctx.n_vars + 1):
        pos[v] = 0
        neg[v] = 0
    for ci in range(ctx.n_clauses):
        if ctx.sat_count[ci] > 0:
            continue
        for idx in range(ctx.clause_ptr[ci], ctx.clause_ptr[ci + 1]):
            lit = ctx.clause_flat[idx]
            var = lit if lit > 0 else -lit
            if ctx.assign[var] == -1:
                if lit > 0:
                    pos[var] += 1
                else:
                    neg[var] += 1
    for v in range(1, ctx.n_vars + 1):
        if ctx.assign[v] != -1:
            continue
        if pos[v] > 0 and neg[v] == 0:
            any_pure = 1
            if _set_var(ctx, v, 1) or _propagate(ctx):
                return 1
        elif neg[v] > 0 and pos[v] == 0:
            any_pure = 1
            if _set_var(ctx, v, 0) or _propagate(ctx):
                return 1
    return 2 if any_pure else 0


def dpll(n_vars, clause_flat_obj, clause_ptr_obj, budget):
    clause_flat_arr = np.ascontiguousarray(clause_flat_obj, dtype=np.int32)
    clause_ptr_arr = np.ascontiguousarray(clause_ptr_obj, dtype=np.int64)
    cdef cnp.int32_t[:] clause_flat = clause_flat_arr
    cdef cnp.int64_t[:] clause_ptr = clause_ptr_arr
    cdef long n = n_vars
    cdef long m = clause_ptr.shape[0] - 1
    cdef long total_lits = clause_flat.shape[0]
    cdef long budget_c = budget

    # occurrence lists (CSR over literal indices 2..2N+1)
    occ_ptr_arr = np.zeros(2 * n + 3, dtype=np.int64)
    cdef cnp.int64_t[:] occ_ptr = occ_ptr_arr
    occ_arr = np.zeros(total_lits, dtype=np.int32)
    cdef cnp.int32_t[:] occ = occ_arr
    cdef long ci, idx, li
    for ci in range(m):
        for idx in range(clause_ptr[ci], clause_ptr[ci + 1]):
            occ_ptr[_lit_index(clause_flat[idx]) + 1] += 1
    for li in range(1, 2 * n + 3):
        occ_ptr[li] += occ_ptr[li - 1]
    fill_arr = occ_ptr_arr[:-1].copy()
    cdef cnp.int64_t[:] fill = fill_arr
    for ci in range(m):
        for idx in range(clause_ptr[ci], clause_ptr[ci + 1]):
            li = _lit_index(clause_flat[idx])
            occ[fill[li]] = <cnp.int32_t>ci
            fill[li] += 1

    assign_arr = np.full(n + 1, -1, dtype=np.int8)
    sat_count_arr = np.zeros(m, dtype=np.int32)
    n_unassigned_arr = np.zeros(m, dtype=np.int32)
    trail_arr = np.zeros(n + 1, dtype=np.int32)
    unit_queue_arr = np.zeros(m + 1, dtype=np.int32)
    pos_arr = np.zeros(n + 1, dtype=np.int32)
    neg_arr = np.zeros(n + 1, dtype=np.int32)
    stack_mark_arr = np.zeros(n + 2, dtype=np.int64)
    stack_var_arr = np.zeros(n + 2, dtype=np.int32)
    stack_next_arr = np.zeros(n + 2, dtype=np.int32)
    cdef cnp.int8_t[:] assign = assign_arr
    cdef cnp.int32_t[:] sat_count = sat_count_arr
    cdef cnp.int32_t[:] n_unassigned = n_unassigned_arr
    cdef cnp.int32_t[:] trail = trail_arr
    cdef cnp.int32_t[:] unit_queue = unit_queue_arr
    cdef cnp.int32_t[:] pos = pos_arr
    cdef cnp.int32_t[:] neg = neg_arr
    cdef cnp.int64_t[:] stack_mark = stack_mark_arr
    cdef cnp.int32_t[:] stack_var = stack_var_arr
    cdef cnp.int32_t[:] stack_next = stack_next_arr

    for ci in range(m):
        n_unassigned[ci] = <cnp.int32_t>(clause_ptr[ci + 1] - clause_ptr[ci])

    cdef DpllCtx ctx
    ctx.n_vars = n
    ctx.n_clauses = m
    ctx.clause_flat = &clause_flat[0] if total_lits > 0 else NULL
    ctx.clause_ptr = &clause_ptr[0]
    ctx.occ_ptr = &occ_ptr[0]
    ctx.occ = &occ[0] if total_lits > 0 else NULL
    ctx.assign = &assign[0]
    ctx.sat_count = &sat_count[0] if m > 0 else NULL
    ctx.n_unassigned = &n_unassigned[0] if m > 0 else NULL
    ctx.n_satisfied = 0
    ctx.trail = &trail[0]
    ctx.trail_len = 0
    ctx.unit_queue = &unit_queue[0]
    ctx.uq_head = 0
    ctx.uq_tail = 0
    ctx.decisions = 0
    ctx.propagations = 0

    cdef long stack_len = 0
    cdef int conflict = 0
    cdef int scan
    cdef long v, best_var, best_score, score, mark
    cdef int value

    # seed the unit queue with initially-unit clauses
    for ci in range(m):
        if n_unassigned[ci] == 1:
            unit_queue[ctx.uq_tail] = <cnp.int32_t>ci
            ctx.uq_tail += 1
        elif n_unassigned[ci] == 0:
            conflict = 1
    if not conflict:
        conflict = _propagate(&ctx)

    out_arr = np.zeros(n + 1, dtype=np.int8)

    while True:
        if not conflict:
            scan = _scan_polarity(&ctx, &pos[0], &neg[0])
            while scan == 2 and ctx.n_satisfied < m:
                scan = _scan_polarity(&ctx, &pos[0], &neg[0])
            conflict = scan == 1
        if conflict:
            while stack_len > 0 and stack_next[stack_len - 1] == -1:
                stack_len -= 1
            if stack_len == 0:
                return UNSAT, out_arr, ctx.decisions, ctx.propagations
            mark = stack_mark[stack_len - 1]
            v = stack_var[stack_len - 1]
            value = stack_next[stack_len - 1]
            stack_next[stack_len - 1] = -1
            _unset_to(&ctx, mark)
            ctx.uq_head = 0
            ctx.uq_tail = 0
            conflict = _set_var(&ctx, v, value) or _propagate(&ctx)
            continue
        if ctx.n_satisfied == m:
            for v in range(1, n + 1):
                out_arr[v] = 1 if assign[v] == 1 else 0
            return SAT, out_arr, ctx.decisions, ctx.propagations
        if ctx.decisions >= budget_c:
            return UNKNOWN, out_arr, ctx.decisions, ctx.propagations
        best_var = 0
        best_score = -1
        for v in range(1, n + 1):
            if assign[v] == -1:
                score = pos[v] + neg[v]
                if score > best_score:
                    best_var = v
                    best_score = score
        value = 1 if pos[best_var] >= neg[best_var] else 0
        ctx.decisions += 1
        stack_mark[stack_len] = ctx.trail_len
        stack_var[stack_len] = <cnp.int32_t>best_var
        stack_next[stack_len] = 1 - value
        stack_len += 1
        conflict = _set_var(&ctx, best_var, value) or _propagate(&ctx)
