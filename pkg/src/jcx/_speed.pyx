# distutils: language = c++
# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot loops; semantics mirror jcx._pure exactly.

Traversal order and per-node arithmetic are kept in lockstep with the
pure implementations so both paths produce the same numbers (parity is
asserted by tests).  Keep any change here mirrored in _pure.py.
"""

import numpy as np

from libc.math cimport expm1, log1p
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map


# ---------------------------------------------------------------------------
# suffix automaton over a dense transition table
# ---------------------------------------------------------------------------

def build_sa_dense(int[:] ids, long K):
    """Suffix automaton of `ids` (values in [0, K)) with dense transitions.

    Returns (lens, links, trans, n_states); row v of `trans` maps symbol
    id -> successor state, -1 for absent.
    """
    cdef long n = ids.shape[0]
    cdef long cap = 2 * n + 2
    lens_arr = np.zeros(cap, dtype=np.int64)
    links_arr = np.full(cap, -1, dtype=np.int64)
    trans_arr = np.full((cap, K), -1, dtype=np.int32)
    cdef long long[:] lens = lens_arr
    cdef long long[:] links = links_arr
    cdef int[:, :] trans = trans_arr

    cdef long size = 1
    cdef long last = 0
    cdef long i, cur, p, q, clone
    cdef int c
    cdef long j
    for i in range(n):
        c = ids[i]
        cur = size
        size += 1
        lens[cur] = lens[last] + 1
        p = last
        while p != -1 and trans[p, c] == -1:
            trans[p, c] = <int>cur
            p = links[p]
        if p == -1:
            links[cur] = 0
        else:
            q = trans[p, c]
            if lens[p] + 1 == lens[q]:
                links[cur] = q
            else:
                clone = size
                size += 1
                lens[clone] = lens[p] + 1
                links[clone] = links[q]
                for j in range(K):
                    trans[clone, j] = trans[q, j]
                while p != -1 and trans[p, c] == q:
                    trans[p, c] = <int>clone
                    p = links[p]
                links[q] = clone
                links[cur] = clone
        last = cur
    return lens_arr[:size], links_arr[:size], trans_arr[:size], size


def joint_count_dense(int[:, :] trans1, int[:, :] trans2,
                      long long[:] sym1, long long[:] sym2, long n2):
    """Common-factor count over the product DAG of two dense automata.

    sym1[j]/sym2[j] are the per-automaton column ids of the j-th common
    symbol; n2 is the state count of the second automaton (key packing).
    """
    cdef unordered_map[long long, long long] memo
    cdef vector[long long] stack
    cdef long long key, ckey, total, child
    cdef long p, q, s1, s2
    cdef long j, ncommon = sym1.shape[0]
    cdef bint ready
    memo.reserve(1024)
    stack.push_back(0)
    while stack.size() > 0:
        key = stack.back()
        if memo.count(key) > 0:
            stack.pop_back()
            continue
        p = <long>(key / n2)
        q = <long>(key % n2)
        total = 0
        ready = True
        for j in range(ncommon):
            s1 = trans1[p, sym1[j]]
            if s1 < 0:
                continue
            s2 = trans2[q, sym2[j]]
            if s2 < 0:
                continue
            ckey = (<long long>s1) * n2 + s2
            if memo.count(ckey) > 0:
                total += 1 + memo[ckey]
            else:
                ready = False
                stack.push_back(ckey)
        if ready:
            memo[key] = total
            stack.pop_back()
    return memo[0]


# ---------------------------------------------------------------------------
# Markov sampling
# ---------------------------------------------------------------------------

def markov_path_c(double[:, :] cum_columns, long start, double[:] uniforms):
    """Successor-state path; upper-bound search per step (see _pure)."""
    cdef long S = cum_columns.shape[0]
    cdef long T = uniforms.shape[0]
    out_arr = np.empty(T, dtype=np.int64)
    cdef long long[:] out = out_arr
    cdef long s = start
    cdef long t, lo, hi, mid
    cdef double u
    for t in range(T):
        u = uniforms[t]
        lo = 0
        hi = S
        while lo < hi:
            mid = (lo + hi) >> 1
            if cum_columns[mid, s] > u:
                hi = mid
            else:
                lo = mid + 1
        s = lo if lo < S else S - 1
        out[t] = s
    return out_arr


# ---------------------------------------------------------------------------
# word-sum trie walk
# ---------------------------------------------------------------------------

cdef struct WNode:
    long b
    long d
    double p1
    double p2


cdef inline double one_minus_pow(double p, double n) nogil:
    if p >= 1.0:
        return 1.0
    return -expm1(n * log1p(-p))


def word_sum_single_c(double[:, :] P1, double[:, :] P2,
                      double[:] v1, double[:] v2, double[:] R,
                      double n, double m, double tau, double mass_tol,
                      long max_depth, long long node_budget):
    """One (n, m) word-sum cell; see _pure.word_sum_single for the contract."""
    cdef long K = P1.shape[0]
    # Kahan-compensated accumulators, mirroring _pure.word_sum_single.
    cdef double value = 0.0, vc = 0.0, err = 0.0, ec = 0.0
    cdef double y, t, term
    cdef long long nodes = 0
    cdef bint budget_hit = False
    cdef vector[WNode] stack
    cdef WNode node, child
    cdef long a, b
    cdef double p1, p2, bound, q1, q2
    for a in range(K - 1, -1, -1):
        if v1[a] > 0.0 and v2[a] > 0.0:
            child.b = a
            child.d = 1
            child.p1 = v1[a]
            child.p2 = v2[a]
            stack.push_back(child)
    while stack.size() > 0:
        node = stack.back()
        stack.pop_back()
        b = node.b
        p1 = node.p1
        p2 = node.p2
        bound = n * m * p1 * p2 * (1.0 + R[b])
        if (n * p1 <= tau and m * p2 <= tau) or bound <= mass_tol:
            y = bound - ec
            t = err + y
            ec = (t - err) - y
            err = t
            continue
        if nodes >= node_budget:
            y = bound - ec
            t = err + y
            ec = (t - err) - y
            err = t
            budget_hit = True
            continue
        nodes += 1
        term = one_minus_pow(p1, n) * one_minus_pow(p2, m)
        y = term - vc
        t = value + y
        vc = (t - value) - y
        value = t
        if node.d >= max_depth:
            y = n * m * p1 * p2 * R[b] - ec
            t = err + y
            ec = (t - err) - y
            err = t
            continue
        for a in range(K - 1, -1, -1):
            q1 = P1[a, b]
            q2 = P2[a, b]
            if q1 > 0.0 and q2 > 0.0:
                child.b = a
                child.d = node.d + 1
                child.p1 = p1 * q1
                child.p2 = p2 * q2
                stack.push_back(child)
    return value, err, nodes, budget_hit


def word_sum_table_c(double[:, :] P1, double[:, :] P2,
                     double[:] v1, double[:] v2, double[:] R,
                     long N, double tau, double mass_tol,
                     long max_depth, long long node_budget):
    """All word-sum cells (n, m) <= N in one walk; see _pure.word_sum_table."""
    cdef long K = P1.shape[0]
    table_arr = np.zeros((N + 1, N + 1))
    comp_arr = np.zeros((N + 1, N + 1))
    cdef double[:, :] table = table_arr
    cdef double[:, :] comp = comp_arr
    t1_arr = np.empty(N + 1)
    t2_arr = np.empty(N + 1)
    cdef double[:] t1 = t1_arr
    cdef double[:] t2 = t2_arr
    # Kahan-compensated accumulators, mirroring _pure.word_sum_table.
    cdef double S_scale = 0.0, sc = 0.0
    cdef double y, t, term
    cdef long long nodes = 0
    cdef bint budget_hit = False
    cdef vector[WNode] stack
    cdef WNode node, child
    cdef long a, b, i, j
    cdef double p1, p2, scale, q1, q2, w1, w2
    cdef double NN = (<double>N) * (<double>N)
    for a in range(K - 1, -1, -1):
        if v1[a] > 0.0 and v2[a] > 0.0:
            child.b = a
            child.d = 1
            child.p1 = v1[a]
            child.p2 = v2[a]
            stack.push_back(child)
    while stack.size() > 0:
        node = stack.back()
        stack.pop_back()
        b = node.b
        p1 = node.p1
        p2 = node.p2
        scale = p1 * p2 * (1.0 + R[b])
        if (N * p1 <= tau and N * p2 <= tau) or NN * scale <= mass_tol:
            y = scale - sc
            t = S_scale + y
            sc = (t - S_scale) - y
            S_scale = t
            continue
        if nodes >= node_budget:
            y = scale - sc
            t = S_scale + y
            sc = (t - S_scale) - y
            S_scale = t
            budget_hit = True
            continue
        nodes += 1
        q1 = 1.0
        q2 = 1.0
        t1[0] = 0.0
        t2[0] = 0.0
        for i in range(1, N + 1):
            q1 *= 1.0 - p1
            q2 *= 1.0 - p2
            t1[i] = 1.0 - q1
            t2[i] = 1.0 - q2
        for i in range(N + 1):
            for j in range(N + 1):
                term = t1[i] * t2[j]
                y = term - comp[i, j]
                t = table[i, j] + y
                comp[i, j] = (t - table[i, j]) - y
                table[i, j] = t
        if node.d >= max_depth:
            y = p1 * p2 * R[b] - sc
            t = S_scale + y
            sc = (t - S_scale) - y
            S_scale = t
            continue
        for a in range(K - 1, -1, -1):
            w1 = P1[a, b]
            w2 = P2[a, b]
            if w1 > 0.0 and w2 > 0.0:
                child.b = a
                child.d = node.d + 1
                child.p1 = p1 * w1
                child.p2 = p2 * w2
                stack.push_back(child)
    return table_arr, S_scale, nodes, budget_hit
