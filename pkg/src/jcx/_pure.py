"""Pure-Python computational kernels.

Reference implementations of the hot loops: suffix-automaton build,
product-automaton pair counting, Markov path sampling, and the word-sum
trie walk.  jcx._speed holds Cython versions with the same traversal
order and per-node arithmetic; jcx._native picks whichever is available.
Keep the two in lockstep: the parity tests compare them on a shared
battery.
"""

from __future__ import annotations

import math

import numpy as np

# ---------------------------------------------------------------------------
# suffix automaton (transitions as per-state dicts keyed by symbol)
# ---------------------------------------------------------------------------


def build_sa(tokens):
    """Online suffix-automaton build; returns (lens, links, trans).

    States are ints, 0 is the initial state; trans[v] maps symbol -> state.
    At most 2n - 1 states for a text of length n.
    """
    lens = [0]
    links = [-1]
    trans = [{}]
    last = 0
    for c in tokens:
        cur = len(lens)
        lens.append(lens[last] + 1)
        links.append(-1)
        trans.append({})
        p = last
        while p != -1 and c not in trans[p]:
            trans[p][c] = cur
            p = links[p]
        if p == -1:
            links[cur] = 0
        else:
            q = trans[p][c]
            if lens[p] + 1 == lens[q]:
                links[cur] = q
            else:
                clone = len(lens)
                lens.append(lens[p] + 1)
                links.append(links[q])
                trans.append(dict(trans[q]))
                while p != -1 and trans[p].get(c) == q:
                    trans[p][c] = clone
                    p = links[p]
                links[q] = clone
                links[cur] = clone
        last = cur
    return lens, links, trans


def distinct_factors(lens, links) -> int:
    """Number of distinct non-empty factors: sum of len(v) - len(link(v))."""
    return sum(lens[v] - lens[links[v]] for v in range(1, len(lens)))


def joint_count(trans1, trans2) -> int:
    """Common non-empty factors of two automata via their product DAG.

    count(p, q) = sum over symbols c present in both states of
    1 + count(delta1(p, c), delta2(q, c)); the answer is count at the
    initial pair.  Iterative with an explicit stack: pair-path depth is
    O(min text length) and would overflow Python's recursion limit.
    """
    memo: dict = {}
    stack = [(0, 0)]
    while stack:
        p, q = stack[-1]
        key = (p, q)
        if key in memo:
            stack.pop()
            continue
        t1 = trans1[p]
        t2 = trans2[q]
        total = 0
        ready = True
        for c, s1 in t1.items():
            s2 = t2.get(c)
            if s2 is None:
                continue
            child = memo.get((s1, s2), -1)
            if child < 0:
                ready = False
                stack.append((s1, s2))
            else:
                total += 1 + child
        if ready:
            memo[key] = total
            stack.pop()
    return memo[(0, 0)]


# ---------------------------------------------------------------------------
# Markov sampling
# ---------------------------------------------------------------------------


def markov_path(cum_columns: np.ndarray, start: int, uniforms: np.ndarray) -> np.ndarray:
    """Successor-state path through cumulative column distributions.

    cum_columns[:, j] is the cumulative sum of transition column j; step t
    picks the first row whose cumulative value exceeds uniforms[t]
    (upper-bound rule, clipped to the last state).
    """
    S = cum_columns.shape[0]
    out = np.empty(len(uniforms), dtype=np.int64)
    s = start
    for t in range(len(uniforms)):
        col = cum_columns[:, s]
        s = int(np.searchsorted(col, uniforms[t], side="right"))
        if s >= S:
            s = S - 1
        out[t] = s
    return out


# ---------------------------------------------------------------------------
# word-sum trie walk
# ---------------------------------------------------------------------------


def _one_minus_pow(p: float, n: float) -> float:
    """1 - (1 - p)^n, stable for tiny p and huge n."""
    if p >= 1.0:
        return 1.0
    return -math.expm1(n * math.log1p(-p))


def word_sum_single(P1, P2, v1, v2, R, n, m, tau, mass_tol, max_depth, node_budget):
    """One (n, m) cell of the word sum with honest pruning bounds.

    Walks the trie of words with positive probability under both sources
    (state = last context, p1/p2 = word probabilities).  A branch is
    pruned, and its exact subtree bound n*m*p1*p2*(1 + R[state]) added to
    the error, when either the tau rule (n*p1 <= tau and m*p2 <= tau) or
    the mass rule (bound <= mass_tol) fires.  Returns
    (value, error_bound, nodes_visited, budget_hit).
    """
    K = P1.shape[0]
    # Kahan-compensated accumulators: millions of tiny terms would other-
    # wise cost ~nodes * eps in the value and break the honest interval.
    value = 0.0
    vc = 0.0
    err = 0.0
    ec = 0.0
    nodes = 0
    budget_hit = False
    stack = []
    for a in range(K - 1, -1, -1):
        if v1[a] > 0.0 and v2[a] > 0.0:
            stack.append((a, float(v1[a]), float(v2[a]), 1))
    while stack:
        b, p1, p2, d = stack.pop()
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
        term = _one_minus_pow(p1, n) * _one_minus_pow(p2, m)
        y = term - vc
        t = value + y
        vc = (t - value) - y
        value = t
        if d >= max_depth:
            y = n * m * p1 * p2 * R[b] - ec
            t = err + y
            ec = (t - err) - y
            err = t
            continue
        for a in range(K - 1, -1, -1):
            q1 = P1[a, b]
            q2 = P2[a, b]
            if q1 > 0.0 and q2 > 0.0:
                stack.append((a, p1 * q1, p2 * q2, d + 1))
    return value, err, nodes, budget_hit


def word_sum_table(P1, P2, v1, v2, R, N, tau, mass_tol, max_depth, node_budget):
    """All cells (n, m) <= N in one walk.

    Per node computes t_i[n] = 1 - (1 - p_i)^n for n = 0..N iteratively
    and accumulates the outer product into the table.  Pruning uses the
    most demanding cell (n = m = N); the per-cell error bound is
    n * m * S where S is the accumulated pruned-mass scale.  Returns
    (table, S, nodes_visited, budget_hit).
    """
    K = P1.shape[0]
    table = np.zeros((N + 1, N + 1))
    comp = np.zeros((N + 1, N + 1))
    S_scale = 0.0
    sc = 0.0
    nodes = 0
    budget_hit = False
    t1 = np.empty(N + 1)
    t2 = np.empty(N + 1)
    stack = []
    for a in range(K - 1, -1, -1):
        if v1[a] > 0.0 and v2[a] > 0.0:
            stack.append((a, float(v1[a]), float(v2[a]), 1))
    NN = float(N) * float(N)
    while stack:
        b, p1, p2, d = stack.pop()
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
        # Kahan-compensated element-wise accumulation of the outer product
        term = np.outer(t1, t2)
        y_arr = term - comp
        t_arr = table + y_arr
        comp = (t_arr - table) - y_arr
        table = t_arr
        if d >= max_depth:
            y = p1 * p2 * R[b] - sc
            t = S_scale + y
            sc = (t - S_scale) - y
            S_scale = t
            continue
        for a in range(K - 1, -1, -1):
            w1 = P1[a, b]
            w2 = P2[a, b]
            if w1 > 0.0 and w2 > 0.0:
                stack.append((a, p1 * w1, p2 * w2, d + 1))
    return table, S_scale, nodes, budget_hit
