"""Joint prefix complexity of two Markov sources.

The central object is

    C_{n,m} = sum over non-empty words w of
              (1 - (1 - P1(w))^n) (1 - (1 - P2(w))^m),

the expected number of common factors up to O(n^eps) corrections.  Three
independent evaluation routes are provided and cross-checked:

* recurrence_c: dynamic program on the conditional tables
  C_b[n][m] = 1 + sum_a E[C_a(n_a, m_a)] (n_a, m_a independent binomials
  with success probabilities P1(a|b), P2(a|b)).  The binomial mass at
  (n_a, m_a) = (n, m) makes each cell a small linear solve across states.
  The unconditional table is the stationary binomial mixture of the
  conditional tables WITHOUT an additive 1 (the mixture of "1 +" rows
  would give C_{1,1} = 2; the defining sum gives
  C_{1,1} = sum_w P1(w) P2(w), which is 1 for identical uniform binary
  sources).
* word_sum_c: direct trie walk over words positive under both sources,
  with honest pruning: a branch at word w in state b is dropped only
  when its exact subtree bound n m P1(w) P2(w) (1 + R(b)) is below a
  mass threshold (or the tau rule fires), and every dropped bound is
  accumulated into the reported error bound.  R(b) is the closed-form
  geometric tail <1|(I - M)^{-1} M e_b> of the common-support Schur
  product M = P1 * P2, so the bound is exact, not heuristic.
* series_c: exact alternating binomial expansion
  C_{n,m} = sum_{i<=n, j<=m} C(n,i) C(m,j) (-1)^{i+j} S(i,j) with
  S(i,j) = <1|(I - M_ij)^{-1} v_ij>; exact up to roundoff for small n, m
  and used as the independent oracle in tests.

All routes require the two models to share alphabet and order, and the
Schur kernel to be strictly subcritical (dominant eigenvalue of M below
1); identical deterministic sources violate that and raise NumericError.

Order r > 1 is handled by the context embedding: states are r-grams, a
word is a state path, and P(w) factors over context transitions exactly
as in the order-1 case, so every formula above applies verbatim on the
embedded chain.  Words shorter than r are represented by their padded
context states, which over-resolves them (each short word is counted
once per compatible context, weighted by the stationary mass); the
effect is O(|A|^r) words of length < r against the n^kappa main term
and vanishes in every asymptotic statement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _native
from .errors import CapacityError, InputError, NumericError
from .textmodel import MarkovModel, stationary

RECURRENCE_CAP = 256
SERIES_CAP = 32
WEIGHT_CACHE_CELL_CAP = 60_000_000


@dataclass(frozen=True)
class WordSumConfig:
    """Knobs for the word-sum walk; defaults suit exploratory use.

    tau: the per-branch smallness rule (both n P1(w) <= tau and
        m P2(w) <= tau prunes unconditionally).
    rel_target / abs_target: the driver lowers the mass threshold until
        error_bound <= max(abs_target, rel_target * |value|) or the node
        budget is hit.
    mass_tol: explicit mass threshold; skips the driver loop.
    max_depth: word-length cap; None derives 10 log(nm) / log(1/lambda)
        (at least 64) and counts the capped frontier in the bound.
    node_budget: hard cap on visited nodes; None uses the backend default.
    """

    tau: float = 1e-14
    rel_target: float = 1e-3
    abs_target: float = 0.0
    mass_tol: float | None = None
    max_depth: int | None = None
    node_budget: int | None = None


@dataclass
class WordSumResult:
    """Word-sum value with its honest error interval.

    The true C_{n,m} lies in [value, value + error_bound]: pruning only
    ever drops nonnegative mass and every drop is added to the bound.
    budget_hit means the driver stopped (node budget or iteration cap)
    before reaching the requested target; the interval is still honest.
    """

    n: int
    m: int
    value: float
    error_bound: float
    nodes: int
    budget_hit: bool
    mass_tol: float


@dataclass
class RecurrenceTable:
    """Unconditional and conditional prefix-complexity tables up to N."""

    N: int
    C: np.ndarray
    conditional: np.ndarray
    states: tuple = field(repr=False)

    def value(self, n: int, m: int) -> float:
        if not (0 <= n <= self.N and 0 <= m <= self.N):
            raise InputError(f"({n}, {m}) outside table range 0..{self.N}")
        return float(self.C[n, m])


@dataclass
class ComparisonReport:
    """Cell-wise recurrence vs word-sum discrepancies on 1..N."""

    N: int
    recurrence: np.ndarray
    word_sum: np.ndarray
    bound_scale: float
    nodes: int

    @property
    def max_abs_diff(self) -> float:
        return float(np.abs(self.recurrence[1:, 1:] - self.word_sum[1:, 1:]).max())

    def bound(self, n: int, m: int) -> float:
        return n * m * self.bound_scale

    def within(self, tol: float) -> bool:
        """True when every cell agrees within tol + its reported bound."""
        diff = np.abs(self.recurrence - self.word_sum)
        nn = np.arange(self.N + 1)
        bounds = np.outer(nn, nn) * self.bound_scale
        return bool(np.all(diff <= tol + bounds))


# ---------------------------------------------------------------------------
# shared pair setup
# ---------------------------------------------------------------------------


def _pair_setup(m1: MarkovModel, m2: MarkovModel):
    if m1.alphabet != m2.alphabet:
        raise InputError(
            "models must share an alphabet; got "
            f"{m1.alphabet!r} vs {m2.alphabet!r}"
        )
    if m1.order != m2.order:
        raise InputError(
            f"models must share an order (got {m1.order} and {m2.order}); "
            "refit the lower-order model at the common order"
        )
    P1 = m1.transitions
    P2 = m2.transitions
    mask = (P1 > 0) & (P2 > 0)
    M = np.where(mask, P1 * P2, 0.0)
    return P1, P2, mask, M


def _schur_tail(M: np.ndarray):
    """Dominant eigenvalue of M and the subtree tail R[b] = <1|(I-M)^-1 M e_b>."""
    lam = float(np.abs(np.linalg.eigvals(M)).max()) if M.size else 0.0
    if lam >= 1.0 - 1e-12:
        raise NumericError(
            f"common-support Schur kernel has dominant eigenvalue {lam:.12f} >= 1; "
            "the word sum diverges (identical deterministic sources?)"
        )
    S = M.shape[0]
    y = np.linalg.solve((np.eye(S) - M).T, np.ones(S))
    R = M.T @ y
    return lam, np.maximum(R, 0.0)


def _auto_depth(n: int, m: int, lam: float) -> int:
    if lam <= 0:
        return 64
    nm = max(float(n) * float(m), 2.0)
    return max(64, min(10_000, int(math.ceil(10.0 * math.log(nm) / math.log(1.0 / lam)))))


def _check_config(cfg: WordSumConfig) -> None:
    if cfg.tau < 0 or cfg.rel_target < 0 or cfg.abs_target < 0:
        raise InputError("tau, rel_target and abs_target must be >= 0")
    if cfg.mass_tol is None and cfg.rel_target == 0 and cfg.abs_target == 0:
        raise InputError("need a positive rel_target or abs_target (or an explicit mass_tol)")
    if cfg.mass_tol is not None and cfg.mass_tol <= 0:
        raise InputError(f"mass_tol must be positive, got {cfg.mass_tol}")
    if cfg.max_depth is not None and cfg.max_depth < 1:
        raise InputError(f"max_depth must be >= 1, got {cfg.max_depth}")
    if cfg.node_budget is not None and cfg.node_budget < 1:
        raise InputError(f"node_budget must be >= 1, got {cfg.node_budget}")


def _fp_cushion(value: float, err: float) -> float:
    """Widen a pruning bound to cover compensated-summation roundoff.

    The walk sums are Kahan-compensated, so the residual float error is a
    few eps relative to the magnitudes involved, not nodes * eps; 64 eps
    of headroom keeps the interval honest with a margin.
    """
    return err + 64.0 * np.finfo(float).eps * (abs(value) + err)


# ---------------------------------------------------------------------------
# word sum
# ---------------------------------------------------------------------------


def word_sum_c(m1: MarkovModel, m2: MarkovModel, n: int, m: int, cfg: WordSumConfig | None = None) -> WordSumResult:
    """Evaluate C_{n,m} by the pruned trie walk; see module docstring."""
    if n < 0 or m < 0:
        raise InputError(f"n and m must be >= 0, got ({n}, {m})")
    cfg = cfg or WordSumConfig()
    _check_config(cfg)
    if n == 0 or m == 0:
        return WordSumResult(n, m, 0.0, 0.0, 0, False, cfg.mass_tol or 0.0)
    P1, P2, _, M = _pair_setup(m1, m2)
    lam, R = _schur_tail(M)
    v1 = stationary(m1)
    v2 = stationary(m2)
    depth = cfg.max_depth if cfg.max_depth is not None else _auto_depth(n, m, lam)
    budget = cfg.node_budget if cfg.node_budget is not None else _native.DEFAULT_NODE_BUDGET

    if cfg.mass_tol is not None:
        value, err, nodes, hit = _native.word_sum_single(
            P1, P2, v1, v2, R, n, m, cfg.tau, cfg.mass_tol, depth, budget
        )
        return WordSumResult(
            n, m, value, _fp_cushion(value, err), int(nodes), bool(hit), cfg.mass_tol
        )

    # Lower the mass threshold geometrically until the bound meets the
    # target.  A run that exhausts the node budget is discarded in favour
    # of the tightest completed run; budget_hit on the result then means
    # "the requested target was out of budget", not "the value is partial".
    best: WordSumResult | None = None
    t = 1.0
    for _ in range(14):
        value, err, nodes, hit = _native.word_sum_single(
            P1, P2, v1, v2, R, n, m, cfg.tau, t, depth, budget
        )
        err = _fp_cushion(value, err)
        # the truth lies in [value, value + err], so max(value, err) is a
        # scale proxy even on an early pass where everything pruned
        target = max(cfg.abs_target, cfg.rel_target * max(abs(value), err, 1e-12))
        if not hit and (best is None or err < best.error_bound):
            best = WordSumResult(n, m, value, err, int(nodes), False, t)
        if not hit and err <= target:
            return best
        if hit or t <= 1e-280:
            break
        # never drop the threshold more than 1e-4 per pass: one huge jump
        # can blow the node budget where two moderate ones succeed
        t *= max(min(0.125, (target / err) / 8.0), 1e-4)
        t = max(t, 1e-290)
    if best is None:
        return WordSumResult(n, m, value, err, int(nodes), True, t)
    best.budget_hit = True
    return best


def _word_sum_grid(m1: MarkovModel, m2: MarkovModel, N: int, cfg: WordSumConfig):
    """All cells (n, m) <= N in one walk, driven to the config target."""
    _check_config(cfg)
    P1, P2, _, M = _pair_setup(m1, m2)
    lam, R = _schur_tail(M)
    v1 = stationary(m1)
    v2 = stationary(m2)
    depth = cfg.max_depth if cfg.max_depth is not None else _auto_depth(N, N, lam)
    budget = cfg.node_budget if cfg.node_budget is not None else _native.DEFAULT_NODE_BUDGET

    if cfg.mass_tol is not None:
        table, S_scale, nodes, hit = _native.word_sum_table(
            P1, P2, v1, v2, R, N, cfg.tau, cfg.mass_tol, depth, budget
        )
        # the (1,1) cell sees bound 1 * S_scale, so cushioning the scale by
        # the largest cell covers the per-cell roundoff everywhere
        S_scale = _fp_cushion(float(np.max(table)), S_scale)
        return table, S_scale, int(nodes), bool(hit)

    best = None
    t = 1.0
    for _ in range(14):
        table, S_scale, nodes, hit = _native.word_sum_table(
            P1, P2, v1, v2, R, N, cfg.tau, t, depth, budget
        )
        S_scale = _fp_cushion(float(np.max(table)), S_scale)
        err = float(N) * float(N) * S_scale
        target = max(cfg.abs_target, cfg.rel_target * max(abs(table[N, N]), 1e-12))
        if not hit and (best is None or S_scale < best[1]):
            best = (table, S_scale, int(nodes), False)
        if not hit and err <= target:
            return best
        if hit or t <= 1e-280:
            break
        t *= min(0.125, (target / max(err, 1e-300)) / 8.0)
        t = max(t, 1e-290)
    if best is None:
        return table, S_scale, int(nodes), True
    return best[0], best[1], best[2], True


# ---------------------------------------------------------------------------
# recurrence
# ---------------------------------------------------------------------------


def _binomial_rows(p: float, N: int) -> np.ndarray:
    """w[n, k] = C(n, k) p^k (1-p)^(n-k) via the Pascal recurrence (stable)."""
    w = np.zeros((N + 1, N + 1))
    w[0, 0] = 1.0
    q = 1.0 - p
    for n in range(1, N + 1):
        w[n, 0] = w[n - 1, 0] * q
        w[n, 1:] = w[n - 1, 1:] * q + w[n - 1, :-1] * p
    return w


def recurrence_c(m1: MarkovModel, m2: MarkovModel, N: int) -> RecurrenceTable:
    """Tables C and C_b for all (n, m) <= N; see module docstring."""
    if N < 1:
        raise InputError(f"N must be >= 1, got {N}")
    if N > RECURRENCE_CAP:
        raise CapacityError(f"N = {N} exceeds the recurrence cap {RECURRENCE_CAP}")
    P1, P2, mask, M = _pair_setup(m1, m2)
    # subcriticality guard: the linear solves below need I - T nonsingular
    _schur_tail(M)
    S = P1.shape[0]
    pairs = [(a, b) for a in range(S) for b in range(S) if mask[a, b]]
    if (len(pairs) + S) * (N + 1) ** 2 * 2 > WEIGHT_CACHE_CELL_CAP:
        raise CapacityError(
            f"recurrence weight cache for {len(pairs)} support pairs at N = {N} "
            "is too large; reduce N or the model size"
        )
    W1 = {(a, b): _binomial_rows(P1[a, b], N) for a, b in pairs}
    W2 = {(a, b): _binomial_rows(P2[a, b], N) for a, b in pairs}

    pi1 = stationary(m1)
    pi2 = stationary(m2)
    sym_common = [a for a in range(S) if pi1[a] > 0 and pi2[a] > 0]
    U1 = {a: _binomial_rows(pi1[a], N) for a in sym_common}
    U2 = {a: _binomial_rows(pi2[a], N) for a in sym_common}

    cond = np.zeros((S, N + 1, N + 1))
    eye = np.eye(S)
    for n in range(1, N + 1):
        for m in range(1, N + 1):
            lower = np.zeros(S)
            T = np.zeros((S, S))
            for a, b in pairs:
                w1 = W1[(a, b)][n, : n + 1]
                w2 = W2[(a, b)][m, : m + 1]
                # cond[a, n, m] is still 0, so the slice product is the
                # strictly-lower-order mass; the (n, m) term is solved for.
                lower[b] += w1 @ cond[a, : n + 1, : m + 1] @ w2
                T[b, a] += w1[n] * w2[m]
            x = np.linalg.solve(eye - T, 1.0 + lower)
            cond[:, n, m] = x

    C = np.zeros((N + 1, N + 1))
    for n in range(1, N + 1):
        for m in range(1, N + 1):
            total = 0.0
            for a in sym_common:
                u1 = U1[a][n, : n + 1]
                u2 = U2[a][m, : m + 1]
                total += u1 @ cond[a, : n + 1, : m + 1] @ u2
            C[n, m] = total
    return RecurrenceTable(N, C, cond, m1.states)


# ---------------------------------------------------------------------------
# exact series
# ---------------------------------------------------------------------------


def series_c_interval(m1: MarkovModel, m2: MarkovModel, n: int, m: int) -> tuple[float, float]:
    """Alternating-series C_{n,m} with a self-reported roundoff bound.

    The terms C(n,i) C(m,j) S(i,j) grow like C(n, n/2)^2 while the sum
    stays O(n), so cancellation amplifies per-term roundoff by the ratio
    of total magnitude to value.  The value is fsum-ed (correctly rounded
    given the terms); the returned bound eps sum (16 + 8(i+j)) |term|
    covers the per-term evaluation error, whose relative size scales
    with the exponent i+j through exp(i log P1 + j log P2), and is what
    any comparison against this route must allow for.
    """
    if n < 0 or m < 0:
        raise InputError(f"n and m must be >= 0, got ({n}, {m})")
    if n == 0 or m == 0:
        return 0.0, 0.0
    if max(n, m) > SERIES_CAP:
        raise CapacityError(
            f"series evaluation is limited to n, m <= {SERIES_CAP} "
            "(alternating binomial sum loses precision beyond that)"
        )
    P1, P2, mask, M = _pair_setup(m1, m2)
    _schur_tail(M)
    with np.errstate(divide="ignore"):
        L1 = np.where(mask, np.log(np.where(mask, P1, 1.0)), -np.inf)
        L2 = np.where(mask, np.log(np.where(mask, P2, 1.0)), -np.inf)
    pi1 = stationary(m1)
    pi2 = stationary(m2)
    vmask = (pi1 > 0) & (pi2 > 0)
    with np.errstate(divide="ignore"):
        lv1 = np.where(vmask, np.log(np.where(vmask, pi1, 1.0)), -np.inf)
        lv2 = np.where(vmask, np.log(np.where(vmask, pi2, 1.0)), -np.inf)
    S = P1.shape[0]
    eye = np.eye(S)
    ones = np.ones(S)
    terms = []
    weighted = []
    for i in range(1, n + 1):
        ci = math.comb(n, i)
        for j in range(1, m + 1):
            Mij = np.exp(i * L1 + j * L2)
            vij = np.exp(i * lv1 + j * lv2)
            s = float(ones @ np.linalg.solve(eye - Mij, vij))
            term = ci * math.comb(m, j) * ((-1) ** (i + j)) * s
            terms.append(term)
            weighted.append((16.0 + 8.0 * (i + j)) * abs(term))
    value = math.fsum(terms)
    roundoff = np.finfo(float).eps * math.fsum(weighted)
    return value, roundoff


def series_c(m1: MarkovModel, m2: MarkovModel, n: int, m: int) -> float:
    """Alternating-series value alone; see series_c_interval for its error."""
    return series_c_interval(m1, m2, n, m)[0]


# ---------------------------------------------------------------------------
# cross-method comparison
# ---------------------------------------------------------------------------


def compare_methods(m1: MarkovModel, m2: MarkovModel, N: int, cfg: WordSumConfig | None = None) -> ComparisonReport:
    """Recurrence vs word-sum on every cell (n, m) <= N."""
    cfg = cfg or WordSumConfig(rel_target=1e-6)
    table = recurrence_c(m1, m2, N)
    ws, S_scale, nodes, _ = _word_sum_grid(m1, m2, N, cfg)
    return ComparisonReport(N, table.C, np.asarray(ws), S_scale, nodes)
