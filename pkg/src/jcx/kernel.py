"""Schur-product kernel of a Markov source pair: spectrum and regimes.

For sources P1, P2 restricted to their common support C the kernel is the
matrix family

    P(s1, s2)[a, b] = P1(a|b)^{-s1} P2(a|b)^{-s2}  on C, 0 elsewhere,

whose dominant eigenvalue lambda(s1, s2) drives the joint-complexity
asymptotics.  The kernel set K = {(s1, s2) real : lambda(s1, s2) = 1} is
a concave curve; kappa = min_K (-s1 - s2) and where that minimum sits
classifies the pair:

* Nilpotent: the common-support indicator P(0,0) is nilpotent (acyclic
  support digraph), common factors have bounded length;
* SameSource: the transition matrices are exactly equal;
* Conjugate: P(-1,0) and P(0,-1) are equal up to a diagonal similarity
  q_ab = (x_a/x_b) p_ab.  K contains the whole line s1 + s2 = -kappa,
  with kappa = 1 exactly when the common-support restriction loses no
  mass and kappa < 1 otherwise;
* BoundaryC2Pos / BoundaryC1Pos: the minimiser runs off past an axis;
  the effective exponent is the root c0 of lambda(c0, 0) = 1 (resp.
  lambda(0, c0) = 1) with -1 < c0 < 0;
* InteriorSaddle: a proper interior minimum (c1, c2), kappa = -c1 - c2.

Monotonicity note: entries P^{-s} = exp(-s ln P) with ln P <= 0 on the
support, so lambda strictly INCREASES in each real argument; the
bisection below relies on that direction.

Higher-order models are handled through their order-1 context embedding
(the transition matrix over length-r contexts), the same convention the
prefix-complexity routes use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg

from .errors import CapacityError, InputError, NumericError
from .textmodel import MarkovModel, stationary

DENSE_EIG_MAX = 64
SPECTRUM_DIM_CAP = 4096
RELATEDNESS_DIM_CAP = 64
RELATEDNESS_DEN_CAP = 10**6
SEARCH_BOTTOM = -1.0 + 1e-6
SEARCH_TOP = 40.0
BISECT_TOL = 1e-12
GOLDEN_TOL = 1e-10


# ---------------------------------------------------------------------------
# kernel construction and evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SchurKernel:
    """Common-support restriction of a model pair with log tables.

    P1 and P2 are the transition matrices with entries zeroed off the
    common support; L1 and L2 hold ln P on the support and 0 elsewhere
    (the log* convention, which also drives the relatedness scan).
    """

    P1: np.ndarray
    P2: np.ndarray
    mask: np.ndarray
    L1: np.ndarray
    L2: np.ndarray
    pi1: np.ndarray
    pi2: np.ndarray
    alphabet: tuple
    states: tuple = field(repr=False)


def build_kernel(m1: MarkovModel, m2: MarkovModel) -> SchurKernel:
    """Restrict a model pair to its common support."""
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
    mask = (m1.transitions > 0) & (m2.transitions > 0)
    P1 = np.where(mask, m1.transitions, 0.0)
    P2 = np.where(mask, m2.transitions, 0.0)
    with np.errstate(divide="ignore"):
        L1 = np.where(mask, np.log(np.where(mask, P1, 1.0)), 0.0)
        L2 = np.where(mask, np.log(np.where(mask, P2, 1.0)), 0.0)
    return SchurKernel(
        P1, P2, mask, L1, L2, stationary(m1), stationary(m2), m1.alphabet, m1.states
    )


def eval_P(kernel: SchurKernel, s1: complex, s2: complex) -> np.ndarray:
    """Entrywise P1^{-s1} P2^{-s2} on the common support; zeros stay zero."""
    real = (
        isinstance(s1, (int, float)) or s1.imag == 0.0
    ) and (isinstance(s2, (int, float)) or s2.imag == 0.0)
    if real:
        s1r, s2r = float(np.real(s1)), float(np.real(s2))
        out = np.zeros_like(kernel.P1)
        out[kernel.mask] = np.exp(
            -s1r * kernel.L1[kernel.mask] - s2r * kernel.L2[kernel.mask]
        )
        return out
    out = np.zeros(kernel.P1.shape, dtype=complex)
    out[kernel.mask] = np.exp(
        -complex(s1) * kernel.L1[kernel.mask] - complex(s2) * kernel.L2[kernel.mask]
    )
    return out


# ---------------------------------------------------------------------------
# dominant spectrum
# ---------------------------------------------------------------------------


@dataclass
class Spectrum:
    """Dominant eigentriple with <zeta|u> = 1 and a gap diagnostic.

    degenerate flags a spectral gap below 1e-12 (dominant eigenvalue not
    clearly simple); the triple is still usable but derivative-based
    consumers refuse it.
    """

    lam: complex
    u: np.ndarray
    zeta: np.ndarray
    gap: float
    degenerate: bool


def _realify(vec: np.ndarray) -> np.ndarray:
    """Rotate a complex eigenvector to real and fixed sign when possible."""
    pivot = vec[int(np.argmax(np.abs(vec)))]
    if pivot != 0:
        vec = vec * (abs(pivot) / pivot)
    if np.abs(vec.imag).max() <= 1e-10 * max(np.abs(vec.real).max(), 1e-300):
        vec = vec.real.copy()
    return vec


def _spectrum_dense(A: np.ndarray) -> Spectrum:
    w, vl, vr = scipy.linalg.eig(A, left=True, right=True)
    order = np.argsort(-np.abs(w))
    k = order[0]
    lam = w[k]
    gap = float(np.abs(w[k]) - np.abs(w[order[1]])) if len(w) > 1 else math.inf
    u = _realify(vr[:, k])
    # scipy's left vectors satisfy vl^H A = w vl^H
    zeta = _realify(vl[:, k].conj())
    if np.isrealobj(u) and u.sum() < 0:
        u = -u
    # gauge pin: unit L1 norm with the phase fixed by _realify, so u(s)
    # varies smoothly under parameter sweeps and finite differencing
    u = u / np.abs(u).sum()
    if abs(lam.imag) <= 1e-10 * max(abs(lam.real), 1e-300):
        lam = lam.real
    return Spectrum(lam, u, zeta, gap, gap < 1e-12)


def _spectrum_power(A: np.ndarray) -> Spectrum:
    n = A.shape[0]
    # a positive diagonal shift makes the Perron root the unique modulus
    # maximiser even for periodic supports
    shift = 0.5 * float(np.abs(A).sum(axis=0).max()) + 1e-3
    As = A + shift * np.eye(n, dtype=A.dtype)
    rng_free = np.full(n, 1.0 / n, dtype=A.dtype)
    u = rng_free.copy()
    z = rng_free.copy()
    lam_s = 0.0
    for _ in range(200_000):
        nu = As @ u
        nz = As.T @ z
        su = np.abs(nu).sum()
        sz = np.abs(nz).sum()
        if su == 0 or sz == 0:
            raise NumericError("power iteration collapsed to zero vector")
        nu /= su
        nz /= sz
        step = np.abs(nu - u).max() + np.abs(nz - z).max()
        u, z = nu, nz
        if step <= 1e-15:
            break
    denom = z @ u
    if abs(denom) < 1e-300:
        raise NumericError("left/right eigenvectors are numerically orthogonal")
    lam_s = (z @ (As @ u)) / denom
    lam = lam_s - shift
    # deflated second iteration for the gap diagnostic
    x = np.full(n, 1.0 / n, dtype=A.dtype)
    x = x - u * ((z @ x) / denom)
    mod2 = 0.0
    for _ in range(200):
        y = As @ x
        y = y - u * ((z @ y) / denom)
        norm = np.abs(y).sum()
        if norm == 0:
            break
        mod2 = norm / max(np.abs(x).sum(), 1e-300)
        x = y / norm
    gap = float(abs(lam_s) - mod2)
    return Spectrum(lam, u, z, gap, gap < 1e-12)


def dominant_spectrum(A: np.ndarray) -> Spectrum:
    """Dominant eigenvalue with right/left vectors normalised <zeta|u> = 1.

    Dense LAPACK decomposition up to 64 states, shifted power iteration
    with deflation above.  The residual contract ||A u - lam u||_inf <=
    1e-10 ||u||_inf is enforced here, not just promised.
    """
    A = np.asarray(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise InputError(f"spectrum needs a square matrix, got shape {A.shape}")
    if n > SPECTRUM_DIM_CAP:
        raise CapacityError(f"matrix dimension {n} exceeds the spectrum cap {SPECTRUM_DIM_CAP}")
    spec = _spectrum_dense(A) if n <= DENSE_EIG_MAX else _spectrum_power(A)
    scale = spec.zeta @ spec.u
    if abs(scale) < 1e-300:
        raise NumericError("left/right eigenvectors are numerically orthogonal")
    spec.zeta = spec.zeta / scale
    unorm = np.abs(spec.u).max()
    residual = np.abs(A @ spec.u - spec.lam * spec.u).max()
    if residual > 1e-10 * max(unorm, 1e-300):
        raise NumericError(
            f"eigenpair residual {residual:.3e} exceeds 1e-10 * ||u||_inf"
        )
    return spec


def lambda_at(kernel: SchurKernel, s1: float, s2: float) -> float:
    """Dominant eigenvalue of P(s1, s2) for real arguments."""
    A = eval_P(kernel, s1, s2)
    if A.shape[0] <= DENSE_EIG_MAX:
        return float(np.abs(np.linalg.eigvals(A)).max())
    return float(np.real(dominant_spectrum(A).lam))


# ---------------------------------------------------------------------------
# eigenvalue derivatives
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaDerivatives:
    """lambda and its first/second partials in (s1, s2) at a real point."""

    lam: float
    d1: float
    d2: float
    d11: float
    d12: float
    d22: float


def _bordered_solve(core: np.ndarray, border_col, border_row, rhs):
    n = core.shape[0]
    B = np.zeros((n + 1, n + 1))
    B[:n, :n] = core
    B[:n, n] = border_col
    B[n, :n] = border_row
    full_rhs = np.zeros(n + 1)
    full_rhs[:n] = rhs
    sol = np.linalg.solve(B, full_rhs)
    return sol[:n]


def lambda_derivatives(kernel: SchurKernel, s1: float, s2: float) -> LambdaDerivatives:
    """Analytic lambda derivatives via perturbation of the eigentriple.

    First derivatives are the bilinear forms <zeta|dP u> with
    dP/ds_i = -L_i * P entrywise.  Second derivatives include the
    eigenvector motion: u^(j) solves the bordered system
    (P - lam I) u^(j) = (lam^(j) I - P^(j)) u with <zeta|u^(j)> = 0, and
    symmetrically for zeta^(j); then
    d_ij = <zeta|P^(ij) u> + <zeta|P^(i) u^(j)> + <zeta^(j)|P^(i) u>.
    """
    A = eval_P(kernel, s1, s2)
    spec = dominant_spectrum(A)
    if spec.degenerate:
        raise NumericError(
            f"dominant eigenvalue of P({s1}, {s2}) is degenerate "
            f"(gap {spec.gap:.3e}); derivatives are undefined"
        )
    lam = float(np.real(spec.lam))
    u = np.real(spec.u)
    zeta = np.real(spec.zeta)
    D = {1: -kernel.L1 * A, 2: -kernel.L2 * A}
    DD = {
        (1, 1): kernel.L1 * kernel.L1 * A,
        (1, 2): kernel.L1 * kernel.L2 * A,
        (2, 2): kernel.L2 * kernel.L2 * A,
    }
    d = {i: float(zeta @ (D[i] @ u)) for i in (1, 2)}
    core = A - lam * np.eye(A.shape[0])
    du = {
        j: _bordered_solve(core, u, zeta, (d[j] * np.eye(A.shape[0]) - D[j]) @ u)
        for j in (1, 2)
    }
    dz = {
        j: _bordered_solve(core.T, zeta, u, (d[j] * np.eye(A.shape[0]) - D[j]).T @ zeta)
        for j in (1, 2)
    }

    def second(i: int, j: int) -> float:
        key = (min(i, j), max(i, j))
        return float(zeta @ (DD[key] @ u) + zeta @ (D[i] @ du[j]) + dz[j] @ (D[i] @ u))

    d11 = second(1, 1)
    d22 = second(2, 2)
    d12 = 0.5 * (second(1, 2) + second(2, 1))
    return LambdaDerivatives(lam, d[1], d[2], d11, d12, d22)


def fd_lambda_derivatives(kernel: SchurKernel, s1: float, s2: float, h: float = 1e-5) -> LambdaDerivatives:
    """Finite-difference oracle for lambda_derivatives.

    First derivatives Richardson-extrapolate central differences of
    lambda itself; second derivatives difference the ANALYTIC first
    derivatives, which sidesteps the eigenvector-smoothness noise of
    differencing lambda twice.
    """

    def rich(f, x0, step):
        d_h = (f(x0 + step) - f(x0 - step)) / (2 * step)
        d_h2 = (f(x0 + step / 2) - f(x0 - step / 2)) / step
        return (4 * d_h2 - d_h) / 3

    lam = lambda_at(kernel, s1, s2)
    d1 = rich(lambda x: lambda_at(kernel, x, s2), s1, h)
    d2 = rich(lambda y: lambda_at(kernel, s1, y), s2, h)
    d11 = rich(lambda x: lambda_derivatives(kernel, x, s2).d1, s1, h)
    d22 = rich(lambda y: lambda_derivatives(kernel, s1, y).d2, s2, h)
    d12 = rich(lambda y: lambda_derivatives(kernel, s1, y).d1, s2, h)
    return LambdaDerivatives(lam, d1, d2, d11, d12, d22)


# ---------------------------------------------------------------------------
# conjugacy and commensurability
# ---------------------------------------------------------------------------


def is_conjugate(P: np.ndarray, Q: np.ndarray, tol: float = 1e-9):
    """Test q_ab = (x_a/x_b) p_ab for some positive vector x.

    Supports must match exactly; then the log-ratios r_ab = ln(q/p) must
    derive from a potential phi with r_ab = phi_a - phi_b, which is
    checked by spanning-forest assignment plus closure of every support
    edge.  Returns (flag, witness x with max entry 1) or (False, None).
    """
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if P.shape != Q.shape:
        return False, None
    sup = P > 0
    if not np.array_equal(sup, Q > 0):
        return False, None
    n = P.shape[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(sup, np.log(np.where(sup, Q, 1.0) / np.where(sup, P, 1.0)), 0.0)
    adj = [[] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if sup[a, b]:
                adj[a].append((b, r[a, b]))   # phi_a - phi_b = r_ab
                adj[b].append((a, -r[a, b]))
    phi = np.zeros(n)
    seen = [False] * n
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            a = queue.pop()
            for b, diff in adj[a]:
                if not seen[b]:
                    seen[b] = True
                    phi[b] = phi[a] - diff
                    queue.append(b)
    closure = np.abs(np.where(sup, r - (phi[:, None] - phi[None, :]), 0.0)).max() if sup.any() else 0.0
    if closure > tol:
        return False, None
    x = np.exp(phi - phi.max())
    return True, x


@dataclass(frozen=True)
class Relatedness:
    """Log-rational-relatedness verdict with the root omega when related."""

    related: bool
    omega: float | None
    note: str | None = None


def rational_relatedness(M: np.ndarray, tol: float = 1e-9, den_cap: int = RELATEDNESS_DEN_CAP) -> Relatedness:
    """Best-effort log-rational-relatedness of a non-negative matrix.

    Collects theta_abc = l_ab + l_ca - l_cb over ALL index triples with
    l = ln M on the support and 0 elsewhere, then looks for x with every
    x theta integer.  Continued fractions of the ratios theta/theta_min
    (denominator cap) propose the candidate x = lcm(denominators) /
    theta_min; the verdict is the final integrality check |x theta -
    round(x theta)| <= tol, where the lcm amplifies any approximation
    error, so generic irrational ratios fail even though each admits a
    good rational approximation below the cap.  Undecidable exactly in
    floats; the caps make this a documented heuristic that only ever
    affects the periodicity report.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if n > RELATEDNESS_DIM_CAP:
        return Relatedness(False, None, f"dimension {n} above relatedness scan cap {RELATEDNESS_DIM_CAP}")
    with np.errstate(divide="ignore"):
        L = np.where(M > 0, np.log(np.where(M > 0, M, 1.0)), 0.0)
    theta = L[:, :, None] + L.T[:, None, :] - L.T[None, :, :]
    mags = np.abs(theta.ravel())
    mags = mags[mags > tol]
    if mags.size == 0:
        return Relatedness(True, 0.0, "all log cycle sums vanish; trivially related with zero root")
    base = mags.min()
    # deduplicate on a tol grid for the fraction scan only; ratios must be
    # taken on the raw values, a grid representative would inject noise far
    # above float precision and derail the continued fractions
    reps = mags[np.unique(np.round(mags / tol), return_index=True)[1]]
    lcm = 1
    for v in reps:
        frac = Fraction(v / base).limit_denominator(den_cap)
        lcm = lcm * frac.denominator // math.gcd(lcm, frac.denominator)
        if lcm > den_cap:
            return Relatedness(False, None, f"denominator lcm exceeds cap {den_cap}")
    x = lcm / base
    scaled = x * mags
    if np.abs(scaled - np.round(scaled)).max() > tol:
        return Relatedness(False, None)
    return Relatedness(True, float(x))


@dataclass(frozen=True)
class PeriodicityReport:
    """Structure of the complex kernel boundary: punctual, linear, lattice.

    Periods are the imaginary-axis spacings 2 pi omega along s1 and/or
    s2; a related matrix with zero root contributes no period (its log
    lattice is degenerate) and counts as punctual for the report.
    """

    kind: str
    periods: tuple
    root1: float | None
    root2: float | None


def commensurability(kernel: SchurKernel) -> PeriodicityReport:
    """Classify the periodic structure of the kernel-set boundary.

    Tests log-rational relatedness of the two common-support restricted
    matrices (only those entries enter P(s1, s2)): both related gives a
    lattice with axis-parallel periods 2 pi omega_i, exactly one gives
    the linear case on that axis, none the punctual case.
    """
    r1 = rational_relatedness(kernel.P1)
    r2 = rational_relatedness(kernel.P2)
    eff1 = r1.related and r1.omega is not None and r1.omega > 0
    eff2 = r2.related and r2.omega is not None and r2.omega > 0
    o1 = r1.omega if eff1 else None
    o2 = r2.omega if eff2 else None
    if eff1 and eff2:
        return PeriodicityReport("lattice", (2 * math.pi * o1, 2 * math.pi * o2), o1, o2)
    if eff1 or eff2:
        period = 2 * math.pi * (o1 if eff1 else o2)
        return PeriodicityReport("linear", (period,), o1, o2)
    return PeriodicityReport("punctual", (), o1, o2)


# ---------------------------------------------------------------------------
# regime classification
# ---------------------------------------------------------------------------


@dataclass
class KernelSolution:
    """Regime classification of a source pair with its kernel constants."""

    regime: str
    kappa: float | None = None
    c1: float | None = None
    c2: float | None = None
    c0: float | None = None
    nilpotency_index: int | None = None
    gamma0: float | None = None
    witness: np.ndarray | None = None
    periodicity: PeriodicityReport | None = None


def _nilpotency_index(mask: np.ndarray) -> int | None:
    """Smallest K with mask^K = 0, or None when the support has a cycle.

    Equivalent to acyclicity of the support digraph; K is one more than
    the longest path edge count (Kahn topological order plus DP).
    """
    n = mask.shape[0]
    # edge b -> a when a can follow b: mask[a, b] (column-to-row convention)
    out_to = [np.flatnonzero(mask[:, b]) for b in range(n)]
    indeg = np.zeros(n, dtype=int)
    for b in range(n):
        for a in out_to[b]:
            indeg[a] += 1
    queue = [v for v in range(n) if indeg[v] == 0]
    depth = np.zeros(n, dtype=int)
    seen = 0
    while queue:
        b = queue.pop()
        seen += 1
        for a in out_to[b]:
            depth[a] = max(depth[a], depth[b] + 1)
            indeg[a] -= 1
            if indeg[a] == 0:
                queue.append(a)
    if seen < n:
        return None
    return int(depth.max()) + 1


def _bisect_increasing(f, lo: float, hi: float, tol: float = BISECT_TOL, max_iter: int = 200) -> float:
    flo = f(lo)
    fhi = f(hi)
    if flo > 1.0 or fhi < 1.0:
        raise NumericError(
            f"bisection bracket failure: lambda({lo:.6g}) = {flo:.6g}, "
            f"lambda({hi:.6g}) = {fhi:.6g} do not straddle 1"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if f(mid) < 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def _expanding_root(f, hint: float) -> float:
    """Root of f = 1 for increasing f, searching outward from a hint."""
    lo = hint - 1.0
    hi = hint + 1.0
    for _ in range(60):
        if f(lo) <= 1.0:
            break
        lo = hint - 2.0 * (hint - lo)
    else:
        raise NumericError(f"no lower bracket for the kernel root near {hint:.6g}")
    for _ in range(60):
        if f(hi) >= 1.0:
            break
        hi = hint + 2.0 * (hi - hint)
    else:
        raise NumericError(f"no upper bracket for the kernel root near {hint:.6g}")
    return _bisect_increasing(f, lo, hi)


def _golden_min(f, a: float, b: float, tol: float = GOLDEN_TOL, max_iter: int = 300):
    """Golden-section minimum of a unimodal f on [a, b]."""
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - inv * (b - a)
    x2 = a + inv * (b - a)
    f1 = f(x1)
    f2 = f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv * (b - a)
            f2 = f(x2)
    xmin = x1 if f1 <= f2 else x2
    return xmin, min(f1, f2)


def _line_kappa(kernel: SchurKernel) -> float:
    """kappa for the conjugate/same-source line: lambda(P1r^t) = 1 in t.

    Entrywise powers of the restricted matrix decrease in t, so the root
    is bracketed by t -> 0 (lambda >= 1, support has a cycle) and t = 1
    (lambda <= 1, substochastic restriction).
    """

    def lam_of_t(t: float) -> float:
        A = np.zeros_like(kernel.P1)
        A[kernel.mask] = np.exp(t * kernel.L1[kernel.mask])
        if A.shape[0] <= DENSE_EIG_MAX:
            return float(np.abs(np.linalg.eigvals(A)).max())
        return float(np.real(dominant_spectrum(A).lam))

    lam1 = lam_of_t(1.0)
    if abs(lam1 - 1.0) <= 1e-12:
        return 1.0
    lo, hi = 1e-9, 1.0
    if lam_of_t(lo) < 1.0:
        raise NumericError("conjugate line has no kernel point: support spectral radius below 1")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if lam_of_t(mid) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= BISECT_TOL:
            break
    return 0.5 * (lo + hi)


def solve_kernel(kernel: SchurKernel) -> KernelSolution:
    """Classify the pair and locate the kernel minimiser; see module doc.

    Pipeline: nilpotency (exact, support digraph), exact matrix equality,
    conjugacy of P(-1,0) vs P(0,-1), then dual 1-D minimisations of
    -s1 - s2 along the kernel curve, parametrised by s2 and by s1; a
    minimiser pinned at the top of the search range with the partner
    parametrisation pinned at the bottom classifies the boundary
    regimes, anything else is an interior saddle (cross-checked between
    the two parametrisations).
    """
    idx = _nilpotency_index(kernel.mask)
    if idx is not None:
        sol = KernelSolution("Nilpotent", nilpotency_index=idx)
        sol.gamma0 = gamma0_nilpotent(kernel, _index=idx)
        return sol

    if np.array_equal(kernel.P1, kernel.P2):
        kappa = _line_kappa(kernel)
        return KernelSolution(
            "SameSource" if kappa == 1.0 else "Conjugate",
            kappa=kappa,
            witness=np.ones(kernel.P1.shape[0]),
            periodicity=commensurability(kernel),
        )
    conj, witness = is_conjugate(kernel.P1, kernel.P2)
    if conj:
        return KernelSolution(
            "Conjugate",
            kappa=_line_kappa(kernel),
            witness=witness,
            periodicity=commensurability(kernel),
        )

    def s1_root(s2: float, hint: float) -> float:
        return _expanding_root(lambda x: lambda_at(kernel, x, s2), hint)

    def s2_root(s1: float, hint: float) -> float:
        return _expanding_root(lambda y: lambda_at(kernel, s1, y), hint)

    hints = {"s1": -0.5, "s2": -0.5}

    def g_by_s2(s2: float) -> float:
        root = s1_root(s2, hints["s1"])
        hints["s1"] = root
        return -root - s2

    def g_by_s1(s1: float) -> float:
        root = s2_root(s1, hints["s2"])
        hints["s2"] = root
        return -root - s1

    x2, _ = _golden_min(g_by_s2, SEARCH_BOTTOM, SEARCH_TOP)
    hints["s2"] = -0.5
    x1, _ = _golden_min(g_by_s1, SEARCH_BOTTOM, SEARCH_TOP)

    pin_tol = 1e-6
    top2 = SEARCH_TOP - x2 <= pin_tol
    top1 = SEARCH_TOP - x1 <= pin_tol
    bot2 = x2 - SEARCH_BOTTOM <= pin_tol
    bot1 = x1 - SEARCH_BOTTOM <= pin_tol
    if top2 and top1:
        raise NumericError(
            "kernel minimisation diverges in both parametrisations; "
            f"argmins ({x1:.3g}, {x2:.3g}) both pinned at the search top"
        )
    if top2 or bot1:
        c0 = _bisect_increasing(lambda x: lambda_at(kernel, x, 0.0), -1.0 + 1e-12, 0.0)
        return KernelSolution("BoundaryC2Pos", c0=c0, periodicity=commensurability(kernel))
    if top1 or bot2:
        c0 = _bisect_increasing(lambda y: lambda_at(kernel, 0.0, y), -1.0 + 1e-12, 0.0)
        return KernelSolution("BoundaryC1Pos", c0=c0, periodicity=commensurability(kernel))

    c2 = x2
    c1 = s1_root(c2, hints["s1"])
    kappa = -c1 - c2
    kappa_alt = -x1 - s2_root(x1, hints["s2"])
    if abs(kappa - kappa_alt) > 1e-6 * max(1.0, abs(kappa)):
        raise NumericError(
            f"kernel parametrisations disagree: kappa {kappa:.9f} by s2 "
            f"vs {kappa_alt:.9f} by s1"
        )
    return KernelSolution(
        "InteriorSaddle",
        kappa=kappa,
        c1=c1,
        c2=c2,
        periodicity=commensurability(kernel),
    )


def gamma0_nilpotent(kernel: SchurKernel, _index: int | None = None) -> float:
    """Limit of the joint complexity for a nilpotent pair, exactly.

    gamma0 = <1_C (I - P(0,0))^{-1} | 1> with 1_C the indicator of
    states common to both sources; the inverse is the finite sum of
    integer powers of the support matrix, so the result is an exact
    integer count of the common words.
    """
    idx = _index if _index is not None else _nilpotency_index(kernel.mask)
    if idx is None:
        raise InputError("gamma0_nilpotent requires a nilpotent common support")
    S = kernel.mask.astype(int).astype(object)
    n = S.shape[0]
    total_matrix = np.eye(n, dtype=int).astype(object)
    power = total_matrix.copy()
    for _ in range(1, idx):
        power = power @ S
        total_matrix = total_matrix + power
    ones_c = np.array(
        [1 if (kernel.pi1[a] > 1e-12 and kernel.pi2[a] > 1e-12) else 0 for a in range(n)],
        dtype=object,
    )
    ones = np.ones(n, dtype=int).astype(object)
    # transitions[a, b] moves b -> a, so paths of length k starting from a
    # common state b are (1^T S^k)_b; summing the geometric series gives
    # 1^T (I - S)^{-1} 1_C in this column convention
    total = int(ones @ (total_matrix @ ones_c))
    if total > 10**300:
        raise NumericError(f"nilpotent word count {total} exceeds the float range")
    return float(total)
