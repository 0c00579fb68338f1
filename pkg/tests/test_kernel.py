"""Schur kernel, eigenvalue machinery, and regime classification.

Frozen anchors below were derived with independent oracles: the boundary
exponent of the Fig-1a pair has the closed form log2((1 + sqrt 5)/2)
(the kernel at s2 = 0 is 2^{s1} times the golden-ratio Fibonacci mask),
and the Fig-1b saddle constants were located by a scipy grid scan plus
root polishing, independent of the solver under test.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from jcx import errors, kernel, textmodel
from jcx.errors import InputError

FIG1B_KAPPA = 0.9238931888757773
FIG1B_C1 = -0.4423259188479065
FIG1B_C2 = -0.48156727002787075
CONJ_KAPPA = 0.40568523137604295
LN2_PERIOD = 2.0 * math.pi / math.log(2.0)


def test_build_kernel_validates_pairs(u2):
    other = textmodel.uniform_source(("x", "y"))
    with pytest.raises(InputError):
        kernel.build_kernel(u2, other)
    o2 = textmodel.estimate(list("ababab"), order=2)
    with pytest.raises(InputError):
        kernel.build_kernel(u2, o2)


def test_eval_P_by_hand(u2, fig1b_model):
    K = kernel.build_kernel(u2, fig1b_model)
    P = kernel.eval_P(K, -1.0, -1.0)
    # entries P1^{1} P2^{1} on common support
    assert P[0, 0] == pytest.approx(0.5 * 0.2, abs=1e-15)
    assert P[1, 0] == pytest.approx(0.5 * 0.8, abs=1e-15)
    P0 = kernel.eval_P(K, 0.0, 0.0)
    assert np.array_equal(P0, np.ones((2, 2)))


def test_lambda_at_known_values(u2):
    K = kernel.build_kernel(u2, u2)
    # identical uniform binary: lambda(s1, s2) = 2 * 2^{s1} 2^{s2}
    for s1, s2 in ((-1.0, -1.0), (-0.5, -0.25), (0.0, 0.0)):
        expect = 2.0 * 2.0 ** (s1 + s2)
        assert kernel.lambda_at(K, s1, s2) == pytest.approx(expect, rel=1e-12)


def test_lambda_strictly_increasing(battery):
    # strict monotonicity needs a cycle in the common support; the
    # nilpotent pair has lambda identically zero, checked separately
    rng = np.random.default_rng(77)
    for name, m1, m2 in battery:
        K = kernel.build_kernel(m1, m2)
        if name == "nilpotent":
            assert kernel.lambda_at(K, -0.5, -0.5) == 0.0
            continue
        for _ in range(5):
            s1 = float(rng.uniform(-1.5, 0.5))
            s2 = float(rng.uniform(-1.5, 0.5))
            base = kernel.lambda_at(K, s1, s2)
            assert kernel.lambda_at(K, s1 + 0.05, s2) > base, name
            assert kernel.lambda_at(K, s1, s2 + 0.05) > base, name


def test_dominant_spectrum_dense_vs_numpy():
    rng = np.random.default_rng(5)
    for _ in range(10):
        A = rng.random((6, 6)) + 0.05
        spec = kernel.dominant_spectrum(A)
        lam_np = float(np.max(np.abs(np.linalg.eigvals(A))))
        assert spec.lam == pytest.approx(lam_np, rel=1e-10)
        assert spec.zeta @ spec.u == pytest.approx(1.0, rel=1e-9)
        assert A @ spec.u == pytest.approx(spec.lam * spec.u, abs=1e-9)


def test_dominant_spectrum_power_path():
    # above the dense cutoff the shifted power iteration takes over
    rng = np.random.default_rng(6)
    A = rng.random((70, 70)) + 0.01
    spec = kernel.dominant_spectrum(A)
    lam_np = float(np.max(np.abs(np.linalg.eigvals(A))))
    assert spec.lam == pytest.approx(lam_np, rel=1e-9)
    assert spec.zeta @ spec.u == pytest.approx(1.0, rel=1e-8)


def test_lambda_derivatives_match_finite_differences(battery):
    for name, m1, m2 in battery:
        K = kernel.build_kernel(m1, m2)
        if name == "nilpotent":
            # dominant eigenvalue is identically zero (fully degenerate),
            # so derivative extraction must refuse rather than divide by
            # a vanishing spectral gap
            with pytest.raises(errors.NumericError):
                kernel.lambda_derivatives(K, -0.5, -0.5)
            continue
        for s1, s2 in ((-0.9, -0.2), (-0.4, -0.6)):
            an = kernel.lambda_derivatives(K, s1, s2)
            fd = kernel.fd_lambda_derivatives(K, s1, s2)
            for field in ("d1", "d2", "d11", "d22", "d12"):
                a = getattr(an, field)
                f = getattr(fd, field)
                assert a == pytest.approx(f, rel=1e-6, abs=1e-8), (name, field)


def test_same_source_regime(battery):
    for name, m1, m2 in battery:
        if name != "identical-uniform":
            continue
        sol = kernel.solve_kernel(kernel.build_kernel(m1, m2))
        assert sol.regime == "SameSource"
        assert sol.kappa == pytest.approx(1.0, abs=1e-9)


def test_fig1a_boundary_golden_ratio(u2, fig1a_model):
    sol = kernel.solve_kernel(kernel.build_kernel(u2, fig1a_model))
    assert sol.regime == "BoundaryC2Pos"
    golden = math.log((1.0 + math.sqrt(5.0)) / 2.0) / math.log(2.0)
    assert -sol.c0 == pytest.approx(golden, abs=1e-9)
    assert sol.kappa is None


def test_fig1b_saddle_anchors(u2, fig1b_model):
    sol = kernel.solve_kernel(kernel.build_kernel(u2, fig1b_model))
    assert sol.regime == "InteriorSaddle"
    assert sol.kappa == pytest.approx(FIG1B_KAPPA, abs=1e-10)
    assert sol.c1 == pytest.approx(FIG1B_C1, abs=1e-9)
    assert sol.c2 == pytest.approx(FIG1B_C2, abs=1e-9)
    assert sol.kappa == pytest.approx(-(sol.c1 + sol.c2), abs=1e-12)
    # saddle point lies on the kernel with matched slopes
    K = kernel.build_kernel(u2, fig1b_model)
    assert kernel.lambda_at(K, sol.c1, sol.c2) == pytest.approx(1.0, abs=1e-10)
    # slopes match at the saddle up to the minimiser's own location
    # tolerance (the saddle point itself carries ~1e-7 of error)
    der = kernel.lambda_derivatives(K, sol.c1, sol.c2)
    assert der.d1 == pytest.approx(der.d2, rel=1e-5)


def test_nilpotent_classification(nilpotent_pair):
    sol = kernel.solve_kernel(kernel.build_kernel(*nilpotent_pair))
    assert sol.regime == "Nilpotent"
    assert sol.nilpotency_index == 2
    assert sol.gamma0 == pytest.approx(4.0, abs=1e-12)


def test_gamma0_values():
    # single common edge b->a, all three symbols live under both chains:
    # gamma0 = <1|(I + S)|1_C> = 3 + 1 = 4 (2x2 hand computation lifted
    # to the realizable 3-state pair)
    p1 = textmodel.from_matrix(
        ("a", "b", "c"),
        [[0.0, 0.5, 1.0], [1.0, 0.0, 0.0], [0.0, 0.5, 0.0]])
    p2 = textmodel.from_matrix(
        ("a", "b", "c"),
        [[0.0, 0.5, 0.0], [0.0, 0.5, 1.0], [1.0, 0.0, 0.0]])
    assert kernel.gamma0_nilpotent(kernel.build_kernel(p1, p2)) == pytest.approx(4.0)

    # disjoint supports: no common factor ever, gamma0 = 0
    d1 = textmodel.from_matrix(("a", "b"), [[1.0, 1.0], [0.0, 0.0]])
    d2 = textmodel.from_matrix(("a", "b"), [[0.0, 0.0], [1.0, 1.0]])
    sol = kernel.solve_kernel(kernel.build_kernel(d1, d2))
    assert sol.regime == "Nilpotent"
    assert sol.gamma0 == 0.0

    # common support [[0,1],[0,0]] but symbol b dead under source 2:
    # only the word "a" is common (X alternates, Y is all a), gamma0 = 1
    p1 = textmodel.from_matrix(("a", "b"), [[0.0, 1.0], [1.0, 0.0]])
    p2 = textmodel.from_matrix(("a", "b"), [[1.0, 1.0], [0.0, 0.0]])
    assert kernel.gamma0_nilpotent(kernel.build_kernel(p1, p2)) == pytest.approx(1.0)


def test_conjugate_pair_detected(conjugate_pair):
    p1, p2 = conjugate_pair
    K = kernel.build_kernel(p1, p2)
    sol = kernel.solve_kernel(K)
    assert sol.regime == "Conjugate"
    assert sol.kappa == pytest.approx(CONJ_KAPPA, abs=1e-10)
    assert sol.witness is not None
    # conjugacy is a property of the common-support restrictions; the raw
    # transition matrices differ outside the common support
    ok, witness = kernel.is_conjugate(K.P1, K.P2)
    assert ok
    assert witness is not None
    assert np.all(witness > 0)
    assert witness.max() == pytest.approx(1.0)


def test_is_conjugate_recovers_witness():
    # Q_ab = P_ab * x_a / x_b is exactly the conjugacy relation; the
    # detector must accept it and return x up to overall scale
    rng = np.random.default_rng(29)
    P = rng.random((3, 3)) + 0.1
    x = np.array([1.0, 2.5, 0.4])
    Q = P * x[:, None] / x[None, :]
    ok, witness = kernel.is_conjugate(P, Q)
    assert ok
    recovered = witness / witness.max()
    assert recovered == pytest.approx(x / x.max(), rel=1e-9)


def test_conjugacy_detector_rejects_perturbations(conjugate_pair):
    p1, p2 = conjugate_pair
    rng = np.random.default_rng(13)
    Q = p2.transitions.copy()
    bump = 0.015 if Q[1, 1] < 0.5 else -0.015
    Q[1, 1] += bump
    Q[2, 1] -= bump
    ok, _ = kernel.is_conjugate(p1.transitions, Q)
    assert not ok
    # unrelated random stochastic matrix is also rejected
    R = rng.dirichlet(np.ones(4), size=4).T
    ok, _ = kernel.is_conjugate(p1.transitions, R)
    assert not ok


def test_random_pair_interior_saddle(random_pair):
    sol = kernel.solve_kernel(kernel.build_kernel(*random_pair))
    assert sol.regime == "InteriorSaddle"
    assert 0.0 < sol.kappa < 1.0
    assert sol.c1 < 0 and sol.c2 < 0


def test_commensurability_kinds(u2, fig1a_model, fig1b_model):
    # identical uniform entries: full two-dimensional log-lattice
    rep = kernel.commensurability(kernel.build_kernel(u2, u2))
    assert rep.kind == "lattice"
    assert rep.periods[0] == pytest.approx(LN2_PERIOD, rel=1e-9)
    assert rep.periods[1] == pytest.approx(LN2_PERIOD, rel=1e-9)

    rep = kernel.commensurability(kernel.build_kernel(u2, fig1a_model))
    assert rep.kind == "lattice"

    # fig1b: only the uniform side is log-rational, one free direction
    rep = kernel.commensurability(kernel.build_kernel(u2, fig1b_model))
    assert rep.kind == "linear"
    assert rep.periods[0] == pytest.approx(LN2_PERIOD, rel=1e-9)

    # generic entries: no periodicity at all
    g = textmodel.from_matrix(("a", "b"), [[0.3, 0.6], [0.7, 0.4]])
    g2 = textmodel.from_matrix(("a", "b"), [[0.45, 0.55], [0.55, 0.45]])
    rep = kernel.commensurability(kernel.build_kernel(g, g2))
    assert rep.kind == "punctual"
    assert rep.periods == ()


def test_rational_relatedness_detects_scaling():
    # dyadic entries: all logs are integer multiples of ln 2, so the
    # matrix is related with root a multiple of 1 / ln 2
    M = np.array([[0.5, 0.25], [0.125, 0.25]])
    rel = kernel.rational_relatedness(M)
    assert rel.related
    assert rel.omega is not None and rel.omega > 0
    scaled = rel.omega * math.log(2.0)
    assert scaled == pytest.approx(round(scaled), abs=1e-9)
    # generic entries give incommensurable cycle sums
    g = np.array([[0.3, 0.6], [0.7, 0.4]])
    rel = kernel.rational_relatedness(g)
    assert not rel.related
