"""Expected prefix complexity: recurrence, series, and word-sum routes.

The frozen constants below were derived by hand from the defining sum
C_{n,m} = sum_w (1 - (1 - P1(w))^n)(1 - (1 - P2(w))^m) for identical
uniform binary sources:

- C_{1,1} = sum_k 2^k * 4^{-k} = 1 (geometric series);
- conditional fixed point C_b[1][1] = 1 + (1/2) C_b[1][1] = 2;
- C_{2,2} = 59/21 and the conditional values 8/3, 80/21 follow from the
  same recurrence with binomial splits, solved exactly in rationals.
"""

from __future__ import annotations

import numpy as np
import pytest

from jcx import prefixcx, textmodel
from jcx.errors import InputError, NumericError


def test_frozen_uniform_binary_values(u2):
    table = prefixcx.recurrence_c(u2, u2, 4)
    assert table.value(1, 1) == pytest.approx(1.0, abs=1e-12)
    assert table.value(2, 2) == pytest.approx(59.0 / 21.0, abs=1e-12)
    # conditional tables: identical by symmetry, exact rational values
    cond = table.conditional
    assert cond.shape[0] == 2
    for a in range(2):
        assert cond[a, 1, 1] == pytest.approx(2.0, abs=1e-12)
        assert cond[a, 1, 2] == pytest.approx(8.0 / 3.0, abs=1e-12)
        assert cond[a, 2, 2] == pytest.approx(80.0 / 21.0, abs=1e-12)


def test_series_matches_recurrence_small(battery):
    for name, m1, m2 in battery:
        table = prefixcx.recurrence_c(m1, m2, 8)
        for n in (1, 2, 4, 8):
            for m in (1, 3, 8):
                value, roundoff = prefixcx.series_c_interval(m1, m2, n, m)
                diff = abs(table.value(n, m) - value)
                assert diff <= roundoff + 1e-10, (name, n, m, diff, roundoff)


def test_word_sum_brackets_recurrence(battery):
    for name, m1, m2 in battery:
        table = prefixcx.recurrence_c(m1, m2, 32)
        for n, m in ((1, 1), (2, 5), (8, 8), (32, 32)):
            r = prefixcx.word_sum_c(m1, m2, n, m)
            exact = table.value(n, m)
            assert r.value <= exact + 1e-9, (name, n, m)
            assert exact <= r.value + r.error_bound + 1e-9, (name, n, m)
            assert not r.budget_hit, (name, n, m)


def test_word_sum_rel_target_honored(u2, fig1b_model):
    cfg = prefixcx.WordSumConfig(rel_target=1e-4)
    r = prefixcx.word_sum_c(u2, fig1b_model, 256, 256, cfg)
    assert r.error_bound <= 1e-4 * r.value
    tight = prefixcx.word_sum_c(u2, fig1b_model, 256, 256,
                                prefixcx.WordSumConfig(rel_target=1e-6))
    assert abs(tight.value - r.value) <= r.error_bound + tight.error_bound


def test_word_sum_fixed_mass_tol_mode(u2, fig1b_model):
    cfg = prefixcx.WordSumConfig(mass_tol=1e-8)
    r = prefixcx.word_sum_c(u2, fig1b_model, 64, 64, cfg)
    assert r.mass_tol == 1e-8
    assert r.nodes > 0
    assert r.error_bound > 0.0


def test_symmetry_under_pair_swap(conjugate_pair):
    p1, p2 = conjugate_pair
    t12 = prefixcx.recurrence_c(p1, p2, 6)
    t21 = prefixcx.recurrence_c(p2, p1, 6)
    for n in (1, 3, 6):
        for m in (2, 6):
            assert t12.value(n, m) == pytest.approx(t21.value(m, n), rel=1e-12)


def test_monotone_in_n_and_m(random_pair):
    m1, m2 = random_pair
    table = prefixcx.recurrence_c(m1, m2, 16)
    vals = [table.value(n, n) for n in range(1, 17)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    rows = [table.value(4, m) for m in range(1, 17)]
    assert all(b > a for a, b in zip(rows, rows[1:]))


def test_compare_methods_battery_quick(battery):
    for name, m1, m2 in battery:
        report = prefixcx.compare_methods(m1, m2, 8)
        assert report.within(1e-6), name


def test_nilpotent_prefix_complexity_plateaus(nilpotent_pair):
    p1, p2 = nilpotent_pair
    table = prefixcx.recurrence_c(p1, p2, 256)
    # bounded common factors: C(n, n) climbs to the constant gamma0 = 4
    assert table.value(256, 256) == pytest.approx(4.0, abs=1e-9)
    assert table.value(16, 16) <= table.value(256, 256) + 1e-12


def test_input_validation(u2):
    with pytest.raises(InputError):
        prefixcx.word_sum_c(u2, u2, -1, 4)
    with pytest.raises(InputError):
        prefixcx.recurrence_c(u2, u2, 0)
    with pytest.raises(InputError):
        prefixcx.word_sum_c(u2, u2, 2, 2, prefixcx.WordSumConfig(tau=-1.0))
    with pytest.raises(InputError):
        prefixcx.word_sum_c(u2, u2, 2, 2, prefixcx.WordSumConfig(rel_target=0.0))
    with pytest.raises(InputError):
        prefixcx.word_sum_c(u2, u2, 2, 2, prefixcx.WordSumConfig(mass_tol=-1e-9))
    other = textmodel.uniform_source(("x", "y"))
    with pytest.raises(InputError):
        prefixcx.recurrence_c(u2, other, 4)


def test_zero_sizes_are_zero(u2, fig1b_model):
    r = prefixcx.word_sum_c(u2, fig1b_model, 0, 5)
    assert r.value == 0.0 and r.error_bound == 0.0


def test_caps_raise_capacity_errors(u2):
    from jcx.errors import CapacityError

    with pytest.raises(CapacityError):
        prefixcx.recurrence_c(u2, u2, prefixcx.RECURRENCE_CAP + 1)
    with pytest.raises(CapacityError):
        prefixcx.series_c_interval(u2, u2, prefixcx.SERIES_CAP + 1, 2)


def test_identical_deterministic_sources_diverge():
    det = textmodel.from_matrix(("a", "b"), [[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(NumericError):
        prefixcx.word_sum_c(det, det, 4, 4)


def test_table_range_checks(u2):
    table = prefixcx.recurrence_c(u2, u2, 4)
    with pytest.raises(InputError):
        table.value(5, 1)
    assert table.value(0, 3) == 0.0
