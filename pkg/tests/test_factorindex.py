"""Exact factor counting against brute-force substring sets."""

from __future__ import annotations

import math

import numpy as np
import pytest

from jcx import factorindex


def brute_factors(s) -> set:
    s = tuple(s)
    return {s[i:j] for i in range(len(s)) for j in range(i + 1, len(s) + 1)}


def test_worked_example_single_string():
    # aabaa has 11 non-empty factors, 12 counting the empty word
    idx = factorindex.build("aabaa")
    assert factorindex.string_complexity(idx) == 12
    assert factorindex.string_complexity(idx, include_empty=False) == 11
    assert len(brute_factors("aabaa")) == 11


def test_worked_example_joint():
    # common factors of aabaa and abbba: {empty, a, b, ab, ba}
    common = brute_factors("aabaa") & brute_factors("abbba")
    assert common == {("a",), ("b",), ("a", "b"), ("b", "a")}
    report = factorindex.joint_complexity("aabaa", "abbba")
    assert report.j_excl == 4
    assert report.n == 5 and report.m == 5
    assert not report.no_common_factor


def test_brute_force_complexity_random_strings():
    rng = np.random.default_rng(11)
    for _ in range(300):
        k = int(rng.integers(1, 5))
        n = int(rng.integers(1, 80))
        s = "".join(rng.choice(list("abcd"[:k]), size=n))
        idx = factorindex.build(s)
        assert factorindex.string_complexity(idx, include_empty=False) == len(brute_factors(s))


def test_brute_force_joint_random_pairs():
    rng = np.random.default_rng(12)
    for _ in range(200):
        k = int(rng.integers(1, 5))
        x = "".join(rng.choice(list("abcd"[:k]), size=int(rng.integers(1, 60))))
        y = "".join(rng.choice(list("abcd"[:k]), size=int(rng.integers(1, 60))))
        expect = len(brute_factors(x) & brute_factors(y))
        report = factorindex.joint_complexity(x, y)
        assert report.j_excl == expect, (x, y)
        assert factorindex.common_factor_count(x, y) == expect


def test_single_symbol_and_identical():
    assert factorindex.joint_complexity("a", "a").j_excl == 1
    assert factorindex.joint_complexity("a", "b").j_excl == 0
    # identical strings share every factor: n(n+1)/2 for distinct symbols
    s = "abcd"
    assert factorindex.joint_complexity(s, s).j_excl == 4 * 5 // 2


def test_no_common_factor_flag_and_d():
    report = factorindex.joint_complexity("aaaa", "bbbb")
    assert report.j_excl == 0
    assert report.no_common_factor
    assert report.d == 1.0


def test_discriminant_formula():
    report = factorindex.joint_complexity("aabaa", "abbba")
    expect = 1.0 - math.log(report.j_excl) / math.log(report.n)
    assert report.d == pytest.approx(expect, abs=1e-12)
    assert factorindex.discriminant("aabaa", "abbba") == pytest.approx(expect, abs=1e-12)


def test_token_list_inputs():
    x = ["the", "cat", "sat", "the", "cat"]
    y = ["the", "cat", "ran"]
    expect = len(brute_factors(x) & brute_factors(y))
    report = factorindex.joint_complexity(x, y)
    assert report.j_excl == expect
    assert report.n == 5 and report.m == 3


def test_build_accepts_index_reuse():
    idx = factorindex.build("abracadabra")
    rep1 = factorindex.joint_complexity(idx, "cadabra")
    rep2 = factorindex.joint_complexity("abracadabra", "cadabra")
    assert rep1.j_excl == rep2.j_excl


def test_empty_input_degenerates_gracefully():
    idx = factorindex.build("")
    assert factorindex.string_complexity(idx) == 1
    assert factorindex.string_complexity(idx, include_empty=False) == 0
    report = factorindex.joint_complexity("", "a")
    assert report.j_excl == 0
    assert report.no_common_factor
    assert report.d == 1.0
