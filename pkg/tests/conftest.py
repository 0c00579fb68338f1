"""Shared model fixtures: the six-pair battery used across the suite.

All transition matrices are column-stochastic (transitions[a, b] is the
probability of symbol a given previous symbol b).  The battery spans
every asymptotic regime: same source, boundary power law, interior
saddle, nilpotent plateau, conjugate pair, and a generic random pair.
"""

from __future__ import annotations

import numpy as np
import pytest

from jcx import textmodel

F = 1.0 / 8.0


@pytest.fixture(scope="session")
def u2():
    return textmodel.uniform_source(("0", "1"))


@pytest.fixture(scope="session")
def fig1a_model():
    return textmodel.from_matrix(("0", "1"), [[0.0, 0.5], [1.0, 0.5]])


@pytest.fixture(scope="session")
def fig1b_model():
    return textmodel.from_matrix(("0", "1"), [[0.2, 0.8], [0.8, 0.2]])


@pytest.fixture(scope="session")
def nilpotent_pair():
    p1 = textmodel.from_matrix(
        ("a", "b", "c"),
        [[0.0, 0.5, 1.0],
         [1.0, 0.0, 0.0],
         [0.0, 0.5, 0.0]],
    )
    p2 = textmodel.from_matrix(
        ("a", "b", "c"),
        [[0.0, 0.5, 0.0],
         [0.0, 0.5, 1.0],
         [1.0, 0.0, 0.0]],
    )
    return p1, p2


@pytest.fixture(scope="session")
def conjugate_pair():
    p1 = textmodel.from_matrix(
        ("a", "b", "c", "d"),
        [[0.0, 0.0, 5 * F, 4 * F],
         [0.0, F, F, 2 * F],
         [4 * F, 2 * F, 2 * F, F],
         [4 * F, 5 * F, 0.0, F]],
    )
    p2 = textmodel.from_matrix(
        ("a", "b", "c", "d"),
        [[4 * F, 5 * F, 0.0, 4 * F],
         [4 * F, F, F, 2 * F],
         [0.0, 2 * F, 2 * F, F],
         [0.0, 0.0, 5 * F, F]],
    )
    return p1, p2


@pytest.fixture(scope="session")
def random_pair():
    rng = np.random.default_rng(20240817)
    cols1 = rng.dirichlet(np.ones(3), size=3).T + 0.02
    cols2 = rng.dirichlet(np.ones(3), size=3).T + 0.02
    cols1 /= cols1.sum(axis=0)
    cols2 /= cols2.sum(axis=0)
    alphabet = ("x", "y", "z")
    return textmodel.from_matrix(alphabet, cols1), textmodel.from_matrix(alphabet, cols2)


@pytest.fixture(scope="session")
def battery(u2, fig1a_model, fig1b_model, nilpotent_pair, conjugate_pair, random_pair):
    """(name, model1, model2) triples covering all regimes."""
    return [
        ("identical-uniform", u2, u2),
        ("fig1a", u2, fig1a_model),
        ("fig1b", u2, fig1b_model),
        ("nilpotent", *nilpotent_pair),
        ("conjugate", *conjugate_pair),
        ("random", *random_pair),
    ]
