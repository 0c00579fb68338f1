"""Implementation dispatch: compiled core when built, pure Python otherwise.

jcx._speed is an optional Cython extension.  Every entry point here has a
pure fallback with the same traversal order and arithmetic, so results
agree to floating-point roundoff and all external behaviour (CLI, file
formats) is identical either way.  HAVE_NATIVE tells callers (and the
benchmark script) which core is active.
"""

from __future__ import annotations

import numpy as np

from . import _pure

try:
    from . import _speed  # type: ignore[attr-defined]

    HAVE_NATIVE = True
except ImportError:  # pragma: no cover - build-environment dependent
    _speed = None
    HAVE_NATIVE = False

# Word-sum walks get a larger node budget when the compiled core is in.
DEFAULT_NODE_BUDGET = 30_000_000 if HAVE_NATIVE else 1_500_000


def markov_path(transitions: np.ndarray, start: int, uniforms: np.ndarray) -> np.ndarray:
    """State path through the chain, one state per uniform draw."""
    cum = np.cumsum(np.ascontiguousarray(transitions, dtype=float), axis=0)
    uniforms = np.ascontiguousarray(uniforms, dtype=float)
    if HAVE_NATIVE:
        return _speed.markov_path_c(cum, int(start), uniforms)
    return _pure.markov_path(cum, int(start), uniforms)


def word_sum_single(P1, P2, v1, v2, R, n, m, tau, mass_tol, max_depth, node_budget):
    args = [np.ascontiguousarray(x, dtype=float) for x in (P1, P2, v1, v2, R)]
    if HAVE_NATIVE:
        return _speed.word_sum_single_c(
            *args, float(n), float(m), float(tau), float(mass_tol), int(max_depth), int(node_budget)
        )
    return _pure.word_sum_single(
        *args, float(n), float(m), float(tau), float(mass_tol), int(max_depth), int(node_budget)
    )


def word_sum_table(P1, P2, v1, v2, R, N, tau, mass_tol, max_depth, node_budget):
    args = [np.ascontiguousarray(x, dtype=float) for x in (P1, P2, v1, v2, R)]
    if HAVE_NATIVE:
        return _speed.word_sum_table_c(
            *args, int(N), float(tau), float(mass_tol), int(max_depth), int(node_budget)
        )
    return _pure.word_sum_table(
        *args, int(N), float(tau), float(mass_tol), int(max_depth), int(node_budget)
    )
