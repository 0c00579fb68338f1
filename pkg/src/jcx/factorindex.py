"""Exact factor counting via suffix automata.

The factor index of a text X is its suffix automaton: at most 2n - 1
states, each non-initial state v covering len(v) - len(link(v)) distinct
factors, so |distinct non-empty factors| is the sum of those spans.  The
number of factors common to two texts is the number of non-empty paths
from the initial pair in the product of the two automata, counted by
memoised traversal (the product of two DAGs is a DAG).

The discriminant of two texts is d(X, Y) = 1 - ln(J) / ln(min(n, m))
where J is the number of common non-empty factors: near 0 for texts from
the same source (J grows polynomially) and near 1 for unrelated ones
(J stays logarithmic).  J = 0 is reported as d = 1 with the
no_common_factor flag; J = 1 gives d = 1 exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _native, _pure

# Dense (compiled) representation limits: alphabet width of the dense
# transition table, and total table cells.
DENSE_MAX_ALPHABET = 64
DENSE_MAX_CELLS = 20_000_000


@dataclass
class FactorIndex:
    """Suffix automaton of one text; see module docstring."""

    n: int
    dense: bool
    # dense representation
    lens: np.ndarray | list
    links: np.ndarray | list
    trans: np.ndarray | list
    vocab: tuple = ()
    _dict_trans: list | None = field(default=None, repr=False)

    @property
    def n_states(self) -> int:
        return len(self.lens)

    def as_dicts(self) -> list:
        """Transitions as per-state {symbol: state} dicts (built lazily)."""
        if not self.dense:
            return self.trans
        if self._dict_trans is None:
            rows = []
            trans = self.trans
            vocab = self.vocab
            for v in range(self.n_states):
                row = {}
                for j, c in enumerate(vocab):
                    t = trans[v, j]
                    if t >= 0:
                        row[c] = int(t)
                rows.append(row)
            self._dict_trans = rows
        return self._dict_trans


def build(text) -> FactorIndex:
    """Index a text (str, bytes, or any sequence of hashable symbols)."""
    tokens = list(text)
    vocab: dict = {}
    for c in tokens:
        if c not in vocab:
            vocab[c] = len(vocab)
    k = max(1, len(vocab))
    use_dense = (
        _native.HAVE_NATIVE
        and len(vocab) <= DENSE_MAX_ALPHABET
        and (2 * len(tokens) + 2) * k <= DENSE_MAX_CELLS
    )
    if use_dense:
        ids = np.fromiter((vocab[c] for c in tokens), dtype=np.int32, count=len(tokens))
        lens, links, trans, _ = _native._speed.build_sa_dense(ids, k)
        return FactorIndex(len(tokens), True, lens, links, trans, tuple(vocab))
    lens, links, trans = _pure.build_sa(tokens)
    return FactorIndex(len(tokens), False, lens, links, trans, tuple(vocab))


def string_complexity(index: FactorIndex, include_empty: bool = True) -> int:
    """Distinct factor count of the indexed text (empty word included by default)."""
    if index.dense:
        lens = np.asarray(index.lens)
        links = np.asarray(index.links)
        base = int((lens[1:] - lens[links[1:]]).sum())
    else:
        base = _pure.distinct_factors(index.lens, index.links)
    return base + 1 if include_empty else base


def _as_index(x) -> FactorIndex:
    return x if isinstance(x, FactorIndex) else build(x)


def common_factor_count(x, y) -> int:
    """Number of non-empty factors shared by two texts (or prebuilt indexes)."""
    ix = _as_index(x)
    iy = _as_index(y)
    if ix.dense and iy.dense:
        vocab2 = {c: j for j, c in enumerate(iy.vocab)}
        sym1 = []
        sym2 = []
        for j1, c in enumerate(ix.vocab):
            j2 = vocab2.get(c)
            if j2 is not None:
                sym1.append(j1)
                sym2.append(j2)
        if not sym1:
            return 0
        return int(
            _native._speed.joint_count_dense(
                ix.trans,
                iy.trans,
                np.asarray(sym1, dtype=np.int64),
                np.asarray(sym2, dtype=np.int64),
                iy.n_states,
            )
        )
    return _pure.joint_count(ix.as_dicts(), iy.as_dicts())


@dataclass
class JointReport:
    """Joint complexity of a text pair."""

    n: int
    m: int
    j_excl: int
    d: float
    no_common_factor: bool = False

    @property
    def j_incl(self) -> int:
        """Common factor count including the empty word."""
        return self.j_excl + 1


def joint_complexity(x, y) -> JointReport:
    """Count common factors of two texts and attach the discriminant."""
    ix = _as_index(x)
    iy = _as_index(y)
    j = common_factor_count(ix, iy)
    n, m = ix.n, iy.n
    n_min = min(n, m)
    if j <= 0:
        return JointReport(n, m, 0, 1.0, no_common_factor=True)
    if j == 1 or n_min <= 1:
        return JointReport(n, m, j, 1.0)
    return JointReport(n, m, j, 1.0 - math.log(j) / math.log(n_min))


def discriminant(x, y) -> float:
    """d(X, Y) = 1 - ln(common factors) / ln(min length); see module docstring."""
    return joint_complexity(x, y).d
