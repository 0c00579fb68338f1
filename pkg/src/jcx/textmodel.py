"""Markov source models over finite alphabets.

A source of order r on alphabet A is stored flattened to order 1 over the
context space A^r: `transitions` is column-stochastic with
transitions[i, j] = P(context_i | context_j), contexts enumerated in
lexicographic alphabet order.  Only shift-compatible transitions
(context_j[1:] == context_i[:-1]) can be nonzero, so each column has at
most |A| nonzero entries.

Conventions used throughout the package:

* columns sum to 1 within 1e-12 (validated on every construction path);
* the stationary vector pi solves P pi = pi with residual <= 1e-10,
  computed by damped power iteration pi <- (P pi + pi) / 2 from uniform
  (same fixed points as P, but converges for periodic supports too);
* entropy rate h = -sum_j pi_j sum_i P_ij ln P_ij in nats, with
  0 ln 0 = 0.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, InputError, NumericError

COLUMN_TOL = 1e-12
STATIONARY_RESIDUAL_TOL = 1e-10
DEFAULT_STATE_CAP = 4096


def state_cap() -> int:
    """Context-space cap; override with the JCX_STATE_CAP environment variable."""
    raw = os.environ.get("JCX_STATE_CAP", "")
    if not raw:
        return DEFAULT_STATE_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InputError(f"JCX_STATE_CAP must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise InputError(f"JCX_STATE_CAP must be positive, got {cap}")
    return cap


def _check_columns(matrix: np.ndarray) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InputError(f"transition matrix must be square, got shape {matrix.shape}")
    if np.any(matrix < 0):
        i, j = np.argwhere(matrix < 0)[0]
        raise InputError(f"negative transition probability at ({i}, {j}): {matrix[i, j]}")
    sums = matrix.sum(axis=0)
    bad = np.where(np.abs(sums - 1.0) > COLUMN_TOL)[0]
    if bad.size:
        j = int(bad[0])
        raise InputError(f"column {j} sums to {sums[j]!r}, not 1 within {COLUMN_TOL}")


@dataclass
class MarkovModel:
    """Flattened order-r Markov source; see module docstring for layout."""

    alphabet: tuple
    order: int
    transitions: np.ndarray
    states: tuple = field(repr=False)
    _stationary: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.order < 1:
            raise InputError(f"order must be >= 1, got {self.order}")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise InputError("alphabet contains duplicate symbols")
        expected = len(self.alphabet) ** self.order
        if expected > state_cap():
            raise CapacityError(
                f"|A|^order = {expected} exceeds the state cap {state_cap()}; "
                "raise JCX_STATE_CAP to override"
            )
        self.transitions = np.asarray(self.transitions, dtype=float)
        if self.transitions.shape != (expected, expected):
            raise InputError(
                f"transition matrix shape {self.transitions.shape} does not match "
                f"|A|^order = {expected}"
            )
        _check_columns(self.transitions)

    # -- equality is exact: save/load round trips must be bit-identical --
    def __eq__(self, other):
        if not isinstance(other, MarkovModel):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.order == other.order
            and self.transitions.shape == other.transitions.shape
            and bool(np.all(self.transitions == other.transitions))
        )

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def state_index(self) -> dict:
        idx = getattr(self, "_state_index", None)
        if idx is None:
            idx = {s: i for i, s in enumerate(self.states)}
            self._state_index = idx
        return idx


def _states_for(alphabet: tuple, order: int) -> tuple:
    return tuple(itertools.product(alphabet, repeat=order))


def from_matrix(alphabet: Iterable, matrix, order: int = 1) -> MarkovModel:
    """Build a model from an explicit column-stochastic context matrix."""
    alphabet = tuple(alphabet)
    return MarkovModel(alphabet, order, np.asarray(matrix, dtype=float), _states_for(alphabet, order))


def memoryless(alphabet: Iterable, probs: Sequence[float]) -> MarkovModel:
    """Order-1 model of an i.i.d. source: every column is `probs`."""
    alphabet = tuple(alphabet)
    p = np.asarray(probs, dtype=float)
    if p.shape != (len(alphabet),):
        raise InputError(f"probs length {p.shape} does not match alphabet size {len(alphabet)}")
    return from_matrix(alphabet, np.tile(p[:, None], (1, len(alphabet))))


def uniform_source(alphabet: Iterable) -> MarkovModel:
    """Uniform memoryless source on `alphabet`."""
    alphabet = tuple(alphabet)
    k = len(alphabet)
    return memoryless(alphabet, np.full(k, 1.0 / k))


def estimate(
    corpus: Sequence,
    order: int,
    smoothing: float = 0.0,
    alphabet: Iterable | None = None,
) -> MarkovModel:
    """Fit an order-r model from one token sequence by conditional counts.

    With smoothing s > 0 the estimate is (count + s) / (total + s|A|)
    (Laplace family).  With s = 0 a context never seen in the corpus gets
    a uniform column, so the matrix stays stochastic.
    """
    corpus = list(corpus)
    if smoothing < 0:
        raise InputError(f"smoothing must be >= 0, got {smoothing}")
    if alphabet is None:
        if not corpus:
            raise InputError("cannot infer an alphabet from an empty corpus")
        alphabet = tuple(sorted(set(corpus)))
    else:
        alphabet = tuple(alphabet)
        known = set(alphabet)
        for tok in corpus:
            if tok not in known:
                raise InputError(f"corpus symbol {tok!r} is not in the given alphabet")
    if len(corpus) <= order:
        raise InputError(
            f"corpus of length {len(corpus)} is too short to fit order {order} "
            "(needs at least order + 1 symbols)"
        )
    states = _states_for(alphabet, order)
    if len(alphabet) ** order > state_cap():
        raise CapacityError(
            f"|A|^order = {len(alphabet) ** order} exceeds the state cap {state_cap()}"
        )
    sym_index = {a: i for i, a in enumerate(alphabet)}
    state_index = {s: i for i, s in enumerate(states)}
    k = len(alphabet)
    counts = np.zeros((k, len(states)))
    ctx = tuple(corpus[:order])
    for tok in corpus[order:]:
        counts[sym_index[tok], state_index[ctx]] += 1.0
        ctx = ctx[1:] + (tok,)

    trans = np.zeros((len(states), len(states)))
    for j, s in enumerate(states):
        totals = counts[:, j].sum()
        if totals == 0 and smoothing == 0:
            col = np.full(k, 1.0 / k)
        else:
            col = (counts[:, j] + smoothing) / (totals + smoothing * k)
        for yi, y in enumerate(alphabet):
            trans[state_index[s[1:] + (y,)], j] = col[yi]
    return MarkovModel(alphabet, order, trans, states)


def stationary(model: MarkovModel, tol: float = 1e-15, max_iter: int = 1_000_000) -> np.ndarray:
    """Stationary distribution by damped power iteration from uniform.

    The tolerance sits near machine precision because the series and
    word-sum routes inherit any slack in pi; a stall guard accepts the
    float plateau when a large chain cannot reach tol, and the residual
    check below stays the correctness gate either way.
    """
    if model._stationary is not None:
        return model._stationary
    P = model.transitions
    pi = np.full(P.shape[0], 1.0 / P.shape[0])
    best = np.inf
    stale = 0
    converged = False
    for _ in range(max_iter):
        nxt = 0.5 * (P @ pi + pi)
        delta = float(np.abs(nxt - pi).sum())
        pi = nxt
        if delta <= tol:
            converged = True
            break
        if delta < best:
            best = delta
            stale = 0
        else:
            stale += 1
            if stale >= 64:
                converged = True
                break
    if not converged:
        raise NumericError(
            f"stationary iteration did not converge within {max_iter} steps "
            f"(last step {np.abs(P @ pi - pi).sum():.3e})"
        )
    pi = pi / pi.sum()
    residual = np.abs(P @ pi - pi).max()
    if residual > STATIONARY_RESIDUAL_TOL:
        raise NumericError(f"stationary residual {residual:.3e} exceeds {STATIONARY_RESIDUAL_TOL}")
    model._stationary = pi
    return pi


def entropy_rate(model: MarkovModel) -> float:
    """Entropy rate in nats per symbol."""
    pi = stationary(model)
    P = model.transitions
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(P > 0, P * np.log(P), 0.0)
    return float(-(pi * plogp.sum(axis=0)).sum())


def symbol_stationary(model: MarkovModel) -> np.ndarray:
    """Stationary distribution of single symbols (marginal of the context chain)."""
    pi = stationary(model)
    out = np.zeros(len(model.alphabet))
    sym_index = {a: i for i, a in enumerate(model.alphabet)}
    for s, w in zip(model.states, pi):
        out[sym_index[s[-1]]] += w
    return out


def generate(model: MarkovModel, length: int, seed: int) -> list:
    """Sample `length` symbols; deterministic per (model, length, seed).

    The initial context is drawn from the stationary distribution, then
    each step draws the successor state from its column.  The same
    pre-sampled uniform stream and the same inverse-CDF rule are used by
    the compiled and pure paths, so outputs are identical either way.
    """
    if length < 0:
        raise InputError(f"length must be >= 0, got {length}")
    if length == 0:
        return []
    pi = stationary(model)
    rng = np.random.default_rng(seed)
    steps = max(0, length - model.order)
    uniforms = rng.random(steps + 1)
    cum_pi = np.cumsum(pi)
    start = min(int(np.searchsorted(cum_pi, uniforms[0], side="right")), len(pi) - 1)

    out = list(model.states[start][: min(length, model.order)])
    if steps:
        from . import _native

        path = _native.markov_path(model.transitions, start, uniforms[1:])
        last_syms = [s[-1] for s in model.states]
        out.extend(last_syms[i] for i in path)
    return out


def render(symbols: Sequence) -> str | bytes:
    """Join generated symbols back into text (str symbols) or bytes (int symbols)."""
    if symbols and isinstance(symbols[0], int):
        return bytes(symbols)
    if any(len(str(s)) > 1 for s in symbols):
        return " ".join(str(s) for s in symbols)
    return "".join(str(s) for s in symbols)


def tokenize(data: bytes | str, mode: str) -> list:
    """Split raw input into symbols: 'bytes' -> ints, 'chars'/'ws' -> strings."""
    if mode == "bytes":
        if isinstance(data, str):
            data = data.encode("utf-8")
        return list(data)
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"input is not valid UTF-8 ({exc}); use the bytes tokenizer") from exc
    if mode == "chars":
        return list(data)
    if mode == "ws":
        return data.split()
    raise InputError(f"unknown tokenizer mode {mode!r} (expected bytes, chars or ws)")


def save(model: MarkovModel, path: str) -> None:
    """Write the model as JSON; floats keep full precision via repr."""
    payload = {
        "alphabet": list(model.alphabet),
        "order": model.order,
        "transitions": [[repr(float(x)) for x in row] for row in model.transitions],
        "stationary": [repr(float(x)) for x in stationary(model)],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load(path: str) -> MarkovModel:
    """Read a model written by save(); validates shape and stochasticity."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"model file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"model file {path} is not valid JSON: {exc}") from exc
    try:
        alphabet = tuple(payload["alphabet"])
        order = int(payload["order"])
        rows = payload["transitions"]
        trans = np.array([[float(x) for x in row] for row in rows], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"model file {path} is missing or mangles a required field: {exc}") from exc
    model = MarkovModel(alphabet, order, trans, _states_for(alphabet, order))
    if "stationary" in payload:
        pi = np.array([float(x) for x in payload["stationary"]], dtype=float)
        if pi.shape == (model.n_states,) and np.abs(model.transitions @ pi - pi).max() <= STATIONARY_RESIDUAL_TOL:
            model._stationary = pi / pi.sum()
    return model


def bundled_model_path(name: str) -> str:
    """Path of a model shipped with the package (e.g. 'lang_a', 'lang_b')."""
    here = os.path.dirname(os.path.abspath(__file__))
    path = os.path.join(here, "data", f"{name}.json")
    if not os.path.exists(path):
        raise InputError(f"no bundled model named {name!r}")
    return path
