"""Joint string complexity of Markov sources.

The joint complexity J(X, Y) of two strings is the number of distinct
factors (substrings) they share.  For texts drawn from two Markov
sources its expectation grows like a power n^kappa with 0 < kappa < 1
when the sources differ, and linearly when they coincide, which makes
the normalised discrepancy d = 1 - ln J / ln n a practical same-source
test even on short texts.

Modules:

- textmodel: fit, save, sample, and inspect column-stochastic Markov
  models (transitions[a, b] = P(a | b));
- factorindex: exact factor counting via suffix automata, the J(X, Y)
  ground truth;
- prefixcx: the expected prefix-complexity C(n, m) of two sources by
  exact recurrence, analytic series, and a pruned word-sum with honest
  error brackets;
- kernel: the two-variable Schur kernel P(s1, s2), its dominant
  eigenvalue, and the regime classification (same source, nilpotent,
  conjugate, boundary, interior saddle);
- asymptotics: closed-form growth laws per regime, including the
  saddle-point constants and truncated periodic corrections;
- cli: the jcx command-line front end.
"""

from __future__ import annotations

from . import asymptotics, factorindex, kernel, prefixcx, textmodel
from .errors import CapacityError, InputError, JcxError, NumericError
from .factorindex import JointReport, discriminant, joint_complexity, string_complexity
from .kernel import KernelSolution, SchurKernel, build_kernel, solve_kernel
from .prefixcx import WordSumConfig, WordSumResult, recurrence_c, word_sum_c
from .textmodel import MarkovModel, estimate, generate, load, save

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "InputError",
    "JcxError",
    "JointReport",
    "KernelSolution",
    "MarkovModel",
    "NumericError",
    "SchurKernel",
    "WordSumConfig",
    "WordSumResult",
    "asymptotics",
    "build_kernel",
    "discriminant",
    "estimate",
    "factorindex",
    "generate",
    "joint_complexity",
    "kernel",
    "load",
    "prefixcx",
    "recurrence_c",
    "save",
    "solve_kernel",
    "string_complexity",
    "textmodel",
    "word_sum_c",
]
