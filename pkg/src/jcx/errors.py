"""Error taxonomy shared by the library and the CLI.

Three failure classes, mapped to CLI exit codes 2/3/4:

* InputError: the caller handed us something malformed (non-stochastic
  matrix, unknown symbol, unreadable model file, mismatched alphabets).
* NumericError: the computation is well-posed but numerically out of
  reach (non-convergent iteration, divergent series, gamma pole,
  degenerate spectral gap where a derivative is needed).
* CapacityError: a documented size cap was exceeded (state-space cap,
  recurrence table cap).
"""

from __future__ import annotations


class JcxError(Exception):
    """Base class for all errors raised by this package."""


class InputError(JcxError):
    """Malformed or inconsistent caller input."""

    exit_code = 2


class NumericError(JcxError):
    """Computation failed to converge or hit a singular configuration."""

    exit_code = 3


class CapacityError(JcxError):
    """A documented resource cap was exceeded."""

    exit_code = 4
