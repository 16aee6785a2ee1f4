"""Integer sequences from prime-factorization interval rules.

A sequence is defined by a rule n -> I(n), a finite union of intervals: an
integer belongs to the sequence when every prime of its sorted factorization
lies in the rule's interval set evaluated at the product of the earlier
primes. The library generates such sequences, computes exponential sums and
continued-fraction convergents with certified precision, measures exact star
discrepancy and Beatty-sequence hit counts, and ships empirical verification
suites plus a small CLI.
"""

from .errors import (
    BseqError,
    ConfigurationError,
    InputError,
    InvariantError,
    PrecisionExhaustedError,
    RangeError,
)

__version__ = "0.1.0"

__all__ = [
    "BseqError",
    "ConfigurationError",
    "InputError",
    "InvariantError",
    "PrecisionExhaustedError",
    "RangeError",
    "__version__",
]
