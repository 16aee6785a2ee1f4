"""Error taxonomy shared by every module.

The CLI maps these onto exit codes: InputError and its subclasses -> 1,
PrecisionExhaustedError -> 2, InvariantError -> 3.
"""


class BseqError(Exception):
    """Base class for all library errors."""


class InputError(BseqError):
    """A caller-supplied value violates an operation's precondition."""


class ConfigurationError(InputError):
    """A rule name, parameter, or build setting is invalid."""


class RangeError(InputError):
    """An argument lies outside the supported range (e.g. n > sieve limit)."""


class PrecisionExhaustedError(BseqError):
    """A certified bound cannot be met with the available precision.

    Raised instead of returning an uncertified value; callers with a wider
    precision budget (e.g. a longer decimal literal) can retry.
    """


class InvariantError(BseqError):
    """An internal consistency check failed; indicates a library bug."""
