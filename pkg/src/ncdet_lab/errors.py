"""Exception types shared across the package.

Exit-code mapping used by the CLI: NcdetInputError -> 2,
BudgetExceededError / CharacteristicError -> 3, everything else -> 1.
"""


class NcdetError(Exception):
    """Base class for all package errors."""


class NcdetInputError(NcdetError):
    """Malformed user input: bad JSON, bad dimensions, unknown ring."""


class RingMismatchError(NcdetError):
    """Operands live in different rings (or incompatible dimensions)."""


class BudgetExceededError(NcdetError):
    """A factorial or term budget would be exceeded; evaluation refused."""


class CharacteristicError(NcdetError):
    """The ring characteristic divides a factorial that must be inverted."""


class AbpValidationError(NcdetError):
    """A branching program violates its structural invariants."""


class CircuitError(NcdetError):
    """A circuit is malformed (cycle, bad reference, degree mismatch)."""
