"""Exact-arithmetic lab for noncommutative determinants and permanents.

Evaluates the row-ordered (Cayley), cycle-ordered (Moore) and symmetrized
determinant/permanent variants over rationals, prime fields, matrix rings and
rational Clifford algebras, and realizes coefficient-filter reductions
between the permanent, these determinants, and Hamiltonian cycle counting.
"""

from .algebra import (
    CliffordElement,
    CliffordRing,
    FpElement,
    MatrixRing,
    PrimeField,
    RationalField,
    SquareMatrix,
)
from .determinants import RingGrid, cdet, cperm, mdet, mperm, sdet
from .errors import (
    AbpValidationError,
    BudgetExceededError,
    CharacteristicError,
    CircuitError,
    NcdetError,
    NcdetInputError,
    RingMismatchError,
)
from .reductions import (
    hadamard_eval,
    hamcycles_via_moore,
    perm_via_cayley,
    perm_via_clifford,
    perm_via_sdet,
    verify_identities,
)

__version__ = "0.1.0"

__all__ = [
    "CliffordElement",
    "CliffordRing",
    "FpElement",
    "MatrixRing",
    "PrimeField",
    "RationalField",
    "SquareMatrix",
    "RingGrid",
    "cdet",
    "cperm",
    "mdet",
    "mperm",
    "sdet",
    "hadamard_eval",
    "hamcycles_via_moore",
    "perm_via_cayley",
    "perm_via_clifford",
    "perm_via_sdet",
    "verify_identities",
    "AbpValidationError",
    "BudgetExceededError",
    "CharacteristicError",
    "CircuitError",
    "NcdetError",
    "NcdetInputError",
    "RingMismatchError",
    "__version__",
]
