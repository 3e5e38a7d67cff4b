"""Exact and numerical checks for Calabi-Yau 3-folds built as quotients of
(elliptic curve x K3 surface) by an order-4 automorphism.

Modules: algebra (exact polynomials, rational functions, cover elements),
curves (cyclic covers), fibration (j = 1728 elliptic fibrations), lattice
(discriminant forms), hodge (Lefschetz bookkeeping), picard_fuchs
(operators, exponents, monodromy, periods), scenarios and cli.
"""

from .errors import (
    CapacityError,
    DomainError,
    InconsistencyError,
    IntegrationError,
    NonMinimalModel,
    NotCalabiYauAdmissible,
    NotK3,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DomainError",
    "InconsistencyError",
    "IntegrationError",
    "NonMinimalModel",
    "NotCalabiYauAdmissible",
    "NotK3",
]
