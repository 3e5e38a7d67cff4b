"""Exception hierarchy shared by all modules."""


class DomainError(ValueError):
    """Input is outside the mathematical domain of an operation."""


class NonMinimalModel(DomainError):
    """A Weierstrass coefficient vanishes to order >= 4 somewhere."""


class NotK3(DomainError):
    """The declared homogeneous degree does not give a K3 surface."""


class InconsistencyError(DomainError):
    """Linear bookkeeping has no nonnegative integral solution."""


class NotCalabiYauAdmissible(DomainError):
    """A fixed curve of positive genus obstructs the Calabi-Yau quotient."""


class CapacityError(DomainError):
    """An exhaustive search would exceed the configured bound."""


class IntegrationError(RuntimeError):
    """Numerical ODE transport failed."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
