"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class ContractViolation(ValueError):
    """An input breaks a documented precondition (e.g. a non-symmetric matrix)."""


class EquilibriumError(ValueError):
    """Base class for equilibrium solver failures."""


class NoUniqueEquilibrium(EquilibriumError):
    pass


class NotInterior(EquilibriumError):
    pass


class IntegrationError(RuntimeError):
    """The integrator produced a non-finite derivative."""

    def __init__(self, message, t=None):
        super().__init__(message if t is None else f"{message} (t={t!r})")
        self.t = t


class DomainError(ValueError):
    """A Lyapunov evaluation was requested outside the open simplex."""

    def __init__(self, message, t=None, index=None):
        where = []
        if index is not None:
            where.append(f"sample {index}")
        if t is not None:
            where.append(f"t={t!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.t = t
        self.index = index
