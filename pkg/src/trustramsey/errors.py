"""Exception hierarchy shared by all solver modules."""


class TrustRamseyError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameter(TrustRamseyError, ValueError):
    def __init__(self, field: str, value, bound: str):
        self.field = field
        self.value = value
        self.bound = bound
        super().__init__(f"{field}={value!r} violates {bound}")


class IncompatibleMode(TrustRamseyError, ValueError):
    pass


class DomainError(TrustRamseyError, ValueError):
    pass


class ModeMismatch(TrustRamseyError, ValueError):
    pass


class SolverError(TrustRamseyError, RuntimeError):
    """A numerical routine could not produce a valid answer."""


class NoConvergence(SolverError):
    pass


class DegenerateAllocation(SolverError):
    pass


class BoundaryMaximum(SolverError):
    """Welfare is still rising at the upper end of the admissible tax interval."""


class ThresholdDegenerate(SolverError):
    """The trust threshold cannot be formed (a hypothesis of the threshold result fails)."""


class DegenerateMarginalUtility(ThresholdDegenerate):
    def __init__(self, message: str, u_g0: float):
        self.u_g0 = u_g0
        super().__init__(message)
