"""Exception types raised by the library."""


class CrepantError(Exception):
    """Base class for all library errors."""


class DegeneratePole(CrepantError, ZeroDivisionError):
    pass


class PreconditionViolated(CrepantError, ValueError):
    pass


class OutOfClosedFormDomain(CrepantError, ValueError):
    pass


class MonodromyViolation(CrepantError, ValueError):
    pass


class NontrivialMonodromyRequired(CrepantError, ValueError):
    pass


class DegenerateRank(CrepantError, ValueError):
    """r1 + r1bar = 0: the correlator formula has no leading Chern character."""


class DegenerateDegree(CrepantError, ValueError):
    """(2g-3+m)! with a negative argument in the 3D correlator."""


class LiOrderPositive(CrepantError, ValueError):
    """A polylogarithm of positive order (transcendental) would be required."""


class RegistryMismatch(CrepantError, ValueError):
    pass


class BadConstantTerm(CrepantError, ValueError):
    pass


class OutOfTruncation(CrepantError, IndexError):
    pass
