"""Exception hierarchy.

Every error carries a plain message; stage labels are prepended by the
callers that chain solvers (calibration, CLI).
"""


class VarHbarError(Exception):
    """Base class for all package errors."""


class DomainError(VarHbarError, ValueError):
    """Evaluation outside the region where the field is defined/positive."""


class GridTooSmall(VarHbarError, ValueError):
    pass


class NoSolution(VarHbarError, ValueError):
    pass


class NoPositiveRoot(NoSolution):
    pass


class NegativeRadicand(NoSolution):
    pass


class DegenerateVacuum(VarHbarError, ValueError):
    pass


class StepUnderflow(VarHbarError, RuntimeError):
    pass


class Unbound(VarHbarError, ValueError):
    pass


class TooFewPeriods(VarHbarError, ValueError):
    pass


class EccentricityOutOfRange(VarHbarError, ValueError):
    pass


class SingularDenominator(VarHbarError, ZeroDivisionError):
    pass


class NegativeVSquared(VarHbarError, ValueError):
    pass


class FlatCurvature(VarHbarError, ValueError):
    pass


class NonPositiveScaleFactor(VarHbarError, ValueError):
    pass


class NegativeRHS(VarHbarError, ValueError):
    pass


class CFLViolation(VarHbarError, ValueError):
    pass


class ConfigError(VarHbarError, ValueError):
    pass
