"""Exception hierarchy shared by every module."""


class LatticeError(Exception):
    """Base class for all library errors."""


class DegenerateEvaluation(LatticeError):
    """Evaluation at a pole of a Laurent object or r-matrix."""


class ShapeError(LatticeError):
    pass


class Singularity(LatticeError):
    """A guarded denominator fell below the singularity threshold."""


class InvalidDispersion(LatticeError):
    pass


class PeriodicityViolation(LatticeError):
    pass


class NoConvergence(LatticeError):
    pass


class SingularJacobian(LatticeError):
    pass


class NotDivisible(LatticeError):
    """No polynomial quotient exists for a noncommutative division."""


class UnknownGenerator(LatticeError):
    pass


class NonInvertiblePower(LatticeError):
    pass


class InvalidParam(LatticeError):
    pass


class NonInvertible(LatticeError):
    pass


class ConfigError(LatticeError):
    pass


class FormatError(LatticeError):
    pass
