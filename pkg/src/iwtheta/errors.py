"""Exception hierarchy shared by every module of the package."""


class IwthetaError(ValueError):
    """Base class for all package errors."""


# arith
class NotPrime(IwthetaError):
    pass


class NotUnit(IwthetaError):
    pass


class NotOrdinary(IwthetaError):
    pass


class ZeroVector(IwthetaError):
    pass


# modsym / eigenform
class ResourceLimit(IwthetaError):
    pass


class AmbiguousEigensystem(IwthetaError):
    pass


class NonRational(IwthetaError):
    pass


class DegreeTooLarge(IwthetaError):
    pass


class SingularCurve(IwthetaError):
    pass


class BadReductionUnsupported(IwthetaError):
    pass


class ConductorMismatch(IwthetaError):
    pass


# groupring
class NotDivisor(IwthetaError):
    pass


class BadModulus(IwthetaError):
    pass


class NotSquareFree(IwthetaError):
    pass


class NotPrimitiveRoot(IwthetaError):
    pass


# mazurtate
class GcdViolation(IwthetaError):
    pass


class BadPrime(IwthetaError):
    pass


class InsufficientLevels(IwthetaError):
    pass


class NotSupersingularZero(IwthetaError):
    pass


class WeightParity(IwthetaError):
    pass


# kurihara
class NotKolyvagin(IwthetaError):
    pass


# analytic
class PrecisionUnreachable(IwthetaError):
    pass


# cli
class ConfigError(IwthetaError):
    pass


class CorruptCache(IwthetaError):
    pass
