"""Exception hierarchy. Every error raised by the package derives from BuildingError."""


class BuildingError(Exception):
    pass


# coxeter
class UnsupportedDiagram(BuildingError):
    pass


class SizeLimit(BuildingError):
    pass


class BadGenerator(BuildingError):
    pass


class BadType(BuildingError):
    pass


# gf_geometry
class NotPrime(BuildingError):
    pass


class AmbientMismatch(BuildingError):
    pass


class Singular(BuildingError):
    pass


class FormNotPreserved(BuildingError):
    pass


# building
class AxiomViolation(BuildingError):
    pass


class Disconnected(AxiomViolation):
    pass


class UnknownChamber(BuildingError):
    pass


class NotAFace(BuildingError):
    pass


class NotOpposite(BuildingError):
    pass


class NotInStar(BuildingError):
    pass


# convexity
class EmptyFixedSet(BuildingError):
    pass


class NotConvex(BuildingError):
    pass


# crengine
class NotInOmega(BuildingError):
    pass


class HypothesisViolated(BuildingError):
    pass


class NotIrreducible(BuildingError):
    pass


class NotChamberComplex(BuildingError):
    pass


class TraceAssertionFailed(BuildingError):
    """An intermediate of the opposite construction failed a property it must have."""


class HypothesisNotMet(BuildingError):
    pass


class IsotropyViolated(BuildingError):
    pass


class UnsupportedGeometry(BuildingError):
    pass


# cli
class ParseError(BuildingError):
    pass


class HashMismatch(BuildingError):
    pass
