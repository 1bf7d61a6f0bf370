"""Exception types shared across the package."""


class HiveCurveError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(HiveCurveError):
    pass


class NotAHive(HiveCurveError):
    pass


class NotHermitian(HiveCurveError):
    pass


class NotPositiveDefinite(HiveCurveError):
    pass


class NotInvertible(HiveCurveError):
    pass


class ProductNotIdentity(HiveCurveError):
    pass


class NoConvergence(HiveCurveError):
    pass


class ZeroPolynomial(HiveCurveError):
    pass


class NonRealEdgeRoots(HiveCurveError):
    def __init__(self, edge, message=None):
        self.edge = edge
        super().__init__(message or f"edge restriction {edge!r} has non-real or non-positive roots")


class DegenerateRestriction(HiveCurveError):
    pass


class NonpositiveCoefficient(HiveCurveError):
    pass


class NotATriangulation(HiveCurveError):
    pass


class DanglingSegment(HiveCurveError):
    pass


class NotAPath(HiveCurveError):
    pass


class NotHiveDual(HiveCurveError):
    pass


class CornerCoefficientZero(HiveCurveError):
    pass


class SchemaError(HiveCurveError):
    """Raised when a JSON input document does not match its schema."""
