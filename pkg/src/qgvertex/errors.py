"""Exception hierarchy shared by all modules."""


class QGVertexError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(QGVertexError, ValueError):
    pass


class SingularMatrix(QGVertexError, ArithmeticError):
    pass


class NotUnitary(QGVertexError, ValueError):
    pass


class NotAdmissible(QGVertexError, ValueError):
    pass


class RankAmbiguous(QGVertexError, ArithmeticError):
    """A singular value of B sits too close to the rank threshold to decide m."""


class DegenerateDenominator(QGVertexError, ArithmeticError):
    """The signed modulus of a coupling coefficient vanishes for a connected pair.

    The offending ``d`` and pair are stored so the caller can perturb ``d``.
    """

    def __init__(self, message, d=None, pair=None):
        super().__init__(message)
        self.d = d
        self.pair = pair


class KappaTooSmall(QGVertexError, ArithmeticError):
    pass


class SingularM(QGVertexError, ArithmeticError):
    def __init__(self, message, d=None):
        super().__init__(message)
        self.d = d


class DomainViolation(QGVertexError, ValueError):
    pass


class QuadratureNotConverged(QGVertexError, ArithmeticError):
    def __init__(self, message, d=None):
        super().__init__(message)
        self.d = d


class InsufficientPoints(QGVertexError, ValueError):
    pass


class DocumentError(QGVertexError, ValueError):
    """A JSON document is malformed or has inconsistent sizes."""
