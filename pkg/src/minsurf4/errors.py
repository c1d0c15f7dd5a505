"""Exception hierarchy shared by all minsurf4 modules."""


class Minsurf4Error(Exception):
    """Base class for every error raised by this package."""


class ZeroQuaternion(Minsurf4Error, ZeroDivisionError):
    pass


class NotOrthonormalFrame(Minsurf4Error, ValueError):
    pass


class ExprSyntaxError(Minsurf4Error, SyntaxError):
    """Parse failure; ``position`` is the 0-based character offset."""

    def __init__(self, message, text="", position=0):
        super().__init__(f"{message} at offset {position}")
        self.text = text
        self.position = position
        self.offset = position


class UnknownFunction(Minsurf4Error, ValueError):
    pass


class SingularPoint(Minsurf4Error, ArithmeticError):
    """An expression could not be evaluated at (or near) node ``z``."""

    def __init__(self, message, z=None):
        super().__init__(message if z is None else f"{message} at z={complex(z):.6g}")
        self.z = z


class WeierstrassViolation(Minsurf4Error, ValueError):
    pass


class DegenerateImmersion(Minsurf4Error, ArithmeticError):
    pass


class TotallyDegeneratePoint(Minsurf4Error, ArithmeticError):
    pass


class CalibrationFailed(Minsurf4Error, RuntimeError):
    pass


class MeshTooCoarse(Minsurf4Error, RuntimeError):
    pass


class OutOfRange(Minsurf4Error, ValueError):
    pass


class NotFlatNormal(Minsurf4Error, ValueError):
    pass


class EmptyDomain(Minsurf4Error, ValueError):
    pass


class FullSphere(Minsurf4Error, ValueError):
    pass


class FrameConstructionFailed(Minsurf4Error, RuntimeError):
    pass


class SingularMass(Minsurf4Error, ArithmeticError):
    pass


class NotSpecialOrthogonal(Minsurf4Error, ValueError):
    pass


class AnglePi(Minsurf4Error, ValueError):
    pass


class NotInIdentityComponent(Minsurf4Error, ValueError):
    """Target of an isotopy is not reachable inside A·SO(4,R)·A^-1.

    ``diagnostics`` carries det, realness residual and orthogonality residual
    of the conjugated matrix A^-1·M·A.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class QuadricViolated(Minsurf4Error, ValueError):
    pass


class NonUnitary(Minsurf4Error, ValueError):
    pass


class NoSignChange(Minsurf4Error, ValueError):
    def __init__(self, message, endpoints=None):
        super().__init__(message)
        self.endpoints = endpoints


class ConfigError(Minsurf4Error, ValueError):
    """Malformed or inconsistent run configuration file."""
