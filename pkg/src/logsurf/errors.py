"""Exception hierarchy shared by every module."""


class LogSurfaceError(Exception):
    """Base class for all errors raised by logsurf."""


class DimensionMismatch(LogSurfaceError, ValueError):
    pass


class NotNegativeDefinite(LogSurfaceError):
    pass


class UnknownCurve(LogSurfaceError, KeyError):
    pass


class InvalidMultiplicity(LogSurfaceError, ValueError):
    pass


class NotMinusOneCurve(LogSurfaceError, ValueError):
    pass


class ThetaNotEffective(LogSurfaceError, ValueError):
    pass


class NotNefOnList(LogSurfaceError):
    pass


class NotConnected(LogSurfaceError, ValueError):
    pass


class NotPseudoEffective(LogSurfaceError):
    """The class is not pseudo-effective relative to the supplied curves.

    ``support`` holds the working support (curve names) at the point of
    failure; it is the certificate reported by the CLI.
    """

    def __init__(self, message, support=()):
        super().__init__(message)
        self.support = tuple(support)


class AmbiguousConfiguration(LogSurfaceError):
    pass


class NotNefAndBig(LogSurfaceError):
    pass


class StartNotNef(LogSurfaceError):
    pass


class RationalityViolation(LogSurfaceError):
    pass
