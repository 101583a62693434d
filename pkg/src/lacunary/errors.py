"""Exception hierarchy shared by the library and the CLI."""


class LacunaryError(Exception):
    """Base class for every error raised by this package."""


class PolynomialError(LacunaryError, ValueError):
    pass


class AlgebraicError(LacunaryError, ValueError):
    pass


class BoundExceeded(LacunaryError):
    """A query went past the certification bound of an index set."""


class KernelFitError(LacunaryError):
    pass


class ConstructionError(LacunaryError):
    pass


class HorizonError(LacunaryError):
    pass


class VerificationError(LacunaryError):
    pass


class ConfigError(LacunaryError, ValueError):
    pass
