"""Exception hierarchy shared by every module of the package."""


class EllipticChainError(Exception):
    """Base class for all errors raised by ellchain."""


class NonPositivePeriod(EllipticChainError, ValueError):
    pass


class NonFiniteArgument(EllipticChainError, ValueError):
    pass


class PoleProximity(EllipticChainError, ValueError):
    """An argument lies within the pole margin of a lattice point."""

    def __init__(self, message, argument=None, distance=None):
        super().__init__(message)
        self.argument = argument
        self.distance = distance


class SpectralParameterOnLattice(EllipticChainError, ValueError):
    pass


class IndexOutOfRange(EllipticChainError, ValueError):
    pass


class RepeatedIndex(EllipticChainError, ValueError):
    pass


class SiteCountMismatch(EllipticChainError, ValueError):
    pass


class SamplingExhausted(EllipticChainError, RuntimeError):
    """Rejection sampling could not find admissible points."""


class DimensionCap(EllipticChainError, ValueError):
    pass


class InvalidConfig(EllipticChainError, ValueError):
    pass
