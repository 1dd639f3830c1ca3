"""Exception types raised across the package."""


class SimLassoError(ValueError):
    pass


class NonPositiveDefinite(SimLassoError):
    pass


class BadCorrelation(SimLassoError):
    pass


class EmptySupport(SimLassoError):
    pass


class DimensionMismatch(SimLassoError):
    pass


class BadThreshold(SimLassoError):
    pass


class TooFewSamples(SimLassoError):
    pass


class SingularGram(SimLassoError):
    pass


class InfeasibleSubgradient(SimLassoError):
    pass


class BadShape(SimLassoError):
    pass


class SingularBlock(SimLassoError):
    pass


class BadKappa(SimLassoError):
    pass


class NotConvergedWarning(RuntimeWarning):
    """Coordinate descent hit max_iter before the KKT tolerance."""
