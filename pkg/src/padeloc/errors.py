"""Exception hierarchy shared by all padeloc modules."""


class PadelocError(Exception):
    """Base class for every error raised by padeloc."""


class DomainError(PadelocError, ValueError):
    """An argument lies outside the domain of the requested function."""


class NumericalError(PadelocError, ArithmeticError):
    """A numerical routine (quadrature, iteration) failed to converge."""


class DegenerateError(PadelocError):
    """Probability-zero degeneracy in random data (singular pencil, ties...).

    Simulations catch this class, discard the replicate and re-draw.
    """


class SingularSeriesError(DegenerateError):
    """Leading series coefficient is zero; the series has no reciprocal."""


class DegeneratePencilError(DegenerateError):
    """The right-hand matrix of a Hankel pencil is singular or ill conditioned."""


class DegenerateNodesError(DegenerateError):
    """Vandermonde nodes coalesce."""


class DegeneracyError(DegenerateError):
    """Sample geometry is degenerate (points at the origin, collinear data)."""


class EstimationError(NumericalError):
    """Fixed-point scatter estimation did not converge."""


class UnavailableStatisticError(PadelocError, ValueError):
    """The requested Padé statistic does not exist at this order."""


class SampleSizeError(PadelocError, ValueError):
    """Too few observations for the requested test."""


class UsageError(PadelocError, ValueError):
    """Invalid command-line or configuration input."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key
