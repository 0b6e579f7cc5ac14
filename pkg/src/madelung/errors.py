"""Exception types shared across the package."""


class MadelungError(Exception):
    """Base class for all library errors."""


class DomainError(MadelungError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Gamma function evaluated at (or too close to) a non-positive integer."""


class ConvergenceError(MadelungError):
    """Neither evaluation regime can attain the requested accuracy."""


class SingularityError(MadelungError):
    """Evaluation point inside the exclusion radius of a pole."""


class ZeroCrossing(MadelungError):
    """ODE march reached a zero of the density shape function.

    The partial trajectory accumulated before the crossing is attached
    as the ``series`` attribute.
    """

    def __init__(self, message, series=None):
        super().__init__(message)
        self.series = series


class StiffnessError(MadelungError):
    """Adaptive step size underflowed the hard floor."""


class StepTooLarge(MadelungError):
    """Finite-difference step fails the Richardson consistency check."""


class RangeTooNarrow(MadelungError):
    """Root scan found no sign change although roots were requested."""


class UnmatchedRoot(MadelungError):
    """A density zero has no quantum-potential pole within tolerance."""


class ToleranceNotMet(MadelungError):
    """A quadrature panel could not be resolved to the requested tolerance."""
