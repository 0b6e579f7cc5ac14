"""Self-similar free-particle Madelung flow: closed forms and verification."""

from .core import (
    ComplexAmplitude,
    LabPoint,
    PhysicalParams,
    SimilarityExponents,
    SimilarityPoint,
    SolutionConstants,
    density,
    eta_of,
    phase,
    quantum_potential_eq9,
    shape_density,
    shape_velocity_split,
    shape_velocity_sum,
    simplified_shape_density,
    velocity,
    wavefunction_canonical,
    wavefunction_eq8,
)
from .errors import (
    ConvergenceError,
    DomainError,
    MadelungError,
    PoleError,
    RangeTooNarrow,
    SingularityError,
    StepTooLarge,
    StiffnessError,
    ToleranceNotMet,
    UnmatchedRoot,
    ZeroCrossing,
)
from .series import SampleSeries
from .specfun import (
    DEFAULT_ACCURACY,
    BesselOrder,
    EvalAccuracy,
    bessel_j,
    bessel_j_deriv,
    bessel_y,
    bessel_y_deriv,
    cross_product,
    gamma,
)

__version__ = "0.1.0"
