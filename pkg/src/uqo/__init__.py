"""Unruh quantum Otto engine: detector response functions and the thermodynamic cycle."""

__version__ = "1.0.0"

from .coupling import Coupling, scaling_dimension
from .errors import (
    AccuracyError,
    ConvergenceError,
    DomainError,
    ExtrapolationError,
    ResonanceError,
    SingularShiftError,
    UnsupportedDimensionError,
    UQOError,
)
from .otto import (
    CycleParams,
    CycleReport,
    classical_otto_dp,
    contact_times,
    critical_probability,
    perturbative_margin,
    population_change,
    run_cycle,
)
from .response import (
    ResponsePoint,
    delta_phi,
    inertial_term,
    response_closed,
    response_difference,
    response_longtime_rate,
)
