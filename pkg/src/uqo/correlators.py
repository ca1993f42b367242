"""Vacuum two-point functions along inertial and uniformly accelerated worldlines.

All correlators keep the regulator ``epsilon`` explicit.  The accelerated
forms take the proper-time difference ``s`` (real or complex, scalar or
array) and return complex values.
"""

import math
from dataclasses import dataclass

import numpy as np

from .coupling import Coupling
from .errors import DomainError, ResonanceError, UnsupportedDimensionError

CorrelatorValue = complex


@dataclass(frozen=True)
class WorldlineParams:
    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"proper acceleration must be positive, got {self.alpha!r}")


@dataclass(frozen=True)
class RegularizedTimeSplit:
    s: float
    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise DomainError(f"regulator epsilon must be positive, got {self.epsilon!r}")


def worldline_point(tau, params):
    """Event ``(t, x)`` at proper time ``tau`` on the hyperbola ``x**2 - t**2 = 1/alpha**2``."""
    a = params.alpha
    return np.sinh(a * tau) / a, np.cosh(a * tau) / a


def velocity(tau, params):
    """Coordinate velocity ``tanh(alpha tau)`` along the hyperbola."""
    return np.tanh(params.alpha * tau)


def proper_time_at_velocity(v, params):
    """Inverse of :func:`velocity`."""
    if not -1 < v < 1:
        raise DomainError(f"velocity must lie in (-1, 1), got {v!r}")
    return math.atanh(v) / params.alpha


def scalar_normalization(d):
    """``Gamma(d/2 - 1) / (4 pi**(d/2))``, the massless scalar prefactor."""
    if d < 3:
        raise DomainError(f"massless scalar Wightman function needs d >= 3, got d={d}")
    return math.gamma(d / 2 - 1) / (4 * math.pi ** (d / 2))


def wightman_scalar_flat(x_event, y_event, d, epsilon):
    """Massless scalar Wightman function between two events in flat space.

    Events are ``(t, x1, ..., x_{d-1})``.  The regulated separation is
    ``z = sqrt(r**2 - (dt - i epsilon)**2)`` on the principal branch, which
    reduces to ``epsilon + i sgn(dt) Delta`` for purely timelike separation
    and to the spatial distance for equal times.
    """
    if not epsilon > 0:
        raise DomainError(f"regulator epsilon must be positive, got {epsilon!r}")
    x_event = np.asarray(x_event, dtype=float)
    y_event = np.asarray(y_event, dtype=float)
    if x_event.shape != (d,) or y_event.shape != (d,):
        raise DomainError(f"events must be {d}-vectors")
    dt = x_event[0] - y_event[0]
    r2 = float(np.sum((x_event[1:] - y_event[1:]) ** 2))
    z = np.sqrt(complex(r2) - (dt - 1j * epsilon) ** 2)
    return complex(scalar_normalization(d) * z ** (2 - d))


def accel_correlator(coupling, s, alpha, epsilon, d=4):
    """Pulled-back vacuum correlator of ``coupling`` along the hyperbola.

    Vectorised over ``s``; complex ``s`` evaluates the analytic continuation
    used by the KMS test and by contour-shifted quadrature.
    """
    coupling = Coupling.parse(coupling)
    if not epsilon >= 0:
        raise DomainError(f"regulator epsilon must be non-negative, got {epsilon!r}")
    sh = np.sinh((alpha * np.asarray(s) - 1j * epsilon) / 2)
    if coupling is Coupling.LINEAR:
        return scalar_normalization(d) * (alpha / (2j * sh)) ** (d - 2)
    if d != 4:
        raise UnsupportedDimensionError(
            f"{coupling.value} correlator closed form exists only for d=4, got d={d}"
        )
    if coupling is Coupling.QUADRATIC:
        return alpha**4 / (128 * math.pi**4) / sh**4
    return -(alpha**6) / (64 * math.pi**4) / sh**6


def wightman_accel(coupling, split, params, d=4):
    """Regularized correlator at real proper-time difference ``split.s``."""
    return complex(accel_correlator(coupling, split.s, params.alpha, split.epsilon, d))


def kms_sign(coupling, d=4):
    """Sign relating ``W(s + i beta)`` to ``W(-s)``.

    +1 for every coupling and dimension: the pulled-back separation
    ``(2i/alpha) sinh(alpha (s - i eps) / 2)`` flips sign under both
    ``s -> s + i beta`` and ``s -> -s``.  The fermionic correlator is
    periodic, not anti-periodic.
    """
    Coupling.parse(coupling)
    return 1


def kms_residual(coupling, s, params, epsilon, d=4):
    """``|W(s + i beta) - sign * W(-s)|`` with ``beta = 2 pi / alpha``.

    Vanishes linearly as ``epsilon -> 0`` for real ``s != 0``.
    """
    if not epsilon > 0:
        raise DomainError(f"regulator epsilon must be positive, got {epsilon!r}")
    alpha = params.alpha
    if abs(alpha * s) <= epsilon:
        raise ResonanceError(
            f"s={s} lies within the regulator of the coincidence pole"
        )
    beta = 2 * math.pi / alpha
    shifted = accel_correlator(coupling, s + 1j * beta, alpha, epsilon, d)
    mirrored = accel_correlator(coupling, -s, alpha, epsilon, d)
    return float(abs(shifted - kms_sign(coupling, d) * mirrored))
