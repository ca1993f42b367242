"""Closed-form detector response with Lorentzian switching in four dimensions.

Every function here works in the dimensionless variables ``x = Omega/alpha``
(signed gap) and ``y = alpha T`` (duration).  The value returned is
``fhat = T**(2 delta) F``, which depends on ``(x, y)`` only; the dimensional
factor ``T**(-2 delta)`` is applied by the cycle code.
"""

import math
from dataclasses import dataclass

import numpy as np

from .coupling import Coupling
from .errors import DomainError
from .specfun import lerch

PI = math.pi
TWO_PI = 2 * math.pi

# Floor on |x|: at x = 0, z = exp(-2 pi |x|) = 1 is outside the Lerch domain.
ZERO_GAP_PROXY = 1e-8

# Within this distance of y = 2 pi k the cancelling csc and Lerch poles are
# summed on a complex circle instead of on the real axis.
RESONANCE_HALF_WIDTH = 1.0
RESONANCE_RADIUS = 2.5
RESONANCE_NODES = 64

ResponseValue = float


@dataclass(frozen=True)
class ResponsePoint:
    """Dimensionless evaluation point: ``x = Omega/alpha``, ``y = alpha T > 0``."""

    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise DomainError(f"duration y must be positive, got y={self.y!r}")
        if not math.isfinite(self.x):
            raise DomainError(f"gap x must be finite, got x={self.x!r}")


# Polynomials multiplying the Lerch differences, as functions of u = |x|.
_P_QUADRATIC = (
    lambda u: u * (1 + u * u),
    lambda u: 1 + 3 * u * u,
    lambda u: 6 * u,
    lambda u: 6.0,
)
_P_FERMIONIC = (
    lambda u: u * (4 + 5 * u * u + u**4),
    lambda u: 4 + 5 * u * u * (3 + u * u),
    lambda u: 10 * u * (3 + 2 * u * u),
    lambda u: 30 * (1 + 2 * u * u),
    lambda u: 120 * u,
    lambda u: 120.0,
)


def heaviside(x):
    """Step function with ``heaviside(0) = 1/2``."""
    if x > 0:
        return 1.0
    if x < 0:
        return 0.0
    return 0.5


def delta_phi(x, y, n):
    """``Phi(e^{-2 pi |x|}, n, 1 + y/2pi) - Phi(e^{-2 pi |x|}, n, 1 - y/2pi)``."""
    if x == 0:
        raise DomainError("delta_phi needs x != 0 (z = 1 is outside the Lerch domain)")
    z = math.exp(-TWO_PI * abs(x))
    b = y / TWO_PI
    return lerch(z, n, 1.0 + b) - lerch(z, n, 1.0 - b)


def inertial_term(p):
    """Response of an inertial detector, ``(exp(-|x| y) + 2 |x| y Theta(-x)) / 16``."""
    u = abs(p.x)
    return (math.exp(-u * p.y) + 2 * u * p.y * heaviside(-p.x)) / 16


def _difference_poly(coupling, u, y):
    # fhat(-x) - fhat(x) for x = u > 0: the odd, Lerch-free part.
    if coupling is Coupling.LINEAR:
        return u * y / 8
    if coupling is Coupling.QUADRATIC:
        p = _P_QUADRATIC
        return (y**3 * p[0](u) + y * p[2](u)) / (96 * PI**2)
    p = _P_FERMIONIC
    return (p[4](u) * y + p[2](u) * y**3 + p[0](u) * y**5) / (240 * PI**2)


def response_difference(coupling, p):
    """``fhat(-x, y) - fhat(x, y)`` for ``x > 0``, evaluated as a polynomial."""
    coupling = Coupling.parse(coupling)
    if not p.x > 0:
        raise DomainError(f"response_difference needs x > 0, got x={p.x!r}")
    return _difference_poly(coupling, p.x, p.y)


def _prefactors(coupling):
    # (polynomials, Lerch order, csc weight, overall constant, tower weight)
    if coupling is Coupling.LINEAR:
        return (lambda u: u, lambda u: 1.0), 2, PI**2, 1 / (64 * PI**2), 1.0
    if coupling is Coupling.QUADRATIC:
        return _P_QUADRATIC, 4, 3 * PI**4, 1 / (1536 * PI**6), 4 * PI**3
    return _P_FERMIONIC, 6, 15 * PI**6, 1 / (3840 * PI**8), 4 * PI**5


def _tower_weights(coupling, u):
    polys, order, _, _, _ = _prefactors(coupling)
    if coupling is Coupling.LINEAR:
        # dphi(2) + 2 pi u dphi(1), written in the common form.
        return {1: TWO_PI * u, 2: 1.0}
    return {n: polys[n - 1](u) / TWO_PI ** (n - 1) for n in range(1, order + 1)}


def _even_part(coupling, u, y, skip=0):
    # The part of fhat that depends on x only through |x| = u.  With
    # skip = k the csc head and the k-th pole term of Phi(z, n, 1 - b) are
    # left out; they are added back by _singular_part.
    _, order, head_w, const, lead = _prefactors(coupling)
    z = math.exp(-TWO_PI * u)
    b = y / TWO_PI
    weights = _tower_weights(coupling, u)

    def lower(n):
        if not skip:
            return lerch(z, n, 1.0 - b)
        head = math.fsum(z**j / (j + 1.0 - b) ** n for j in range(skip - 1))
        return head + z**skip * lerch(z, n, skip + 1.0 - b)

    tower = math.fsum(
        w * (lerch(z, n, 1.0 + b) - lower(n)) for n, w in weights.items()
    )
    value = const * y**order * lead * z * tower
    if not skip:
        value += const * y**order * head_w * math.exp(-u * y) / math.sin(y / 2) ** order
    return value


def _singular_part(coupling, u, y, k):
    # Csc head plus the pole term of the lower Lerch function; the poles at
    # y = 2 pi k cancel.  Accepts complex y.
    _, order, head_w, const, lead = _prefactors(coupling)
    z = math.exp(-TWO_PI * u)
    gap = k - y / TWO_PI
    pole = sum(w / gap**n for n, w in _tower_weights(coupling, u).items())
    head = head_w * np.exp(-u * y) / np.sin(y / 2) ** order
    return const * y**order * (head - lead * z**k * pole)


def _resonance_index(y):
    k = round(y / TWO_PI)
    if k >= 1 and abs(y - TWO_PI * k) < RESONANCE_HALF_WIDTH:
        return k
    return 0


def _even_part_regular(coupling, u, y):
    k = _resonance_index(y)
    if not k:
        return _even_part(coupling, u, y)
    # Mean-value property on a circle about y; the radius balances pole
    # amplification against exp(u r) growth.
    order = _prefactors(coupling)[1]
    radius = min(RESONANCE_RADIUS, order / max(u, 1e-300))
    theta = TWO_PI * (np.arange(RESONANCE_NODES) + 0.5) / RESONANCE_NODES
    ring = _singular_part(coupling, u, y + radius * np.exp(1j * theta), k)
    return _even_part(coupling, u, y, skip=k) + float(np.mean(ring).real)


def response_closed(coupling, p):
    """Dimensionless response ``fhat(x, y) = T**(2 delta) F(Omega, T)``.

    Sum of the Lorentzian-pole term, the Lerch tower and, for ``x < 0``,
    the de-excitation polynomial.  ``|x|`` is floored at
    ``ZERO_GAP_PROXY`` so that ``x = 0`` is defined; near ``y = 2 pi k`` the removable singularity
    is resolved by contour averaging of the cancelling pole terms.
    """
    coupling = Coupling.parse(coupling)
    u = max(abs(p.x), ZERO_GAP_PROXY)
    value = _even_part_regular(coupling, u, p.y)
    step = heaviside(-p.x)
    if step:
        value += step * _difference_poly(coupling, u, p.y)
    return value


def response_longtime_rate(coupling, omega, alpha):
    """Long-time transition rate ``(2 pi / ||chi||^2) lim F / T``.

    Thermal at the Unruh temperature ``alpha / 2 pi`` for every coupling.
    """
    coupling = Coupling.parse(coupling)
    if not alpha > 0:
        raise DomainError(f"acceleration must be positive, got {alpha!r}")
    w = abs(omega)
    if coupling is Coupling.LINEAR:
        density = 1 / TWO_PI
    elif coupling is Coupling.QUADRATIC:
        density = (alpha**2 + w**2) / (24 * PI**3)
    else:
        density = (4 * alpha**4 + 5 * alpha**2 * w**2 + w**4) / (60 * PI**3)
    if w == 0:
        # |Omega| n_B -> alpha / 2 pi: the rate stays finite at zero gap.
        return density * alpha / TWO_PI
    occupation = heaviside(-omega) + 1.0 / math.expm1(TWO_PI * w / alpha)
    return density * w * occupation


# ||chi_hat||^2 for the Lorentzian switching function.
LORENTZIAN_NORM = PI**2 / 2


def scaled_rate(coupling, p):
    """Finite-duration estimate of :func:`response_longtime_rate` at ``alpha = 1``.

    ``(2 pi / ||chi||^2) F / T`` with ``F = fhat / T**(2 delta)`` and ``T = y``.
    """
    coupling = Coupling.parse(coupling)
    fhat = response_closed(coupling, p)
    return TWO_PI / LORENTZIAN_NORM * fhat / p.y ** (1 + 2 * coupling.delta)
