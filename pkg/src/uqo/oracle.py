"""Independent numerical evaluation of the response functions.

The closed forms in :mod:`uqo.response` are checked against

* direct quadrature of the Lorentzian-switched response integral with the
  regulator ``epsilon`` kept finite and then extrapolated to zero;
* the truncated sum over the poles of the scalar Wightman function.

Nothing here calls the Lerch transcendent.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from .correlators import accel_correlator
from .coupling import Coupling
from .errors import ConvergenceError, DomainError, ExtrapolationError, ResonanceError
from .response import inertial_term

PI = math.pi
TWO_PI = 2 * math.pi

DEFAULT_SCHEDULE = (1e-3, 5e-4, 2e-4, 1e-4, 5e-5)
# Imaginary parts above this fraction of the real part mean the quadrature failed.
HERMITICITY_TOL = 1e-9
# Extrapolation is declared unstable when the residual exceeds this multiple
# of rel_tol.  The residual overstates the true error by about 10**3 at short
# durations, so the default threshold equals the validation tolerance 1e-6.
UNSTABLE_FACTOR = 1000


@dataclass(frozen=True)
class QuadratureSpec:
    """Settings of the regulated quadrature.

    ``s_max = None`` picks the truncation from the decay of the integrand.
    """

    epsilon_schedule: tuple = DEFAULT_SCHEDULE
    s_max: float = None
    abs_tol: float = 1e-14
    rel_tol: float = 1e-9
    extrapolation_order: int = 3

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilon_schedule)
        object.__setattr__(self, "epsilon_schedule", eps)
        if not eps or any(e <= 0 for e in eps):
            raise DomainError("epsilon schedule must be non-empty and positive")
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise DomainError("epsilon schedule must be strictly decreasing")
        if self.s_max is not None and not self.s_max > 0:
            raise DomainError(f"s_max must be positive, got {self.s_max!r}")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if int(self.extrapolation_order) != self.extrapolation_order or self.extrapolation_order < 1:
            raise DomainError("extrapolation_order must be a positive integer")
        if len(eps) < self.extrapolation_order + 2:
            raise DomainError(
                "epsilon schedule needs at least extrapolation_order + 2 values"
            )


@dataclass(frozen=True)
class OracleResult:
    """Extrapolated value with the per-epsilon data behind it.

    ``extrapolation_residual`` is the relative change of the intercept when
    the fit order is lowered by one.  ``converging`` records whether the
    successive differences shrank by at least 2 along the schedule.
    """

    value: float
    per_epsilon: list
    extrapolation_residual: float
    max_imag: float = 0.0
    converging: bool = True
    warnings: list = field(default_factory=list)


def switching_autocorrelation(s, T):
    """Closed form of ``int du chi((u+s)/2) chi((u-s)/2)``: ``(pi/2) T**3 / (s**2 + T**2)``."""
    if not T > 0:
        raise DomainError(f"switching duration must be positive, got T={T!r}")
    return PI / 2 * T**3 / (s * s + T * T)


def lorentzian_switch(tau, T):
    """Lorentzian switching function ``(T/2)**2 / (tau**2 + (T/2)**2)``."""
    h = T / 2
    return h * h / (tau * tau + h * h)


def switching_autocorrelation_numeric(s, T):
    """Adaptive quadrature of the u-integral, for checking the closed form."""
    if not T > 0:
        raise DomainError(f"switching duration must be positive, got T={T!r}")

    def f(u):
        return lorentzian_switch((u + s) / 2, T) * lorentzian_switch((u - s) / 2, T)

    # Peaks sit at u = +-s; split there so quad sees them.
    cuts = sorted({-abs(s), abs(s)})
    pieces = [(-np.inf, cuts[0])] + list(zip(cuts, cuts[1:])) + [(cuts[-1], np.inf)]
    total = 0.0
    for a, b in pieces:
        if a == b:
            continue
        val, _ = integrate.quad(f, a, b, epsabs=0.0, epsrel=1e-13, limit=200)
        total += val
    return total


def _order(coupling):
    # Exponential decay rate of |W| is order/2.
    return {Coupling.LINEAR: 2, Coupling.QUADRATIC: 4, Coupling.FERMIONIC: 6}[coupling]


def _integrand(coupling, p, epsilon, shift, correlator):
    delta = coupling.delta
    x, y = p.x, p.y
    pref = PI * y**3 / 4 * y ** (2 * delta)

    def f(t):
        sigma = t - 1j * shift
        w = correlator(sigma, epsilon)
        return pref * w * np.exp(-1j * x * sigma) / (sigma * sigma + y * y)

    return f


def _auto_s_max(coupling, f, abs_tol):
    # |W| decays like exp(-order |t| / 2); the tail beyond t is bounded by
    # 2 |f(t)| / rate on each side.
    rate = _order(coupling) / 2
    s = 50.0
    while s < 2000.0:
        bound = (abs(f(s)) + abs(f(-s))) / rate
        if bound < abs_tol:
            return s
        s += 10.0
    return s


def _regulated_integral(coupling, p, epsilon, spec, correlator):
    # Contour moved to Im sigma = -c: the correlator poles sit at Im sigma
    # = epsilon + 2 pi m and the Lorentzian one at -y, so for
    # c < min(y, 2 pi - epsilon) nothing is crossed and the integrand is smooth.
    shift = min(p.y, TWO_PI) / 2
    f = _integrand(coupling, p, epsilon, shift, correlator)
    s_max = spec.s_max if spec.s_max is not None else _auto_s_max(coupling, f, spec.abs_tol)
    total = 0j
    for a, b in ((-s_max, 0.0), (0.0, s_max)):
        val, err = integrate.quad(
            f, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=500,
            complex_func=True,
        )
        if not math.isfinite(abs(val)) or abs(err) > max(spec.abs_tol, 10 * spec.rel_tol * abs(val)):
            raise ConvergenceError(
                f"quadrature did not reach tolerance at epsilon={epsilon}, "
                f"x={p.x}, y={p.y}: error estimate {abs(err):.3e}"
            )
        total += val
    return total


def _default_correlator(coupling):
    def correlator(sigma, epsilon):
        return accel_correlator(coupling, sigma, 1.0, epsilon)

    return correlator


def _intercept(eps, vals, order):
    return float(np.polyfit(eps, vals, order)[-1])


def response_quadrature(coupling, p, spec=None, correlator=None):
    """Oracle for ``fhat(x, y)``.

    Evaluates ``(pi T**3 / 4) int ds W(s - i eps) e^{-i Omega s} / (s**2 + T**2)``
    at ``alpha = 1`` for each ``eps`` in the schedule and extrapolates to
    ``eps = 0`` with a polynomial fit.  ``correlator(sigma, eps)`` overrides
    the pulled-back correlator of ``coupling``.
    """
    coupling = Coupling.parse(coupling)
    spec = spec or QuadratureSpec()
    correlator = correlator or _default_correlator(coupling)

    per_eps = []
    max_imag = 0.0
    for eps in spec.epsilon_schedule:
        val = _regulated_integral(coupling, p, eps, spec, correlator)
        per_eps.append((eps, val.real))
        max_imag = max(max_imag, abs(val.imag))

    eps = np.array([e for e, _ in per_eps])
    vals = np.array([v for _, v in per_eps])
    value = _intercept(eps, vals, spec.extrapolation_order)
    lower = _intercept(eps, vals, spec.extrapolation_order - 1)
    residual = abs(value - lower) / max(abs(value), np.finfo(float).tiny)

    warnings = []
    if max_imag > HERMITICITY_TOL * max(abs(value), spec.abs_tol):
        raise ConvergenceError(
            f"imaginary part {max_imag:.3e} of the response integral is not negligible "
            f"(x={p.x}, y={p.y})"
        )
    diffs = np.abs(np.diff(vals))
    converging = bool(np.all(diffs[1:] < diffs[:-1]))
    if not converging:
        warnings.append("per-epsilon differences do not shrink monotonically")
    if residual > UNSTABLE_FACTOR * spec.rel_tol:
        raise ExtrapolationError(
            f"epsilon extrapolation unstable at x={p.x}, y={p.y}: "
            f"relative residual {residual:.3e}"
        )
    return OracleResult(value, per_eps, residual, max_imag, converging, warnings)


def pole_term(p, k):
    """Contribution ``I_k`` of the ``k``-th pair of Wightman poles (linear coupling)."""
    if k == 0:
        return inertial_term(p)
    u = abs(p.x)
    y = p.y
    b = y / TWO_PI
    csc_part = y * y * math.exp(-u * y) / 16 * (
        1 / (y + TWO_PI * k) ** 2 + 1 / (y - TWO_PI * k) ** 2
    )
    tower = y * y * math.exp(-TWO_PI * k * u) / (64 * PI**2) * (
        1 / (k + b) ** 2 - 1 / (k - b) ** 2
        + TWO_PI * u * (1 / (k + b) - 1 / (k - b))
    )
    return csc_part + tower


def pole_sum_scalar(p, K, tail=True):
    """Truncated pole sum ``I_0 + sum_{k=1}^K I_k`` for the linear coupling.

    The csc-type part of ``I_k`` decays only like ``1/k**2``; with
    ``tail=True`` its remainder beyond ``K`` is added in closed form with
    trigamma functions.  The rest decays like ``exp(-2 pi k |x|)``.
    """
    if int(K) != K or K < 0:
        raise DomainError(f"K must be a non-negative integer, got {K!r}")
    if p.x == 0:
        raise DomainError("pole sum needs x != 0 for the exponential tail to converge")
    b = p.y / TWO_PI
    if abs(b - round(b)) < 1e-12:
        raise ResonanceError(f"y={p.y} sits on a resonance y = 2 pi k")
    terms = [pole_term(p, k) for k in range(int(K) + 1)]
    if tail:
        u = abs(p.x)
        rest = special.polygamma(1, K + 1 + b) + special.polygamma(1, K + 1 - b)
        terms.append(p.y**2 * math.exp(-u * p.y) / 16 * float(rest) / (4 * PI**2))
    return math.fsum(terms)


__all__ = [
    "QuadratureSpec",
    "OracleResult",
    "switching_autocorrelation",
    "switching_autocorrelation_numeric",
    "lorentzian_switch",
    "response_quadrature",
    "pole_term",
    "pole_sum_scalar",
]
