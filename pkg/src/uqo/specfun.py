"""Special functions behind the closed-form response functions.

The Lerch transcendent

    Phi(z, n, a) = sum_{k >= 0} z**k / (k + a)**n

is evaluated for real ``0 <= z < 1``, integer order ``n >= 1`` and real shift
``a`` that is not a non-positive integer.  Three evaluators are provided:

* :func:`lerch_phi` -- the defining series, with exact treatment of the
  finitely many negative denominators when ``a < 0``;
* :func:`lerch_phi_asymptotic` -- the large-``a`` expansion in negative-order
  polylogarithms;
* :func:`lerch_phi_near_one` -- the expansion in ``t = -log z`` about
  ``z = 1`` (Hurwitz zeta coefficients), used where the series would need
  millions of terms.

:func:`lerch` picks between them.  Everything is double precision.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import (
    AccuracyError,
    ConvergenceError,
    DomainError,
    SingularShiftError,
)

SERIES_RTOL = 1e-14
_CHUNK = 512
# Above this many terms the direct series hands over to the z -> 1 expansion.
_SERIES_TERM_LIMIT = 20_000


@dataclass(frozen=True)
class LerchArgs:
    """Arguments of Phi(z, n, a) restricted to the real cases used here."""

    z: float
    n: int
    a: float

    def __post_init__(self):
        if not 0.0 <= self.z < 1.0:
            raise DomainError(f"Lerch argument z={self.z!r} outside [0, 1)")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"Lerch order n={self.n!r} must be a positive integer")
        if not math.isfinite(self.a):
            raise DomainError(f"Lerch shift a={self.a!r} is not finite")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "z", float(self.z))
        object.__setattr__(self, "a", float(self.a))


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    tail_bound: float


def ln_gamma(x):
    """Natural logarithm of the gamma function for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


@lru_cache(maxsize=None)
def _eulerian_row(k):
    # A(k, m) for m = 0..k-1; row 0 is the convention A_0(z) = 1.
    if k == 0:
        return (1,)
    return tuple(
        sum((-1) ** j * math.comb(k + 1, j) * (m + 1 - j) ** k for j in range(m + 1))
        for m in range(k)
    )


def polylog_neg(k, z):
    """Polylogarithm of non-positive order, ``Li_{-k}(z) = sum j**k z**j``.

    Uses the rational closed form ``z A_k(z) / (1 - z)**(k + 1)`` with the
    Eulerian polynomial ``A_k``.
    """
    if int(k) != k or k < 0:
        raise DomainError(f"polylog_neg order must be a non-negative integer, got {k!r}")
    if not abs(z) < 1:
        raise DomainError(f"polylog_neg requires |z| < 1, got {z!r}")
    k = int(k)
    coeffs = _eulerian_row(k)
    poly = 0.0
    for c in reversed(coeffs):
        poly = poly * z + c
    return z * poly / (1.0 - z) ** (k + 1)


def _check_shift(a):
    if a <= 0 and a == math.floor(a):
        raise SingularShiftError(f"Lerch shift a={a!r} is a non-positive integer")


def lerch_phi(args, rtol=SERIES_RTOL, max_terms=10_000_000):
    """Direct summation of the Lerch series.

    Terms with negative denominators (``k < -a``) are summed exactly; past
    them the terms decrease geometrically and summation stops once
    ``term / (1 - z)``, a majorant of the remaining tail, falls below
    ``rtol * |sum|``.
    """
    z, n, a = args.z, args.n, args.a
    _check_shift(a)
    if z == 0.0:
        return SeriesResult(a ** -n, 1, 0.0)

    k0 = max(0, math.ceil(-a)) if a < 0 else 0
    log_z = math.log(z)
    parts = []
    if k0:
        k = np.arange(k0, dtype=float)
        parts.extend((np.exp(k * log_z) / (k + a) ** n).tolist())

    start = k0
    total = math.fsum(parts)
    while True:
        if start - k0 > max_terms:
            raise ConvergenceError(
                f"Lerch series did not converge in {max_terms} terms (z={z})"
            )
        k = np.arange(start, start + _CHUNK, dtype=float)
        terms = np.exp(k * log_z) / (k + a) ** n
        majorant = np.abs(terms) / (1.0 - z)
        parts.extend(terms.tolist())
        total = math.fsum(parts)
        scale = max(abs(total), np.finfo(float).tiny)
        done = np.nonzero(majorant < rtol * scale)[0]
        if done.size:
            stop = start + int(done[0]) + 1
            del parts[stop:]
            total = math.fsum(parts)
            tail = float(majorant[done[0]]) * z
            return SeriesResult(total, stop, tail)
        start += _CHUNK


def lerch_phi_asymptotic(args, N, tol=None):
    """Large-shift expansion of Phi in negative-order polylogarithms.

        Phi(z, n, a) ~ a**-n / (1 - z)
                       + sum_{k=1}^{N-1} (-1)**k Li_{-k}(z) (n)_k / k! a**(-k-n)

    The reported ``tail_bound`` is the magnitude of the first omitted term.
    Raises :class:`AccuracyError` when that exceeds ``tol``.
    """
    z, n, a = args.z, args.n, args.a
    if a < 5:
        raise DomainError(f"asymptotic Lerch expansion needs a >= 5, got a={a}")
    if N < 1:
        raise DomainError("asymptotic Lerch expansion needs N >= 1")

    def term(k):
        if k == 0:
            return a ** -n / (1.0 - z)
        poch = math.exp(math.lgamma(n + k) - math.lgamma(n) - math.lgamma(k + 1))
        return (-1) ** k * polylog_neg(k, z) * poch * a ** (-k - n)

    value = math.fsum(term(k) for k in range(N))
    tail = abs(term(N))
    if tol is not None and tail > tol:
        raise AccuracyError(
            f"first dropped asymptotic term {tail:.3e} exceeds tolerance {tol:.3e}"
        )
    return SeriesResult(value, N, tail)


@lru_cache(maxsize=64)
def _bernoulli_numbers(m):
    return tuple(float(b) for b in special.bernoulli(m))


def _bernoulli_poly(m, a):
    b = _bernoulli_numbers(m)
    return math.fsum(math.comb(m, j) * b[j] * a ** (m - j) for j in range(m + 1))


def hurwitz_zeta(s, a):
    """Hurwitz zeta for integer ``s`` and real ``a`` off the non-positive integers.

    ``s >= 2`` sums the finitely many terms with ``k + a <= 0`` directly and
    defers the rest to scipy; ``s <= 0`` uses Bernoulli polynomials.
    """
    _check_shift(a)
    s = int(s)
    if s <= 0:
        m = -s
        return -_bernoulli_poly(m + 1, a) / (m + 1)
    if s == 1:
        raise DomainError("Hurwitz zeta has a pole at s = 1")
    if a > 0:
        return float(special.zeta(s, a))
    shift = math.ceil(-a) + 1
    head = math.fsum((k + a) ** -s for k in range(shift))
    return head + float(special.zeta(s, a + shift))


def lerch_phi_near_one(args, rtol=1e-16, max_terms=200):
    """Expansion of Phi about ``z = 1`` in powers of ``t = -log z``.

        Phi(e**-t, n, a) = e**(a t) [ sum_{k != n-1} zeta(n-k, a) (-t)**k / k!
                                     + (-t)**(n-1) / (n-1)! (psi(n) - psi(a) - log t) ]

    Converges for ``0 < t < 2 pi`` but is only used for small ``t |a|``; intended for small ``t`` where the direct
    series is impractically long.
    """
    z, n, a = args.z, args.n, args.a
    _check_shift(a)
    if z == 0.0:
        raise DomainError("near-one Lerch expansion needs z > 0")
    t = -math.log(z)
    if not t * (abs(a) + 1.0) < 2.0:
        # Coefficients grow like |a|**k; beyond this the sum cancels badly.
        raise DomainError(
            f"near-one Lerch expansion needs -log z * (|a| + 1) < 2, got t={t}, a={a}"
        )

    parts = []
    small = 0
    for k in range(max_terms):
        coef = (-t) ** k / math.factorial(k)
        if k == n - 1:
            term = coef * (special.digamma(n) - special.digamma(a) - math.log(t))
        else:
            term = hurwitz_zeta(n - k, a) * coef
        parts.append(term)
        if k >= n:
            scale = abs(math.fsum(parts))
            small = small + 1 if abs(term) <= rtol * scale else 0
            if small >= 3:
                scale = math.exp(a * t)
                return SeriesResult(scale * math.fsum(parts), k + 1, scale * abs(term))
    raise ConvergenceError(f"near-one Lerch expansion did not converge (t={t}, a={a})")


def series_terms_needed(z, rtol=SERIES_RTOL):
    """Rough count of series terms before the geometric tail drops below ``rtol``."""
    if z == 0.0:
        return 1
    return int(math.log(rtol * (1.0 - z)) / math.log(z)) + 1


def lerch(z, n, a):
    """Phi(z, n, a) as a float, choosing the cheapest accurate evaluator.

    Shifts above 10 try the asymptotic expansion first and keep it only if
    its first dropped term is negligible; ``z`` close to 1 uses the
    expansion about ``z = 1``; everything else sums the series.
    """
    args = LerchArgs(z, n, a)
    if z == 0.0:
        return a ** -n
    if a > 10:
        try:
            return _adaptive_asymptotic(args)
        except AccuracyError:
            pass
    if series_terms_needed(z) > _SERIES_TERM_LIMIT:
        return lerch_phi_near_one(args).value
    return lerch_phi(args).value


def _adaptive_asymptotic(args, max_N=30):
    best = None
    for N in range(2, max_N + 1):
        res = lerch_phi_asymptotic(args, N)
        if best is not None and res.tail_bound > best.tail_bound:
            break
        best = res
        if res.tail_bound <= 1e-16 * abs(res.value):
            return res.value
    raise AccuracyError("asymptotic Lerch expansion not accurate enough here")
