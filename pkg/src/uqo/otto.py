"""The Unruh quantum Otto cycle.

Units: energies in units of the cold gap ``Omega_1 = 1``.  Reduced
accelerations use the gap active during the contact, ``a_hot = alpha_H /
Omega_2`` and ``a_cold = alpha_C / Omega_1``.  ``lambda2`` is the
dimensionless coupling ``(lambda Omega_1**delta)**2``.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

from scipy.special import expit

from .coupling import Coupling
from .errors import DomainError
from .response import ResponsePoint, response_closed, response_difference

# |dp| above this is outside first-order perturbation theory.
DP_LIMIT = 0.1
MARGIN_VALID = 100.0
MARGIN_MARGINAL = 10.0

DEFAULT_LAMBDA2 = {
    Coupling.LINEAR: 1e-2,
    Coupling.QUADRATIC: 1e-2,
    Coupling.FERMIONIC: 1e-6,
}


def default_lambda2(coupling):
    """Coupling strength at the bound used for the figures."""
    return DEFAULT_LAMBDA2[Coupling.parse(coupling)]


def _check_velocity(v):
    if not 0 < v < 1:
        raise DomainError(f"velocity must lie in (0, 1), got v={v!r}")


def _check_positive(name, value):
    if not (value > 0 and math.isfinite(value)):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class CycleParams:
    """Parameters of one cycle; ``lambda2=None`` takes the coupling's default."""

    coupling: Coupling
    a_hot: float
    a_cold: float
    v: float
    gap_ratio: float = 2.0
    lambda2: float = None

    def __post_init__(self):
        object.__setattr__(self, "coupling", Coupling.parse(self.coupling))
        if self.lambda2 is None:
            object.__setattr__(self, "lambda2", DEFAULT_LAMBDA2[self.coupling])
        _check_velocity(self.v)
        _check_positive("a_hot", self.a_hot)
        _check_positive("a_cold", self.a_cold)
        _check_positive("lambda2", self.lambda2)
        if not (self.gap_ratio > 1 and math.isfinite(self.gap_ratio)):
            raise DomainError(f"gap ratio must exceed 1, got {self.gap_ratio!r}")


@dataclass(frozen=True)
class DetectorState:
    """Excited-state population of the diagonal qubit state."""

    p: float

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise DomainError(f"population must lie in [0, 1], got p={self.p!r}")


@dataclass(frozen=True)
class PopulationChange:
    """Population change at one contact, with its perturbativity verdict."""

    dp: float
    p_after: float
    margin: float
    validity: str
    flagged: bool
    reasons: tuple = ()


@dataclass(frozen=True)
class CycleReport:
    """Work and heat per step in units of ``Omega_1``.

    ``flagged`` is set when either contact is outside perturbation theory
    (margin below 10, ``|dp| > 0.1`` or a population leaving ``[0, 1]``);
    ``warnings`` also lists marginal contacts.
    """

    p0: float
    dp_hot: float
    dp_cold: float
    W1: float
    Q2: float
    W3: float
    Q4: float
    W_total: float
    Q_total: float
    W_ext: float
    efficiency: float
    positive_work: bool
    perturbative_margin_hot: float
    perturbative_margin_cold: float
    closure_residual: float
    flagged: bool = False
    warnings: list = field(default_factory=list)


def contact_times(v, alpha):
    """Proper time to accelerate from rest to speed ``v``: ``2 artanh(v) / alpha``."""
    if not 0 <= v < 1:
        raise DomainError(f"velocity must lie in [0, 1), got v={v!r}")
    _check_positive("alpha", alpha)
    return 2 * math.atanh(v) / alpha


def reduced_duration(v):
    """``y = alpha T = 2 artanh(v)``, the same for every acceleration."""
    _check_velocity(v)
    return 2 * math.atanh(v)


def _amplitude(coupling, a, v, lambda2, gap):
    # lambda**2 T**(-2 delta) in Omega_1 units, T = y / (a gap).
    return lambda2 * (a * gap / reduced_duration(v)) ** (2 * coupling.delta)


@lru_cache(maxsize=4096)
def _responses(coupling, a, v):
    p = ResponsePoint(1.0 / a, reduced_duration(v))
    return response_closed(coupling, p), response_difference(coupling, p)


def population_change(coupling, a, p, v, lambda2, gap_in_omega1=1.0):
    """First-order change of the excited population during one contact.

    ``lambda2 (a gap / y)**(2 delta) [(1 - 2p) fhat(1/a, y) - p dfhat(1/a, y)]``
    with ``y = 2 artanh(v)`` and ``dfhat = fhat(-x) - fhat(x)``.
    """
    coupling = Coupling.parse(coupling)
    _check_positive("a", a)
    _check_velocity(v)
    _check_positive("lambda2", lambda2)
    _check_positive("gap_in_omega1", gap_in_omega1)
    DetectorState(p)
    f, df = _responses(coupling, a, v)
    return _amplitude(coupling, a, v, lambda2, gap_in_omega1) * ((1 - 2 * p) * f - p * df)


def perturbative_margin(coupling, a, v, lambda2, gap_in_omega1=1.0):
    """Ratio of the two sides of ``(a / artanh v)**(1 - 2 delta) >> lambda2 gap**(2 delta)``."""
    coupling = Coupling.parse(coupling)
    _check_positive("a", a)
    _check_velocity(v)
    _check_positive("lambda2", lambda2)
    d = coupling.delta
    return (a / math.atanh(v)) ** (1 - 2 * d) / (lambda2 * gap_in_omega1 ** (2 * d))


def margin_category(margin):
    """``"valid"`` for margin >= 100, ``"marginal"`` for 10..100, else ``"invalid"``."""
    if margin >= MARGIN_VALID:
        return "valid"
    if margin >= MARGIN_MARGINAL:
        return "marginal"
    return "invalid"


def assess_population_change(coupling, a, p, v, lambda2, gap_in_omega1=1.0):
    """:func:`population_change` plus the perturbativity checks used for shading."""
    dp = population_change(coupling, a, p, v, lambda2, gap_in_omega1)
    margin = perturbative_margin(coupling, a, v, lambda2, gap_in_omega1)
    validity = margin_category(margin)
    reasons = []
    if validity == "invalid":
        reasons.append(f"perturbative margin {margin:.3g} below {MARGIN_MARGINAL:g}")
    if abs(dp) > DP_LIMIT:
        reasons.append(f"|dp| = {abs(dp):.3g} exceeds {DP_LIMIT:g}")
    if not 0 <= p + dp <= 1:
        reasons.append(f"p + dp = {p + dp:.3g} leaves [0, 1]")
    return PopulationChange(dp, p + dp, margin, validity, bool(reasons), tuple(reasons))


def _contacts(params):
    c, v, lam = params.coupling, params.v, params.lambda2
    amp_h = _amplitude(c, params.a_hot, v, lam, params.gap_ratio)
    amp_c = _amplitude(c, params.a_cold, v, lam, 1.0)
    f_h, df_h = _responses(c, params.a_hot, v)
    f_c, df_c = _responses(c, params.a_cold, v)
    return amp_h, f_h, df_h, amp_c, f_c, df_c


def critical_probability(params):
    """Initial population ``p0 = P / (1 + 2P)`` that closes the cycle.

    ``P = (A_H F_H + A_C F_C) / (A_H dF_H + A_C dF_C)`` where ``A`` carries
    the duration scaling of each contact.
    """
    amp_h, f_h, df_h, amp_c, f_c, df_c = _contacts(params)
    denom = amp_h * df_h + amp_c * df_c
    if not denom > 0:
        raise DomainError("degenerate cycle: the detailed-balance terms cancel")
    big_p = (amp_h * f_h + amp_c * f_c) / denom
    return big_p / (1 + 2 * big_p)


def _closed_hot_change(params):
    # dp_hot at p0, rearranged so that identical contacts give exactly zero:
    # A_H A_C (F_H dF_C - F_C dF_H) / (A_H (dF_H + 2 F_H) + A_C (dF_C + 2 F_C)).
    amp_h, f_h, df_h, amp_c, f_c, df_c = _contacts(params)
    num = amp_h * amp_c * (f_h * df_c - f_c * df_h)
    return num / (amp_h * (df_h + 2 * f_h) + amp_c * (df_c + 2 * f_c))


def run_cycle(params):
    """Close the cycle at ``p0`` and tabulate work and heat per step."""
    r = params.gap_ratio
    c, v, lam = params.coupling, params.v, params.lambda2
    p0 = critical_probability(params)
    dp_hot = _closed_hot_change(params)
    dp_cold = population_change(c, params.a_cold, p0, v, lam, 1.0)

    w1 = (r - 1) * p0
    q2 = r * dp_hot
    w3 = -(r - 1) * (p0 + dp_hot)
    q4 = dp_cold
    # W1 + W3 cancels p0 against p0 + dp_hot; the closed form keeps every digit.
    w_total = 0.0 - (r - 1) * dp_hot
    q_total = q2 + q4
    w_ext = 0.0 - w_total

    warnings = []
    margins = {}
    flagged = False
    for label, a, gap in (("hot", params.a_hot, r), ("cold", params.a_cold, 1.0)):
        pc = assess_population_change(c, a, p0, v, lam, gap)
        margins[label] = pc.margin
        flagged |= pc.flagged
        if pc.validity != "valid":
            warnings.append(f"{label} contact perturbative margin {pc.margin:.3g} ({pc.validity})")
        warnings.extend(f"{label} contact: {reason}" for reason in pc.reasons
                        if "margin" not in reason)

    return CycleReport(
        p0=p0,
        dp_hot=dp_hot,
        dp_cold=dp_cold,
        W1=w1,
        Q2=q2,
        W3=w3,
        Q4=q4,
        W_total=w_total,
        Q_total=q_total,
        W_ext=w_ext,
        efficiency=1 - 1 / r,
        positive_work=w_ext > 0,
        perturbative_margin_hot=margins["hot"],
        perturbative_margin_cold=margins["cold"],
        closure_residual=dp_hot + dp_cold,
        flagged=flagged,
        warnings=warnings,
    )


def unruh_temperature(alpha):
    """``alpha / 2 pi``."""
    _check_positive("alpha", alpha)
    return alpha / (2 * math.pi)


def classical_otto_dp(T_hot, T_cold, omega1, omega2):
    """Population change of the thermal quantum Otto cycle.

    ``1 / (1 + exp(Omega_2 / T_H)) - 1 / (1 + exp(Omega_1 / T_C))``.
    """
    for name, value in (("T_hot", T_hot), ("T_cold", T_cold), ("omega1", omega1), ("omega2", omega2)):
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value!r}")
    return float(expit(-omega2 / T_hot) - expit(-omega1 / T_cold))
