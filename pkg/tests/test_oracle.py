import math

import numpy as np
import pytest

from uqo.coupling import Coupling
from uqo.correlators import accel_correlator
from uqo.errors import ConvergenceError, DomainError, ExtrapolationError, ResonanceError
from uqo.oracle import (
    QuadratureSpec,
    lorentzian_switch,
    pole_sum_scalar,
    pole_term,
    response_quadrature,
    switching_autocorrelation,
    switching_autocorrelation_numeric,
)
from uqo.response import ResponsePoint, inertial_term, response_closed

TWO_PI = 2 * math.pi


@pytest.mark.parametrize("s,T", [(0.0, 1.0), (0.7, 1.0), (3.0, 2.5), (-5.0, 0.4), (40.0, 3.0)])
def test_switching_autocorrelation_closed_form(s, T):
    assert switching_autocorrelation_numeric(s, T) == pytest.approx(
        switching_autocorrelation(s, T), rel=1e-10
    )


def test_switching_helpers():
    assert lorentzian_switch(0.0, 3.0) == 1.0
    assert lorentzian_switch(1.5, 3.0) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        switching_autocorrelation(0.0, 0.0)


@pytest.mark.parametrize("coupling", list(Coupling))
@pytest.mark.parametrize("x,y", [(-2.0, 1.0), (-0.5, 5.0), (0.5, 2.0), (1.0, 8.0), (2.0, 3.0)])
def test_oracle_agrees_with_closed_form(coupling, x, y):
    p = ResponsePoint(x, y)
    res = response_quadrature(coupling, p)
    assert res.value == pytest.approx(response_closed(coupling, p), rel=1e-9)
    assert res.extrapolation_residual < 1e-8
    assert len(res.per_epsilon) == len(QuadratureSpec().epsilon_schedule)
    assert res.max_imag < 1e-9 * abs(res.value)


def test_oracle_on_resonance():
    p = ResponsePoint(1.0, TWO_PI)
    assert response_quadrature("linear", p).value == pytest.approx(
        0.0030825855202821081578, rel=1e-9
    )


def test_per_epsilon_values_approach_limit():
    res = response_quadrature("quadratic", ResponsePoint(0.5, 3.0))
    errs = [abs(v - res.value) for _, v in res.per_epsilon]
    assert errs == sorted(errs, reverse=True)
    assert res.converging


def test_custom_correlator_pipeline():
    # Feeding 2 W**2 of the scalar correlator reproduces the quadratic response.
    def squared(sigma, eps):
        w = accel_correlator("linear", sigma, 1.0, eps)
        return 2 * w * w

    p = ResponsePoint(-1.0, 2.0)
    res = response_quadrature("quadratic", p, correlator=squared)
    assert res.value == pytest.approx(0.030399319519451747052, rel=1e-9)


def test_non_hermitian_correlator_rejected():
    def skewed(sigma, eps):
        return accel_correlator("linear", sigma, 1.0, eps) * (1 + 0.1j)

    with pytest.raises(ConvergenceError, match="imaginary"):
        response_quadrature("linear", ResponsePoint(0.5, 2.0), correlator=skewed)


def test_coarse_schedule_is_unstable():
    spec = QuadratureSpec(epsilon_schedule=(0.3, 0.2, 0.1, 0.05), extrapolation_order=2)
    with pytest.raises(ExtrapolationError):
        response_quadrature("fermionic", ResponsePoint(0.5, 1.0), spec)


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(epsilon_schedule=(1e-3, 2e-3, 1e-4, 1e-5, 1e-6))
    with pytest.raises(DomainError):
        QuadratureSpec(epsilon_schedule=(1e-3, 1e-4, 1e-5))
    with pytest.raises(DomainError):
        QuadratureSpec(s_max=-1.0)
    with pytest.raises(DomainError):
        QuadratureSpec(extrapolation_order=0)
    spec = QuadratureSpec(epsilon_schedule=[1e-2, 5e-3, 1e-3], extrapolation_order=1)
    assert spec.epsilon_schedule == (1e-2, 5e-3, 1e-3)


def test_fixed_truncation():
    p = ResponsePoint(1.0, 2.0)
    res = response_quadrature("linear", p, QuadratureSpec(s_max=80.0))
    assert res.value == pytest.approx(response_closed("linear", p), rel=1e-9)


def test_pole_zero_is_inertial():
    p = ResponsePoint(-0.8, 3.0)
    assert pole_term(p, 0) == inertial_term(p)


@pytest.mark.parametrize("x,y", [(-2.0, 1.0), (-0.5, 5.0), (0.5, 2.0), (1.0, 8.0), (0.3, 20.0)])
@pytest.mark.parametrize("K", [50, 200])
def test_pole_sum_matches_closed_form(x, y, K):
    p = ResponsePoint(x, y)
    assert pole_sum_scalar(p, K) == pytest.approx(response_closed("linear", p), rel=1e-10)


def test_pole_sum_without_tail_converges_like_inverse_k():
    p = ResponsePoint(0.5, 2.0)
    ref = response_closed("linear", p)
    errs = [abs(pole_sum_scalar(p, K, tail=False) - ref) for K in (50, 100, 200, 400)]
    assert errs == sorted(errs, reverse=True)
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    assert all(1.8 < r < 2.2 for r in ratios)


def test_pole_term_tail_decays():
    p = ResponsePoint(0.5, 3.0)
    mags = [abs(pole_term(p, k)) for k in range(5, 60)]
    assert all(b < a for a, b in zip(mags, mags[1:]))


def test_pole_sum_guards():
    with pytest.raises(ResonanceError):
        pole_sum_scalar(ResponsePoint(0.5, TWO_PI), 10)
    with pytest.raises(DomainError):
        pole_sum_scalar(ResponsePoint(0.0, 1.0), 10)
    with pytest.raises(DomainError):
        pole_sum_scalar(ResponsePoint(0.5, 1.0), 2.5)


def test_oracle_error_grid_is_small():
    worst = 0.0
    for coupling in Coupling:
        for x in (-1.0, 1.0):
            for y in np.linspace(0.5, 12.0, 4):
                p = ResponsePoint(x, float(y))
                ref = response_quadrature(coupling, p).value
                worst = max(worst, abs(response_closed(coupling, p) / ref - 1))
    assert worst < 1e-9
