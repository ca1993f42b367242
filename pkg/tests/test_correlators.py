import math

import numpy as np
import pytest

from uqo.correlators import (
    RegularizedTimeSplit,
    WorldlineParams,
    accel_correlator,
    kms_residual,
    kms_sign,
    proper_time_at_velocity,
    scalar_normalization,
    velocity,
    wightman_accel,
    wightman_scalar_flat,
    worldline_point,
)
from uqo.coupling import Coupling, scaling_dimension
from uqo.errors import DomainError, ResonanceError, UnsupportedDimensionError
from uqo.validate import kms_slope


def test_scalar_normalization_four_dimensions():
    assert scalar_normalization(4) == pytest.approx(1 / (4 * math.pi**2), rel=1e-15)


def test_flat_wightman_matches_textbook_form():
    eps = 1e-3
    for dt, r in [(0.3, 1.2), (2.0, 0.5), (-1.1, 0.0), (0.0, 0.7)]:
        got = wightman_scalar_flat([dt, r, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], 4, eps)
        want = 1 / (4 * math.pi**2 * (r**2 - (dt - 1j * eps) ** 2))
        assert abs(got - want) <= 1e-13 * abs(want)


def test_flat_wightman_equal_time_is_positive():
    r = 0.8
    got = wightman_scalar_flat([0.0, r, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], 4, 1e-12)
    assert got.real == pytest.approx(1 / (4 * math.pi**2 * r**2), rel=1e-10)
    assert abs(got.imag) < 1e-8


def test_flat_wightman_guards():
    with pytest.raises(DomainError):
        wightman_scalar_flat([0, 1, 0, 0], [0, 0, 0, 0], 4, 0.0)
    with pytest.raises(DomainError):
        wightman_scalar_flat([0, 1, 0], [0, 0, 0, 0], 4, 1e-3)


def test_worldline_on_hyperbola():
    params = WorldlineParams(1.7)
    tau = np.linspace(-2, 2, 9)
    t, x = worldline_point(tau, params)
    np.testing.assert_allclose(x**2 - t**2, 1 / 1.7**2, rtol=1e-12)
    v = 0.8
    assert velocity(proper_time_at_velocity(v, params), params) == pytest.approx(v, rel=1e-14)
    with pytest.raises(DomainError):
        proper_time_at_velocity(1.0, params)
    with pytest.raises(DomainError):
        WorldlineParams(0.0)


def test_accelerated_equals_flat_on_hyperbola():
    # The pulled-back correlator is the flat one evaluated between points
    # of the worldline, with the regulator in proper time.
    alpha, eps = 0.9, 1e-9
    params = WorldlineParams(alpha)
    for tau1, tau2 in [(0.4, -0.3), (1.5, 0.2), (-0.7, 0.9)]:
        t1, x1 = worldline_point(tau1, params)
        t2, x2 = worldline_point(tau2, params)
        flat = wightman_scalar_flat([t1, x1, 0, 0], [t2, x2, 0, 0], 4, eps)
        accel = accel_correlator("linear", tau1 - tau2, alpha, 0.0)
        assert abs(flat - accel) <= 1e-6 * abs(accel)


def test_accelerated_linear_closed_form():
    alpha, s = 1.3, 0.8
    got = accel_correlator(Coupling.LINEAR, s, alpha, 0.0)
    want = -(alpha**2) / (16 * math.pi**2 * math.sinh(alpha * s / 2) ** 2)
    assert got == pytest.approx(want, rel=1e-14)


def test_quadratic_is_twice_scalar_squared():
    alpha, eps = 1.1, 1e-3
    s = np.linspace(-3, 3, 13) + 0.05
    w = accel_correlator("linear", s, alpha, eps)
    np.testing.assert_allclose(accel_correlator("quadratic", s, alpha, eps), 2 * w**2, rtol=1e-13)


def test_fermionic_sixth_power_scaling():
    alpha, eps, s = 0.7, 1e-4, 0.9
    ratio = accel_correlator("fermionic", s, alpha, eps) / accel_correlator("linear", s, alpha, eps) ** 3
    assert ratio == pytest.approx(64 * math.pi**2, rel=1e-12)


def test_wightman_accel_uses_split():
    params = WorldlineParams(1.0)
    split = RegularizedTimeSplit(0.6, 1e-4)
    assert wightman_accel("quadratic", split, params) == accel_correlator("quadratic", 0.6, 1.0, 1e-4)
    with pytest.raises(DomainError):
        RegularizedTimeSplit(0.6, 0.0)


def test_unsupported_dimension():
    with pytest.raises(UnsupportedDimensionError):
        accel_correlator("quadratic", 0.5, 1.0, 1e-3, d=5)
    with pytest.raises(UnsupportedDimensionError):
        accel_correlator("fermionic", 0.5, 1.0, 1e-3, d=3)
    accel_correlator("linear", 0.5, 1.0, 1e-3, d=6)


@pytest.mark.parametrize("coupling", list(Coupling))
@pytest.mark.parametrize("d", [4, 5])
def test_kms_sign_is_plus_one(coupling, d):
    assert kms_sign(coupling, d) == 1


@pytest.mark.parametrize("coupling", list(Coupling))
def test_kms_residual_vanishes_linearly(coupling):
    slope, res = kms_slope(coupling, 0.7, (1e-3, 1e-4, 1e-5, 1e-6))
    assert slope >= 0.9
    scale = abs(accel_correlator(coupling, 0.7, 1.0, 0.0))
    assert res[-1] <= 1e-4 * scale


@pytest.mark.parametrize("d", [3, 5, 6])
def test_kms_linear_other_dimensions(d):
    params = WorldlineParams(1.4)
    res = [kms_residual("linear", 0.5, params, e, d) for e in (1e-4, 1e-6)]
    assert res[1] < res[0] / 50


def test_kms_wrong_sign_fails_for_odd_dimension():
    # An anti-periodic sign in d = 5 would leave an O(1) residual.
    alpha, s, eps = 1.0, 0.5, 1e-8
    shifted = accel_correlator("linear", s + 2j * math.pi, alpha, eps, 5)
    mirrored = accel_correlator("linear", -s, alpha, eps, 5)
    assert abs(shifted + mirrored) > 0.5 * abs(mirrored)
    assert abs(shifted - mirrored) < 1e-6 * abs(mirrored)


def test_kms_resonance_guard():
    with pytest.raises(ResonanceError):
        kms_residual("linear", 0.0, WorldlineParams(1.0), 1e-3)


def test_scaling_dimensions():
    assert [c.delta for c in Coupling] == [0, 1, 2]
    assert [scaling_dimension(c) for c in Coupling] == [0, 1, 2]
    assert scaling_dimension("linear", 6) == 1
    with pytest.raises(ValueError):
        Coupling.parse("cubic")


def test_fermionic_equals_eight_dimensional_scalar():
    # W_psi(d=4) = (N4 Gamma(2)**2 / Gamma(3)) W_phi(d=8) with N4 = 4.
    alpha, eps = 1.2, 1e-3
    s = np.linspace(-2.5, 2.5, 11) + 0.03
    bridge = 4 * math.gamma(2) ** 2 / math.gamma(3)
    np.testing.assert_allclose(
        accel_correlator("fermionic", s, alpha, eps),
        bridge * accel_correlator("linear", s, alpha, eps, d=8),
        rtol=1e-12,
    )


@pytest.mark.parametrize("coupling", list(Coupling))
def test_hermiticity(coupling):
    s = np.array([0.2, 0.9, 3.1])
    eps = 1e-3
    np.testing.assert_allclose(
        accel_correlator(coupling, -s, 1.0, eps), np.conj(accel_correlator(coupling, s, 1.0, eps)), rtol=1e-13
    )
