"""Validation run: closed forms against the oracle and the limiting behaviour."""

import math
from dataclasses import dataclass

import numpy as np

from .correlators import WorldlineParams, kms_residual
from .coupling import Coupling
from .errors import ConvergenceError
from .oracle import QuadratureSpec, pole_sum_scalar, response_quadrature
from .response import (
    ResponsePoint,
    response_closed,
    response_longtime_rate,
    scaled_rate,
)

ORACLE_TOL = 1e-6
POLE_SUM_TOL = 1e-10
BOLTZMANN_TOL = 0.05
KMS_MIN_SLOPE = 0.9


@dataclass(frozen=True)
class ValidationGrid:
    xs: tuple = (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)
    ys: tuple = (1.0, 2.0, 5.0, 8.0)
    pole_sum_terms: int = 200
    boltzmann_xs: tuple = (0.5, 1.0)
    boltzmann_y: float = 200.0
    longtime_ys: tuple = (50.0, 100.0, 200.0)
    kms_s: float = 0.7
    kms_epsilons: tuple = (1e-3, 1e-4, 1e-5, 1e-6)


def _check(name, coupling, value, tolerance, passed, **extra):
    entry = {
        "check": name,
        "coupling": coupling,
        "value": value,
        "tolerance": tolerance,
        "passed": bool(passed),
    }
    entry.update(extra)
    return entry


def _oracle_errors(coupling, grid, spec):
    worst, where = 0.0, None
    for x in grid.xs:
        for y in grid.ys:
            p = ResponsePoint(x, y)
            try:
                ref = response_quadrature(coupling, p, spec)
            except ConvergenceError as exc:
                raise type(exc)(
                    f"oracle failed for {coupling.value} at x={x}, y={y}: {exc}"
                ) from exc
            err = abs(response_closed(coupling, p) - ref.value) / abs(ref.value)
            if err > worst:
                worst, where = err, (x, y)
    return worst, where


def kms_slope(coupling, s, epsilons, alpha=1.0):
    """Log-log slope of the KMS residual against the regulator."""
    params = WorldlineParams(alpha)
    res = [kms_residual(coupling, s, params, e) for e in epsilons]
    return float(np.polyfit(np.log(epsilons), np.log(res), 1)[0]), res


def run_validation(grid=None, spec=None):
    """Run every check and return a JSON-ready report.

    ``report["passed"]`` is False when any check misses its tolerance.
    Oracle non-convergence propagates as :class:`ConvergenceError` naming
    the failing point.
    """
    grid = grid or ValidationGrid()
    spec = spec or QuadratureSpec()
    checks = []
    for coupling in Coupling:
        worst, where = _oracle_errors(coupling, grid, spec)
        checks.append(
            _check("oracle_max_rel_error", coupling.value, worst, ORACLE_TOL,
                   worst <= ORACLE_TOL, worst_point=where)
        )

    worst = 0.0
    for x in grid.xs:
        for y in grid.ys:
            p = ResponsePoint(x, y)
            ref = response_closed(Coupling.LINEAR, p)
            worst = max(worst, abs(pole_sum_scalar(p, grid.pole_sum_terms) - ref) / abs(ref))
    checks.append(_check("pole_sum_max_rel_error", "linear", worst, POLE_SUM_TOL, worst <= POLE_SUM_TOL))

    for coupling in Coupling:
        errs = []
        for x in grid.boltzmann_xs:
            up = response_closed(coupling, ResponsePoint(x, grid.boltzmann_y))
            down = response_closed(coupling, ResponsePoint(-x, grid.boltzmann_y))
            errs.append(abs(up / down / math.exp(-2 * math.pi * x) - 1))
        checks.append(
            _check("boltzmann_ratio_error", coupling.value, max(errs), BOLTZMANN_TOL,
                   max(errs) <= BOLTZMANN_TOL)
        )

        decreasing = True
        series = []
        for x in grid.boltzmann_xs:
            limit = response_longtime_rate(coupling, x, 1.0)
            errs = [abs(scaled_rate(coupling, ResponsePoint(x, y)) / limit - 1) for y in grid.longtime_ys]
            series.append(errs)
            decreasing &= all(b < a for a, b in zip(errs, errs[1:]))
        checks.append(
            _check("longtime_rate_error_decreasing", coupling.value, series, None, decreasing,
                   ys=list(grid.longtime_ys))
        )

        slope, _ = kms_slope(coupling, grid.kms_s, grid.kms_epsilons)
        checks.append(
            _check("kms_residual_slope", coupling.value, slope, KMS_MIN_SLOPE, slope >= KMS_MIN_SLOPE)
        )

    return {"passed": all(c["passed"] for c in checks), "checks": checks}
