"""
Adaptive quadrature for oscillatory integrands.

Panels are laid out from the origin outward so that the integrand's phase
advances by at most settings.quad_panel_phase across each one; the grid for
a window [-L, L] is a prefix of the grid for any larger window, so repeated
evaluations of the same wave hit the same nodes.
"""
import logging
from typing import Callable

import numpy as np
from scipy import integrate

from app.core.config import settings
from app.core.errors import QuadratureFailure

logger = logging.getLogger(__name__)

PhaseRate = Callable[[float], float]


def panel_grid(stop: float, rate: PhaseRate, start: float = 0.0, max_width: float = 1.0) -> np.ndarray:
    """Breakpoints start = t_0 < t_1 < ... >= stop with t_{k+1} - t_k <= panel_phase / rate(t_k)"""
    points = [start]
    t = start
    while t < stop:
        r = abs(rate(t))
        width = max_width if r == 0 else min(max_width, settings.quad_panel_phase / r)
        t += width
        points.append(t)
    return np.asarray(points)


def symmetric_grid(L: float, rate: PhaseRate) -> np.ndarray:
    right = panel_grid(L, rate)
    return np.concatenate([-right[:0:-1], right])


def oscillatory_quad(
    fn: Callable[[float], complex],
    a: float,
    b: float,
    points=None,
    rel_tol: float | None = None,
    abs_tol: float | None = None,
) -> complex:
    """
    Integral of a complex function over [a, b] by scipy's vector Gauss-Kronrod

    :param points: breakpoints; those outside (a, b) are ignored
    :raises QuadratureFailure: tolerance not met within settings.quad_limit subintervals
    """
    rel_tol = settings.quad_rel_tol if rel_tol is None else rel_tol
    abs_tol = settings.quad_abs_tol if abs_tol is None else abs_tol
    if points is not None:
        points = [p for p in points if a < p < b]

    def integrand(t: float) -> np.ndarray:
        c = complex(fn(t))
        return np.array([c.real, c.imag])

    res, err, info = integrate.quad_vec(
        integrand,
        a,
        b,
        epsabs=abs_tol,
        epsrel=rel_tol,
        limit=settings.quad_limit,
        points=points or None,
        quadrature="gk21",
        full_output=True,
    )
    logger.debug(
        "quad_vec on [%g, %g]: %d breakpoints, %d evaluations, error estimate %.3g",
        a, b, len(points or ()), info.neval, err,
    )
    if not info.success:
        raise QuadratureFailure(
            f"quadrature on [{a}, {b}] stopped at error {err:.3g} (rel_tol {rel_tol}, abs_tol {abs_tol})"
        )
    return complex(res[0], res[1])
