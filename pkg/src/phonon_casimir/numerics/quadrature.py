"""Adaptive quadrature (QUADPACK via scipy) with an honest error estimate."""
from __future__ import annotations

import warnings

from scipy import integrate

from ..core import ConvergenceError


def adaptive_quadrature(f, lo: float, hi: float, tol: float = 1e-8, limit: int = 500,
                        abstol: float = 1e-15) -> tuple[float, float]:
    """Integrate ``f`` over ``[lo, hi]`` to relative tolerance ``tol``.

    Returns ``(value, error_estimate)``. Raises :class:`ConvergenceError`
    carrying the achieved estimate when QUADPACK gives up.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(f, lo, hi, epsabs=abstol, epsrel=tol, limit=limit)
        except integrate.IntegrationWarning as exc:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                value, err = integrate.quad(f, lo, hi, epsabs=abstol, epsrel=tol, limit=limit)
            raise ConvergenceError(f"quadrature on [{lo}, {hi}] did not converge: {exc}",
                                   estimate=(value, err)) from None
    return value, err
