"""Bracketed root finding."""
from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from ..core import ConvergenceError, DomainError


def bracketed_root(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Root of ``f`` in ``[lo, hi]``; the endpoints must bracket a sign change."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return float(lo)
    if fhi == 0.0:
        return float(hi)
    if np.sign(flo) == np.sign(fhi):
        raise DomainError(f"no sign change on [{lo}, {hi}]: f(lo)={flo:.3g}, f(hi)={fhi:.3g}")
    root, info = brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200, full_output=True)
    if not info.converged:
        raise ConvergenceError(f"root search did not converge: {info.flag}", estimate=root)
    return float(root)


def find_brackets(f, lo: float, hi: float, n: int = 1000) -> list[tuple[float, float]]:
    """Subintervals of an ``n``-point grid on which ``f`` changes sign."""
    x = np.linspace(lo, hi, n)
    y = np.array([f(t) for t in x])
    out = []
    for i in range(n - 1):
        if y[i] == 0.0:
            out.append((x[i], x[i]))
        elif y[i] * y[i + 1] < 0.0:
            out.append((x[i], x[i + 1]))
    if y[-1] == 0.0:
        out.append((x[-1], x[-1]))
    return out
