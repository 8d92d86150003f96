"""Free-space density correlations of a phonon fluid with linear dispersion.

Two forms of the coordinate-space correlator are exposed:

``standard``
    -(hbar rho0 / 2 pi^2 cS) (dx^2 + 3 cS^2 dt^2) / (dx^2 - cS^2 dt^2)^3,
    which is what the mode integral actually evaluates to;
``as_printed``
    the same with ``3 cS^2 dt^2`` in the denominator, kept verbatim for
    comparison with the published expression.

:func:`fourier_oracle` evaluates the regulated mode integral directly and
:func:`fourier_oracle_limit` extrapolates the regulator to zero; the
standard form agrees with that limit, the printed one does not once dt != 0.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .core import ConvergenceError, DomainError, FluidSpec, fluctuation_scale
from .numerics import ExtrapolationTable, richardson

SINGULAR_TOL = 1e-12


class Variant(str, enum.Enum):
    STANDARD = "standard"
    AS_PRINTED = "as_printed"

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, Variant):
            return value
        v = str(value).lower()
        if v in ("printed", "as_printed", "as-printed"):
            return cls.AS_PRINTED
        if v == "standard":
            return cls.STANDARD
        raise DomainError(f"unknown variant {value!r}; use 'standard' or 'printed'")

    @property
    def cone_factor(self) -> float:
        return 3.0 if self is Variant.AS_PRINTED else 1.0


class SignClass(str, enum.Enum):
    ANTICORRELATED = "anticorrelated"
    CORRELATED = "correlated"
    ON_CONE = "on_cone"


class SingularSurfaceError(DomainError):
    pass


@dataclass(frozen=True)
class SpacetimeSeparation:
    dx: float
    dt: float = 0.0

    def __post_init__(self):
        dx, dt = float(self.dx), float(self.dt)
        if not (math.isfinite(dx) and math.isfinite(dt)):
            raise DomainError("separation must be finite")
        if dx < 0:
            raise DomainError("dx is a distance |x - x'| and must be >= 0")
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "dt", dt)


def _sep(sep) -> SpacetimeSeparation:
    if isinstance(sep, SpacetimeSeparation):
        return sep
    dx, dt = sep
    return SpacetimeSeparation(abs(float(dx)), float(dt))


def _length_scale(spec: FluidSpec, sep: SpacetimeSeparation) -> float:
    return max(sep.dx, spec.cS * abs(sep.dt))


def correlation_terms(spec: FluidSpec, sep, variant="standard") -> tuple[float, float]:
    """Dimensionless correlator and its length scale: value = coefficient * scale(length)."""
    sep, variant = _sep(sep), Variant.parse(variant)
    ell = _length_scale(spec, sep)
    if ell == 0.0:
        raise SingularSurfaceError("coincident points: the correlator diverges at dx = dt = 0")
    x2 = (sep.dx / ell) ** 2
    t2 = (spec.cS * sep.dt / ell) ** 2
    denom = x2 - variant.cone_factor * t2
    if abs(denom) < SINGULAR_TOL * (x2 + t2):
        locus = "|dx| = sqrt(3) cS |dt|" if variant is Variant.AS_PRINTED else "|dx| = cS |dt|"
        raise SingularSurfaceError(f"{variant.value} correlator is singular on its sound cone {locus}")
    coef = -(x2 + 3.0 * t2) / (2.0 * math.pi**2 * denom**3)
    return coef, ell


def correlation(spec: FluidSpec, sep, variant="standard") -> float:
    """Density two-point function <rho(x,t) rho(x',t')> in the phonon vacuum."""
    coef, ell = correlation_terms(spec, sep, variant)
    return coef * fluctuation_scale(spec, ell)


def equal_time_correlation(spec: FluidSpec, dx: float) -> float:
    """-hbar rho0 / (2 pi^2 cS dx^4); negative for every dx > 0."""
    if not dx > 0:
        raise DomainError(f"dx must be positive, got {dx!r}")
    return (-1.0 / (2.0 * math.pi**2)) * fluctuation_scale(spec, dx)


def correlation_sign(spec: FluidSpec, sep, variant="standard") -> SignClass:
    sep, variant = _sep(sep), Variant.parse(variant)
    x2 = sep.dx**2
    t2 = (spec.cS * sep.dt) ** 2
    denom = x2 - variant.cone_factor * t2
    if abs(denom) <= SINGULAR_TOL * (x2 + t2) or (x2 + t2) == 0.0:
        return SignClass.ON_CONE
    return SignClass.ANTICORRELATED if denom > 0 else SignClass.CORRELATED


# regulated mode integral ---------------------------------------------------

def _oracle_closed(r: float, tau: float, eps: float) -> complex:
    """(1/4pi^2) (6 s^2 - 2 r^2) / (s^2 + r^2)^3 with s = eps + i tau (lengths in units of ell)."""
    s = complex(eps, tau)
    s2 = s * s
    return (6.0 * s2 - 2.0 * r * r) / (4.0 * math.pi**2 * (s2 + r * r) ** 3)


def _fourier(power: int, eps: float, omega: float, kind: str) -> float:
    """int_0^inf q^power e^{-eps q} {sin,cos}(omega q) dq by QUADPACK's Fourier rule."""
    if omega == 0.0:
        return 0.0 if kind == "sin" else math.factorial(power) / eps ** (power + 1)
    sign = 1.0
    if omega < 0:
        omega = -omega
        sign = -1.0 if kind == "sin" else 1.0
    f = lambda q: q**power * math.exp(-eps * q)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(f, 0.0, np.inf, weight=kind, wvar=omega, limlst=200)
        except integrate.IntegrationWarning as exc:
            raise ConvergenceError(f"Fourier quadrature failed: {exc}") from None
    return sign * val


def _oracle_quadrature(r: float, tau: float, eps: float) -> complex:
    if r == 0.0:
        re = _fourier(3, eps, tau, "cos")
        im = -_fourier(3, eps, tau, "sin")
        return complex(re, im) / (4.0 * math.pi**2)
    # sin(qr)cos(q tau) and sin(qr)sin(q tau) split into single harmonics
    i_c = 0.5 * (_fourier(2, eps, r + tau, "sin") + _fourier(2, eps, r - tau, "sin"))
    i_s = 0.5 * (_fourier(2, eps, r - tau, "cos") - _fourier(2, eps, r + tau, "cos"))
    return complex(i_c, -i_s) / (4.0 * math.pi**2 * r)


def fourier_oracle(spec: FluidSpec, sep, epsilon: float, method: str = "closed",
                   complex_result: bool = False):
    """Mode integral (hbar rho0 / 16 pi^3 cS^2) int d^3q Omega_q e^{i(q.dx - Omega_q dt)} e^{-eps q}.

    ``epsilon`` is a length. ``method="closed"`` uses the analytic radial
    integral, ``"quadrature"`` integrates it numerically. Returns the real part
    unless ``complex_result`` is set.
    """
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    sep = _sep(sep)
    ell = _length_scale(spec, sep)
    if ell == 0.0:
        ell = epsilon
    r, tau, eps = sep.dx / ell, spec.cS * sep.dt / ell, epsilon / ell
    if method == "closed":
        z = _oracle_closed(r, tau, eps)
    elif method == "quadrature":
        z = _oracle_quadrature(r, tau, eps)
    else:
        raise DomainError(f"unknown oracle method {method!r}")
    z = z * fluctuation_scale(spec, ell)
    return z if complex_result else z.real


@dataclass(frozen=True)
class OracleLimit:
    value: float
    imag: float
    error_estimate: float
    table: ExtrapolationTable


def fourier_oracle_limit(spec: FluidSpec, sep, rungs: int = 8, eps0_factor: float = 0.1,
                         method: str = "closed", imag_tol: float = 1e-10) -> OracleLimit:
    """Richardson-extrapolate the regulated integral over eps_k = eps0 / 2^k.

    ``eps0 = eps0_factor * max(dx, cS|dt|)``. The imaginary part of the limit
    must vanish off the sound cone; a residue above ``imag_tol`` relative to
    the real part raises :class:`ConvergenceError`.
    """
    sep = _sep(sep)
    ell = _length_scale(spec, sep)
    if ell == 0.0:
        raise DomainError("coincident points have no finite oracle limit")
    eps0 = eps0_factor * ell
    ladder = [(eps0 / 2**k, fourier_oracle(spec, sep, eps0 / 2**k, method=method, complex_result=True))
              for k in range(rungs)]
    table = richardson(ladder)
    est = complex(table.estimate)
    if abs(est.imag) > imag_tol * abs(est.real):
        raise ConvergenceError(f"oracle limit keeps an imaginary part {est.imag:.3g} (real {est.real:.3g})",
                               estimate=table)
    return OracleLimit(value=est.real, imag=est.imag, error_estimate=table.error_estimate, table=table)


def energy_density(spec: FluidSpec, rho_fluctuation: float) -> float:
    """Sound-wave energy density cS^2 drho^2 / rho0 for a density amplitude."""
    return spec.cS**2 / spec.rho0 * rho_fluctuation**2
