"""Density fluctuations of a single plane-wave mode in a squeezed vacuum.

For |zeta> = S(r e^{i delta})|0> the shift relative to the vacuum is

    <rho^2>_R = (hbar omega rho0 / cS^2 V) sinh r [sinh r - cosh r cos(2(kz - omega t) + delta)],

locally of either sign, positive on average.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError, FluidSpec


@dataclass(frozen=True)
class SqueezeState:
    r: float
    delta: float
    omega: float
    k: float
    V: float

    def __post_init__(self):
        for name in ("r", "delta", "omega", "k", "V"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.r < 0:
            raise DomainError("squeeze magnitude r must be non-negative")
        if self.V <= 0:
            raise DomainError("quantization volume V must be positive")
        if self.omega <= 0 or self.k <= 0:
            raise DomainError("mode frequency and wavenumber must be positive")


def make_squeeze_state(spec: FluidSpec, r: float, delta: float, k: float, V: float,
                       omega: float | None = None, rtol: float = 1e-12) -> SqueezeState:
    """Build a state on the linear dispersion branch omega = cS k."""
    if omega is None:
        omega = spec.cS * k
    elif not math.isclose(omega, spec.cS * k, rel_tol=rtol):
        raise DomainError(f"omega={omega} violates the linear dispersion omega = cS k = {spec.cS * k}")
    return SqueezeState(r=r, delta=delta, omega=omega, k=k, V=V)


def check_dispersion(spec: FluidSpec, state: SqueezeState, rtol: float = 1e-12) -> None:
    if not math.isclose(state.omega, spec.cS * state.k, rel_tol=rtol):
        raise DomainError("state omega does not equal cS k for this fluid")


def prefactor(spec: FluidSpec, state: SqueezeState) -> float:
    return spec.hbar * state.omega * spec.rho0 / (spec.cS**2 * state.V)


def variance_coefficient(r: float, delta: float, phase):
    """sinh r (sinh r - cosh r cos(2 phase + delta)); ``phase`` = kz - omega t, may be an array."""
    c = np.cos(2.0 * np.asarray(phase, dtype=float) + delta)
    out = math.sinh(r) * (math.sinh(r) - math.cosh(r) * c)
    return float(out) if np.ndim(out) == 0 else out


def squeezed_variance(spec: FluidSpec, state: SqueezeState, z=0.0, t=0.0):
    check_dispersion(spec, state)
    phase = state.k * np.asarray(z, dtype=float) - state.omega * np.asarray(t, dtype=float)
    return prefactor(spec, state) * variance_coefficient(state.r, state.delta, phase)


def squeezed_average(spec: FluidSpec, state: SqueezeState) -> float:
    """Average over a period in z or t: prefactor * sinh^2 r."""
    check_dispersion(spec, state)
    return prefactor(spec, state) * math.sinh(state.r) ** 2


def squeezed_extrema(spec: FluidSpec, state: SqueezeState) -> tuple[float, float]:
    """Closed-form (min, max) over the phase; the minimum never drops below -prefactor/2."""
    check_dispersion(spec, state)
    p = prefactor(spec, state)
    lo = p * 0.5 * math.expm1(-2.0 * state.r)
    hi = p * 0.5 * math.expm1(2.0 * state.r)
    return lo, hi


def squeezed_profile(spec: FluidSpec, state: SqueezeState, n: int):
    """``n`` samples of the shift over one period of the phase kz - omega t (period pi)."""
    if n < 1:
        raise DomainError("profile needs at least one point")
    check_dispersion(spec, state)
    phase = np.linspace(0.0, math.pi, n, endpoint=False)
    return phase, prefactor(spec, state) * variance_coefficient(state.r, state.delta, phase)
