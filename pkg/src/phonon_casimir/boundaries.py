"""Boundary-induced shifts of the mean squared density, <rho^2>_R.

All results are negative on their domains and scale as hbar rho0 / (cS l^4)
for the geometry's length l. The published closed forms for two plates and
for the wedge are reproduced verbatim; the image sum and the point-split
construction are independent routes that report how far the printed
normalisations sit from them.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import (ConvergenceError, DomainError, FluidSpec, GeometryResult,
                   fluctuation_scale, geometry_result)
from .numerics import ExtrapolationTable, epstein_zeta, richardson, shell_lattice_sum

TWO_PI = 2.0 * math.pi
WALL_TOL = 1e-12


@dataclass(frozen=True)
class PlateGeometry:
    z: float
    a: float | None = None

    def __post_init__(self):
        if not self.z > 0:
            raise DomainError("z must be positive")
        if self.a is not None and not (0 < self.z < self.a):
            raise DomainError(f"need 0 < z < a, got z={self.z}, a={self.a}")


@dataclass(frozen=True)
class TorusGeometry:
    L1: float
    L2: float
    L3: float

    def __post_init__(self):
        for name in ("L1", "L2", "L3"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be positive and finite")


class Conical(str, enum.Enum):
    WEDGE = "wedge"
    STRING = "string"


@dataclass(frozen=True)
class ConicalGeometry:
    kind: Conical
    alpha: float
    r: float
    theta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Conical(self.kind))
        if not (0 < self.alpha <= TWO_PI * (1 + 1e-15)):
            raise DomainError(f"alpha must lie in (0, 2 pi], got {self.alpha}")
        if not (self.r > 0 and math.isfinite(self.r)):
            raise DomainError("r must be positive and finite")
        if self.kind is Conical.WEDGE:
            if self.theta is None or not (0 < self.theta < self.alpha):
                raise DomainError(f"wedge needs 0 < theta < alpha, got theta={self.theta}")


@dataclass(frozen=True)
class CasimirForce:
    """Plate pressure magnitude; the force is attractive."""

    pressure: float
    direction: str = "attractive"


def casimir_force_per_area(spec: FluidSpec, a: float) -> CasimirForce:
    """hbar cS pi^2 / (480 a^4) between two Neumann plates."""
    if not a > 0:
        raise DomainError("plate separation a must be positive")
    return CasimirForce(spec.hbar * spec.cS * math.pi**2 / (480.0 * a**4))


# plates ----------------------------------------------------------------------

def single_plate(spec: FluidSpec, z: float) -> GeometryResult:
    PlateGeometry(z)
    return geometry_result(spec, -1.0 / (32.0 * math.pi**2), z, "plate", {"z": z})


def _plates_bracket(x: float) -> float:
    s2 = math.sin(math.pi * x) ** 2
    return 1.0 / 15.0 + (3.0 - 2.0 * s2) / (s2 * s2)


def parallel_plates_closed(spec: FluidSpec, a: float, z: float) -> GeometryResult:
    """Two-plate closed form -(hbar rho0 / 96 cS a^4)[1/15 + (3 - 2 sin^2)/sin^4] as published.

    ``metadata["image_normalized_value"]`` carries the printed value times pi^2,
    which is what the image sum it derives from evaluates to.
    """
    PlateGeometry(z, a)
    coef = -_plates_bracket(z / a) / 96.0
    res = geometry_result(spec, coef, a, "plates", {"a": a, "z": z})
    res.metadata.update(form="printed", image_normalized_value=res.value * math.pi**2,
                        image_normalized_coefficient=coef * math.pi**2)
    return res


def _image_terms(x: float, n_max: int) -> list[float]:
    n = np.arange(1, n_max + 1, dtype=float)
    lattice = (2.0 * n) ** -4.0
    pos = (2.0 * (n - x)) ** -4.0
    neg = (2.0 * (n + x)) ** -4.0
    terms = np.concatenate([lattice, lattice, pos, neg, [(2.0 * x) ** -4.0]])
    return np.sort(np.abs(terms)).tolist()


def parallel_plates_image_sum(spec: FluidSpec, a: float, z: float, n_max: int = 2000,
                              tol: float = 1e-10) -> GeometryResult:
    """Truncated image sum -(hbar rho0/2 pi^2 cS)[sum_{n!=0} (2an)^-4 + sum_n (2z - 2an)^-4].

    Terms are accumulated smallest first with exact (fsum) rounding. The
    omitted tail |n| > n_max is bounded by its comparison integral and
    reported in ``metadata["tail_bound"]``; a warning is attached when it
    exceeds ``tol * |value|``.
    """
    PlateGeometry(z, a)
    n_max = int(n_max)
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    x = z / a
    total = math.fsum(_image_terms(x, n_max))
    coef = -total / (2.0 * math.pi**2)
    N = float(n_max)
    tail = (2.0 / (3 * N**3) + 1.0 / (3 * (N - x) ** 3) + 1.0 / (3 * (N + x) ** 3)) / 16.0
    tail_coef = tail / (2.0 * math.pi**2)
    res = geometry_result(spec, coef, a, "plates", {"a": a, "z": z, "n_max": n_max}, form="image_sum")
    res.metadata["tail_bound"] = tail_coef * res.scale
    if tail_coef > tol * abs(coef):
        res.metadata["warning"] = f"n_max={n_max} leaves a tail bound {tail_coef:.2e} above tol={tol:g}"
    return res


def parallel_plates_profile(spec: FluidSpec, a: float, n: int, image_sum: bool = False,
                            n_max: int = 2000) -> list[GeometryResult]:
    """``n`` interior points z_i = a (i + 1/2)/n across the gap."""
    if n < 1:
        raise DomainError("profile needs at least one point")
    zs = a * (np.arange(n) + 0.5) / n
    if image_sum:
        return [parallel_plates_image_sum(spec, a, float(z), n_max) for z in zs]
    return [parallel_plates_closed(spec, a, float(z)) for z in zs]


# torus -----------------------------------------------------------------------

def torus(spec: FluidSpec, L1: float, L2: float, L3: float, tol: float = 1e-10) -> GeometryResult:
    """-(hbar rho0/2 pi^2 cS) sum' (l^2 L1^2 + m^2 L2^2 + n^2 L3^2)^-2.

    Evaluated by the Ewald-split Epstein sum; the achieved error bound is in
    ``metadata["error_bound"]``.
    """
    TorusGeometry(L1, L2, L3)
    if not tol > 0:
        raise DomainError("tol must be positive")
    lat = epstein_zeta((L1 / L1, L2 / L1, L3 / L1), power=2)
    if lat.bound > tol * abs(lat.value):
        raise ConvergenceError(f"torus sum bound {lat.bound:.2e} above requested tol {tol:g}", estimate=lat)
    coef = -lat.value / (2.0 * math.pi**2)
    res = geometry_result(spec, coef, L1, "torus", {"L1": L1, "L2": L2, "L3": L3, "tol": tol},
                          method=lat.method)
    res.metadata["error_bound"] = lat.bound / (2.0 * math.pi**2) * res.scale
    return res


def torus_shell_oracle(spec: FluidSpec, L1: float, L2: float, L3: float, radius: float = 60.0) -> GeometryResult:
    """Brute-force shell summation of the same lattice sum, with its rigorous bound."""
    TorusGeometry(L1, L2, L3)
    lat = shell_lattice_sum((1.0, L2 / L1, L3 / L1), power=2, radius=radius)
    coef = -lat.value / (2.0 * math.pi**2)
    res = geometry_result(spec, coef, L1, "torus", {"L1": L1, "L2": L2, "L3": L3, "radius": radius},
                          method=lat.method)
    res.metadata["error_bound"] = lat.bound / (2.0 * math.pi**2) * res.scale
    return res


# wedge and cosmic string ----------------------------------------------------

def _wedge_coefficient(alpha: float, theta: float) -> float:
    s = math.sin(math.pi * theta / alpha)
    if abs(s) < WALL_TOL:
        raise DomainError(f"theta={theta} lies on a wedge wall; <rho^2>_R diverges there")
    s2 = s * s
    brace = (math.pi - alpha) * (math.pi + alpha) * s2 * ((math.pi**2 + 11 * alpha**2) * s2 - 30 * math.pi**2) \
        + 45 * math.pi**4
    return -brace / (1440.0 * math.pi**2 * s2 * s2)


def wedge(spec: FluidSpec, alpha: float, r: float, theta: float) -> GeometryResult:
    """Published wedge closed form, evaluated verbatim."""
    ConicalGeometry(Conical.WEDGE, alpha, r, theta)
    return geometry_result(spec, _wedge_coefficient(alpha, theta), r, "wedge",
                           {"alpha": alpha, "r": r, "theta": theta}, form="printed")


def cosmic_string(spec: FluidSpec, alpha: float, r: float) -> GeometryResult:
    """-(hbar rho0 / 1440 pi^2 cS alpha^4 r^4)(2pi - alpha)(2pi + alpha)(11 alpha^2 + 4 pi^2)."""
    ConicalGeometry(Conical.STRING, alpha, r)
    coef = -(TWO_PI - alpha) * (TWO_PI + alpha) * (11 * alpha**2 + 4 * math.pi**2) \
        / (1440.0 * math.pi**2 * alpha**4)
    coef += 0.0  # report the flat-space zero as +0.0
    return geometry_result(spec, coef, r, "string", {"alpha": alpha, "r": r})


# point splitting -------------------------------------------------------------

def _csc2(x):
    return 1.0 / np.sin(x) ** 2


def renormalized_two_point(kind: Conical, alpha: float, theta, theta_p):
    """G - G0 at equal times and equal r, in units hbar = c = r = 1."""
    d = np.asarray(theta, dtype=float) - theta_p
    g0 = _csc2(d / 2.0) / (16.0 * math.pi**2)
    if kind is Conical.WEDGE:
        s = np.asarray(theta, dtype=float) + theta_p
        g = (_csc2(math.pi * d / (2 * alpha)) + _csc2(math.pi * s / (2 * alpha))) / (16.0 * alpha**2)
    else:
        g = _csc2(math.pi * d / alpha) / (4.0 * alpha**2)
    return g - g0


def _split_operator(kind: Conical, alpha: float, theta: float, theta_p: float, h: float) -> float:
    """(1 + d^2/dtheta^2) G_R(theta, theta') / 3 with a five-point second difference."""
    pts = theta + h * np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    f = renormalized_two_point(kind, alpha, pts, theta_p)
    d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12.0 * h * h)
    return (f[2] + d2) / 3.0


@dataclass(frozen=True)
class PointSplitResult:
    value: float
    coefficient: float
    error_estimate: float
    table: ExtrapolationTable
    geometry: str
    inputs: dict


def default_deltas(kind: Conical, alpha: float, theta: float | None, rungs: int = 5) -> list[float]:
    if kind is Conical.WEDGE:
        d0 = min(0.4, 0.5 * min(theta, alpha - theta))
    else:
        d0 = min(0.4, 0.25 * alpha)
    return [d0 / 2**k for k in range(rungs)]


def point_split_oracle(spec: FluidSpec, geometry, alpha: float, r: float, theta: float | None = None,
                       deltas=None, step_ratio: float = 2.0 / 3.0) -> PointSplitResult:
    """Coincidence limit of (c^2 / 3 r^2)(1 + d^2/dtheta^2) G_R(theta, theta +- Delta).

    The angular derivative is a five-point difference with step
    ``step_ratio * Delta``; the two splittings theta' = theta +- Delta are
    averaged so the error is even in Delta, and the Delta -> 0 limit is taken
    by Richardson extrapolation in Delta^2. The <phi_dot^2> coefficient maps
    to the density through a factor rho0 (with c -> cS).
    """
    kind = Conical(geometry)
    if kind is Conical.STRING and theta is None:
        theta = 1.0
    ConicalGeometry(kind, alpha, r, theta if kind is Conical.WEDGE else None)
    if deltas is None:
        deltas = default_deltas(kind, alpha, theta)
    deltas = [float(d) for d in deltas]
    if any(d <= 0 for d in deltas) or any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise DomainError("deltas must be a strictly decreasing positive sequence")
    if kind is Conical.WEDGE and 2 * deltas[0] * max(1.0, 2 * step_ratio) >= min(theta, alpha - theta) * 2:
        raise DomainError("largest Delta is too close to a wall")

    ladder = []
    with np.errstate(divide="ignore", invalid="ignore"):
        for d in deltas:
            h = step_ratio * d
            k = 0.5 * (_split_operator(kind, alpha, theta, theta + d, h)
                       + _split_operator(kind, alpha, theta, theta - d, h))
            ladder.append((d, float(k)))
    if not all(math.isfinite(k) for _, k in ladder):
        raise ConvergenceError("the difference stencil hit the coincidence point", estimate=ladder)
    table = richardson(ladder, power=2)
    errs = table.errors
    floor = 1e-12 + 1e-9 * abs(table.estimate)
    if len(errs) >= 3 and errs[-1] > errs[-2] and errs[-1] > floor:
        raise ConvergenceError("point-split extrapolation is not converging", estimate=table)
    coef = float(table.estimate)
    scale = fluctuation_scale(spec, r)
    return PointSplitResult(value=coef * scale, coefficient=coef, error_estimate=table.error_estimate * scale,
                            table=table, geometry=kind.value,
                            inputs={"alpha": alpha, "r": r, "theta": theta, "deltas": deltas})
