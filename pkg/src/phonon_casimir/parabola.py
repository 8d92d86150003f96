"""Geometric-optics density fluctuations near the focus of a parabolic mirror.

A ray arriving at incident angle theta reflects at theta' with
theta = (a/b) f(theta'). Two reflected rays alpha, beta with f(alpha) = f(beta)
reach the field point and interfere over the path difference dl. For a field
point on the latus rectum (gamma = pi/2) the angular integral has a closed form
g(theta0); other angles ship as geometry plus a finite-part quadrature engine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import DomainError, FluidSpec, GeometryResult, geometry_result
from .numerics import adaptive_quadrature, bracketed_root

HALF_PI = 0.5 * math.pi
THETA0_MAX = 2.0 * math.pi / 3.0 - 1e-9
CYLINDER_FACTOR = 16.0 / (15.0 * math.pi)
CONJUGACY_TOL = 1e-12


class NoConjugateError(DomainError):
    """The incident angle has a single reflected ray inside the aperture."""


class UnsupportedConfigurationError(DomainError):
    pass


@dataclass(frozen=True)
class MirrorConfig:
    """Field point at distance ``a`` from the focus and polar angle ``gamma``;
    mirror at distance b/2 from the focus with angular aperture ``theta0``."""

    a: float
    b: float
    gamma: float = HALF_PI
    theta0: float = HALF_PI
    max_ratio: float = 0.01

    def __post_init__(self):
        for name in ("a", "b", "gamma", "theta0", "max_ratio"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not (self.a > 0 and self.b > 0):
            raise DomainError("a and b must be positive")
        if not self.a / self.b < self.max_ratio:
            raise DomainError(f"near-focus expansion needs a/b < {self.max_ratio}, got {self.a / self.b:g}")
        _check_aperture(self.theta0)


def _check_aperture(theta0: float) -> None:
    if not (0.0 < theta0 < THETA0_MAX):
        raise DomainError(f"aperture theta0 must lie in (0, 2pi/3 - 1e-9), got {theta0}")


@dataclass(frozen=True)
class RayPair:
    alpha: float
    beta: float
    theta: float
    dl1: float
    dl2: float
    dl: float
    residual: float = field(default=0.0)


# ray geometry ----------------------------------------------------------------

def f(gamma: float, theta_p):
    """-(1 + cos theta') sin(theta' - gamma)."""
    x = np.asarray(theta_p, dtype=float)
    out = -(1.0 + np.cos(x)) * np.sin(x - gamma)
    return float(out) if out.ndim == 0 else out


def f_sin2_form(gamma: float, theta_p):
    """-sin^2 theta' sin(theta' - gamma) / (1 - cos theta'); undefined at theta' = 0."""
    x = np.asarray(theta_p, dtype=float)
    out = -np.sin(x) ** 2 * np.sin(x - gamma) / (1.0 - np.cos(x))
    return float(out) if out.ndim == 0 else out


def f_prime(gamma: float, theta_p):
    x = np.asarray(theta_p, dtype=float)
    out = np.sin(x) * np.sin(x - gamma) - (1.0 + np.cos(x)) * np.cos(x - gamma)
    return float(out) if out.ndim == 0 else out


def conjugate_angle(gamma: float, alpha: float, theta0: float, grid: int = 1000, tol: float = 1e-13) -> float:
    """The second reflected angle beta != alpha in (-theta0, theta0) with f(beta) = f(alpha).

    Roots are bracketed by sign changes of the divided difference
    (f(x) - f(alpha))/(x - alpha) on a ``grid``-point mesh, which removes the
    trivial root at alpha, and refined by Brent's method.
    """
    _check_aperture(theta0)
    if not (0.0 < abs(alpha) < theta0):
        raise DomainError(f"need 0 < |alpha| < theta0, got alpha={alpha}")
    fa = f(gamma, alpha)
    fpa = f_prime(gamma, alpha)

    def h(x):
        dx = x - alpha
        if dx == 0.0:
            return fpa
        return (f(gamma, x) - fa) / dx

    xs = np.linspace(-theta0, theta0, grid)
    hs = np.array([h(x) for x in xs])
    roots = []
    for i in range(grid - 1):
        if hs[i] == 0.0:
            roots.append(float(xs[i]))
        elif hs[i] * hs[i + 1] < 0.0:
            roots.append(bracketed_root(h, float(xs[i]), float(xs[i + 1]), tol=tol))
    roots = [r for r in roots if abs(r - alpha) > 1e-9]
    if not roots:
        raise NoConjugateError(f"alpha={alpha} has no conjugate ray within the aperture theta0={theta0}")
    if len(roots) > 1:
        raise DomainError(f"alpha={alpha} has {len(roots)} conjugates; outside the two-ray regime")
    return roots[0]


def path_difference(a: float, gamma: float, alpha: float, beta: float) -> tuple[float, float, float]:
    """(dl1, dl2, dl) with dl = dl1 - dl2."""
    if not a > 0:
        raise DomainError("a must be positive")
    cg, sg = math.cos(gamma), math.sin(gamma)
    dl1 = a * abs(cg * (math.cos(alpha) - math.cos(beta)) + sg * (math.sin(alpha) - math.sin(beta)))
    dl2 = a * (math.sin(beta) * math.sin(beta - gamma) - math.sin(alpha) * math.sin(alpha - gamma))
    return dl1, dl2, dl1 - dl2


def path_difference_combined(a: float, gamma: float, alpha: float, beta: float) -> float:
    """The single-expression form of dl; equals dl1 - dl2 whenever the bracket in dl1 is positive."""
    sa, sb, ca, cb = math.sin(alpha), math.sin(beta), math.cos(alpha), math.cos(beta)
    return a * (math.cos(gamma) * (ca - cb + sa * sa - sb * sb)
                + math.sin(gamma) * (sa - sb + sb * cb - sa * ca))


def ray_pair(config: MirrorConfig, alpha: float) -> RayPair:
    beta = conjugate_angle(config.gamma, alpha, config.theta0)
    dl1, dl2, dl = path_difference(config.a, config.gamma, alpha, beta)
    return RayPair(alpha=alpha, beta=beta, theta=config.a / config.b * f(config.gamma, alpha),
                   dl1=dl1, dl2=dl2, dl=dl, residual=abs(f(config.gamma, beta) - f(config.gamma, alpha)))


# gamma = pi/2 closed form ----------------------------------------------------

def g_closed(theta0: float) -> float:
    """log((1+c)/(1-c)) + (30c^5 - 120c^4 + 160c^3 - 40c^2 - 94c - 224) / (15 (1+c)(1-c)^5)."""
    _check_aperture(theta0)
    c = math.cos(theta0)
    one_minus = 2.0 * math.sin(0.5 * theta0) ** 2
    poly = ((((30.0 * c - 120.0) * c + 160.0) * c - 40.0) * c - 94.0) * c - 224.0
    return math.log((1.0 + c) / one_minus) + poly / (15.0 * (1.0 + c) * one_minus**5)


def focus_kernel(alpha):
    """(2 cos alpha + 1) / (sin^3 alpha (1 - cos alpha)^4), the gamma = pi/2 angular integrand."""
    x = np.asarray(alpha, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        out = (2.0 * np.cos(x) + 1.0) / (np.sin(x) ** 3 * (2.0 * np.sin(0.5 * x) ** 2) ** 4)
    out = np.where(x == 0.0, np.inf, out)
    return float(out) if out.ndim == 0 else out


def _mirror_scale(spec: FluidSpec, config: MirrorConfig) -> float:
    return spec.hbar * spec.rho0 / (spec.cS * config.a**3 * config.b)


def _require_latus_rectum(config: MirrorConfig) -> None:
    if config.gamma != HALF_PI:
        raise UnsupportedConfigurationError(
            "closed-form results exist only for gamma = pi/2; use finite_part_integral with the "
            "general ray geometry for other angles")


def rho2_focus(spec: FluidSpec, config: MirrorConfig, cylinder: bool = False) -> GeometryResult:
    """(3 hbar rho0 / (4096 pi^2 cS a^3 b)) g(theta0), times 16/(15 pi) for a parabolic cylinder.

    The ``value`` composes the coefficient with the scale hbar rho0/(cS a^3 b);
    ``metadata["C"]`` is the positive constant in value = -hbar rho0 C/(cS b a^3).
    """
    _require_latus_rectum(config)
    g = g_closed(config.theta0)
    coef = 3.0 * g / (4096.0 * math.pi**2)
    if cylinder:
        coef *= CYLINDER_FACTOR
    length = (config.a**3 * config.b) ** 0.25
    res = geometry_result(spec, coef, length, "parabola_cylinder" if cylinder else "parabola",
                          {"a": config.a, "b": config.b, "gamma": config.gamma, "theta0": config.theta0,
                           "cylinder": cylinder},
                          scale=_mirror_scale(spec, config))
    res.metadata.update(g=g, C=-coef, length_definition="(a^3 b)^(1/4)")
    return res


def printed_integrand(spec: FluidSpec, config: MirrorConfig, alpha: float) -> float:
    """(3 hbar rho0 / (32 pi^2 cS a^3 b)) (2cos alpha + 1) / (sin^3 alpha (1 - cos alpha)^4)."""
    _require_latus_rectum(config)
    return 3.0 / (32.0 * math.pi**2) * _mirror_scale(spec, config) * focus_kernel(alpha)


def assemble_integrand(spec: FluidSpec, config: MirrorConfig, alpha: float) -> float:
    """The alpha-integrand built from its pieces: (3 hbar rho0/2 pi^2 cS) (a/b)|f'(alpha)| / dl^4.

    Uses beta = -alpha (f is even at gamma = pi/2). Returns +inf where dl
    underflows to zero; the integral then exists only as a finite part.
    """
    _require_latus_rectum(config)
    if not (0.0 < alpha < config.theta0):
        raise DomainError(f"need 0 < alpha < theta0, got {alpha}")
    _, _, dl = path_difference(config.a, config.gamma, alpha, -alpha)
    jac = config.a / config.b * abs(f_prime(config.gamma, alpha))
    if dl == 0.0 or not math.isfinite(dl**-4):
        return math.inf
    return 3.0 * spec.hbar * spec.rho0 / (2.0 * math.pi**2 * spec.cS) * jac / dl**4


# finite part -----------------------------------------------------------------

# Laurent expansion of focus_kernel about alpha = 0 (the function is odd)
FOCUS_SINGULAR = {
    -11: Fraction(48), -9: Fraction(24), -7: Fraction(28, 5), -5: Fraction(208, 315),
    -3: Fraction(-551, 25200), -1: Fraction(-1, 32),
}
FOCUS_REGULAR = {
    1: Fraction(-62454079, 6810804000),
    3: Fraction(-10536013, 5448643200),
    5: Fraction(-3641034217, 10585935360000),
    7: Fraction(-449525294153, 8187650989056000),
    9: Fraction(-43247587967783, 5321973142886400000),
    11: Fraction(-656569018948057, 577053945064396800000),
    13: Fraction(-11547683543721515497, 75617148961238556672000000),
    15: Fraction(-1104896180524837237, 55717899234596831232000000),
    17: Fraction(-572863026988000183, 228426804153741473280000000),
    19: Fraction(-14874410674911402061, 47918640175862021082316800000),
    21: Fraction(-2591689745394943844986331, 68667915778748969495392419840000000),
}
# below this angle the subtracted kernel is evaluated from its Taylor series
FOCUS_SERIES_SWITCH = 0.7


def _focus_regular(x):
    x = np.asarray(x, dtype=float)
    return sum(float(c) * x**k for k, c in FOCUS_REGULAR.items())


def finite_part_integral(func, lower: float, upper: float, expansion: dict, regular=None,
                         switch: float = 0.0, tol: float = 1e-10) -> float:
    """Hadamard finite part of int_lower^upper func(x) dx for a singularity at ``lower``.

    ``expansion`` maps powers k to coefficients c_k of the endpoint behaviour
    func ~ sum c_k (x - lower)^k. Those terms are subtracted, the remainder is
    integrated by adaptive quadrature, and the subtracted terms are restored
    through their finite parts c_k u^(k+1)/(k+1) (c_k log u for k = -1, with
    u = upper - lower). If ``regular`` is given it replaces the subtracted
    remainder on (lower, lower + switch), where direct subtraction cancels.
    """
    if not upper > lower:
        raise DomainError("finite-part integral needs upper > lower")
    terms = {int(k): float(c) for k, c in expansion.items()}

    def remainder(x):
        t = x - lower
        return func(x) - sum(c * t**k for k, c in terms.items())

    u = upper - lower
    pieces = []
    cut = min(switch, u) if regular is not None else 0.0
    if cut > 0.0:
        pieces.append(adaptive_quadrature(lambda x: regular(x - lower), lower, lower + cut, tol=tol)[0])
    if cut < u:
        pieces.append(adaptive_quadrature(remainder, lower + cut, upper, tol=tol)[0])
    for k, c in terms.items():
        pieces.append(c * math.log(u) if k == -1 else c * u ** (k + 1) / (k + 1))
    return math.fsum(pieces)


def focus_finite_part(theta0: float, tol: float = 1e-11) -> float:
    """FP int_0^theta0 focus_kernel(alpha) d alpha in the Hadamard convention."""
    _check_aperture(theta0)
    return finite_part_integral(focus_kernel, 0.0, theta0, FOCUS_SINGULAR, regular=_focus_regular,
                                switch=FOCUS_SERIES_SWITCH, tol=tol)


def gcurve(n: int, lo: float = 0.2, hi: float = 2.0 * math.pi / 3.0 - 1e-3) -> tuple[np.ndarray, np.ndarray]:
    """``n`` samples of g(theta0) on [lo, hi]."""
    if n < 2:
        raise DomainError("gcurve needs at least two points")
    _check_aperture(lo)
    _check_aperture(hi)
    th = np.linspace(lo, hi, n)
    return th, np.array([g_closed(float(t)) for t in th])
