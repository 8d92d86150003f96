"""Brillouin scattering of light by zero-point and thermal density fluctuations.

Material constants are never built in: they come from a JSON document
``{"name", "eta", "depsdrho", "cS", "rho0", "T"}`` or from the bundled
preset list, which holds order-of-magnitude table values.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from scipy import constants

from .core import ConfigError, DomainError, FluidSpec, PhononError, Units, make_fluid_spec

COTH_TOL = 1e-12


class InfiniteRatioError(DomainError):
    """At T = 0 the zero-point line is the whole cross section."""


@dataclass(frozen=True)
class MaterialOptics:
    eta: float
    depsdrho: float
    T: float
    name: str = "custom"

    def __post_init__(self):
        for k in ("eta", "depsdrho", "T"):
            if not math.isfinite(getattr(self, k)):
                raise DomainError(f"{k} must be finite")
        if self.eta < 1.0:
            raise DomainError("refractive index eta must be >= 1")
        if not self.depsdrho > 0.0:
            raise DomainError("depsdrho must be positive")
        if self.T < 0.0:
            raise DomainError("temperature must be non-negative")


@dataclass(frozen=True)
class ScatteringKinematics:
    omega: float
    theta: float
    volume: float = 1.0
    pol_dot: float = 1.0

    def __post_init__(self):
        if not self.omega > 0.0:
            raise DomainError("light angular frequency omega must be positive")
        if not self.volume > 0.0:
            raise DomainError("scattering volume must be positive")
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError("scattering angle theta must lie in [0, pi]")
        if not abs(self.pol_dot) <= 1.0:
            raise DomainError("|pol_dot| must not exceed 1")


def angular_factor(theta: float) -> float:
    """sqrt(2(1 - cos theta)) = 2 sin(theta/2), the momentum transfer over the photon momentum."""
    return 2.0 * math.sin(0.5 * theta)


def omega_from_wavelength(spec: FluidSpec, wavelength: float) -> float:
    """Angular frequency of light with vacuum wavelength ``wavelength``."""
    if not wavelength > 0.0:
        raise DomainError("wavelength must be positive")
    return 2.0 * math.pi * spec.c_light / wavelength


def phonon_frequency(spec: FluidSpec, mat: MaterialOptics, kin: ScatteringKinematics) -> float:
    """Omega_q = cS q for the Brillouin momentum transfer q = 2 (eta omega / c) sin(theta/2)."""
    return spec.cS * mat.eta * kin.omega / spec.c_light * angular_factor(kin.theta)


def zp_cross_section_terms(spec: FluidSpec, mat: MaterialOptics, kin: ScatteringKinematics) -> tuple[float, float]:
    """(dimensionless coefficient, scale hbar omega^5 V / (c^5 cS rho0)) of the zero-point cross section."""
    coef = angular_factor(kin.theta) * mat.eta**4 * kin.pol_dot**2 / (32.0 * math.pi**2)
    scale = spec.hbar * kin.omega**5 * kin.volume / (spec.c_light**5 * spec.cS * spec.rho0)
    return coef, scale


def zp_cross_section(spec: FluidSpec, mat: MaterialOptics, kin: ScatteringKinematics) -> float:
    """sqrt(2(1-cos theta)) hbar omega^5 V eta^4 / (32 pi^2 c^5 cS rho0) (e.e')^2."""
    coef, scale = zp_cross_section_terms(spec, mat, kin)
    return coef * scale


def _x(spec: FluidSpec, Omega_q: float, T: float) -> float:
    if not Omega_q > 0.0:
        raise DomainError("phonon frequency must be positive")
    if T < 0.0:
        raise DomainError("temperature must be non-negative")
    return math.inf if T == 0.0 else spec.hbar * Omega_q / (spec.k_B * T)


def occupation(spec: FluidSpec, Omega_q: float, T: float) -> float:
    """Bose-Einstein occupation 1/(exp(hbar Omega/k_B T) - 1); zero at T = 0."""
    x = _x(spec, Omega_q, T)
    if x > 700.0:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def stokes_factor(spec: FluidSpec, Omega_q: float, T: float) -> float:
    return occupation(spec, Omega_q, T) + 1.0


def total_factor(spec: FluidSpec, Omega_q: float, T: float) -> float:
    """2<n> + 1, checked against coth(hbar Omega / 2 k_B T) on every call."""
    x = _x(spec, Omega_q, T)
    total = 2.0 * occupation(spec, Omega_q, T) + 1.0
    coth = 1.0 / math.tanh(0.5 * x)
    if abs(total - coth) > COTH_TOL * abs(coth):
        raise PhononError(f"coth identity violated: 2n+1={total!r}, coth={coth!r}")
    return total


def thermal_ratio(spec: FluidSpec, mat: MaterialOptics, kin: ScatteringKinematics) -> float:
    """R = sqrt(2(1-cos theta)) (hbar omega / 2 k_B T)(cS/c) eta^4 [rho0 deps/drho]^-2."""
    if mat.T == 0.0:
        raise InfiniteRatioError("R is infinite at T = 0: the zero-point line is the sole cross section")
    return (angular_factor(kin.theta) * spec.hbar * kin.omega / (2.0 * spec.k_B * mat.T)
            * spec.cS / spec.c_light * mat.eta**4 / mat.depsdrho**2)


def high_temp_zp_fraction() -> Fraction:
    """Share of the zero-point cross section left in the Stokes line when k_B T >> hbar Omega."""
    return Fraction(1, 2)


# material documents ----------------------------------------------------------

MATERIAL_FIELDS = {"name": str, "eta": float, "depsdrho": float, "cS": float, "rho0": float, "T": float}


def material_from_mapping(doc, source: str = "<material>") -> tuple[MaterialOptics, FluidSpec]:
    """Parse a materials document into optics plus the SI fluid it describes."""
    if not isinstance(doc, dict):
        raise ConfigError(f"{source}: material must be a JSON object", path=source)
    unknown = sorted(set(doc) - set(MATERIAL_FIELDS) - {"note"})
    if unknown:
        raise ConfigError(f"{source}: unknown field {unknown[0]!r}", path=f"{source}:{unknown[0]}")
    for key, kind in MATERIAL_FIELDS.items():
        if key not in doc:
            raise ConfigError(f"{source}: missing field {key!r}", path=f"{source}:{key}")
        v = doc[key]
        ok = isinstance(v, str) if kind is str else (isinstance(v, (int, float)) and not isinstance(v, bool))
        if not ok:
            raise ConfigError(f"{source}: field {key!r} must be a {'string' if kind is str else 'number'}",
                              path=f"{source}:{key}")
    try:
        mat = MaterialOptics(eta=float(doc["eta"]), depsdrho=float(doc["depsdrho"]), T=float(doc["T"]),
                             name=doc["name"])
        spec = make_fluid_spec(constants.hbar, doc["rho0"], doc["cS"], Units.SI)
    except DomainError as exc:
        raise ConfigError(f"{source}: {exc}", path=source) from None
    return mat, spec


def material_to_mapping(mat: MaterialOptics, spec: FluidSpec) -> dict:
    return {"name": mat.name, "eta": mat.eta, "depsdrho": mat.depsdrho, "cS": spec.cS,
            "rho0": spec.rho0, "T": mat.T}


def preset_names() -> list[str]:
    return [d["name"] for d in _presets()]


def _presets() -> list:
    text = resources.files("phonon_casimir").joinpath("data/materials.json").read_text()
    return json.loads(text)


def load_material(name_or_path: str) -> tuple[MaterialOptics, FluidSpec]:
    """Resolve a preset name or read a materials file (one object, or a list of them)."""
    for doc in _presets():
        if doc["name"] == name_or_path:
            return material_from_mapping(doc, source=f"preset:{name_or_path}")
    path = Path(name_or_path)
    if not path.is_file():
        raise ConfigError(f"unknown material {name_or_path!r}: not a preset ({', '.join(preset_names())}) "
                          "and no such file", path=str(path), missing=True)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})", path=str(path)) from None
    if isinstance(doc, list):
        if len(doc) != 1:
            raise ConfigError(f"{path}: a materials list passed as a file must hold exactly one entry",
                              path=str(path))
        doc = doc[0]
    return material_from_mapping(doc, source=str(path))
