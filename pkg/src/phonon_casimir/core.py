"""Fluid parameters, unit systems and the result container shared by every module.

In natural units hbar = rho0 = cS = 1 (and k_B = c = 1), so every observable
reduces to its dimensionless coefficient. SI mode is a pure rescaling.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from scipy import constants as _const


class PhononError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PhononError, ValueError):
    """An input lies outside the domain of the requested operation."""


class ConvergenceError(PhononError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""

    def __init__(self, message: str, estimate: Any = None):
        super().__init__(message)
        self.estimate = estimate


class ConfigError(PhononError):
    """A configuration document is missing or malformed."""

    def __init__(self, message: str, path: str | None = None, missing: bool = False):
        super().__init__(message)
        self.path = path
        self.missing = missing


class Units(str, enum.Enum):
    NATURAL = "natural"
    SI = "SI"

    @classmethod
    def parse(cls, value: "Units | str") -> "Units":
        if isinstance(value, Units):
            return value
        for member in cls:
            if str(value).lower() == member.value.lower():
                return member
        raise DomainError(f"units must be 'natural' or 'SI', got {value!r}")


def _check_positive(name: str, value: Any) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite")
    if x <= 0.0:
        raise DomainError(f"{name} must be positive")
    return x


@dataclass(frozen=True)
class FluidSpec:
    """Physical constants of the medium.

    Attributes
    ----------
    hbar : float
        Reduced Planck constant (J s).
    rho0 : float
        Mean mass density (kg/m^3).
    cS : float
        Speed of sound (m/s).
    units : Units
        Unit system the other fields are expressed in.
    """

    hbar: float = 1.0
    rho0: float = 1.0
    cS: float = 1.0
    units: Units = Units.NATURAL

    def __post_init__(self):
        for name in ("hbar", "rho0", "cS"):
            object.__setattr__(self, name, _check_positive(name, getattr(self, name)))
        object.__setattr__(self, "units", Units.parse(self.units))
        if self.units is Units.NATURAL and (self.hbar, self.rho0, self.cS) != (1.0, 1.0, 1.0):
            raise DomainError("natural units require hbar = rho0 = cS = 1")

    @property
    def k_B(self) -> float:
        """Boltzmann constant in this unit system."""
        return 1.0 if self.units is Units.NATURAL else _const.k

    @property
    def c_light(self) -> float:
        """Vacuum speed of light in this unit system."""
        return 1.0 if self.units is Units.NATURAL else _const.c

    def to_dict(self) -> dict:
        return {"hbar": self.hbar, "rho0": self.rho0, "cS": self.cS, "units": self.units.value}


NATURAL = FluidSpec()


def make_fluid_spec(hbar=1.0, rho0=1.0, cS=1.0, units: Units | str = Units.NATURAL) -> FluidSpec:
    """Validate the three magnitudes and build a :class:`FluidSpec`.

    Natural mode still validates its inputs, then forces all three constants to 1.
    """
    units = Units.parse(units)
    values = {name: _check_positive(name, v) for name, v in (("hbar", hbar), ("rho0", rho0), ("cS", cS))}
    if units is Units.NATURAL:
        return FluidSpec(units=Units.NATURAL)
    return FluidSpec(units=units, **values)


def fluid_spec_from_mapping(doc: Mapping[str, Any], source: str = "<mapping>") -> FluidSpec:
    if not isinstance(doc, Mapping):
        raise ConfigError(f"{source}: fluid spec must be a JSON object", path=source)
    allowed = {"hbar", "rho0", "cS", "units"}
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise ConfigError(f"{source}: unknown field {unknown[0]!r}", path=f"{source}:{unknown[0]}")
    try:
        units = Units.parse(doc.get("units", "natural"))
    except DomainError as exc:
        raise ConfigError(f"{source}: units: {exc}", path=f"{source}:units") from None
    values = {}
    for name in ("hbar", "rho0", "cS"):
        if name not in doc:
            if units is Units.SI:
                raise ConfigError(f"{source}: missing field {name!r} (required in SI mode)", path=f"{source}:{name}")
            values[name] = 1.0
            continue
        v = doc[name]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{source}: field {name!r} must be a number, got {type(v).__name__}",
                              path=f"{source}:{name}")
        values[name] = v
    try:
        return make_fluid_spec(units=units, **values)
    except DomainError as exc:
        raise ConfigError(f"{source}: {exc}", path=source) from None


def load_fluid_spec(path: str | Path) -> FluidSpec:
    """Load a fluid spec from a JSON file ``{"hbar", "rho0", "cS", "units"}``."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}", path=str(path), missing=True)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})", path=str(path)) from None
    return fluid_spec_from_mapping(doc, source=str(path))


def fluctuation_scale(spec: FluidSpec, length: float) -> float:
    """Universal squared-density scale hbar*rho0/(cS*length**4)."""
    if not length > 0.0 or not math.isfinite(length):
        raise DomainError(f"length must be positive and finite, got {length!r}")
    return spec.hbar * spec.rho0 / (spec.cS * length**4)


@dataclass(frozen=True)
class GeometryResult:
    """A renormalized mean squared density for one geometry.

    ``value`` is always computed as ``coefficient * scale`` so it can be
    rebuilt bit-for-bit from the serialized pair.
    """

    value: float
    coefficient: float
    scale: float
    length: float
    geometry: str
    inputs: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "geometry": self.geometry,
            "value": self.value,
            "coefficient": self.coefficient,
            "scale": self.scale,
            "length": self.length,
            "inputs": dict(self.inputs),
            "metadata": dict(self.metadata),
        }


def geometry_result(spec: FluidSpec, coefficient: float, length: float, geometry: str,
                    inputs: Mapping[str, Any] | None = None, scale: float | None = None,
                    **metadata) -> GeometryResult:
    if scale is None:
        scale = fluctuation_scale(spec, length)
    coefficient = float(coefficient)
    return GeometryResult(
        value=coefficient * scale,
        coefficient=coefficient,
        scale=scale,
        length=float(length),
        geometry=geometry,
        inputs={"units": spec.units.value, **(inputs or {})},
        metadata=metadata,
    )
