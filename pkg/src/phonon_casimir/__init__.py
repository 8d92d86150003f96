"""Quantum density fluctuations of a phonon fluid with linear dispersion.

Closed forms for free-space correlations, squeezed vacuum states, boundary
geometries, the parabolic-mirror focus and zero-point light scattering, each
paired with an independent numerical oracle.
"""
from .core import (NATURAL, ConfigError, ConvergenceError, DomainError, FluidSpec, GeometryResult,
                   PhononError, Units, fluctuation_scale, load_fluid_spec, make_fluid_spec)

__version__ = "0.1.0"

__all__ = [
    "NATURAL",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "FluidSpec",
    "GeometryResult",
    "PhononError",
    "Units",
    "fluctuation_scale",
    "load_fluid_spec",
    "make_fluid_spec",
]
