"""Numerical engines shared by the physics modules."""
from .extrapolation import ExtrapolationTable, richardson
from .fock import FockOperators, fock_squeezed_variance, squeezed_vacuum
from .lattice import LatticeSum, epstein_zeta, shell_lattice_sum
from .quadrature import adaptive_quadrature
from .roots import bracketed_root, find_brackets

__all__ = [
    "ExtrapolationTable",
    "FockOperators",
    "LatticeSum",
    "adaptive_quadrature",
    "bracketed_root",
    "epstein_zeta",
    "find_brackets",
    "fock_squeezed_variance",
    "richardson",
    "shell_lattice_sum",
    "squeezed_vacuum",
]
