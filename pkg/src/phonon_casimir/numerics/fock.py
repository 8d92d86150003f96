"""Truncated Fock-space construction of a single-mode squeezed vacuum.

Serves as a brute-force oracle for the closed-form squeezed-state variance:
S(zeta) = exp[(zeta* a^2 - zeta a^dag^2) / 2] is built as a dense matrix
exponential and applied to |0>.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from ..core import ConvergenceError, DomainError

OCCUPANCY_TOL = 1e-10
UNITARITY_TOL = 1e-8
BOGOLIUBOV_TOL = 1e-8
MAX_DIM = 1200


@dataclass(frozen=True)
class FockOperators:
    dim: int

    def __post_init__(self):
        if self.dim < 2:
            raise DomainError("Fock truncation needs dim >= 2")

    @property
    def a_matrix(self) -> np.ndarray:
        """Lowering operator: sqrt(n) on the first superdiagonal."""
        return np.diag(np.sqrt(np.arange(1, self.dim, dtype=float)), 1).astype(complex)

    @property
    def adag_matrix(self) -> np.ndarray:
        return self.a_matrix.conj().T

    def squeeze(self, r: float, delta: float) -> np.ndarray:
        return _squeeze_matrix(self.dim, float(r), float(delta))


@lru_cache(maxsize=64)
def _squeeze_matrix(dim: int, r: float, delta: float) -> np.ndarray:
    ops = FockOperators(dim)
    a, ad = ops.a_matrix, ops.adag_matrix
    zeta = r * np.exp(1j * delta)
    gen = 0.5 * (np.conj(zeta) * (a @ a) - zeta * (ad @ ad))
    S = expm(gen)
    S.setflags(write=False)
    return S


@dataclass(frozen=True)
class SqueezedVacuum:
    state: np.ndarray
    squeeze: np.ndarray
    dim: int
    unitarity_defect: float
    bogoliubov_defect: float


def _bogoliubov_defect(S: np.ndarray, n: int, r: float, delta: float) -> float:
    ops = FockOperators(n)
    a, ad = ops.a_matrix, ops.adag_matrix
    lhs = S.conj().T @ a @ S
    rhs = a * np.cosh(r) - ad * np.exp(1j * delta) * np.sinh(r)
    return float(np.max(np.abs(lhs[:2, :2] - rhs[:2, :2])))


def squeezed_vacuum(r: float, delta: float, dim: int = 60) -> SqueezedVacuum:
    """Build S(zeta)|0> numerically, growing ``dim`` until the top five basis
    occupancies drop below 1e-10 and the Bogoliubov check below passes.

    The Bogoliubov identity S^dag a S = a cosh r - a^dag e^{i delta} sinh r is
    checked on the block spanned by |0>, |1>, the only matrix elements the
    quadrature variance of the vacuum depends on.
    """
    if r < 0:
        raise DomainError("squeeze magnitude r must be non-negative")
    if dim < 40:
        raise DomainError("Fock truncation dim must be at least 40")
    n = int(dim)
    while True:
        S = _squeeze_matrix(n, float(r), float(delta))
        psi = S[:, 0]
        if np.max(np.abs(psi[-5:]) ** 2) < OCCUPANCY_TOL:
            bog = _bogoliubov_defect(S, n, float(r), float(delta))
            if bog <= BOGOLIUBOV_TOL:
                break
        n = int(np.ceil(n * 1.25))
        if n > MAX_DIM:
            raise ConvergenceError(f"squeezed vacuum with r={r} needs more than {MAX_DIM} Fock states; "
                                   "use a larger dim cap or smaller r")
    unit = float(np.max(np.abs(S.conj().T @ S - np.eye(n))))
    if unit > UNITARITY_TOL:
        raise ConvergenceError(f"squeeze operator not unitary (defect {unit:.2e}); increase dim")
    return SqueezedVacuum(state=psi, squeeze=S, dim=n, unitarity_defect=unit, bogoliubov_defect=bog)


def fock_squeezed_variance(r: float, delta: float, phase, dim: int = 60):
    """Shift of the quadrature variance, <X^2>_zeta - <X^2>_0, halved.

    ``X = a e^{i phase} + a^dag e^{-i phase}``; the halving matches the mode
    normalisation so the result is directly comparable with
    ``sinh r (sinh r - cosh r cos(2 phase + delta))``. ``phase`` may be an array.
    """
    vac = squeezed_vacuum(r, delta, dim)
    ops = FockOperators(vac.dim)
    psi = vac.state
    a_psi = ops.a_matrix @ psi
    # <a^2>, <a^dag a>; <X^2> = 2 Re(e^{2i phase} <a^2>) + 2 <a^dag a> + 1
    a2 = np.vdot(psi, ops.a_matrix @ a_psi)
    n_mean = np.vdot(a_psi, a_psi).real
    phase = np.asarray(phase, dtype=float)
    x2 = 2.0 * np.real(np.exp(2j * phase) * a2) + 2.0 * n_mean + 1.0
    out = 0.5 * (x2 - 1.0)
    return float(out) if out.ndim == 0 else out
