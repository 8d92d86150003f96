"""Polynomial (Richardson) extrapolation of a sequence to zero step."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ExtrapolationTable:
    """Neville tableau for extrapolation to ``h = 0``.

    ``diagonal[k]`` is the best estimate using the first ``k + 1`` levels and
    ``errors[k]`` the size of its last correction (``errors[0]`` is ``inf``).
    """

    levels: tuple
    estimate: complex | float
    error_estimate: float
    diagonal: tuple = field(default=())
    errors: tuple = field(default=())

    def __post_init__(self):
        hs = [h for h, _ in self.levels]
        if any(b >= a for a, b in zip(hs, hs[1:])):
            raise ValueError("levels must be strictly decreasing in the parameter")
        if not self.error_estimate >= 0.0:
            raise ValueError("error estimate must be non-negative")

    def shrink_factors(self) -> list[float]:
        """Ratios errors[k-1]/errors[k] for k >= 2."""
        e = self.errors
        return [e[k - 1] / e[k] if e[k] > 0 else float("inf") for k in range(2, len(e))]


def richardson(table, order: int | None = None, power: int = 1) -> ExtrapolationTable:
    """Extrapolate ``v(h)`` to ``h = 0`` assuming a power series in ``h**power``.

    Parameters
    ----------
    table : sequence of (h, v)
        Step sizes, strictly decreasing, and the sampled values (real or complex).
    order : int, optional
        Number of levels to use (defaults to all of them).
    power : int
        Use 2 when the error expansion only contains even powers of ``h``.
    """
    table = list(table)
    if order is not None:
        table = table[:order]
    if not table:
        raise ValueError("richardson needs at least one level")
    hs = np.array([float(h) for h, _ in table])
    vals = [v for _, v in table]
    x = hs**power
    n = len(table)
    # tableau[i][j]: extrapolant through levels i-j..i
    tab = [[vals[i]] for i in range(n)]
    for i in range(1, n):
        for j in range(1, i + 1):
            num = x[i - j] * tab[i][j - 1] - x[i] * tab[i - 1][j - 1]
            tab[i].append(num / (x[i - j] - x[i]))
    diagonal = tuple(tab[i][i] for i in range(n))
    errors = [float("inf")] + [float(abs(tab[i][i] - tab[i][i - 1])) for i in range(1, n)]
    err = errors[-1] if n > 1 else float("inf")
    if n == 1:
        err = float("inf")
    return ExtrapolationTable(
        levels=tuple(zip(hs.tolist(), vals)),
        estimate=diagonal[-1],
        error_estimate=err,
        diagonal=diagonal,
        errors=tuple(errors),
    )
