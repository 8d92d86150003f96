import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phonon_casimir import ConvergenceError, DomainError
from phonon_casimir.numerics import (FockOperators, adaptive_quadrature, bracketed_root, epstein_zeta,
                                     fock_squeezed_variance, richardson, shell_lattice_sum, squeezed_vacuum)
from phonon_casimir.numerics.lattice import _ellipsoid_terms
from phonon_casimir.numerics import fock as fock_module

C3 = 16.5323159598  # cubic lattice sum, Ewald and shell routes agree on these digits


class TestRichardson:
    def test_constant_sequence(self):
        t = richardson([(1.0, 3.0), (0.5, 3.0), (0.25, 3.0)])
        assert t.estimate == 3.0 and t.error_estimate == 0.0

    def test_linear_two_rungs_exact(self):
        assert richardson([(0.2, 1.0 + 2.0 * 0.2), (0.1, 1.0 + 2.0 * 0.1)]).estimate == pytest.approx(1.0, abs=1e-15)

    def test_even_power_series(self):
        f = lambda h: math.cos(h) / 1.0
        t = richardson([(h, f(h)) for h in (0.4, 0.2, 0.1, 0.05)], power=2)
        assert t.estimate == pytest.approx(1.0, abs=1e-11)
        assert all(s > 4 for s in t.shrink_factors())

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            richardson([(0.1, 1.0), (0.2, 1.0)])


class TestRoots:
    def test_cos(self):
        assert bracketed_root(math.cos, 1.0, 2.0) == pytest.approx(math.pi / 2, abs=1e-10)

    def test_no_sign_change(self):
        with pytest.raises(DomainError):
            bracketed_root(lambda x: x * x + 1, -1.0, 1.0)


ANALYTIC = [
    (lambda x: x**2, 0, 1, 1 / 3), (math.sin, 0, math.pi, 2.0), (math.exp, 0, 1, math.e - 1),
    (lambda x: 1 / (1 + x * x), 0, 1, math.pi / 4), (math.sqrt, 0, 1, 2 / 3), (lambda x: math.log(x), 1e-300, 1, -1.0),
    (lambda x: x * math.exp(-x), 0, 20, 1 - 21 * math.exp(-20)), (lambda x: math.cos(10 * x), 0, 1, math.sin(10) / 10),
    (lambda x: 1 / math.sqrt(x), 1e-300, 1, 2.0), (lambda x: x**5 - x, -1, 2, 64 / 6 - 1 / 6 - 2 + 0.5),
]


@pytest.mark.parametrize("f, lo, hi, exact", ANALYTIC)
def test_quadrature_error_estimate_is_honest(f, lo, hi, exact):
    val, err = adaptive_quadrature(f, lo, hi)
    assert abs(val - exact) <= max(err, 1e-14 * abs(exact))


def test_quadrature_failure_carries_estimate():
    with pytest.raises(ConvergenceError) as exc:
        adaptive_quadrature(lambda x: math.sin(1 / x) / x, 1e-8, 1, limit=5)
    assert exc.value.estimate is not None


class TestLattice:
    def test_two_radii_agree_within_bounds(self):
        a, b = shell_lattice_sum((1, 1, 1), radius=30), shell_lattice_sum((1, 1, 1), radius=60)
        assert abs(a.value - b.value) <= a.bound + b.bound
        assert abs(b.value - C3) <= b.bound

    def test_ewald_matches_shells(self):
        e = epstein_zeta((1, 1, 1))
        assert e.value == pytest.approx(C3, abs=1e-9) and e.bound < 1e-12

    def test_scaling_and_power(self):
        assert epstein_zeta((2, 2, 2)).value == pytest.approx(epstein_zeta((1, 1, 1)).value / 16, rel=1e-13)
        assert epstein_zeta((1, 1, 1), power=3).value < C3

    @given(st.floats(0.3, 3.0), st.floats(0.3, 3.0), st.floats(0.3, 3.0))
    @settings(max_examples=15, deadline=None)
    def test_ewald_independent_of_axis_order(self, a, b, c):
        x, y = epstein_zeta((a, b, c)).value, epstein_zeta((c, a, b)).value
        assert x == pytest.approx(y, rel=1e-12)

    def test_shuffled_reference_sum(self):
        parts, _ = _ellipsoid_terms(np.array([1.0, 1.3, 0.8]), 12.0, 2)
        ref = math.fsum(parts)
        terms = []
        L = np.array([1.0, 1.3, 0.8])
        for l in range(-15, 16):
            for m in range(-10, 11):
                for n in range(-16, 17):
                    q = (l * L[0]) ** 2 + (m * L[1]) ** 2 + (n * L[2]) ** 2
                    if 0 < q <= 144.0:
                        terms.append(q**-2)
        random.Random(3).shuffle(terms)
        naive = 0.0
        for t in terms:
            naive += t
        assert abs(naive - ref) / ref < 1e-13

    def test_tolerance_mode_and_cap(self):
        res = shell_lattice_sum((1, 1, 1), tol=1e-2)
        assert res.bound <= 1e-2 * res.value
        with pytest.raises(ConvergenceError):
            shell_lattice_sum((1, 1, 1), tol=1e-9, max_radius=20)


class TestFock:
    def test_lowering_operator(self):
        a = FockOperators(6).a_matrix
        assert np.allclose(np.diag(a, 1), np.sqrt(np.arange(1, 6)))
        assert np.count_nonzero(a) == 5

    def test_unitarity(self):
        S = FockOperators(80).squeeze(1.5, 0.0)
        assert np.max(np.abs(S.conj().T @ S - np.eye(80))) < 1e-10

    def test_examples(self):
        assert fock_squeezed_variance(0.0, 0.4, 0.3) == pytest.approx(0.0, abs=1e-15)
        assert fock_squeezed_variance(1.0, 0.0, 0.0, dim=60) == pytest.approx(-0.432332, abs=1e-6)

    def test_dimension_grows_for_strong_squeezing(self):
        vac = squeezed_vacuum(1.5, 0.0, dim=60)
        assert vac.dim > 60 and np.max(np.abs(vac.state[-5:]) ** 2) < 1e-10
        assert vac.bogoliubov_defect < 1e-8

    def test_guards(self, monkeypatch):
        # a small cap keeps the exhaustion path cheap; the real cap is only a larger number
        monkeypatch.setattr(fock_module, "MAX_DIM", 240)
        with pytest.raises(DomainError):
            squeezed_vacuum(0.5, 0.0, dim=20)
        with pytest.raises(ConvergenceError):
            squeezed_vacuum(6.0, 0.0, dim=60)
