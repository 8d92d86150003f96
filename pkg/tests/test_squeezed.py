import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phonon_casimir import NATURAL, DomainError, make_fluid_spec
from phonon_casimir.numerics import fock_squeezed_variance
from phonon_casimir.squeezed import (make_squeeze_state, prefactor, squeezed_average, squeezed_extrema,
                                     squeezed_profile, squeezed_variance, variance_coefficient)

UNIT = dict(k=1.0, V=1.0)
S1 = math.sinh(1.0)


def state(r, delta=0.0):
    return make_squeeze_state(NATURAL, r, delta, **UNIT)


def test_examples():
    assert squeezed_variance(NATURAL, state(0.0), 0.3, 0.7) == 0.0
    assert squeezed_variance(NATURAL, state(1.0)) == pytest.approx(-S1 * math.exp(-1), rel=1e-15)
    assert squeezed_variance(NATURAL, state(1.0), z=math.pi / 2) == pytest.approx(S1 * math.e, rel=1e-14)
    assert squeezed_average(NATURAL, state(1.0)) == pytest.approx(S1**2, rel=1e-15)
    lo, hi = squeezed_extrema(NATURAL, state(1.0))
    assert (lo, hi) == (pytest.approx(-0.432332, abs=1e-6), pytest.approx(3.19453, abs=1e-5))
    assert squeezed_extrema(NATURAL, state(0.0)) == (0.0, 0.0)


def test_numerical_average_over_period():
    st_ = state(1.0, 0.4)
    z = np.linspace(0, math.pi, 4096, endpoint=False)
    assert np.mean(squeezed_variance(NATURAL, st_, z, 0.0)) == pytest.approx(squeezed_average(NATURAL, st_), rel=1e-10)


def test_extrema_match_scan():
    st_ = state(1.0, 0.0)  # both extrema fall on grid points
    _, prof = squeezed_profile(NATURAL, st_, 10_000)
    lo, hi = squeezed_extrema(NATURAL, st_)
    assert prof.min() == pytest.approx(lo, abs=1e-8 * abs(hi)) and prof.max() == pytest.approx(hi, rel=1e-8)


def test_large_r_minimum_limit():
    lo, _ = squeezed_extrema(NATURAL, state(20.0))
    assert lo == pytest.approx(-0.5, rel=1e-15)


@given(st.floats(0.05, 8.0), st.floats(-7.0, 7.0))
def test_identities(r, delta):
    # below r ~ 0.05 (min + max) cancels to O(r^2) from O(r) terms and loses digits
    s = state(r, delta)
    lo, hi = squeezed_extrema(NATURAL, s)
    p = prefactor(NATURAL, s)
    assert lo >= -p / 2
    avg = squeezed_average(NATURAL, s)
    assert (lo + hi) / 2 == pytest.approx(avg, rel=1e-14, abs=1e-300)


@pytest.mark.parametrize("r", [0.25, 0.5, 1.0, 1.5])
@pytest.mark.parametrize("delta", [0.0, math.pi / 3, math.pi])
def test_fock_oracle(r, delta):
    ph = np.linspace(0, math.pi, 16, endpoint=False)
    closed = variance_coefficient(r, delta, ph)
    np.testing.assert_allclose(fock_squeezed_variance(r, delta, ph, dim=60), closed, rtol=1e-6, atol=1e-12)


def test_dispersion_and_validation():
    spec = make_fluid_spec(1.0546e-34, 1207, 595, "SI")
    s = make_squeeze_state(spec, 0.5, 0.0, k=1e6, V=1e-9)
    assert s.omega == 595e6
    with pytest.raises(DomainError, match="dispersion"):
        make_squeeze_state(spec, 0.5, 0.0, k=1e6, V=1e-9, omega=1.0)
    with pytest.raises(DomainError):
        state(-0.1)
    with pytest.raises(DomainError):
        make_squeeze_state(NATURAL, 0.5, 0.0, k=1.0, V=0.0)


def test_si_prefactor():
    spec = make_fluid_spec(1.0546e-34, 1207, 595, "SI")
    s = make_squeeze_state(spec, 0.5, 0.0, k=1e6, V=1e-9)
    assert prefactor(spec, s) == pytest.approx(1.0546e-34 * 595e6 * 1207 / (595**2 * 1e-9), rel=1e-14)
