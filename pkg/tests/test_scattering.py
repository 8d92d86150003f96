import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from phonon_casimir import NATURAL, ConfigError, DomainError
from phonon_casimir import scattering as S

PI = math.pi
VAC = S.MaterialOptics(eta=1.0, depsdrho=1.0, T=1.0)


def kin(omega=1.0, theta=PI, **kw):
    return S.ScatteringKinematics(omega=omega, theta=theta, **kw)


class TestCrossSection:
    def test_forward_vanishes(self):
        assert S.zp_cross_section(NATURAL, VAC, kin(theta=0.0)) == 0.0

    def test_backscatter_natural(self):
        assert S.zp_cross_section(NATURAL, VAC, kin()) == pytest.approx(2 / (32 * PI**2), rel=1e-15)

    def test_omega_fifth_power(self):
        base = S.zp_cross_section(NATURAL, VAC, kin(theta=1.0))
        assert S.zp_cross_section(NATURAL, VAC, kin(omega=2.0, theta=1.0)) == pytest.approx(32 * base, rel=1e-14)

    @given(st.floats(1.0, 3.0), st.floats(0.1, 10.0), st.floats(-1.0, 1.0))
    def test_scalings(self, eta, vol, pol):
        base = S.zp_cross_section(NATURAL, VAC, kin())
        mat = S.MaterialOptics(eta=eta, depsdrho=1.0, T=1.0)
        val = S.zp_cross_section(NATURAL, mat, kin(volume=vol, pol_dot=pol))
        assert val == pytest.approx(base * eta**4 * vol * pol**2, rel=1e-12, abs=1e-300)

    def test_terms_multiply(self):
        coef, scale = S.zp_cross_section_terms(NATURAL, VAC, kin(theta=0.4, omega=3.0))
        assert coef * scale == S.zp_cross_section(NATURAL, VAC, kin(theta=0.4, omega=3.0))

    def test_kinematic_guards(self):
        for bad in (dict(omega=0.0, theta=1.0), dict(omega=1.0, theta=4.0), dict(omega=1.0, theta=1.0, pol_dot=1.5),
                    dict(omega=1.0, theta=1.0, volume=-1.0)):
            with pytest.raises(DomainError):
                S.ScatteringKinematics(**bad)
        with pytest.raises(DomainError):
            S.MaterialOptics(eta=0.5, depsdrho=1.0, T=1.0)


class TestThermal:
    def test_occupation(self):
        assert S.occupation(NATURAL, 1.0, 0.0) == 0.0
        assert S.occupation(NATURAL, math.log(2.0), 1.0) == pytest.approx(1.0, rel=1e-14)
        assert S.stokes_factor(NATURAL, math.log(2.0), 1.0) == pytest.approx(2.0, rel=1e-14)
        assert S.occupation(NATURAL, 1000.0, 1.0) == pytest.approx(math.exp(-1000.0), rel=1e-12)

    @given(st.floats(1e-6, 300.0))
    def test_coth_identity(self, x):
        assert S.total_factor(NATURAL, x, 1.0) == pytest.approx(1 / math.tanh(x / 2), rel=1e-12)

    def test_zero_temperature_total(self):
        assert S.total_factor(NATURAL, 1.0, 0.0) == 1.0

    def test_high_temperature(self):
        x = 1e-4
        assert S.occupation(NATURAL, x, 1.0) == pytest.approx(1 / x - 0.5, rel=1e-8)
        assert S.high_temp_zp_fraction() == S.Fraction(1, 2)

    def test_ratio(self):
        base = S.thermal_ratio(NATURAL, VAC, kin())
        assert base == pytest.approx(1.0, rel=1e-15)
        assert S.thermal_ratio(NATURAL, VAC, kin(omega=2.0)) == pytest.approx(2 * base, rel=1e-15)
        hot = S.MaterialOptics(eta=1.0, depsdrho=1.0, T=2.0)
        assert S.thermal_ratio(NATURAL, hot, kin()) == pytest.approx(base / 2, rel=1e-15)
        thetas = [0.1 * k for k in range(1, 32)]
        rs = [S.thermal_ratio(NATURAL, VAC, kin(theta=t)) for t in thetas]
        assert all(b > a for a, b in zip(rs, rs[1:]))

    def test_ratio_infinite_at_zero_temperature(self):
        cold = S.MaterialOptics(eta=1.0, depsdrho=1.0, T=0.0)
        with pytest.raises(S.InfiniteRatioError):
            S.thermal_ratio(NATURAL, cold, kin())

    def test_phonon_frequency(self):
        assert S.phonon_frequency(NATURAL, VAC, kin(omega=3.0, theta=PI)) == pytest.approx(6.0, rel=1e-15)


class TestMaterials:
    def test_presets(self):
        assert set(S.preset_names()) >= {"neon", "water"}
        mat, spec = S.load_material("neon")
        assert mat.eta > 1 and spec.cS > 0 and spec.rho0 > 0

    def test_water_ratio_order(self):
        mat, spec = S.load_material("water")
        omega = S.omega_from_wavelength(spec, 350e-9)
        r = S.thermal_ratio(spec, mat, S.ScatteringKinematics(omega=omega, theta=PI))
        assert 0.002 < r < 0.008

    def test_round_trip(self, tmp_path):
        mat, spec = S.load_material("water")
        p = tmp_path / "m.json"
        p.write_text(json.dumps(S.material_to_mapping(mat, spec)))
        assert S.load_material(str(p)) == (mat, spec)
        p.write_text(json.dumps([S.material_to_mapping(mat, spec)]))
        assert S.load_material(str(p)) == (mat, spec)

    @pytest.mark.parametrize("doc", [
        [],
        {"name": "x", "eta": 1.3, "depsdrho": 1.0, "cS": 1.0, "rho0": 1.0},
        {"name": "x", "eta": "1.3", "depsdrho": 1.0, "cS": 1.0, "rho0": 1.0, "T": 1.0},
        {"name": "x", "eta": 1.3, "depsdrho": 1.0, "cS": 1.0, "rho0": 1.0, "T": 1.0, "extra": 2},
        {"name": "x", "eta": 0.3, "depsdrho": 1.0, "cS": 1.0, "rho0": 1.0, "T": 1.0},
    ])
    def test_malformed(self, tmp_path, doc):
        p = tmp_path / "m.json"
        p.write_text(json.dumps(doc))
        with pytest.raises(ConfigError):
            S.load_material(str(p))

    def test_missing_and_invalid(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            S.load_material(str(tmp_path / "nope.json"))
        assert info.value.missing
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        with pytest.raises(ConfigError):
            S.load_material(str(p))
