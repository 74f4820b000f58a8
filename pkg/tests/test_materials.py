import math

import pytest
from hypothesis import given, strategies as st

from dispersia.materials import (
    A_METAL_METAL, B_METAL_METAL, Material, UnitSystem, beta0, dilute_gas,
    gamma0, pair_coupling, perfect_metal, vacuum,
)

PI = math.pi


class TestCouplingFactors:
    def test_beta0_metal_limit_is_exact(self):
        assert beta0(math.inf) == 3.0 / (4.0 * PI)

    def test_beta0_vacuum(self):
        assert beta0(1.0) == 0.0

    def test_beta0_dielectric(self):
        # (3/4pi)(4-1)/(4+2) = 3/(8pi)
        assert beta0(4.0) == pytest.approx(3.0 / (8.0 * PI), rel=1e-14)

    @pytest.mark.parametrize("bad", [0.0, -1.0, -100.0])
    def test_beta0_rejects_nonpositive(self, bad):
        with pytest.raises(ValueError):
            beta0(bad)

    def test_gamma0_metal_is_negative(self):
        assert gamma0(0.0) == pytest.approx(-3.0 / (8.0 * PI), rel=1e-14)

    def test_gamma0_nonmagnetic(self):
        assert gamma0(1.0) == 0.0

    def test_gamma0_large_mu_limit(self):
        assert gamma0(math.inf) == 3.0 / (4.0 * PI)

    def test_gamma0_rejects_negative(self):
        with pytest.raises(ValueError):
            gamma0(-0.5)


class TestPairCoupling:
    def test_metal_metal_b(self):
        c = pair_coupling(perfect_metal(), perfect_metal())
        assert c.b12 == pytest.approx(1035.0 / (256.0 * PI**3), rel=1e-12)
        assert c.b12 == pytest.approx(B_METAL_METAL, rel=1e-15)

    def test_metal_metal_a(self):
        c = pair_coupling(perfect_metal(), perfect_metal())
        assert c.a12 == pytest.approx((1035.0 / 3840.0) / (2 * PI) ** 5, rel=1e-12)
        assert c.a12 == pytest.approx(A_METAL_METAL, rel=1e-15)

    def test_b_over_a_is_material_independent(self):
        # B/A = (23/4pi) * 240 (2pi)^3 / 23 = 480 pi^2
        for pair in [(perfect_metal(), perfect_metal()),
                     (Material(epsilon0=4.0), Material(epsilon0=2.0, mu0=3.0))]:
            c = pair_coupling(*pair)
            assert c.b12 / c.a12 == pytest.approx(480.0 * PI**2, rel=1e-12)

    def test_vacuum_kills_coupling(self):
        c = pair_coupling(vacuum(), perfect_metal())
        assert c.b12 == 0.0 and c.a12 == 0.0

    def test_sphere_plate_prefactor_four_digits(self):
        val = pair_coupling(perfect_metal(), perfect_metal()).b12 * PI**2 / 30.0
        assert round(val, 5) == pytest.approx(0.04290, abs=1.5e-5)
        assert f"{val:.4g}" == "0.0429"

    def test_dilute_gas_pair(self):
        gas = dilute_gas(1.0, 1.0)
        assert gas.beta == 1.0
        assert gas.gamma == 0.0
        c = pair_coupling(gas, gas)
        assert c.b12 == pytest.approx(23.0 / (4.0 * PI), rel=1e-14)

    def test_dilute_gas_zero_density_is_vacuum_like(self):
        gas = dilute_gas(0.0, 42.0)
        assert pair_coupling(gas, perfect_metal()).b12 == 0.0

    def test_dilute_gas_rejects_negative(self):
        with pytest.raises(ValueError):
            dilute_gas(-1.0, 1.0)
        with pytest.raises(ValueError):
            dilute_gas(1.0, -1.0)

    def test_unknown_model_rejected(self):
        with pytest.raises(ValueError):
            Material(model="plasma")


@given(eps=st.floats(min_value=1e-6, max_value=1e12))
def test_beta0_bounded(eps):
    assert abs(beta0(eps)) <= 3.0 / (4.0 * PI) + 1e-15


@given(mu=st.floats(min_value=0.0, max_value=1e12))
def test_gamma0_bounded(mu):
    assert abs(gamma0(mu)) <= 3.0 / (4.0 * PI) + 1e-15


@given(e1=st.floats(min_value=0.1, max_value=100.0),
       m1=st.floats(min_value=0.0, max_value=100.0),
       e2=st.floats(min_value=0.1, max_value=100.0),
       m2=st.floats(min_value=0.0, max_value=100.0))
def test_pair_coupling_symmetric(e1, m1, e2, m2):
    a = Material(epsilon0=e1, mu0=m1)
    b = Material(epsilon0=e2, mu0=m2)
    assert pair_coupling(a, b) == pair_coupling(b, a)


def test_same_material_coupling_nonnegative():
    for m in [perfect_metal(), vacuum(), Material(epsilon0=3.0, mu0=0.2),
              dilute_gas(2.0, 0.5)]:
        assert pair_coupling(m, m).b12 >= 0.0


class TestUnits:
    def test_natural_scale_is_one(self):
        assert UnitSystem().hbar_c == 1.0

    def test_si_scale_uses_physical_constants(self):
        from scipy import constants
        u = UnitSystem(mode="SI", length_unit=1e-6)
        assert u.hbar_c == pytest.approx(constants.hbar * constants.c / 1e-6)

    def test_si_conversion_is_multiplicative(self):
        u = UnitSystem(mode="SI", length_unit=2.0)
        assert u.hbar_c == pytest.approx(UnitSystem(mode="SI", length_unit=1.0).hbar_c / 2.0)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            UnitSystem(mode="cgs")
