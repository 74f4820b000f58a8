import math

import pytest
from scipy.integrate import quad

from dispersia.analytic import (
    NoAnalyticFormError, SlabPairParams, SpherePlateParams,
    balian_duplantier_reference, casimir_plate_energy,
    halfspace_tail_per_volume, molecule_pair_energy, point_half_space_energy,
    scene_energy, slab_slab_energy, sphere_half_space_energy,
)
from dispersia.geometry import Box, HalfSpace, PointParticle, Scene, Sphere
from dispersia.materials import pair_coupling, perfect_metal

PI = math.pi
METAL = perfect_metal()
CMM = pair_coupling(METAL, METAL)


class TestSlabPair:
    def test_unit_slabs_n7(self):
        u = slab_slab_energy(CMM, SlabPairParams(side=1.0, gap=1.0, thickness=1.0))
        coeff = 1035.0 / (7680.0 * PI**2)
        expected = -coeff * (1.0 + 1.0 / 27.0 - 2.0 / 8.0)
        assert u == pytest.approx(expected, rel=1e-12)
        assert u == pytest.approx(-0.010747, rel=1e-4)

    def test_plate_limit_coefficient(self):
        # thick slabs: only the a^-3 term survives
        u = slab_slab_energy(CMM, SlabPairParams(1.0, 1.0, math.inf))
        coeff = 1035.0 / (7680.0 * PI**2)
        assert -u == pytest.approx(coeff, rel=1e-12)
        assert f"{coeff:.4g}" == "0.01365"

    def test_thick_limit_approached(self):
        thin = slab_slab_energy(CMM, SlabPairParams(1.0, 1.0, 50.0))
        inf = slab_slab_energy(CMM, SlabPairParams(1.0, 1.0, math.inf))
        assert thin == pytest.approx(inf, rel=1e-4)

    def test_ratio_to_casimir(self):
        coeff = 1035.0 / (7680.0 * PI**2)
        ratio = coeff / (PI**2 / 720.0)
        assert 0.9956 <= ratio <= 0.9966

    def test_casimir_reference(self):
        assert casimir_plate_energy(2.0, 1.0) == pytest.approx(-PI**2 / 180.0)
        with pytest.raises(ValueError):
            casimir_plate_energy(1.0, 0.0)

    def test_n6_bracket(self):
        u = slab_slab_energy(CMM, SlabPairParams(1.0, 1.0, 1.0), n=6)
        bracket = 1.0 + 3.0**-2 - 2.0 * 2.0**-2
        assert u == pytest.approx(-CMM.b12 * (PI / 12.0) * bracket, rel=1e-12)

    def test_area_scaling(self):
        p1 = SlabPairParams(1.0, 1.0, 1.0)
        p3 = SlabPairParams(3.0, 1.0, 1.0)
        assert slab_slab_energy(CMM, p3) == pytest.approx(
            9.0 * slab_slab_energy(CMM, p1), rel=1e-12)

    def test_param_validation(self):
        with pytest.raises(ValueError):
            SlabPairParams(1.0, -1.0, 1.0)
        with pytest.raises(ValueError):
            slab_slab_energy(CMM, SlabPairParams(1.0, 1.0, 1.0), n=8)


class TestPointHalfSpace:
    def test_n7_law(self):
        u = point_half_space_energy(CMM, 2.0, 3.0)
        assert u == pytest.approx(-CMM.b12 * (PI / 10.0) * 2.0**-4 * 3.0, rel=1e-12)

    def test_n6_law(self):
        u = point_half_space_energy(CMM, 2.0, 1.0, n=6)
        assert u == pytest.approx(-CMM.b12 * (PI / 6.0) * 2.0**-3, rel=1e-12)

    def test_tail_at_zero_truncation_matches_full_half_space(self):
        for n in (6, 7):
            full = -point_half_space_energy(CMM, 1.5, 1.0, n=n) / CMM.b12
            assert halfspace_tail_per_volume(1.5, 0.0, n=n) == pytest.approx(
                full, rel=1e-12)

    def test_tail_decreases_with_truncation(self):
        vals = [halfspace_tail_per_volume(1.0, t) for t in (0.0, 1.0, 4.0, 16.0)]
        assert vals == sorted(vals, reverse=True)

    def test_validation(self):
        with pytest.raises(ValueError):
            point_half_space_energy(CMM, 0.0, 1.0)
        with pytest.raises(ValueError):
            point_half_space_energy(CMM, 1.0, -1.0)


class TestSpherePlate:
    def test_unit_case_bracket(self):
        u = sphere_half_space_energy(CMM, SpherePlateParams(1.0, 1.0))
        # bracket at R = d = 1: 1 - 1 + 1/3 + 1/9 = 4/9
        assert u == pytest.approx(-CMM.b12 * (PI**2 / 30.0) * (4.0 / 9.0), rel=1e-12)
        assert u == pytest.approx(-0.019064, rel=1e-4)

    @pytest.mark.parametrize("radius,gap", [(1.0, 1.0), (2.0, 0.5), (0.5, 3.0)])
    def test_bracket_against_quadrature(self, radius, gap):
        # layer-by-layer oracle: integrate the point-half-space law over
        # horizontal slices of the sphere at height y above the surface
        def integrand(y):
            return PI * (radius**2 - (y - gap - radius) ** 2) * y**-4

        val, err = quad(integrand, gap, gap + 2.0 * radius, epsabs=1e-13)
        oracle = -CMM.b12 * (PI / 10.0) * val
        closed = sphere_half_space_energy(CMM, SpherePlateParams(radius, gap))
        assert closed == pytest.approx(oracle, rel=1e-10)

    def test_proximity_regime_matches_balian_duplantier_leading_term(self):
        # d << R: both are dominated by the R/d^2 term, so compare coefficients
        r_, d = 1.0, 1e-4
        ours = sphere_half_space_energy(CMM, SpherePlateParams(r_, d))
        lead = -CMM.b12 * (PI**2 / 30.0) * r_ / d**2
        assert ours == pytest.approx(lead, rel=2e-4)
        ref = balian_duplantier_reference(r_, d)
        assert ref == pytest.approx(-(1.0 / (8.0 * PI)) * r_ / d**2, rel=2e-4)

    def test_reference_validation(self):
        with pytest.raises(ValueError):
            balian_duplantier_reference(1.0, -1.0)


class TestMoleculePair:
    def test_law(self):
        assert molecule_pair_energy(2.0, 3.0, 1.0) == pytest.approx(
            -(23.0 / (4.0 * PI)) * 6.0, rel=1e-12)

    def test_r7_scaling(self):
        assert molecule_pair_energy(1.0, 1.0, 2.0) == pytest.approx(
            molecule_pair_energy(1.0, 1.0, 1.0) / 128.0, rel=1e-12)

    def test_zero_separation(self):
        with pytest.raises(ValueError):
            molecule_pair_energy(1.0, 1.0, 0.0)


class TestSceneDispatch:
    def test_point_pair(self):
        s = Scene(PointParticle((0, 0, 0), 2.0), PointParticle((0, 0, 3), 5.0),
                  METAL, METAL)
        assert scene_energy(s) == pytest.approx(-CMM.b12 * 10.0 * 3.0**-7, rel=1e-12)

    def test_point_half_space_either_order(self):
        p = PointParticle((0, 0, 2), 1.0)
        hs = HalfSpace((0, 0, 1), 0.0)
        s1 = Scene(p, hs, METAL, METAL)
        s2 = Scene(hs, p, METAL, METAL)
        assert scene_energy(s1) == scene_energy(s2)
        assert scene_energy(s1) == pytest.approx(
            point_half_space_energy(CMM, 2.0, 1.0), rel=1e-12)

    def test_sphere_half_space(self):
        s = Scene(Sphere((0, 0, 2), 1.0), HalfSpace((0, 0, 1), 0.0), METAL, METAL)
        assert scene_energy(s) == pytest.approx(
            sphere_half_space_energy(CMM, SpherePlateParams(1.0, 1.0)), rel=1e-12)

    def test_sphere_half_space_n6_unsupported(self):
        s = Scene(Sphere((0, 0, 2), 1.0), HalfSpace((0, 0, 1), 0.0),
                  METAL, METAL, n=6)
        with pytest.raises(NoAnalyticFormError):
            scene_energy(s)

    def test_slab_pair_recognized_along_x(self):
        s = Scene(Box((-1.0, -0.5, -0.5), (0.0, 0.5, 0.5)),
                  Box((2.0, -0.5, -0.5), (3.0, 0.5, 0.5)), METAL, METAL)
        assert scene_energy(s) == pytest.approx(
            slab_slab_energy(CMM, SlabPairParams(1.0, 2.0, 1.0)), rel=1e-12)

    def test_general_box_pair_has_no_form(self):
        s = Scene(Box((0, 0, 0), (1, 2, 1)), Box((0, 0, 2), (1, 1, 3)),
                  METAL, METAL)
        with pytest.raises(NoAnalyticFormError):
            scene_energy(s)

    def test_sphere_pair_has_no_form(self):
        s = Scene(Sphere((0, 0, 0), 1.0), Sphere((0, 0, 4), 1.0), METAL, METAL)
        with pytest.raises(NoAnalyticFormError):
            scene_energy(s)
