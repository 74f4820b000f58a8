"""Closed-form interaction energies for the canonical geometries.

All functions return energies in units of hbar*c / length-unit (natural
units); callers apply a UnitSystem factor if needed.  The n = 6 variants
reuse the pair constant as the kernel strength placeholder: no closed
high-temperature coefficient is available, only the power law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import (
    Box, HalfSpace, PointParticle, Scene, Sphere, min_gap,
)
from .materials import PairCoupling, pair_coupling


class NoAnalyticFormError(ValueError):
    """Raised when a scene has no supported closed form."""


@dataclass(frozen=True)
class SlabPairParams:
    """Two coaxial square slabs of side L and thickness D separated by gap a."""

    side: float
    gap: float
    thickness: float  # math.inf for semi-infinite slabs

    def __post_init__(self):
        if self.side <= 0 or self.gap <= 0 or self.thickness <= 0:
            raise ValueError("slab side, gap and thickness must all be positive")


@dataclass(frozen=True)
class SpherePlateParams:
    """Sphere of radius R whose surface sits a gap d above a half-space."""

    radius: float
    gap: float

    def __post_init__(self):
        if self.radius <= 0 or self.gap <= 0:
            raise ValueError("sphere radius and gap must be positive")


def _check_exponent(n: int):
    if n not in (6, 7):
        raise ValueError(f"kernel exponent must be 6 or 7, got {n}")


def molecule_pair_energy(alpha1: float, alpha2: float, r: float) -> float:
    """Retarded attraction of two molecules: -(23/4pi) alpha1 alpha2 / r^7."""
    if r <= 0.0:
        raise ValueError(f"separation must be positive, got {r}")
    return -(23.0 / (4.0 * math.pi)) * alpha1 * alpha2 / r**7


def slab_slab_energy(coupling: PairCoupling, p: SlabPairParams, n: int = 7) -> float:
    """Plate-limit slab pair energy with generic kernel exponent.

        U = -B12 L^2 (2pi/(n-2)) / ((n-3)(n-4))
            * [a^-(n-4) + (a+2D)^-(n-4) - 2 (a+D)^-(n-4)]

    Exact per unit area when the slabs are laterally coextensive and at
    least one is laterally unbounded; for finite L it is the L >> a, D
    large-plate approximation.
    """
    _check_exponent(n)
    a, d = p.gap, p.thickness
    m = n - 4
    if math.isinf(d):
        bracket = a**-m
    else:
        bracket = a**-m + (a + 2.0 * d) ** -m - 2.0 * (a + d) ** -m
    pref = 2.0 * math.pi / ((n - 2) * (n - 3) * (n - 4))
    return -coupling.b12 * p.side**2 * pref * bracket


def casimir_plate_energy(side: float, gap: float) -> float:
    """Casimir's parallel-plate result -(pi^2/720) L^2 / a^3."""
    if side <= 0 or gap <= 0:
        raise ValueError("plate side and gap must be positive")
    return -(math.pi**2 / 720.0) * side**2 / gap**3


def point_half_space_energy(coupling: PairCoupling, y: float, dv: float,
                            n: int = 7) -> float:
    """Corpuscle of volume dv a distance y from a half-space.

    U = -B12 * 2pi/((n-2)(n-3)) * y^-(n-3) * dv; for n = 7 this is the
    -B (pi/10) y^-4 dv law.
    """
    _check_exponent(n)
    if y <= 0.0:
        raise ValueError(f"distance must be positive, got {y}")
    if dv <= 0.0:
        raise ValueError(f"volume must be positive, got {dv}")
    return -coupling.b12 * 2.0 * math.pi / ((n - 2) * (n - 3)) * y ** (3 - n) * dv


def halfspace_tail_per_volume(y: float, truncation: float, n: int = 7) -> float:
    """Kernel integral over the half-space remainder below a truncation slab.

    A source point a distance y above the surface sees, beyond truncation
    depth t, a fresh half-space at distance y + t; the per-unit-source-volume
    integral is 2pi/((n-2)(n-3)) (y+t)^-(n-3).
    """
    _check_exponent(n)
    return 2.0 * math.pi / ((n - 2) * (n - 3)) * (y + truncation) ** (3 - n)


def sphere_half_space_energy(coupling: PairCoupling, p: SpherePlateParams) -> float:
    """Metal-style sphere-plate closed form (n = 7 only).

    U = -B12 (pi^2/30) [R/d^2 - 1/d + 1/(d+2R) + R/(d+2R)^2]
    """
    r_, d = p.radius, p.gap
    bracket = (r_ / d**2 - 1.0 / d + 1.0 / (d + 2.0 * r_)
               + r_ / (d + 2.0 * r_) ** 2)
    return -coupling.b12 * (math.pi**2 / 30.0) * bracket


def balian_duplantier_reference(radius: float, gap: float) -> float:
    """Two-scattering sphere-plate reference -(1/8pi)(R/d^2 - 1/d), valid d << R."""
    if gap <= 0 or radius <= 0:
        raise ValueError("radius and gap must be positive")
    return -(1.0 / (8.0 * math.pi)) * (radius / gap**2 - 1.0 / gap)


# -- scene dispatch ---------------------------------------------------------

def _slab_pair_params(b1: Box, b2: Box) -> SlabPairParams | None:
    """Recognize two coaxial boxes with identical square cross-sections."""
    for axis in range(3):
        lat = [j for j in range(3) if j != axis]
        if any(abs(b1.lo[j] - b2.lo[j]) > 1e-12 or abs(b1.hi[j] - b2.hi[j]) > 1e-12
               for j in lat):
            continue
        sides = [b1.hi[j] - b1.lo[j] for j in lat]
        if abs(sides[0] - sides[1]) > 1e-12:
            continue
        d1 = b1.hi[axis] - b1.lo[axis]
        d2 = b2.hi[axis] - b2.lo[axis]
        if abs(d1 - d2) > 1e-12:
            continue
        gap = max(b2.lo[axis] - b1.hi[axis], b1.lo[axis] - b2.hi[axis])
        if gap <= 0:
            continue
        return SlabPairParams(side=sides[0], gap=gap, thickness=d1)
    return None


def scene_energy(scene: Scene) -> float:
    """Closed-form energy of a scene, in the scene's units.

    Supports point-point, point-half-space, sphere-half-space (n = 7) and
    equal-square-slab pairs; raises NoAnalyticFormError otherwise.
    """
    c = pair_coupling(scene.material1, scene.material2)
    u = scene.units.hbar_c
    b1, b2 = scene.body1, scene.body2
    if isinstance(b1, HalfSpace):
        b1, b2 = b2, b1

    if isinstance(b1, PointParticle) and isinstance(b2, PointParticle):
        r = math.dist(b1.position, b2.position)
        return -c.b12 * b1.dv * b2.dv * r ** (-scene.n) * u
    if isinstance(b1, PointParticle) and isinstance(b2, HalfSpace):
        y = min_gap(b1, b2)
        return point_half_space_energy(c, y, b1.dv, scene.n) * u
    if isinstance(b1, Sphere) and isinstance(b2, HalfSpace):
        if scene.n != 7:
            raise NoAnalyticFormError("sphere-half-space closed form exists for n = 7 only")
        d = min_gap(b1, b2)
        return sphere_half_space_energy(c, SpherePlateParams(b1.radius, d)) * u
    if isinstance(b1, Box) and isinstance(b2, Box):
        p = _slab_pair_params(b1, b2)
        if p is not None:
            return slab_slab_energy(c, p, scene.n) * u
        raise NoAnalyticFormError(
            "box pair is not a coaxial equal-square slab pair; no closed form")
    raise NoAnalyticFormError(
        f"no analytic form for {type(b1).__name__}-{type(b2).__name__}")
