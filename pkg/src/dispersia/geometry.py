"""Geometric primitives, surface gaps, and the analytic box Fourier transform.

Bodies are axis-aligned in v1: rotated boxes add nothing to the supported
closed forms and would make gap computation and octree clipping inexact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Tuple

from .materials import Material, UnitSystem

Vec3 = Tuple[float, float, float]

#: Bodies closer than this fraction of the reference diameter are rejected:
#: the additive 1/r^n model is asymptotic and invalid near contact.
NEAR_CONTACT_FRACTION = 1e-6


def _as_vec(v) -> Vec3:
    x, y, z = v
    return (float(x), float(y), float(z))


@dataclass(frozen=True)
class Box:
    """Axis-aligned box given by its min and max corners."""

    lo: Vec3
    hi: Vec3

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_vec(self.lo))
        object.__setattr__(self, "hi", _as_vec(self.hi))
        for a, b in zip(self.lo, self.hi):
            if not b > a:
                raise ValueError(f"box needs positive extent on all axes: {self.lo} .. {self.hi}")

    @property
    def extent(self) -> Vec3:
        return tuple(b - a for a, b in zip(self.lo, self.hi))

    @property
    def center(self) -> Vec3:
        return tuple(0.5 * (a + b) for a, b in zip(self.lo, self.hi))


@dataclass(frozen=True)
class Sphere:
    center: Vec3
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_vec(self.center))
        if not self.radius > 0.0:
            raise ValueError(f"sphere radius must be > 0, got {self.radius}")


@dataclass(frozen=True)
class HalfSpace:
    """Region {x : normal . x <= offset}; the normal points out of the body."""

    normal: Vec3
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "normal", _as_vec(self.normal))
        n = math.sqrt(sum(c * c for c in self.normal))
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"half-space normal must be unit length, |n| = {n}")


@dataclass(frozen=True)
class PointParticle:
    """Infinitesimal corpuscle carrying a finite volume dv."""

    position: Vec3
    dv: float

    def __post_init__(self):
        object.__setattr__(self, "position", _as_vec(self.position))
        if not self.dv > 0.0:
            raise ValueError(f"point particle volume must be > 0, got {self.dv}")


Body = Box | Sphere | HalfSpace | PointParticle


def volume(body: Body) -> float:
    """Analytic volume; math.inf for a half-space."""
    if isinstance(body, Box):
        e = body.extent
        return e[0] * e[1] * e[2]
    if isinstance(body, Sphere):
        return 4.0 * math.pi / 3.0 * body.radius**3
    if isinstance(body, PointParticle):
        return body.dv
    if isinstance(body, HalfSpace):
        return math.inf
    raise TypeError(f"not a body: {body!r}")


def diameter(body: Body) -> float:
    """Characteristic size used for near-contact rejection."""
    if isinstance(body, Box):
        return math.sqrt(sum(e * e for e in body.extent))
    if isinstance(body, Sphere):
        return 2.0 * body.radius
    if isinstance(body, PointParticle):
        return body.dv ** (1.0 / 3.0)
    return math.inf


def aabb(body: Body) -> tuple[Vec3, Vec3]:
    """Axis-aligned bounds; raises for a half-space."""
    if isinstance(body, Box):
        return body.lo, body.hi
    if isinstance(body, Sphere):
        c, r = body.center, body.radius
        return tuple(x - r for x in c), tuple(x + r for x in c)
    if isinstance(body, PointParticle):
        return body.position, body.position
    raise ValueError("half-space has no finite bounding box")


def translate(body: Body, shift: Vec3) -> Body:
    if isinstance(body, Box):
        return Box(tuple(a + s for a, s in zip(body.lo, shift)),
                   tuple(b + s for b, s in zip(body.hi, shift)))
    if isinstance(body, Sphere):
        return replace(body, center=tuple(c + s for c, s in zip(body.center, shift)))
    if isinstance(body, PointParticle):
        return replace(body, position=tuple(p + s for p, s in zip(body.position, shift)))
    if isinstance(body, HalfSpace):
        d = sum(n * s for n, s in zip(body.normal, shift))
        return replace(body, offset=body.offset + d)
    raise TypeError(f"not a body: {body!r}")


def _point_box_dist(p: Vec3, lo: Vec3, hi: Vec3) -> float:
    s = 0.0
    for x, a, b in zip(p, lo, hi):
        d = max(a - x, x - b, 0.0)
        s += d * d
    return math.sqrt(s)


def _halfspace_support(hs: HalfSpace, body: Body) -> float:
    """min over the body of (normal . x), i.e. how close it dips toward the plane."""
    n = hs.normal
    if isinstance(body, Box):
        return sum(nj * (lo if nj > 0 else hi)
                   for nj, lo, hi in zip(n, body.lo, body.hi))
    if isinstance(body, Sphere):
        return sum(nj * cj for nj, cj in zip(n, body.center)) - body.radius
    if isinstance(body, PointParticle):
        return sum(nj * pj for nj, pj in zip(n, body.position))
    raise NotImplementedError("gap between two half-spaces is not supported")


def min_gap(a: Body, b: Body) -> float:
    """Shortest surface-to-surface distance; <= 0 means contact or overlap."""
    if isinstance(a, HalfSpace) and isinstance(b, HalfSpace):
        raise NotImplementedError("gap between two half-spaces is not supported")
    if isinstance(b, HalfSpace):
        a, b = b, a
    if isinstance(a, HalfSpace):
        return _halfspace_support(a, b) - a.offset

    if isinstance(a, Box) and isinstance(b, Box):
        s = 0.0
        for la, ha, lb, hb in zip(a.lo, a.hi, b.lo, b.hi):
            d = max(lb - ha, la - hb, 0.0)
            s += d * d
        return math.sqrt(s)

    # reduce the remaining pairs to point-vs-set distances
    if isinstance(a, (Sphere, PointParticle)) and isinstance(b, Box):
        a, b = b, a
    if isinstance(a, Box):
        if isinstance(b, Sphere):
            return _point_box_dist(b.center, a.lo, a.hi) - b.radius
        return _point_box_dist(b.position, a.lo, a.hi)

    ca = a.center if isinstance(a, Sphere) else a.position
    cb = b.center if isinstance(b, Sphere) else b.position
    d = math.dist(ca, cb)
    if isinstance(a, Sphere):
        d -= a.radius
    if isinstance(b, Sphere):
        d -= b.radius
    return d


def box_fourier_volume(box: Box, q) -> complex:
    """Closed-form volume Fourier transform  integral over the box of exp(i q.r) dV.

    Separates per axis into exp(i q_j c_j) * 2 sin(q_j e_j / 2) / q_j with
    c the box center and e the extents; a zero component degenerates to e_j.
    """
    out = complex(1.0, 0.0)
    for qj, cj, ej in zip(q, box.center, box.extent):
        qj = float(qj)
        if qj == 0.0:
            out *= ej
        else:
            out *= cmath.exp(1j * qj * cj) * 2.0 * math.sin(0.5 * qj * ej) / qj
    return out


@dataclass(frozen=True)
class Scene:
    """Two disjoint material-tagged bodies plus kernel exponent and units."""

    body1: Body
    body2: Body
    material1: Material
    material2: Material
    n: int = 7
    units: UnitSystem = UnitSystem()

    def __post_init__(self):
        if self.n not in (6, 7):
            raise ValueError(f"kernel exponent must be 6 or 7, got {self.n}")
        g = min_gap(self.body1, self.body2)
        if g <= 0.0:
            raise ValueError(f"bodies overlap or touch (gap = {g:g})")
        sizes = [d for d in (diameter(self.body1), diameter(self.body2))
                 if math.isfinite(d)]
        if sizes and g < NEAR_CONTACT_FRACTION * max(sizes):
            raise ValueError(
                f"gap {g:g} is below {NEAR_CONTACT_FRACTION:g} of the body size; "
                "the additive large-separation model is invalid there")

    @property
    def gap(self) -> float:
        return min_gap(self.body1, self.body2)
