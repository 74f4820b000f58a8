"""Forces by central differencing of the energy, and parameter sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from . import analytic
from .geometry import (
    Box, HalfSpace, PointParticle, Scene, Sphere, min_gap, translate,
)
from .integrator import EnergyEstimate, IntegratorSettings, PairIntegrator

#: Default differencing step as a fraction of the gap.
DEFAULT_STEP_FRACTION = 1e-3


def separation_axis(scene: Scene) -> tuple[float, float, float]:
    """Unit vector along which body 2 moves to widen the gap."""
    b1, b2 = scene.body1, scene.body2
    if isinstance(b2, HalfSpace):
        return tuple(-c for c in b2.normal)
    if isinstance(b1, HalfSpace):
        return b1.normal

    def center(b):
        if isinstance(b, Box):
            return b.center
        if isinstance(b, Sphere):
            return b.center
        return b.position

    c1, c2 = center(b1), center(b2)
    d = tuple(y - x for x, y in zip(c1, c2))
    norm = math.sqrt(sum(c * c for c in d))
    if norm == 0.0:
        raise ValueError("bodies have coincident centers; no separation axis")
    if isinstance(b1, Box) and isinstance(b2, Box):
        # axis-aligned boxes separate along their dominant clearance axis
        gaps = [max(b2.lo[j] - b1.hi[j], b1.lo[j] - b2.hi[j]) for j in range(3)]
        j = max(range(3), key=lambda i: gaps[i])
        if gaps[j] > 0:
            axis = [0.0, 0.0, 0.0]
            axis[j] = 1.0 if b2.lo[j] >= b1.hi[j] else -1.0
            return tuple(axis)
    return tuple(c / norm for c in d)


def scene_at_gap(scene: Scene, gap: float) -> Scene:
    """Scene with body 2 slid along the separation axis to the requested gap."""
    if gap <= 0.0:
        raise ValueError(f"gap must be positive, got {gap}")
    axis = separation_axis(scene)
    delta = gap - min_gap(scene.body1, scene.body2)
    shift = tuple(delta * c for c in axis)
    return replace(scene, body2=translate(scene.body2, shift))


def force_along_gap(scene: Scene, h: float | None = None,
                    backend: str = "analytic",
                    settings: IntegratorSettings | None = None,
                    workers: int | None = None) -> float:
    """-dU/d(gap) by central differences; negative values mean attraction.

    ``h`` defaults to 1e-3 of the current gap.  The integrator backend
    evaluates both displaced configurations on the same pair of octrees so
    that discretization error largely cancels.
    """
    gap = min_gap(scene.body1, scene.body2)
    if h is None:
        h = DEFAULT_STEP_FRACTION * gap
    if h <= 0.0 or gap - h <= 0.0:
        raise ValueError(f"step h = {h:g} crosses contact at gap {gap:g}")
    if backend == "analytic":
        u_plus = analytic.scene_energy(scene_at_gap(scene, gap + h))
        u_minus = analytic.scene_energy(scene_at_gap(scene, gap - h))
    elif backend == "integrator":
        axis = separation_axis(scene)
        pi = PairIntegrator(scene, settings)
        u_plus = pi.energy(shift2=tuple(h * c for c in axis), workers=workers).value
        u_minus = pi.energy(shift2=tuple(-h * c for c in axis), workers=workers).value
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return -(u_plus - u_minus) / (2.0 * h)


@dataclass(frozen=True)
class SweepSpec:
    """Which scene parameter to sweep and with which energy backend."""

    parameter: str  # gap | thickness | radius | exponent
    values: Sequence[float]
    backend: str = "analytic"  # analytic | integrator | both

    def __post_init__(self):
        if self.parameter not in ("gap", "thickness", "radius", "exponent"):
            raise ValueError(f"unknown sweep parameter {self.parameter!r}")
        if self.backend not in ("analytic", "integrator", "both"):
            raise ValueError(f"unknown backend {self.backend!r}")
        vals = list(self.values)
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("sweep values must be strictly increasing")


@dataclass(frozen=True)
class SweepRow:
    parameter: float
    energy: float
    force: float
    rel_error: float
    backend: str
    kernel_exponent: int
    status: str = "ok"


def _scene_with(scene: Scene, parameter: str, value: float) -> Scene:
    if parameter == "gap":
        return scene_at_gap(scene, value)
    if parameter == "exponent":
        n = int(value)
        if n != value:
            raise ValueError(f"exponent must be integral, got {value}")
        return replace(scene, n=n)
    if parameter == "radius":
        sph_attr = "body1" if isinstance(scene.body1, Sphere) else "body2"
        body = getattr(scene, sph_attr)
        if not isinstance(body, Sphere):
            raise ValueError("radius sweep needs a sphere body")
        # recenter in the same step as the radius change so the surface gap
        # stays fixed and no intermediate (possibly touching) scene is built
        axis = separation_axis(scene)
        sign = 1.0 if sph_attr == "body2" else -1.0
        delta = sign * (value - body.radius)
        center = tuple(c + delta * a for c, a in zip(body.center, axis))
        return replace(scene, **{sph_attr: Sphere(center, value)})
    if parameter == "thickness":
        if not (isinstance(scene.body1, Box) and isinstance(scene.body2, Box)):
            raise ValueError("thickness sweep needs a box pair")
        axis = separation_axis(scene)
        j = max(range(3), key=lambda i: abs(axis[i]))
        sign = 1.0 if axis[j] > 0 else -1.0

        def rethick(box: Box, outward: float) -> Box:
            lo, hi = list(box.lo), list(box.hi)
            if outward > 0:
                hi[j] = lo[j] + value
            else:
                lo[j] = hi[j] - value
            return Box(tuple(lo), tuple(hi))

        # grow each slab away from the gap
        return replace(scene,
                       body1=rethick(scene.body1, -sign),
                       body2=rethick(scene.body2, sign))
    raise AssertionError(parameter)


def _evaluate(scene: Scene, backend: str,
              settings: IntegratorSettings | None,
              workers: int | None) -> tuple[float, float, float]:
    """Returns (energy, force, rel_error) for one backend."""
    if backend == "analytic":
        u = analytic.scene_energy(scene)
        f = force_along_gap(scene, backend="analytic")
        return u, f, 0.0
    est: EnergyEstimate = PairIntegrator(scene, settings).energy(workers=workers)
    f = force_along_gap(scene, backend="integrator",
                        settings=settings, workers=workers)
    return est.value, f, est.rel_error_estimate


def run_sweep(spec: SweepSpec, scene: Scene,
              settings: IntegratorSettings | None = None,
              workers: int | None = None) -> list[SweepRow]:
    """Energy/force table over the swept parameter.

    Per-row backend failures are recorded in the row status, not raised.
    """
    backends = ["analytic", "integrator"] if spec.backend == "both" else [spec.backend]
    rows: list[SweepRow] = []
    for value in spec.values:
        for backend in backends:
            try:
                row_scene = _scene_with(scene, spec.parameter, value)
                u, f, rel = _evaluate(row_scene, backend, settings, workers)
                rows.append(SweepRow(value, u, f, rel, backend, row_scene.n))
            except (ValueError, NotImplementedError, analytic.NoAnalyticFormError) as exc:
                rows.append(SweepRow(value, math.nan, math.nan, math.nan,
                                     backend, scene.n, status=f"error: {exc}"))
    return rows
