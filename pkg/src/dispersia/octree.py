"""Octree decomposition of bodies into volume cells.

Cells carry the clipped volume, the centroid of the clipped region, and its
per-axis second central moments; the moments feed the integrator's
curvature correction.  Box clipping is exact.  Sphere cells that straddle
the surface are classified by center distance +/- half diagonal and, when
terminal, assigned volume and moments from a fixed sub-sample occupancy
grid, so their error is controlled by depth.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import Body, Box, HalfSpace, PointParticle, Sphere, Vec3, aabb

#: Subdividing past this depth is a configuration error, not a numerics knob.
HARD_DEPTH_LIMIT = 24


class ResourceLimitError(RuntimeError):
    pass


class Cell:
    """One octree node: bounding box plus clipped-region statistics."""

    __slots__ = ("lo", "hi", "volume", "centroid", "var", "depth", "children",
                 "diag")

    def __init__(self, lo, hi, vol, centroid, var, depth):
        self.lo = lo
        self.hi = hi
        self.volume = vol
        self.centroid = centroid
        self.var = var  # per-axis second central moment of the clipped region
        self.depth = depth
        self.children = None  # None = not expanded yet; [] = cannot subdivide
        self.diag = math.sqrt((hi[0] - lo[0]) ** 2 + (hi[1] - lo[1]) ** 2
                              + (hi[2] - lo[2]) ** 2)

    def box_volume(self) -> float:
        return math.prod(b - a for a, b in zip(self.lo, self.hi))


def admissible(cell_a: Cell, cell_b: Cell, theta: float) -> bool:
    """Multipole acceptance: (diagA + diagB) / centroid distance <= theta.

    Coincident centroids are inadmissible so the traversal keeps splitting.
    """
    if theta <= 0.0:
        raise ValueError(f"theta must be positive, got {theta}")
    d = math.dist(cell_a.centroid, cell_b.centroid)
    if d == 0.0:
        return False
    return (cell_a.diag + cell_b.diag) / d <= theta


def _octants(lo, hi):
    mx, my, mz = (0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]),
                  0.5 * (lo[2] + hi[2]))
    return (
        ((lo[0], lo[1], lo[2]), (mx, my, mz)),
        ((mx, lo[1], lo[2]), (hi[0], my, mz)),
        ((lo[0], my, lo[2]), (mx, hi[1], mz)),
        ((mx, my, lo[2]), (hi[0], hi[1], mz)),
        ((lo[0], lo[1], mz), (mx, my, hi[2])),
        ((mx, lo[1], mz), (hi[0], my, hi[2])),
        ((lo[0], my, mz), (mx, hi[1], hi[2])),
        ((mx, my, mz), (hi[0], hi[1], hi[2])),
    )


class Octree:
    """Lazy octree of one body over explicit bounds.

    ``subsample`` is the per-axis occupancy grid used for terminal cells that
    straddle a curved surface (3 reproduces the cheap classifier; the
    integrator uses a finer grid for its moment estimates).
    """

    def __init__(self, body: Body, bounds: Box | None = None, subsample: int = 3):
        if bounds is None:
            if isinstance(body, HalfSpace):
                raise ValueError("a half-space octree needs explicit bounds")
            lo, hi = aabb(body)
            if isinstance(body, PointParticle):
                eps = 0.5 * body.dv ** (1.0 / 3.0) or 0.5
                lo = tuple(x - eps for x in lo)
                hi = tuple(x + eps for x in hi)
            bounds = Box(lo, hi)
        self.body = body
        self.bounds = bounds
        self.subsample = int(subsample)
        self._root = self._make_cell(bounds.lo, bounds.hi, 0)
        if self._root is None:
            raise ValueError("body does not intersect the octree bounds")

    @property
    def root(self) -> Cell:
        return self._root

    def children(self, cell: Cell) -> list[Cell]:
        """Expand (and cache) the non-empty children of a cell."""
        if cell.children is not None:
            return cell.children
        if cell.depth >= HARD_DEPTH_LIMIT:
            raise ResourceLimitError(
                f"octree depth {cell.depth} exceeds hard limit {HARD_DEPTH_LIMIT}")
        if isinstance(self.body, PointParticle):
            cell.children = []
            return cell.children
        kids = []
        for lo, hi in _octants(cell.lo, cell.hi):
            c = self._make_cell(lo, hi, cell.depth + 1)
            if c is not None:
                kids.append(c)
        cell.children = kids
        return kids

    # -- clipping ----------------------------------------------------------

    def _make_cell(self, lo, hi, depth) -> Cell | None:
        body = self.body
        if isinstance(body, Box):
            return self._clip_box(lo, hi, depth, body.lo, body.hi)
        if isinstance(body, Sphere):
            return self._clip_sphere(lo, hi, depth, body)
        if isinstance(body, HalfSpace):
            return self._clip_halfspace(lo, hi, depth, body)
        if isinstance(body, PointParticle):
            p = body.position
            if all(a <= x <= b for x, a, b in zip(p, lo, hi)):
                # degenerate point cell: zero diagonal, exact kernel evaluation
                cell = Cell(p, p, body.dv, p, (0.0, 0.0, 0.0), depth)
                cell.children = []
                return cell
            return None
        raise TypeError(f"not a body: {body!r}")

    @staticmethod
    def _clip_box(lo, hi, depth, blo, bhi) -> Cell | None:
        clo = tuple(max(a, c) for a, c in zip(lo, blo))
        chi = tuple(min(b, d) for b, d in zip(hi, bhi))
        ext = tuple(b - a for a, b in zip(clo, chi))
        if min(ext) <= 0.0:
            return None
        vol = ext[0] * ext[1] * ext[2]
        cen = tuple(0.5 * (a + b) for a, b in zip(clo, chi))
        var = tuple(e * e / 12.0 for e in ext)
        return Cell(lo, hi, vol, cen, var, depth)

    def _clip_sphere(self, lo, hi, depth, body: Sphere) -> Cell | None:
        cen = tuple(0.5 * (a + b) for a, b in zip(lo, hi))
        half = 0.5 * math.sqrt(sum((b - a) ** 2 for a, b in zip(lo, hi)))
        dc = math.dist(cen, body.center)
        if dc - half >= body.radius:
            return None
        if dc + half <= body.radius:
            ext = tuple(b - a for a, b in zip(lo, hi))
            var = tuple(e * e / 12.0 for e in ext)
            return Cell(lo, hi, ext[0] * ext[1] * ext[2], cen, var, depth)
        return self._occupancy_cell(
            lo, hi, depth,
            lambda pts: ((pts - body.center) ** 2).sum(axis=1) <= body.radius**2)

    def _clip_halfspace(self, lo, hi, depth, body: HalfSpace) -> Cell | None:
        n, off = body.normal, body.offset
        axis = next((j for j in range(3) if abs(abs(n[j]) - 1.0) <= 1e-12), None)
        if axis is not None:
            # axis-aligned plane: the clipped region is a box, so clip exactly
            blo, bhi = list(lo), list(hi)
            if n[axis] > 0:
                bhi[axis] = min(hi[axis], off)
            else:
                blo[axis] = max(lo[axis], -off)
            return self._clip_box(lo, hi, depth, tuple(blo), tuple(bhi))
        return self._occupancy_cell(
            lo, hi, depth, lambda pts: pts @ np.asarray(n) <= off)

    def _occupancy_cell(self, lo, hi, depth, inside) -> Cell | None:
        m = self.subsample
        axes = [np.asarray(lo[j]) + (np.asarray(hi[j]) - lo[j])
                * (np.arange(m) + 0.5) / m for j in range(3)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
        occ = inside(grid)
        cnt = int(occ.sum())
        if cnt == 0:
            return None
        pts = grid[occ]
        frac = cnt / m**3
        vol = frac * math.prod(b - a for a, b in zip(lo, hi))
        cen = tuple(float(x) for x in pts.mean(axis=0))
        sub2 = tuple(((b - a) / m) ** 2 / 12.0 for a, b in zip(lo, hi))
        var = tuple(float(v) + s for v, s in zip(pts.var(axis=0), sub2))
        return Cell(lo, hi, vol, cen, var, depth)


def build_octree(body: Body, bounds: Box, max_depth: int, subsample: int = 3) -> Cell:
    """Eagerly decompose a body, refining only inexact (surface) cells.

    Leaves are cells whose clipped statistics are exact (boxes, interior
    sphere cells) or cells at ``max_depth``.  Internal volumes and centroids
    are re-aggregated bottom-up from the children so that children always
    partition their parent exactly.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    if max_depth > HARD_DEPTH_LIMIT:
        raise ResourceLimitError(
            f"max_depth {max_depth} exceeds hard limit {HARD_DEPTH_LIMIT}")
    tree = Octree(body, bounds, subsample=subsample)

    exact = isinstance(body, (Box, PointParticle)) or (
        isinstance(body, HalfSpace)
        and any(abs(abs(c) - 1.0) <= 1e-12 for c in body.normal))

    def refine(cell: Cell):
        if exact or cell.depth >= max_depth:
            return
        if isinstance(body, Sphere):
            half = 0.5 * cell.diag
            if math.dist(cell.centroid, body.center) + half <= body.radius:
                return  # interior cell, already exact
        kids = tree.children(cell)
        for k in kids:
            refine(k)
        if kids:
            vol = sum(k.volume for k in kids)
            cell.volume = vol
            cell.centroid = tuple(
                sum(k.volume * k.centroid[j] for k in kids) / vol for j in range(3))

    root = tree.root
    refine(root)
    return root


def iter_leaves(cell: Cell):
    """Leaves of an eagerly built tree (cells never expanded or childless)."""
    if not cell.children:
        yield cell
        return
    for k in cell.children:
        yield from iter_leaves(k)
