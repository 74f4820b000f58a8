import math

import pytest

from dispersia.geometry import Box, HalfSpace, PointParticle, Sphere, volume
from dispersia.octree import (
    HARD_DEPTH_LIMIT, Cell, Octree, ResourceLimitError, admissible,
    build_octree, iter_leaves,
)


def _leaf_volume(root):
    return math.fsum(c.volume for c in iter_leaves(root))


class TestCellAndAdmissibility:
    def test_cell_diag(self):
        c = Cell((0, 0, 0), (1, 2, 2), 4.0, (0.5, 1.0, 1.0),
                 (1 / 12, 4 / 12, 4 / 12), 0)
        assert c.diag == pytest.approx(3.0)
        assert c.box_volume() == pytest.approx(4.0)

    def test_far_pair_admissible(self):
        a = Cell((0, 0, 0), (1, 1, 1), 1.0, (0.5, 0.5, 0.5), (0,) * 3, 0)
        b = Cell((10, 0, 0), (11, 1, 1), 1.0, (10.5, 0.5, 0.5), (0,) * 3, 0)
        assert admissible(a, b, 0.5)
        assert not admissible(a, b, 0.3)

    def test_coincident_centroids_never_admissible(self):
        a = Cell((0, 0, 0), (1, 1, 1), 1.0, (0.5, 0.5, 0.5), (0,) * 3, 0)
        assert not admissible(a, a, 2.0)

    def test_theta_must_be_positive(self):
        a = Cell((0, 0, 0), (1, 1, 1), 1.0, (0.5, 0.5, 0.5), (0,) * 3, 0)
        with pytest.raises(ValueError):
            admissible(a, a, 0.0)


class TestBoxTree:
    def test_root_is_exact(self):
        t = Octree(Box((0, 0, 0), (2, 2, 2)))
        assert t.root.volume == pytest.approx(8.0)
        assert t.root.centroid == (1.0, 1.0, 1.0)
        assert t.root.var == tuple([4.0 / 12.0] * 3)

    def test_children_partition_volume(self):
        t = Octree(Box((0, 0, 0), (1, 1, 1)))
        kids = t.children(t.root)
        assert len(kids) == 8
        assert math.fsum(k.volume for k in kids) == pytest.approx(1.0)

    def test_clipped_children(self):
        # box occupying one octant of its (padded) bounds
        t = Octree(Box((0, 0, 0), (1, 1, 1)), bounds=Box((0, 0, 0), (2, 2, 2)))
        kids = t.children(t.root)
        assert len(kids) == 1
        assert kids[0].volume == pytest.approx(1.0)

    def test_children_cached(self):
        t = Octree(Box((0, 0, 0), (1, 1, 1)))
        assert t.children(t.root) is t.children(t.root)

    def test_depth_limit_enforced(self):
        t = Octree(Box((0, 0, 0), (1, 1, 1)))
        c = t.root
        c.depth = HARD_DEPTH_LIMIT  # simulate a cell at the limit
        with pytest.raises(ResourceLimitError):
            t.children(c)


class TestSphereTree:
    BODY = Sphere((0.0, 0.0, 0.0), 1.0)

    @pytest.mark.parametrize("depth,tol", [(4, 5e-2), (6, 1e-2)])
    def test_volume_converges_with_depth(self, depth, tol):
        root = build_octree(self.BODY, Box((-1, -1, -1), (1, 1, 1)), depth)
        vol = _leaf_volume(root)
        assert abs(vol - volume(self.BODY)) / volume(self.BODY) <= tol

    def test_centroid_at_center(self):
        root = build_octree(self.BODY, Box((-1, -1, -1), (1, 1, 1)), 5)
        assert max(abs(c) for c in root.centroid) <= 1e-9

    def test_exterior_cells_pruned(self):
        t = Octree(self.BODY, bounds=Box((-2, -2, -2), (2, 2, 2)))
        # corner octant of the double-size bounds barely grazes the sphere
        for k in t.children(t.root):
            assert k.volume > 0.0

    def test_disjoint_bounds_rejected(self):
        with pytest.raises(ValueError):
            Octree(self.BODY, bounds=Box((5, 5, 5), (6, 6, 6)))


class TestHalfSpaceTree:
    def test_axis_aligned_clip_is_exact(self):
        hs = HalfSpace((0, 0, 1), 0.0)  # z <= 0
        t = Octree(hs, bounds=Box((-1, -1, -1), (1, 1, 1)))
        assert t.root.volume == pytest.approx(4.0)
        assert t.root.centroid[2] == pytest.approx(-0.5)

    def test_downward_normal(self):
        hs = HalfSpace((0, 0, -1), -2.0)  # -z <= -2, i.e. z >= 2
        t = Octree(hs, bounds=Box((0, 0, 0), (4, 4, 4)))
        assert t.root.volume == pytest.approx(32.0)
        assert t.root.centroid[2] == pytest.approx(3.0)

    def test_oblique_normal_uses_occupancy(self):
        s = 1.0 / math.sqrt(2.0)
        hs = HalfSpace((s, 0.0, s), 0.0)
        root = build_octree(hs, Box((-1, -1, -1), (1, 1, 1)), 5)
        # plane through the cube center: exactly half the volume
        assert abs(_leaf_volume(root) - 4.0) / 4.0 <= 2e-2

    def test_needs_bounds(self):
        with pytest.raises(ValueError):
            Octree(HalfSpace((0, 0, 1), 0.0))


class TestPointTree:
    def test_point_cell_is_terminal(self):
        t = Octree(PointParticle((0.25, 0.25, 0.25), 2.0))
        assert t.root.volume == 2.0
        assert t.root.diag == 0.0
        assert t.children(t.root) == []


class TestBuildOctree:
    def test_box_needs_no_refinement(self):
        root = build_octree(Box((0, 0, 0), (1, 1, 1)), Box((0, 0, 0), (1, 1, 1)), 6)
        assert list(iter_leaves(root)) == [root]

    def test_leaf_volumes_sum_to_total(self):
        root = build_octree(Sphere((0, 0, 0), 1.0), Box((-1, -1, -1), (1, 1, 1)), 5)
        assert _leaf_volume(root) == pytest.approx(root.volume, rel=1e-12)

    def test_max_depth_respected(self):
        root = build_octree(Sphere((0, 0, 0), 1.0), Box((-1, -1, -1), (1, 1, 1)), 3)
        assert max(c.depth for c in iter_leaves(root)) <= 3

    def test_bad_depth(self):
        with pytest.raises(ValueError):
            build_octree(Box((0, 0, 0), (1, 1, 1)), Box((0, 0, 0), (1, 1, 1)), -1)
        with pytest.raises(ResourceLimitError):
            build_octree(Box((0, 0, 0), (1, 1, 1)), Box((0, 0, 0), (1, 1, 1)),
                         HARD_DEPTH_LIMIT + 1)
