import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mayocut import Ball, Box, GridMeasure, ShapeSpec, discretize, rasterize
from mayocut.fixtures import mirror_disks_shapes


def test_unit_box_on_half_grid():
    g = rasterize(ShapeSpec((Box((0.0, 0.0), (1.0, 1.0)),)), 0.5)
    assert g.dims == (2, 2) and g.origin == (0.0, 0.0)
    assert np.array_equal(g.cell_masses, np.full((2, 2), 0.25))


def test_box_overlap_is_exact_on_unaligned_edges():
    g = rasterize(ShapeSpec((Box((0.25, 0.0), (1.0, 0.5), density=2.0),)), 0.5)
    assert g.total_mass == 0.75
    assert sorted(g.cell_masses.ravel()) == [0.25, 0.5]


def test_unit_disk_area():
    g = rasterize(ShapeSpec((Ball((0.0, 0.0), 1.0),)), 1 / 64)
    assert abs(g.total_mass - math.pi) <= 0.01 * math.pi


def test_two_disk_union_mass():
    a, b = mirror_disks_shapes()
    for s in (a, b):
        assert rasterize(s, 1 / 32).total_mass == pytest.approx(2 * math.pi, rel=0.01)


def test_mirror_fixture_rasterizes_symmetrically():
    a, b = mirror_disks_shapes()
    ga, gb = rasterize(a, 1 / 16), rasterize(b, 1 / 16)
    assert np.array_equal(ga.cell_masses, ga.cell_masses[:, ::-1])
    assert np.array_equal(ga.cell_masses, gb.cell_masses[::-1, :])
    assert ga.origin[0] == -gb.origin[0] - gb.dims[0] * gb.h


def test_unit_ball_volume_in_space():
    g = rasterize(ShapeSpec((Ball((0.0, 0.0, 0.0), 1.0),)), 1 / 16)
    assert g.total_mass == pytest.approx(4 / 3 * math.pi, rel=0.01)


def test_overlapping_components_add_up():
    one = rasterize(ShapeSpec((Box((0.0, 0.0), (1.0, 1.0)),)), 0.25)
    two = rasterize(ShapeSpec((Box((0.0, 0.0), (1.0, 1.0)), Box((0.0, 0.0), (1.0, 1.0)))), 0.25)
    assert two.total_mass == 2 * one.total_mass


def test_discretize_examples():
    g = GridMeasure((0.0, 0.0), 1.0, (2, 1), [[3.0], [5.0]])
    mu = discretize(g)
    assert mu.atoms == [((0.5, 0.5), 3.0), ((1.5, 0.5), 5.0)]
    g = GridMeasure((0.0, 0.0), 0.5, (2, 2), [[0.0, 0.0], [0.0, 2.0]])
    assert discretize(g).atoms == [((0.75, 0.75), 2.0)]


def test_disk_conservation_at_one_eighth():
    g = rasterize(ShapeSpec((Ball((0.0, 0.0), 1.0),)), 1 / 8)
    assert discretize(g).total_mass == g.total_mass


def test_validation():
    with pytest.raises(ValueError):
        Ball((0.0, 0.0), 0.0)
    with pytest.raises(ValueError):
        Box((0.0, 0.0), (0.0, 1.0))
    with pytest.raises(ValueError):
        ShapeSpec(())
    with pytest.raises(ValueError):
        rasterize(ShapeSpec((Box((0.0, 0.0), (1.0, 1.0)),)), 0)
    with pytest.raises(ValueError):
        GridMeasure((0.0,), 1.0, (1,), [-1.0])


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.2, 2), st.sampled_from([1 / 4, 1 / 8]))
def test_conservation_through_the_pipeline(x, y, r, h):
    g = rasterize(ShapeSpec((Ball((x, y), r),)), h)
    assert discretize(g).total_mass == g.total_mass
    centers = np.array(discretize(g).points)
    # centroids sit on the lattice of cell midpoints
    assert np.allclose(((centers / h) - 0.5) % 1, 0)
