import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardylab.errors import ConstructionError, PositionError
from hardylab.geometry import (PolygonDomain, build_spiral_domain, l_domain,
                               rectangle_domain, regular_polygon, snap_inside,
                               spiral_channel_param)


def test_rectangle_contains_and_distance():
    dom = rectangle_domain(2.0, 1.0)
    assert dom.contains(1.0 + 0.5j)
    assert not dom.contains(2.5 + 0.5j)
    assert not dom.contains(-0.1 + 0.5j)
    assert dom.distance_to_boundary(1.0 + 0.5j) == pytest.approx(0.5)
    assert dom.distance_to_boundary(0.25 + 0.5j) == pytest.approx(0.25)
    assert dom.area() == pytest.approx(2.0)
    assert dom.diameter() == pytest.approx(np.hypot(2.0, 1.0))


def test_contains_many_matches_scalar():
    dom = l_domain()
    rng = np.random.default_rng(3)
    pts = rng.uniform(-1, 3, 64) + 1j * rng.uniform(-1, 3, 64)
    many = dom.contains_many(pts)
    assert all(bool(dom.contains(p)) == bool(m) for p, m in zip(pts, many))


def test_regular_polygon_area_approaches_circle():
    dom = regular_polygon(256, circumradius=1.0)
    assert dom.area() == pytest.approx(np.pi, rel=2e-4)
    assert dom.contains(0.0)
    assert dom.distance_to_boundary(0.0) == pytest.approx(
        np.cos(np.pi / 256), rel=1e-6)


def test_self_intersecting_chain_rejected():
    verts = [0.0, 1.0 + 1.0j, 1.0, 0.0 + 1.0j]
    with pytest.raises(ConstructionError):
        PolygonDomain(verts, basepoint=0.5 + 0.5j)


def test_basepoint_must_be_inside():
    with pytest.raises(ConstructionError):
        rectangle_domain(1.0, 1.0, basepoint=2.0 + 2.0j)


def test_save_load_round_trip(tmp_path):
    dom = l_domain()
    path = tmp_path / "dom.json"
    dom.save(str(path))
    back = PolygonDomain.load(str(path))
    assert np.allclose(back._vx, dom._vx)
    assert np.allclose(back._vy, dom._vy)
    assert back.basepoint == pytest.approx(dom.basepoint)


def test_snap_inside_moves_outside_point_in():
    dom = rectangle_domain(2.0, 1.0)
    pts = np.array([1.0 + 0.5j, 1.0 + 1.0000001j, -0.002 + 0.5j])
    snapped = snap_inside(dom, pts)
    assert np.all(dom.contains_many(snapped))
    # inside point untouched
    assert snapped[0] == pts[0]
    # snapped points stay near where they started
    assert abs(snapped[1] - pts[1]) < 1e-3
    assert abs(snapped[2] - pts[2]) < 1e-2


def test_snap_inside_handles_far_outside_near_corner():
    dom = rectangle_domain(2.0, 1.0)
    pts = np.array([-0.02 - 0.02j])  # outside, past the corner
    snapped = snap_inside(dom, pts)
    assert dom.contains_many(snapped)[0]
    assert abs(snapped[0] - pts[0]) < 0.1


def test_spiral_domain_structure():
    sd = build_spiral_domain(alpha=0.0, loops=8)
    dom = sd.domain
    meta = dom.metadata["spiral"]
    assert meta["loops"] == 8
    assert meta["alpha"] == 0.0
    # one channel center per loop except the outermost wall
    assert len(sd.loop_centers) == 7
    assert np.all(dom.contains_many(np.asarray(sd.loop_centers)))
    # center magnitudes grow like (j + t0)^(alpha+1) - affine in j here
    mags = np.abs(np.asarray(sd.loop_centers))
    gaps = np.diff(mags)
    assert np.all(gaps > 0)
    assert np.allclose(gaps, 1.0, atol=0.05)
    assert dom.contains(dom.basepoint)


def test_spiral_alpha_one_gap_growth():
    sd = build_spiral_domain(alpha=1.0, loops=8)
    mags = np.abs(np.asarray(sd.loop_centers))
    gaps = np.diff(mags)
    # channel gaps grow ~ j^alpha = j for alpha=1
    assert gaps[-1] / gaps[0] > 2.0
    assert np.all(np.diff(gaps) > 0)


def test_spiral_channel_param_inverts_centers():
    sd = build_spiral_domain(alpha=0.0, loops=10)
    t = spiral_channel_param(np.asarray(sd.loop_centers), alpha=0.0)
    assert np.allclose(t, np.arange(1, 10), atol=0.05)


def test_spiral_wall_eps_scales_with_gap():
    sd1 = build_spiral_domain(alpha=0.0, loops=6, wall_frac=0.05)
    sd2 = build_spiral_domain(alpha=0.0, loops=6, wall_frac=0.1)
    assert sd2.wall_eps == pytest.approx(2.0 * sd1.wall_eps)


@given(t=st.floats(min_value=1.0, max_value=10.5))
@settings(max_examples=30, deadline=None)
def test_property_channel_param_inverts_midline(t):
    from hardylab.geometry import _spiral_midline

    p = _spiral_midline(np.array([t]), 0.0)
    back = spiral_channel_param(p, alpha=0.0)
    assert back[0] == pytest.approx(t, abs=0.02)


@given(seed=st.integers(min_value=0, max_value=10 ** 6))
@settings(max_examples=25, deadline=None)
def test_property_snap_inside_idempotent_for_interior(seed):
    dom = rectangle_domain(2.0, 1.0)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.05, 1.95, 8) + 1j * rng.uniform(0.05, 0.95, 8)
    snapped = snap_inside(dom, pts)
    assert np.array_equal(snapped, pts)
