import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardylab.conformal import IdentityMap, SquareMap
from hardylab.geometry import l_domain, rectangle_domain
from hardylab.intrinsic import (gh_ratio, image_curve_length,
                                intrinsic_distance, intrinsic_distances_from)


def test_convex_domain_equals_euclidean():
    dom = rectangle_domain(2.0, 1.0)
    u, v = 0.2 + 0.3j, 1.7 + 0.8j
    assert intrinsic_distance(dom, u, v) == pytest.approx(abs(u - v),
                                                          rel=1e-12)


def test_l_domain_goes_around_corner():
    # the L domain is the unit squares [0,2]x[0,1] and [0,1]x[1,2]:
    # from (1.5, 0.5) to (0.5, 1.5) the straight segment leaves the domain
    dom = l_domain()
    u, v = 1.9 + 0.5j, 0.5 + 1.9j
    d = intrinsic_distance(dom, u, v)
    corner = 1.0 + 1.0j
    expected = abs(u - corner) + abs(corner - v)
    assert d == pytest.approx(expected, rel=1e-9)
    assert d > abs(u - v)


def test_batch_matches_scalar():
    dom = l_domain()
    source = 1.5 + 0.5j
    pts = np.array([0.5 + 1.5j, 1.0 + 0.5j, 0.2 + 0.2j, 1.9 + 0.9j])
    batch = intrinsic_distances_from(dom, source, pts)
    for p, d in zip(pts, batch):
        assert d == pytest.approx(intrinsic_distance(dom, source, p),
                                  rel=1e-12)


def test_identity_image_length_is_segment_length():
    fmap = IdentityMap()
    curve = np.array([0.0, 0.3 + 0.4j])
    assert image_curve_length(fmap, curve) == pytest.approx(0.5, rel=1e-6)


def test_gh_ratio_identity_is_one():
    fmap = IdentityMap()
    dom = fmap.domain
    for x in (0.5, 0.3 + 0.4j, -0.7j):
        r = gh_ratio(fmap, dom, x)
        assert r == pytest.approx(1.0, abs=5e-3)
        assert r >= 1.0 - 5e-3


def test_gh_ratio_square_map_bounded():
    fmap = SquareMap()
    dom = fmap.domain
    rng = np.random.default_rng(5)
    for _ in range(10):
        x = (rng.uniform(0.1, 0.9) *
             np.exp(2j * np.pi * rng.uniform()))
        r = gh_ratio(fmap, dom, complex(x))
        assert r >= 1.0 - 1e-2
        assert r < 10.0


@given(seed=st.integers(min_value=0, max_value=10 ** 6))
@settings(max_examples=25, deadline=None)
def test_property_intrinsic_at_least_euclidean_and_symmetric(seed):
    dom = l_domain()
    rng = np.random.default_rng(seed)

    def sample():
        while True:
            p = rng.uniform(0.05, 1.95) + 1j * rng.uniform(0.05, 1.95)
            if dom.contains(p):
                return p

    u, v = sample(), sample()
    d_uv = intrinsic_distance(dom, u, v)
    assert d_uv >= abs(u - v) - 1e-12
    assert d_uv == pytest.approx(intrinsic_distance(dom, v, u), rel=1e-9)


@given(seed=st.integers(min_value=0, max_value=10 ** 6))
@settings(max_examples=15, deadline=None)
def test_property_triangle_inequality(seed):
    dom = l_domain()
    rng = np.random.default_rng(seed)

    def sample():
        while True:
            p = rng.uniform(0.05, 1.95) + 1j * rng.uniform(0.05, 1.95)
            if dom.contains(p):
                return p

    a, b, c = sample(), sample(), sample()
    assert intrinsic_distance(dom, a, c) <= (
        intrinsic_distance(dom, a, b) + intrinsic_distance(dom, b, c) + 1e-9)
