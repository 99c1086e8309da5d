import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardylab.conformal import IdentityMap
from hardylab.diskcells import (ArcSet, make_whitney_cell, nontangential_max,
                                stolz_samples, whitney_decompose)
from hardylab.errors import ConstructionError, DomainError

TWO_PI = 2.0 * math.pi


def test_whitney_cell_radius_and_shadow():
    cell = make_whitney_cell(0.5)
    assert cell.radius == pytest.approx(0.25)
    assert not cell.full_circle
    # tangent half-angle: asin(radius / |x|)
    assert cell.half_angle == pytest.approx(math.asin(0.5))
    assert cell.shadow_contains(0.0)
    assert not cell.shadow_contains(math.pi)


def test_whitney_cell_near_origin_full_shadow():
    cell = make_whitney_cell(0.1)
    assert cell.full_circle
    assert cell.shadow_measure == pytest.approx(TWO_PI)


def test_whitney_cell_rejects_outside():
    with pytest.raises(DomainError):
        make_whitney_cell(1.0)


def test_arcset_merges_and_measures():
    arcs = ArcSet([(0.0, 1.0), (0.5, 1.5), (3.0, 3.2)])
    assert arcs.measure == pytest.approx(1.7)
    assert len(arcs.components) == 2
    with pytest.raises(ConstructionError):
        ArcSet([(1.0, 1.0)])


def test_arcset_wrapping_interval():
    arcs = ArcSet([(TWO_PI - 0.5, TWO_PI + 0.5)])
    assert arcs.measure == pytest.approx(1.0)


def test_whitney_decompose_covers_one_radian():
    dec = whitney_decompose([(0.2, 1.2)])
    assert dec.coverage_defect <= 1e-8 * dec.arcs.measure + 1e-12
    assert dec.max_overlap <= 4
    assert dec.distance_constant <= 16.0
    assert dec.shadow_sum_ratio <= 8.0
    assert dec.n_cells > 0


def test_whitney_decompose_rejects_full_circle():
    with pytest.raises(ConstructionError):
        whitney_decompose([(0.0, TWO_PI)])


def test_stolz_samples_structure():
    pts = stolz_samples(1.0, density=4, max_depth=10)
    assert np.all(np.abs(pts) < 1.0)
    # sample sets nest as density grows
    small = stolz_samples(1.0, density=2, max_depth=10)
    setb = {complex(round(p.real, 12), round(p.imag, 12)) for p in pts}
    assert all(complex(round(p.real, 12), round(p.imag, 12)) in setb
               for p in small)
    with pytest.raises(DomainError):
        stolz_samples(0.5)


def test_nontangential_max_identity():
    fmap = IdentityMap()
    v = nontangential_max(fmap, 1.0, metric="euclidean", max_depth=12)
    # the deepest station center is at 1 - 2^-12, offsets stay inside
    assert 1.0 - 2.0 ** -11 <= v < 1.0
    vi = nontangential_max(fmap, 1.0, metric="intrinsic", max_depth=8)
    assert vi == pytest.approx(nontangential_max(fmap, 1.0, max_depth=8),
                               rel=5e-2)


@given(x_re=st.floats(-0.9, 0.9), x_im=st.floats(-0.9, 0.9))
@settings(max_examples=40, deadline=None)
def test_property_whitney_radius_half_gap(x_re, x_im):
    x = complex(x_re, x_im)
    if abs(x) >= 0.999:
        return
    cell = make_whitney_cell(x)
    assert cell.radius == pytest.approx((1.0 - abs(x)) / 2.0)
    # the disk stays inside the unit disk
    assert abs(x) + cell.radius < 1.0


@given(lo=st.floats(0.0, 5.0), length=st.floats(0.01, 1.2))
@settings(max_examples=25, deadline=None)
def test_property_decomposition_audits(lo, length):
    dec = whitney_decompose([(lo, lo + length)])
    assert dec.coverage_defect <= 1e-8 * length + 1e-12
    assert dec.max_overlap <= 4
    assert dec.shadow_sum_ratio <= 8.0
