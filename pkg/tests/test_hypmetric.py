import numpy as np
import pytest

from hardylab.geometry import rectangle_domain, regular_polygon
from hardylab.hypmetric import (QhGraph, default_spacing,
                                hyperbolic_distance_disk,
                                qh_convergence_diagnostic,
                                quasi_hyperbolic_distance)


def disk_domain():
    return regular_polygon(256, circumradius=1.0)


def test_disk_radial_oracle():
    # quasi-hyperbolic distance from 0 to r along a radius in the disk:
    # integral of dt/(1-t) = log(1/(1-r))
    dom = disk_domain()
    for r in (0.3, 0.6, 0.8):
        exact = np.log(1.0 / (1.0 - r))
        val = quasi_hyperbolic_distance(dom, 0.0, r + 0.0j, h=0.01)
        assert val == pytest.approx(exact, rel=0.05)


def test_disk_hyperbolic_comparison():
    # k >= hyperbolic/2 and k <= hyperbolic on the disk pair (0, x)
    dom = disk_domain()
    x = 0.55 + 0.2j
    k = quasi_hyperbolic_distance(dom, 0.0, x, h=0.01)
    hyp = hyperbolic_distance_disk(0.0, x)
    assert 0.5 * hyp - 0.1 <= k <= hyp + 0.1


def test_rectangle_symmetry():
    dom = rectangle_domain(2.0, 1.0)
    a = quasi_hyperbolic_distance(dom, 0.3 + 0.5j, 0.9 + 0.5j, h=0.02)
    b = quasi_hyperbolic_distance(dom, 1.7 + 0.5j, 1.1 + 0.5j, h=0.02)
    assert a == pytest.approx(b, rel=1e-9)
    c = quasi_hyperbolic_distance(dom, 0.9 + 0.5j, 0.3 + 0.5j, h=0.02)
    assert a == pytest.approx(c, rel=1e-9)


def test_graph_distance_decreases_with_h():
    # graph paths only gain options as the lattice refines
    dom = rectangle_domain(2.0, 1.0)
    u, v = 0.2 + 0.2j, 1.8 + 0.8j
    vals = [quasi_hyperbolic_distance(dom, u, v, h=h)
            for h in (0.08, 0.04, 0.02)]
    assert vals[0] >= vals[1] - 1e-9
    assert vals[1] >= vals[2] - 1e-9


def test_convergence_diagnostic():
    dom = disk_domain()
    diag = qh_convergence_diagnostic(dom, 0.0, 0.6 + 0.0j,
                                     h_values=(0.04, 0.02, 0.01))
    assert diag["final_rel_change"] <= 0.05
    assert len(diag["distance"]) == 3


def test_extra_points_batched_distances():
    dom = rectangle_domain(2.0, 1.0)
    pts = [0.2 + 0.2j, 1.0 + 0.5j, 1.8 + 0.8j]
    g = QhGraph(dom, 0.02, extra_points=pts)
    from_first = g.distances_from_extra(0)
    d01 = from_first[g.extra_index(1)]
    d02 = from_first[g.extra_index(2)]
    single01 = quasi_hyperbolic_distance(dom, pts[0], pts[1], h=0.02)
    assert d01 == pytest.approx(single01, rel=1e-6)
    assert d02 > d01  # farther point, larger distance here


def test_default_spacing_spiral_uses_channel():
    from hardylab.geometry import build_spiral_domain

    sd = build_spiral_domain(alpha=0.0, loops=6)
    h = default_spacing(sd.domain)
    gap = 1.0  # alpha=0 channel gap
    assert h <= (gap - sd.wall_eps) / 4.0 + 1e-12
    assert h > 0
