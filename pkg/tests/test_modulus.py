"""Discrete modulus: oracle values, solver quality, and lemma checks."""

import math

import numpy as np
import pytest

from hardylab.conformal import IdentityMap, SquareMap
from hardylab.errors import DomainError
from hardylab.geometry import build_spiral_domain, rectangle_domain
from hardylab.modulus import (
    annulus_family,
    annulus_modulus_bound,
    channel_family,
    check_intrinsic_modulus_bound,
    check_shadow_escape_bound,
    discrete_modulus,
    image_family,
    radial_family,
    radial_modulus_exact,
    rectangle_family,
    spoke_family,
)

TWO_PI = 2.0 * math.pi


def test_radial_modulus_matches_exact():
    r = 0.36
    fam = radial_family(r, n_curves=256)
    res = discrete_modulus(fam, 0.02)
    exact = radial_modulus_exact(TWO_PI, r)
    assert res.kkt_residual <= 1e-6
    assert abs(res.value - exact) <= 0.10 * exact


def test_radial_modulus_arc_subset():
    # half the directions carry half the modulus
    r = 0.36
    fam = radial_family(r, arcs=[(0.0, math.pi)], n_curves=256)
    res = discrete_modulus(fam, 0.02)
    exact = radial_modulus_exact(math.pi, r)
    assert abs(res.value - exact) <= 0.10 * exact


def test_rectangle_modulus_is_aspect_ratio():
    fam = rectangle_family(2.0, 1.0, n_curves=256)
    res = discrete_modulus(fam, 0.02)
    assert res.kkt_residual <= 1e-6
    assert abs(res.value - 0.5) <= 0.05


def test_annulus_modulus_below_bound():
    fam = annulus_family(0.5, 1.0, n_curves=256)
    res = discrete_modulus(fam, 0.02)
    bound = annulus_modulus_bound(0.5, 1.0)
    assert res.value <= bound * 1.10


def test_admissibility_residuals_small():
    fam = rectangle_family(1.0, 1.0, n_curves=64)
    res = discrete_modulus(fam, 0.02)
    assert float(res.grid.residuals.max()) <= 1.1e-6
    assert res.grid.rho2d.shape == (res.grid.ny, res.grid.nx)
    assert res.n_curves == 64


def test_subfamily_modulus_monotone():
    # dropping constraints can only lower the minimum
    fam = radial_family(0.4, n_curves=128)
    full = discrete_modulus(fam, 0.02).value
    for stride in (2, 4):
        sub_curves = fam.curves[::stride]
        from hardylab.modulus import CurveFamily

        sub = CurveFamily(sub_curves, fam.kind, fam.meta)
        val = discrete_modulus(sub, 0.02).value
        assert val <= full * (1.0 + 1e-3)


def test_image_family_identity_invariance():
    fam = radial_family(0.3, n_curves=64, r_outer=0.9)
    pushed = image_family(IdentityMap(), fam, samples_per_segment=8)
    a = discrete_modulus(fam, 0.02).value
    b = discrete_modulus(pushed, 0.02).value
    assert abs(a - b) <= 1e-4 * max(a, 1.0)


def test_spoke_family_structure():
    fam = spoke_family(0.0, 0.1, 1.0, n_curves=32)
    assert fam.n_curves == 32
    for c in fam.curves:
        assert abs(abs(c[0]) - 0.1) < 1e-12
        assert abs(abs(c[-1]) - 1.0) < 1e-12
    fam2 = spoke_family(0.0, 0.1, np.linspace(0.5, 1.5, 32), n_curves=32)
    radii = np.array([abs(c[-1]) for c in fam2.curves])
    assert radii.min() >= 0.5 - 1e-12 and radii.max() <= 1.5 + 1e-12


def test_channel_family_stays_inside_spiral():
    sd = build_spiral_domain(alpha=0.0, loops=6)
    fam = channel_family(sd, 2, 4, n_curves=8)
    for c in fam.curves:
        assert sd.domain.contains_many(c).all()


def test_intrinsic_modulus_bound_square():
    dom = rectangle_domain(1.0, 1.0, basepoint=0.5 + 0.5j)
    e = np.array([0.5 + 0.1j])
    thetas = np.linspace(0.3, math.pi - 0.3, 24)
    curves = [np.array([e[0], e[0] + 0.6 * np.exp(1j * th)]) for th in thetas]
    from hardylab.modulus import CurveFamily

    fam = CurveFamily(list(curves), "fan", {})
    rep = check_intrinsic_modulus_bound(dom, e, fam, delta=0.05, length=0.6,
                                        h=0.01)
    assert rep.passed
    assert rep.modulus <= rep.bound
    assert rep.implied_constant == pytest.approx(
        rep.modulus * math.log1p(0.6 / 0.05))


def test_intrinsic_modulus_bound_preconditions():
    dom = rectangle_domain(1.0, 1.0, basepoint=0.5 + 0.5j)
    e = np.array([0.5 + 0.1j])
    from hardylab.modulus import CurveFamily

    short = CurveFamily([np.array([e[0], e[0] + 0.01j])], "fan", {})
    with pytest.raises(DomainError):
        check_intrinsic_modulus_bound(dom, e, short, delta=0.05, length=0.6,
                                      h=0.01)
    detached = CurveFamily([np.array([0.1 + 0.9j, 0.9 + 0.9j])], "fan", {})
    with pytest.raises(DomainError):
        check_intrinsic_modulus_bound(dom, e, detached, delta=0.05,
                                      length=0.6, h=0.01)
    with pytest.raises(DomainError):
        check_intrinsic_modulus_bound(dom, e, short, delta=0.7, length=0.6,
                                      h=0.01)


def test_shadow_escape_square_map():
    rep = check_shadow_escape_bound(SquareMap(), 0.5, 50.0,
                                    variant="intrinsic", n_theta=32)
    assert 0.0 <= rep.fraction <= 1.0
    assert rep.bound == pytest.approx(10.0 / math.log(50.0))
    assert rep.passed


def test_shadow_escape_argument_errors():
    with pytest.raises(DomainError):
        check_shadow_escape_bound(SquareMap(), 0.5, 1.0)
    with pytest.raises(DomainError):
        check_shadow_escape_bound(SquareMap(), 0.5, 50.0, variant="euclidean")
    with pytest.raises(DomainError):
        check_shadow_escape_bound(SquareMap(), 0.5, 50.0, variant="sideways")


def test_family_and_oracle_argument_errors():
    with pytest.raises(DomainError):
        radial_family(1.2, n_curves=8)
    with pytest.raises(DomainError):
        rectangle_family(-1.0, 1.0)
    with pytest.raises(DomainError):
        annulus_family(0.9, 0.5)
    with pytest.raises(DomainError):
        discrete_modulus(rectangle_family(1.0, 1.0, n_curves=8), 0.0)
    with pytest.raises(DomainError):
        radial_modulus_exact(TWO_PI, 1.5)
    with pytest.raises(DomainError):
        annulus_modulus_bound(1.0, 0.5)
