"""Hardy-Orlicz functionals: circle integrals, membership probes, the
derivative criterion, and the divergence lower-bound series."""

import math

import numpy as np
import pytest

from hardylab.conformal import IdentityMap, KoebeMap
from hardylab.errors import DomainError, FormatError
from hardylab.growth import parse_growth
from hardylab.hardy import (
    check_nontangential_domination,
    circle_moduli,
    derivative_criterion,
    derivative_profile,
    divergence_series,
    intrinsic_max_modulus,
    max_modulus,
    membership_probe,
    nontangential_orlicz_integral,
    orlicz_circle_integral,
    running_ray_sup,
    trend_verdict,
)

TWO_PI = 2.0 * math.pi


def test_circle_integral_identity_is_exact():
    # |f(r w)| = r is constant on the circle, so quadrature is exact
    fmap = IdentityMap()
    psi = parse_growth("pow:2")
    res = orlicz_circle_integral(fmap, fmap.domain, psi, 1.0, 0.5)
    assert res.value == pytest.approx(TWO_PI * 0.25, rel=1e-12)
    assert res.rel_change < 5e-3
    res2 = orlicz_circle_integral(fmap, fmap.domain, psi, 2.0, 0.5)
    assert res2.value == pytest.approx(TWO_PI * 1.0, rel=1e-12)


def test_circle_integral_argument_errors():
    fmap = IdentityMap()
    psi = parse_growth("pow:1")
    with pytest.raises(DomainError):
        orlicz_circle_integral(fmap, fmap.domain, psi, 0.0, 0.5)
    with pytest.raises(DomainError):
        orlicz_circle_integral(fmap, fmap.domain, psi, 1.0, 0.5, n_theta=8)
    with pytest.raises(DomainError):
        circle_moduli(fmap, fmap.domain, 1.5, "euclidean", 64)
    with pytest.raises(DomainError):
        circle_moduli(fmap, fmap.domain, 0.5, "sideways", 64)
    with pytest.raises(DomainError):
        max_modulus(fmap, 0.0)


def test_max_modulus_oracles():
    fmap = IdentityMap()
    assert max_modulus(fmap, 0.7) == pytest.approx(0.7, rel=1e-12)
    # koebe peaks on the positive real axis: r/(1-r)^2
    k = KoebeMap()
    r = 0.9
    assert max_modulus(k, r, n_theta=4096) == pytest.approx(
        r / (1.0 - r) ** 2, rel=1e-3)
    assert intrinsic_max_modulus(fmap, fmap.domain, 0.7) == pytest.approx(
        0.7, rel=1e-6)


def test_running_ray_sup_monotone():
    fmap = IdentityMap()
    out = running_ray_sup(fmap, fmap.domain, [0.3, 0.5, 0.7],
                          metric="intrinsic", n_theta=64)
    assert np.all(np.diff(out) >= -1e-12)
    assert out[-1] == pytest.approx(0.7, rel=1e-6)


def test_trend_verdicts_synthetic():
    m = np.arange(4, 15, dtype=float)
    # settled tail
    v, _ = trend_verdict(1.0 - 2.0 ** (-m), m)
    assert v == "bounded"
    # decreasing tail
    v, _ = trend_verdict(10.0 / m, m)
    assert v == "bounded"
    # log-integrals superlinear in log log(1/(1-r))
    x = np.log(m * math.log(2.0))
    v, slopes = trend_verdict(np.exp(x * x), m)
    assert v == "diverging"
    assert slopes[1] > slopes[0]
    # steady polynomial growth stays unclassified
    v, _ = trend_verdict(m * math.log(2.0), m)
    assert v == "inconclusive"
    with pytest.raises(FormatError):
        trend_verdict([1.0, 2.0], [4.0, 5.0])


def test_membership_probe_koebe_hp_thresholds():
    # classical Hardy membership of the slit-plane map: p < 1/2 in, p >= 1/2 out
    k = KoebeMap()
    bounded = membership_probe(k, k.domain, parse_growth("pow:0.4"))
    assert bounded.metric == "euclidean"
    assert bounded.verdict == "bounded"
    for spec in ("pow:1", "pow:2"):
        div = membership_probe(k, k.domain, parse_growth(spec))
        assert div.verdict == "diverging"
        assert all(v == "diverging" for v in div.verdicts)


def test_membership_probe_identity_bounded():
    fmap = IdentityMap()
    res = membership_probe(fmap, fmap.domain, parse_growth("pow:2"),
                           deltas=[1.0])
    assert res.verdict == "bounded"
    assert res.integrals.shape == (1, len(res.m_grid))
    assert np.all(np.asarray(res.partial_sums)[:, 1:] > 0)
    d = res.to_dict()
    assert d["verdict"] == "bounded"
    assert len(d["integrals"][0]) == len(d["m_grid"])


def test_membership_probe_m_grid_validation():
    fmap = IdentityMap()
    psi = parse_growth("pow:1")
    with pytest.raises(FormatError):
        membership_probe(fmap, fmap.domain, psi, m_grid=[4.0, 5.0])
    with pytest.raises(FormatError):
        membership_probe(fmap, fmap.domain, psi, m_grid=[4.0, 5.0, 5.0, 6.0])


def test_derivative_criterion_identity_oracle():
    # radial image length of the identity is r_max on every ray
    fmap = IdentityMap()
    res = derivative_criterion(fmap, parse_growth("pow:1"), 0.9)
    assert res.value == pytest.approx(TWO_PI * 0.9, rel=1e-9)
    assert np.allclose(res.lengths, 0.9)
    with pytest.raises(DomainError):
        derivative_criterion(fmap, parse_growth("pow:1"), 1.0)


def test_derivative_profile_verdicts():
    fmap = IdentityMap()
    vals, verdict, _ = derivative_profile(fmap, parse_growth("pow:1"))
    assert verdict == "bounded"
    assert np.all(np.diff(vals) >= -1e-12)
    k = KoebeMap()
    vals, verdict, slopes = derivative_profile(k, parse_growth("pow:2"))
    assert verdict == "diverging"
    assert slopes[1] > 0.5
    with pytest.raises(FormatError):
        derivative_profile(fmap, parse_growth("pow:1"), m_list=(4, 5))


def test_nontangential_integral_identity_bounds():
    # f* lies between the deepest circle radius and 1 on every cone
    fmap = IdentityMap()
    psi = parse_growth("pow:1")
    val = nontangential_orlicz_integral(fmap, fmap.domain, psi, 1.0,
                                        metric="euclidean", n_omega=16)
    assert TWO_PI * 0.9 < val < TWO_PI


def test_nontangential_domination_identity():
    fmap = IdentityMap()
    rep = check_nontangential_domination(fmap, fmap.domain,
                                         parse_growth("pow:1"),
                                         metric="euclidean", n_omega=16)
    assert rep.passed
    assert rep.c_emp <= 16.0
    assert rep.lhs <= rep.rhs * (1.0 + 1e-9)


def test_divergence_series_matches_float_route():
    # the log-space bound must agree with direct evaluation while the
    # direct route is still representable
    psi = parse_growth("expalpha:0")
    m_grid = np.array([4.0, 6.0, 8.0])
    m_i = np.array([2.0, 3.0, 4.0])
    delta = 0.5
    got = divergence_series(psi, delta, m_grid, m_i)
    direct = np.log((2.0 ** (-m_grid)) * psi(delta * m_i))
    assert np.allclose(got, direct, rtol=1e-6, atol=1e-9)


def test_divergence_series_survives_deep_grid():
    # 1-r underflows and psi overflows float64 here; the log form must not
    psi = parse_growth("expalpha:0")
    m_grid = np.array([2000.0, 4000.0])
    m_i = np.array([1.0e4, 3.0e4])
    out = divergence_series(psi, 1.0, m_grid, m_i)
    assert np.all(np.isfinite(out))
    assert out[1] > out[0] > math.log(1e6)
