import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardylab.errors import FormatError
from hardylab.growth import (GrowthFunction, doubling_constant, make_growth,
                             parse_growth)


def test_pow_doubling_constant_exact():
    for p in (0.4, 0.5, 1.0, 2.0, 3.5):
        rep = doubling_constant(make_growth("pow", p=p))
        assert not rep.unbounded
        assert rep.constant == pytest.approx(2.0 ** p, abs=0.0, rel=1e-12)


def test_expalpha_unbounded():
    for alpha in (0.0, 1.0):
        rep = doubling_constant(make_growth("expalpha", alpha=alpha))
        assert rep.unbounded
        assert rep.argmax_t > 0


def test_pow_values_and_deriv():
    psi = make_growth("pow", p=2.0)
    t = np.linspace(0.0, 5.0, 11)
    assert np.allclose(psi(t), t ** 2)
    assert np.allclose(psi.deriv(t), 2.0 * t)


def test_expalpha_matches_formula():
    psi = make_growth("expalpha", alpha=0.0)
    t = np.array([0.0, 0.5, 1.0, 2.0, 5.0])
    assert np.allclose(psi(t), np.expm1(t ** 2))
    # log form stays finite where the direct value overflows
    big = psi.log_psi(np.array([50.0]))
    assert np.isfinite(big[0]) and big[0] == pytest.approx(2500.0)


def test_expalpha_alpha_one_exponent():
    psi = make_growth("expalpha", alpha=1.0)
    assert psi(np.array([4.0]))[0] == pytest.approx(math.expm1(4.0))


def test_table_growth_interpolates_and_extends():
    t = np.array([0.0, 1.0, 2.0, 4.0])
    v = np.array([0.0, 1.0, 3.0, 9.0])
    psi = make_growth("table", table=(t, v))
    assert psi(np.array([1.0]))[0] == pytest.approx(1.0)
    assert psi(np.array([2.0]))[0] == pytest.approx(3.0)
    # beyond the table: linear continuation with the end slope
    v8 = psi(np.array([8.0]))[0]
    assert v8 > 9.0
    rep = doubling_constant(psi, t_max=100.0)
    assert np.isfinite(rep.constant)


def test_table_rejects_bad_input():
    with pytest.raises(FormatError):
        make_growth("table", table=([0.0, 1.0], [0.0, 1.0]))
    with pytest.raises(FormatError):
        make_growth("table", table=([0.5, 1.0, 2.0], [0.1, 1.0, 2.0]))
    with pytest.raises(FormatError):
        make_growth("table", table=([0.0, 1.0, 0.5], [0.0, 1.0, 2.0]))


def test_parse_growth_round_trip():
    for spec in ("pow:0.4", "pow:2", "expalpha:0", "expalpha:1"):
        psi = parse_growth(spec)
        assert psi.to_spec() == spec
    with pytest.raises(FormatError):
        parse_growth("exp:1")
    with pytest.raises(FormatError):
        parse_growth("pow:-1")


def test_negative_argument_rejected():
    psi = make_growth("pow", p=1.0)
    with pytest.raises(FormatError):
        psi(np.array([-0.5]))


@given(p=st.floats(min_value=0.1, max_value=3.0))
@settings(max_examples=25, deadline=None)
def test_property_pow_doubling_is_two_to_p(p):
    rep = doubling_constant(make_growth("pow", p=p))
    assert rep.constant == pytest.approx(2.0 ** p, rel=1e-9)


@given(kind=st.sampled_from(["pow:0.7", "pow:2", "expalpha:0", "expalpha:1"]),
       t=st.floats(min_value=1e-6, max_value=50.0))
@settings(max_examples=40, deadline=None)
def test_property_zero_start_and_monotone(kind, t):
    psi = parse_growth(kind)
    assert psi(np.array([0.0]))[0] == 0.0
    # log form is the overflow-free contract, strict growth holds there
    a, b = psi.log_psi(np.array([t, t * 1.01]))
    assert b > a
