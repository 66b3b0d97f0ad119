import math

import pytest
from hypothesis import given, strategies as st

from cknlab.errors import ParameterError
from cknlab.params import (
    critical_exponent,
    make_ckn_params,
    make_wlh_params,
    p_upper,
    theta_lower,
)


def test_critical_exponent_values():
    assert critical_exponent(4) == 4.0
    assert critical_exponent(3) == 6.0
    assert critical_exponent(2) == math.inf
    assert critical_exponent(1) == math.inf


def test_critical_exponent_rejects_nonpositive():
    with pytest.raises(ParameterError) as exc:
        critical_exponent(0)
    assert exc.value.tag == "invalid-dimension"


def test_theta_lower_values():
    assert theta_lower(4.0, 3) == 0.75
    assert theta_lower(2.0, 5) == 0.0
    assert theta_lower(6.0, 3) == 1.0


def test_theta_lower_rejects_small_p():
    with pytest.raises(ParameterError) as exc:
        theta_lower(1.5, 3)
    assert exc.value.tag == "exponent-range"


def test_p_upper_values():
    assert p_upper(1.0, 3) == 6.0
    assert p_upper(0.0, 5) == 2.0
    assert p_upper(0.75, 3) == 4.0
    assert p_upper(1.0, 2) == math.inf


def test_make_ckn_params_valid_point():
    params = make_ckn_params(3, 0.0, 4.0, 0.8)
    assert params.a_c == 0.5
    assert params.b == pytest.approx(0.25)
    assert params.lam == pytest.approx(0.25)
    assert params.theta_min == pytest.approx(0.75)
    assert not params.boundary


def test_make_ckn_params_rejections():
    with pytest.raises(ParameterError) as exc:
        make_ckn_params(3, 0.5, 4.0, 0.8)
    assert exc.value.tag == "weight-range"
    with pytest.raises(ParameterError) as exc:
        make_ckn_params(3, 0.0, 4.0, 0.7)
    assert exc.value.tag == "theta-range"
    with pytest.raises(ParameterError) as exc:
        make_ckn_params(1, 0.0, 4.0, 0.8)
    assert exc.value.tag == "invalid-dimension"
    with pytest.raises(ParameterError) as exc:
        make_ckn_params(3, 0.0, 7.0, 1.0)
    assert exc.value.tag == "exponent-range"


def test_make_wlh_params():
    params = make_wlh_params(3, -1.0, 1.0)
    assert params.lam == pytest.approx(2.25)
    with pytest.raises(ParameterError) as exc:
        make_wlh_params(2, -1.0, 0.5)
    assert exc.value.tag == "gamma-range"
    boundary = make_wlh_params(4, 0.0, 1.0)
    assert boundary.boundary


def test_boundary_flags():
    assert make_ckn_params(3, 0.0, 2.0, 0.5).boundary
    assert make_ckn_params(3, 0.0, 6.0, 1.0).boundary


@given(
    p=st.floats(min_value=2.0 + 1e-9, max_value=5.9),
    d=st.integers(min_value=3, max_value=10),
)
def test_round_trip_theta_p(p, d):
    if p >= critical_exponent(d):
        return
    theta = theta_lower(p, d)
    assert p_upper(theta, d) == pytest.approx(p, rel=1e-12)


@given(
    a=st.floats(min_value=-5.0, max_value=0.4),
    delta=st.floats(min_value=1e-6, max_value=0.05),
)
def test_b_unit_slope_in_a(a, delta):
    lo = make_ckn_params(3, a, 4.0, 0.8)
    hi = make_ckn_params(3, a + delta, 4.0, 0.8)
    assert hi.b - lo.b == pytest.approx(delta, abs=1e-12)


@given(
    d=st.integers(min_value=2, max_value=8),
    a_off=st.floats(min_value=1e-6, max_value=5.0),
    p=st.floats(min_value=2.0, max_value=6.0),
)
def test_b_bracket(d, a_off, p):
    p_crit = critical_exponent(d)
    if p > p_crit:
        return
    a = (d - 2) / 2.0 - a_off
    theta = min(1.0, max(theta_lower(p, d), 1.0))
    params = make_ckn_params(d, a, p, theta)
    if p == p_crit:
        # at the critical exponent d/p equals a_c, so b collapses onto a
        assert params.b == pytest.approx(params.a, abs=1e-12)
    else:
        assert params.a < params.b <= params.a + 1.0
    if p == 2.0:
        assert params.b == pytest.approx(params.a + 1.0)


@given(
    d=st.integers(min_value=-1, max_value=6),
    a=st.floats(min_value=-10, max_value=10, allow_nan=False),
    p=st.floats(min_value=0, max_value=10, allow_nan=False),
    theta=st.floats(min_value=-1, max_value=2, allow_nan=False),
)
def test_validation_total(d, a, p, theta):
    try:
        params = make_ckn_params(d, a, p, theta)
    except ParameterError as exc:
        assert exc.tag in {
            "invalid-dimension",
            "weight-range",
            "exponent-range",
            "theta-range",
        }
    else:
        assert params.lam > 0
        assert params.theta_min <= params.theta <= 1.0
