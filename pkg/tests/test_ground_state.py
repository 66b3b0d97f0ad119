import math

import numpy as np
import pytest

from cknlab import ground_state as gs
from cknlab.constants import ckn_radial
from cknlab.errors import DegenerateDimensionError, DomainError
from cknlab.params import theta_lower


@pytest.fixture(scope="module")
def profile_4_3():
    return gs.solve_ground_state(4.0, 3)


@pytest.fixture(scope="module")
def moments_4_3(profile_4_3):
    return gs.moments(profile_4_3)


def test_shooting_value(profile_4_3):
    assert 4.3 < profile_4_3.u0 < 4.4
    assert profile_4_3.u0 == pytest.approx(4.337387679974881, rel=1e-9)


def test_profile_invariants(profile_4_3):
    u = profile_4_3.u_values
    assert np.all(u > 0.0)
    assert np.all(np.diff(u) < 0.0)
    assert u[-1] < 1e-8 * profile_4_3.u0


def test_equation_residual(profile_4_3):
    assert gs.equation_residual(profile_4_3) < 1e-6


def test_shooting_tolerance_refinement():
    coarse = gs.solve_ground_state(3.0, 3, tol=1e-8)
    fine = gs.solve_ground_state(3.0, 3, tol=1e-12)
    # each u0 sits inside its own bisection bracket around the true value
    assert abs(coarse.u0 - fine.u0) < 3e-8


def test_rejects_invalid_parameters():
    with pytest.raises(DomainError):
        gs.solve_ground_state(4.0, 1)
    with pytest.raises(DomainError):
        gs.solve_ground_state(2.0, 3)
    with pytest.raises(DomainError):
        gs.solve_ground_state(6.0, 3)


def test_moment_values(moments_4_3):
    m = moments_4_3
    for value in (m.x0, m.y0, m.z0, m.x2, m.y2, m.z2):
        assert value > 0.0 and math.isfinite(value)
    assert m.x0 == pytest.approx(4.511386433471595, rel=1e-8)
    assert m.y0 == pytest.approx(1.5037954778283122, rel=1e-8)
    assert m.z0 == pytest.approx(6.015181911298964, rel=1e-8)


def test_moment_identities(moments_4_3):
    res = gs.moment_identity_residuals(moments_4_3, 4.0, 3)
    assert max(res.values()) < 1e-6
    # virial consequence
    assert moments_4_3.z0 > moments_4_3.y0


def test_moment_identities_other_points():
    for p, d in [(3.0, 3), (2.5, 5), (3.0, 5)]:
        profile = gs.solve_ground_state(p, d)
        res = gs.moment_identity_residuals(gs.moments(profile), p, d)
        assert max(res.values()) < 1e-6


def test_gn_constant_value(profile_4_3):
    value = gs.gn_constant(4.0, 3, profile_4_3).value
    assert value == pytest.approx(0.20183186597707245, rel=1e-8)


def test_gn_constant_quadrature_cross_check(profile_4_3):
    """Trapezoid quadrature on the same samples agrees with the packaged value."""
    prof = profile_4_3
    d, p = prof.d, prof.p
    theta = theta_lower(p, d)
    r, u, du = prof.r_grid, prof.u_values, prof.du_values
    x0 = np.trapezoid(du * du * r ** (d - 1), r)
    y0 = np.trapezoid(u * u * r ** (d - 1), r)
    z0 = np.trapezoid(np.abs(u) ** p * r ** (d - 1), r)
    omega = 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)
    inv_c = (omega * x0) ** theta * (omega * y0) ** (1.0 - theta) / (omega * z0) ** (
        2.0 / p
    )
    assert 1.0 / inv_c == pytest.approx(gs.gn_constant(p, d, prof).value, rel=1e-5)


def test_gn_below_radial_closed_form(profile_4_3):
    value = gs.gn_constant(4.0, 3, profile_4_3).value
    theta = theta_lower(4.0, 3)
    assert value <= ckn_radial(theta, 4.0, 0.0, 3).value * (1.0 + 1e-6)


def test_r_gamma():
    assert gs.r_gamma(0.0, 5) == 0.0
    assert gs.r_gamma(1.5, 5) == 0.0  # gamma = a_c root
    assert gs.r_gamma(1.0, 4) == 0.0


def test_r_expansion_split_consistency():
    profile = gs.solve_ground_state(3.0, 5)
    m = gs.moments(profile)
    a_c = 1.5
    for a in np.linspace(a_c - 2.0, a_c, 9):
        coeffs = gs.r_expansion(float(a), 3.0, 5, m)
        assert coeffs.r_value == pytest.approx(coeffs.r_direct, abs=1e-8)


def test_r_at_critical_weight_closed_form():
    profile = gs.solve_ground_state(3.0, 5)
    m = gs.moments(profile)
    coeffs = gs.r_expansion(1.5, 3.0, 5, m)
    t = coeffs.t
    expected = -(10.0 + t) / 66.0
    assert gs.r_at_critical_weight(3.0, 5, t) == pytest.approx(expected, rel=1e-12)
    assert coeffs.r_direct == pytest.approx(expected, rel=1e-6)


def test_r_split_none_below_d5():
    profile = gs.solve_ground_state(4.0, 3)
    m = gs.moments(profile)
    coeffs = gs.r_expansion(0.0, 4.0, 3, m)
    assert coeffs.r0 is None and coeffs.r1 is None and coeffs.r_value is None
    assert math.isfinite(coeffs.r_direct)


def test_r_coefficients_quadratic_in_a():
    profile = gs.solve_ground_state(2.5, 5)
    m = gs.moments(profile)
    samples = np.linspace(-2.0, 1.4, 5)
    values = [gs.r_expansion(float(a), 2.5, 5, m).r_value for a in samples]
    fit = np.polynomial.Polynomial.fit(samples, values, 2)
    residual = np.max(np.abs(fit(samples) - np.array(values)))
    assert residual < 1e-9


def test_a_bar_existence_nonempty():
    for d, p in [(5, 2.5), (5, 3.0), (6, 2.5), (7, 2.5)]:
        interval = gs.a_bar_existence(p, d)
        assert not interval.empty
        assert interval.lower < interval.upper
        assert interval.upper == (d - 2) / 2.0


def test_a_bar_existence_degenerates_at_critical_exponent():
    # at p = 2* both coefficient polynomials vanish identically, so the
    # negativity interval has empty interior; reported, not raised
    interval = gs.a_bar_existence(3.0, 6)
    assert interval.empty
    assert interval.diagnostic


def test_a_bar_existence_rejects_low_dimension():
    with pytest.raises(DegenerateDimensionError):
        gs.a_bar_existence(3.0, 4)


def test_profile_csv(tmp_path, profile_4_3):
    path = tmp_path / "profile.csv"
    gs.profile_to_csv(profile_4_3, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "r,u"
    assert len(lines) == len(profile_4_3.r_grid) + 1
    r0, u0 = lines[1].split(",")
    assert float(u0) == pytest.approx(profile_4_3.u_values[0])
