import math

import numpy as np
import pytest

from cknlab import constants as cf
from cknlab.errors import BoundaryExponentError, DomainError


def test_ckn_radial_base_frozen_values():
    # reference values computed with 40-digit arithmetic on the closed form
    assert cf.ckn_radial_base(1.0, 4.0, 3).value == pytest.approx(
        0.122150627975729980, rel=1e-13
    )
    assert cf.ckn_radial_base(0.75, 4.0, 3).value == pytest.approx(
        0.13298076013381089, rel=1e-13
    )


def test_ckn_radial_base_rejects_p2():
    with pytest.raises(BoundaryExponentError):
        cf.ckn_radial_base(0.5, 2.0, 3)


def test_ckn_radial_base_positive_on_sample_grid():
    from cknlab.params import critical_exponent, theta_lower

    for d in (2, 3, 5, 8):
        for p in (2.5, 3.0, 4.0):
            if p >= critical_exponent(d):
                continue
            theta = max(0.9, theta_lower(p, d))
            assert cf.ckn_radial_base(theta, p, d).value > 0.0


def test_ckn_radial_scaling():
    d = 3
    a_unit = (d - 2) / 2.0 - 1.0
    base = cf.ckn_radial_base(0.75, 4.0, d).value
    assert cf.ckn_radial(0.75, 4.0, a_unit, d).value == pytest.approx(base, rel=1e-14)
    # lam = 0.25, exponent (p-2)/(2p) - theta = -1/2, so the factor is 2
    assert cf.ckn_radial(0.75, 4.0, 0.0, d).value == pytest.approx(
        2.0 * base, rel=1e-14
    )
    assert cf.ckn_radial(0.75, 4.0, 0.0, 3).value == pytest.approx(
        0.26596152026762179, rel=1e-13
    )


def test_ckn_radial_rejects_weight_at_critical():
    with pytest.raises(DomainError):
        cf.ckn_radial(0.8, 4.0, 0.5, 3)


def test_wlh_radial_quarter_branch():
    d = 3
    a_unit = (d - 2) / 2.0 - 1.0
    expected = 1.0 / (8.0 * math.pi**3 * math.e)
    assert cf.wlh_radial(0.25, a_unit, d).value == pytest.approx(expected, rel=1e-13)
    assert expected == pytest.approx(0.0014830845580258697, rel=1e-13)


def test_wlh_radial_frozen_values():
    a_unit = 0.5 - 1.0
    assert cf.wlh_radial(1.0, a_unit, 3).value == pytest.approx(
        0.11183363157228382, rel=1e-13
    )
    assert cf.wlh_radial(1.0, 0.0, 3).value == pytest.approx(
        0.31631327699791947, rel=1e-13
    )


def test_wlh_branch_continuity():
    for d in (2, 3, 5):
        near = cf.wlh_radial(0.25 + 1e-8, -1.0, d).value
        exact = cf.wlh_radial(0.25, -1.0, d).value
        assert near == pytest.approx(exact, rel=1e-6)


def test_gross_ls():
    assert cf.gross_ls(3).value == pytest.approx(2.0 / (3.0 * math.pi * math.e), rel=1e-15)
    assert cf.gross_ls(2).value == pytest.approx(1.0 / (math.pi * math.e), rel=1e-15)
    values = [cf.gross_ls(d).value for d in range(1, 8)]
    assert all(hi > lo for hi, lo in zip(values, values[1:]))


def test_p2_constant():
    assert cf.ckn_p2_constant(0.5, -0.5, 3).value == pytest.approx(1.0)
    assert cf.ckn_p2_constant(0.25, -1.5, 3).value == pytest.approx(
        math.sqrt(2.0) / 2.0, rel=1e-14
    )
    assert cf.ckn_p2_constant(0.5, -0.5, 3).no_extremal


def test_theta_threshold_at_a_bar_is_one():
    for d in range(2, 11):
        for p in np.linspace(2.1, 5.0, 10):
            a_bar = cf.a_bar_sb(float(p), d)
            assert cf.theta_sb_threshold(a_bar, float(p), d) == pytest.approx(
                1.0, abs=1e-10
            )


def test_theta_threshold_d2_value():
    # direct evaluation of the degree-two polynomial at a = -2, p = 4, d = 2
    assert cf.theta_sb_threshold(-2.0, 4.0, 2) == pytest.approx(9.25, rel=1e-12)


def test_threshold_reformulation_identity():
    for d in range(2, 8):
        a_c = (d - 2) / 2.0
        for p in (2.5, 3.0, 4.0):
            for a in np.linspace(a_c - 3.0, a_c - 0.01, 7):
                lam = (a_c - a) ** 2
                direct = (p + 2.0) ** 2 * (
                    d * d + 4.0 * a * a - 4.0 * a * (d - 2.0)
                ) - 4.0 * p * (p + 4.0) * (d - 1.0)
                reform = 4.0 * ((p + 2.0) ** 2 * lam + 4.0 * (d - 1.0)) + 4.0 * (
                    d - 1.0
                ) * ((p + 2.0) ** 2 - p * (p + 4.0) - 4.0)
                scale = max(abs(direct), abs(reform), 1.0)
                assert abs(direct - reform) / scale < 1e-10


def test_a_bar_values():
    assert cf.a_bar_sb(4.0, 2) == pytest.approx(-0.57735026918962576, rel=1e-14)
    # increasing in p at fixed d
    for d in (2, 3, 5):
        vals = [cf.a_bar_sb(p, d) for p in (2.5, 3.0, 4.0, 5.0)]
        assert all(hi > lo for lo, hi in zip(vals, vals[1:]))


def test_wlh_sb_threshold():
    assert cf.wlh_sb_threshold(-1.0, 2) == pytest.approx(1.25)
    assert cf.wlh_sb_threshold(-0.5, 5) == pytest.approx(1.25)
    assert cf.wlh_sb_threshold(0.5 - 1e-12, 3) == pytest.approx(0.25, abs=1e-12)


def test_lambda_star_a_star():
    assert cf.lambda_star(3) == pytest.approx(math.e / 4.0, abs=1e-12)
    assert cf.a_star(3) == pytest.approx(0.5 - math.sqrt(math.e) / 2.0, abs=1e-12)
    assert cf.a_star(3) == pytest.approx(-0.32436063535006407, abs=1e-12)
    assert cf.lambda_star(4) == pytest.approx(1.7538096402, rel=1e-9)
    assert cf.a_star(4) == pytest.approx(-0.3243147814, rel=1e-8)
    assert cf.lambda_star(5) == pytest.approx(3.3292017284, rel=1e-9)
    assert cf.a_star(5) == pytest.approx(-0.3246100209, rel=1e-8)
    with pytest.raises(DomainError):
        cf.lambda_star(2)


def test_a0_star_frozen_value():
    # d = 4, p = 3: kappa and the threshold from the 40-digit oracle
    assert cf.a0_star(3.0, 4) == pytest.approx(0.024069351244198, rel=1e-10)
    assert cf.a0_star(3.0, 4) < (4 - 2) / 2.0


def test_a0_star_below_critical_weight():
    for d in (3, 4, 5):
        for p in (2.5, 3.0):
            assert cf.a0_star(p, d) < (d - 2) / 2.0


def test_monotonicity_in_a():
    for d in (2, 3, 5):
        a_c = (d - 2) / 2.0
        grid = np.linspace(a_c - 4.0, a_c - 1e-3, 30)
        ckn = [cf.ckn_radial(0.9, 3.0, float(a), d).value for a in grid]
        assert all(hi > lo for lo, hi in zip(ckn, ckn[1:]))
        wlh = [cf.wlh_radial(1.0, float(a), d).value for a in grid]
        assert all(hi > lo for lo, hi in zip(wlh, wlh[1:]))


def test_ls_domination_on_guaranteed_interval():
    for d in (3, 4, 5):
        a_c = (d - 2) / 2.0
        ls = cf.gross_ls(d).value
        for a in np.linspace(cf.a_star(d) + 1e-3, a_c - 1e-3, 20):
            assert cf.wlh_radial(d / 4.0, float(a), d).value > ls


def test_threshold_report():
    report = cf.threshold_report(0.0, 4.0, 3)
    assert report.theta_sb == pytest.approx(cf.theta_sb_threshold(0.0, 4.0, 3))
    assert report.lambda_star == pytest.approx(math.e / 4.0)
    report2 = cf.threshold_report(-1.0, 4.0, 2)
    assert report2.a0_star is None
    assert report2.a_star is None
    assert report2.lambda_star is None
