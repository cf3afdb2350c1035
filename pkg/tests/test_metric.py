import math

import numpy as np
import pytest

from mlsurf import metric
from mlsurf.elliptic import DegenerateKind


def test_beta_from_a1_clifford():
    # Clifford point psi = -1, e^u = 1: beta = 2 + 1 = 3
    assert metric.beta_from_a1(1.0, -1.0) == pytest.approx(3.0, abs=1e-15)


def test_beta_from_a1_psi_zero():
    assert metric.beta_from_a1(1.0, 0.0) == pytest.approx(2.0, abs=1e-15)


def test_beta_from_a1_generic():
    beta = metric.beta_from_a1(1.3, -1.0)
    assert beta == pytest.approx(2.6 + 1.0 / 1.69, rel=1e-15)
    # cross-check: first-integral residual vanishes at y = 0
    prof = metric.profile_from_a1_psi(1.3, -1.0)
    _, r2 = metric.check_gauss(prof, 0.0)
    assert abs(r2) < 1e-13
    assert beta**3 >= 27.0


def test_beta_from_a1_rejects_nonpositive():
    with pytest.raises(ValueError):
        metric.beta_from_a1(0.0, 1.0)
    with pytest.raises(ValueError):
        metric.beta_from_a1(-1.3, 1.0)


def test_middle_root_input_rejected():
    # a1 < |psi|^(2/3) is the middle critical value, not the largest
    with pytest.raises(ValueError, match="middle critical value"):
        metric.profile_from_a1_psi(0.55, -1.0)


def test_eval_at_origin(profile):
    w, u, up, _ = metric.evaluate(profile, 0.0)
    assert w == pytest.approx(1.3, abs=1e-12)
    assert u == pytest.approx(math.log(1.3), abs=1e-12)
    assert abs(up) < 1e-12


def test_eval_at_omega(profile):
    # w(omega) = a2 = beta/6 - e2/2 with u'(omega) = 0
    params = profile.elliptic
    w, _, up, _ = metric.evaluate(profile, params.omega)
    assert w == pytest.approx(profile.beta / 6.0 - params.e2 / 2.0, abs=1e-11)
    assert abs(up) < 1e-10


def test_w0_consistency(profile):
    # the two characterizations of w(0): input a1 and beta/6 - e3/2
    params = profile.elliptic
    assert profile.a1 == pytest.approx(profile.beta / 6.0 - params.e3 / 2.0,
                                       abs=1e-12)


def test_psi_zero_metric_closed_form():
    prof = metric.profile_from_a1_psi(1.0, 0.0)
    assert prof.kind is DegenerateKind.PSI_ZERO
    assert prof.beta == pytest.approx(2.0)
    w = metric.evaluate(prof, 1.0).w
    assert w == pytest.approx(1.0 / math.cosh(math.sqrt(2.0)) ** 2, abs=1e-14)


def test_flat_metric_constant():
    prof = metric.profile_from_a1_psi(1.0, -1.0)
    assert prof.kind is DegenerateKind.FLAT
    for y in (0.0, 0.3, 2.0):
        w, u, up, upp = metric.evaluate(prof, y)
        assert w == pytest.approx(1.0, abs=1e-14)
        assert u == pytest.approx(0.0, abs=1e-14)
        assert up == 0.0 and upp == 0.0


def test_gauss_residuals_clifford_exact():
    prof = metric.profile_from_a1_psi(1.0, -1.0)
    r1, r2 = metric.check_gauss(prof, 0.7)
    assert r1 == 0.0
    assert r2 == 0.0


def test_gauss_residuals_generic(profile):
    params = profile.elliptic
    for y in (0.0, 0.5, params.omega):
        r1, r2 = metric.check_gauss(profile, y)
        assert abs(r1) < 1e-9
        assert abs(r2) < 1e-9


def test_gauss_residual_psi_zero():
    prof = metric.profile_from_a1_psi(1.0, 0.0)
    r1, _ = metric.check_gauss(prof, 0.7)
    assert abs(r1) < 1e-10


def test_second_derivative_against_finite_differences(profile):
    # independent oracle: 4th-order central differences of u
    h = 1e-2
    for y in (0.3, 0.9, 1.4):
        us = [metric.evaluate(profile, y + k * h).u for k in (-2, -1, 0, 1, 2)]
        upp_fd = (-us[0] + 16 * us[1] - 30 * us[2] + 16 * us[3] - us[4]) / (12 * h * h)
        up_fd = (us[0] - 8 * us[1] + 8 * us[3] - us[4]) / (12 * h)
        s = metric.evaluate(profile, y)
        assert abs(s.upp - upp_fd) < 1e-6
        assert abs(s.up - up_fd) < 1e-6


def test_periodicity_and_evenness(profile):
    two_w = 2.0 * profile.elliptic.omega
    for y in np.linspace(0.0, two_w, 17):
        w0 = metric.evaluate(profile, y).w
        assert abs(metric.evaluate(profile, y + two_w).w - w0) < 1e-10
        assert abs(metric.evaluate(profile, -y).w - w0) < 1e-10


def test_first_integral_uniform(profile):
    p2 = abs(profile.psi) ** 2
    for y in np.linspace(0.0, 2.0 * profile.elliptic.omega, 41):
        w, _, up, _ = metric.evaluate(profile, y)
        r2 = 2.0 * w + p2 / w**2 + 0.25 * up**2 - profile.beta
        assert abs(r2) < 1e-9
        wp_ = w * up
        assert abs(wp_**2 + 8 * w**3 - 4 * profile.beta * w**2 + 4 * p2) < 1e-9


def test_shifted_profile_is_solution(profile):
    # u(y + omega) solves the Gauss ODE with vanishing derivative at 0
    omega = profile.elliptic.omega
    assert abs(metric.evaluate(profile, omega).up) < 1e-10
    p2 = abs(profile.psi) ** 2
    for y in np.linspace(0.0, omega, 11):
        w, _, _, upp = metric.evaluate(profile, y + omega)
        assert abs(0.25 * upp + w - p2 / w**2) < 1e-9
