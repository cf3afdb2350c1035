import cmath
import math

import numpy as np
import pytest
from scipy.linalg import expm

from mlsurf import iwasawa, metric, spectral
from mlsurf.errors import BranchPointError, SingularIntegrandError


def det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def test_q_factor_identity_at_origin(profile, lam):
    fac = iwasawa.q_factor(profile, 0.0, lam)
    assert np.linalg.norm(fac.Qtilde - np.eye(3)) < 1e-12
    assert np.linalg.norm(fac.Q - np.eye(3)) < 1e-12


def test_det_qtilde_independent_determinant(profile, lam):
    for y in (0.0, 0.23, 0.8, 1.5):
        fac = iwasawa.q_factor(profile, y, lam)
        assert abs(det3(fac.Qtilde) - 1.0) < 1e-10


def test_check_entry_formulas(profile, lam):
    # c entry and the determinant identity against their closed forms
    y = 0.45
    fac = iwasawa.q_factor(profile, y, lam)
    ce = fac.check_entries
    w, _, up, _ = metric.evaluate(profile, y)
    lp3 = lam**3 * profile.psi.conjugate()
    lm3 = profile.psi / lam**3
    assert abs(ce["c"] - (lp3 - lm3 - w * up)) < 1e-14
    det_part = ce["p"] * ce["t"] - ce["q"] * ce["s"]
    assert abs(det_part * ce["c"] - ce["c"] ** 2 * (lp3 - lm3)) < 1e-9


def test_conjugation_residual(profile, lam):
    d = spectral.build_D(profile, lam).entries
    for y in np.linspace(0.0, 2.0 * profile.elliptic.omega, 21):
        q = iwasawa.q_factor(profile, y, lam).Q
        om = iwasawa.omega_matrix(profile, y, lam)
        assert np.linalg.norm(q @ d @ np.linalg.inv(q) - om) < 1e-9


def test_branch_point_rejection(profile):
    # lambda^-3 psi real: both kappa bases degenerate
    lam = cmath.exp(1j * math.pi / 3)
    assert abs((profile.psi / lam**3).imag) < 1e-12
    with pytest.raises(BranchPointError):
        iwasawa.q_factor(profile, 0.4, lam)


def test_beta_integrals_empty(profile, lam):
    b1, b2 = iwasawa.beta_integrals(profile, lam, 0.0)
    assert b1 == 0.0 and b2 == 0.0


def test_beta_integrals_vs_split_forms(profile, lam):
    # two independent integrand formulations as mutual oracles
    for y in (0.37, 1.1):
        b1, b2 = iwasawa.beta_integrals(profile, lam, y)
        rb1, ib1, rb2, ib2 = iwasawa.beta_split_integrals(profile, lam, y)
        assert abs(b1 - complex(rb1, ib1)) < 1e-10
        assert abs(b2 - complex(rb2, ib2)) < 1e-10


def test_beta_integrals_reject_real_cubic_differential(profile):
    lam = cmath.exp(1j * math.pi / 3)
    with pytest.raises(SingularIntegrandError):
        iwasawa.beta_integrals(profile, lam, 0.5)


def test_beta_closed_matches_quadrature(profile, lam):
    two_w = 2.0 * profile.elliptic.omega
    b1q, b2q = iwasawa.beta_integrals(profile, lam, two_w)
    b1c, b2c = iwasawa.beta_closed_2omega(profile, lam)
    assert abs(b1q - b1c) < 1e-8
    assert abs(b2q - b2c) < 1e-8
    # full-period structure: beta1 - 2 i omega real, beta2 purely imaginary
    assert abs(b1c.imag - two_w) < 1e-10
    assert abs(b2c.real) < 1e-10


def test_beta_closed_real_limit(profile):
    lam = cmath.exp(1j * math.pi / 3)
    b1, b2 = iwasawa.beta_closed_2omega(profile, lam)
    assert b1 == 2j * profile.elliptic.omega
    assert b2 == 0.0


def test_shifted_cubic_reduces_to_g3(profile):
    # Im(lambda^-3 psi) = 0 leaves the original invariants
    e_t, _ = iwasawa._shifted_roots(profile, 0.0)
    params = profile.elliptic
    assert np.allclose(e_t, (params.e1, params.e2, params.e3), atol=1e-12)


def test_frame_identity_at_zero(profile, spec, lam):
    fac = iwasawa.factors_at(profile, lam, 0.0)
    f = iwasawa.extended_frame(profile, spec, fac, 0.0, lam)
    assert np.linalg.norm(f - np.eye(3)) < 1e-12


def test_frame_unitary_on_circle(profile, spec, lam, factors):
    rng = np.random.default_rng(21)
    for _ in range(6):
        z = complex(rng.uniform(-2, 2), factors.y)
        f = iwasawa.extended_frame(profile, spec, factors, z, lam)
        assert np.linalg.norm(f.conj().T @ f - np.eye(3)) < 1e-8
        assert abs(np.linalg.det(f) - 1.0) < 1e-8


def test_frame_unitary_negative_y(profile, spec, lam):
    fac = iwasawa.factors_at(profile, lam, -0.44)
    f = iwasawa.extended_frame(profile, spec, fac, complex(0.3, -0.44), lam)
    assert np.linalg.norm(f.conj().T @ f - np.eye(3)) < 1e-8


def test_frame_translation_property(profile, spec, dmat, lam, factors):
    z = complex(0.3, factors.y)
    for t in (0.83, -1.7):
        f1 = iwasawa.extended_frame(profile, spec, factors, z + t, lam)
        f2 = expm(t * dmat.entries) @ iwasawa.extended_frame(
            profile, spec, factors, z, lam)
        assert np.linalg.norm(f1 - f2) < 1e-9


def test_plus_factor_identity_at_zero(profile, spec, lam):
    fac = iwasawa.factors_at(profile, lam, 0.0)
    assert np.linalg.norm(iwasawa.plus_factor(profile, spec, fac) - np.eye(3)) < 1e-12


def test_exp_splitting_against_expm(profile, spec, dmat, lam, factors):
    # scaling-and-squaring exponential as the independent oracle
    u_plus = iwasawa.plus_factor(profile, spec, factors)
    for x in (-0.6, 0.0, 1.2):
        z = complex(x, factors.y)
        f = iwasawa.extended_frame(profile, spec, factors, z, lam)
        assert np.linalg.norm(expm(z * dmat.entries) - f @ u_plus) < 1e-8


def test_plus_loop_fourier_positivity(profile):
    # FFT oracle: negative lambda-Fourier mass of U+ below 1e-6
    n = 64
    y = 0.55
    ent = np.empty((n, 3, 3), dtype=complex)
    for k in range(n):
        th = (2.0 * math.pi * k + math.pi) / n
        lam = cmath.exp(1j * th)
        spec = spectral.eigen(spectral.build_D(profile, lam),
                              profile.beta, profile.psi)
        fac = iwasawa.factors_at(profile, lam, y)
        ent[k] = iwasawa.plus_factor(profile, spec, fac)
    co = np.fft.fft(ent, axis=0) / n
    assert np.abs(co[n // 2 + 1:]).sum(axis=0).max() < 1e-6


def test_maurer_cartan_finite_differences(profile, spec, lam):
    h = 1e-4

    def frame(z):
        fac = iwasawa.factors_at(profile, lam, z.imag)
        return iwasawa.extended_frame(profile, spec, fac, z, lam)

    z0 = complex(0.21, 0.6)
    fc = frame(z0)
    fx = (frame(z0 + h) - frame(z0 - h)) / (2 * h)
    fy = (frame(z0 + 1j * h) - frame(z0 - 1j * h)) / (2 * h)
    om = iwasawa.omega_matrix(profile, z0.imag, lam)
    w, _, up, _ = metric.evaluate(profile, z0.imag)
    rw = math.sqrt(w)
    psi = profile.psi
    u_m1 = np.array([[0, 0, 1j * rw], [-1j * psi / w, 0, 0], [0, 1j * rw, 0]])
    v_p1 = np.array([[0, -1j * psi.conjugate() / w, 0], [0, 0, 1j * rw],
                     [1j * rw, 0, 0]])
    b = 1j * (u_m1 / lam - lam * v_p1)
    fi = np.linalg.inv(fc)
    assert np.linalg.norm(fi @ fx - om) < 1e-5
    assert np.linalg.norm(fi @ fy - b) < 1e-5


def test_kappa_branch_continuity(profile, lam):
    # kappa^3 = base1^2 base2 along y (branch consistency), kappa(0) = base2
    lp3 = lam**3 * profile.psi.conjugate()
    lm3 = profile.psi / lam**3
    m0 = lam**3 * (lp3 - lm3)
    prev = None
    for y in np.linspace(0.0, 2.0 * profile.elliptic.omega, 101):
        fac = iwasawa.q_factor(profile, y, lam)
        w, _, up, _ = metric.evaluate(profile, y)
        base1 = lam**3 * (lp3 - lm3 - w * up)
        assert abs(fac.kappa**3 - base1**2 * m0) < 1e-9
        if prev is not None:
            assert abs(fac.kappa - prev) < 0.2 * max(1.0, abs(prev))
        prev = fac.kappa
    fac0 = iwasawa.q_factor(profile, 0.0, lam)
    assert abs(fac0.kappa - m0) < 1e-13
