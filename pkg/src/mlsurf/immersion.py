"""Canonical horizontal lifts, surface diagnostics and closing conditions.

Two routes to the lift are implemented: the loop-group form (eigen-sum of
the extended frame applied to e3) and the amplitude/phase form

    F(x, y) = sum_j h_j(y) exp(i d_j x + i G_j(y)) l_j,

which agree componentwise in modulus, with z-independent relative phases.
Closed-form full-period values of G_j, the monodromy-vanishing residuals,
the Clifford-torus closing lattice and vacuum normalization live here too.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import elliptic, iwasawa, metric, spectral
from .errors import SingularIntegrandError
from .iwasawa import REAL_PSI_TOL

E3 = np.array([0.0, 0.0, 1.0], dtype=complex)

# Clifford-torus vacuum potential and its su(3)-conjugate partner.
CLIFFORD_A = np.array([[0, 0, 1j], [1j, 0, 0], [0, 1j, 0]], dtype=complex)
TAU_CLIFFORD_A = np.array([[0, 1j, 0], [0, 0, 1j], [1j, 0, 0]], dtype=complex)


@dataclass(frozen=True, eq=False)
class ImmersionSample:
    z: complex
    lam: complex
    F: np.ndarray
    u: float
    residuals: dict


@dataclass(frozen=True, eq=False)
class LiftCoefficients:
    d: tuple
    h: np.ndarray           # amplitudes h_j(y)
    G: np.ndarray           # phases G_j(y)
    l_hat: np.ndarray       # unitary eigenvector columns


def sample_immersion(profile, spec, factors, z, lam):
    """ImmersionSample at z: lift value plus its pointwise residuals."""
    z = complex(z)
    f = lift_loop(profile, spec, factors, z, lam)
    w, u, _, _ = metric.evaluate(profile, z.imag)
    fc = lift_amplitude_phase(profile, spec, z, lam)
    residuals = {
        "unit_norm": abs(float(np.linalg.norm(f)) - 1.0),
        "moduli_agreement": float(np.max(np.abs(
            np.abs(spec.L.conj().T @ f) - np.abs(spec.L.conj().T @ fc)))),
    }
    return ImmersionSample(z=z, lam=complex(lam), F=f, u=u, residuals=residuals)


def lift_loop(profile, spec, factors, z, lam):
    """Loop-group lift: the eigen-sum equal to extended_frame(z) @ e3."""
    z = complex(z)
    d = np.asarray(spec.d)
    beta = profile.beta
    expo = np.exp(1j * (z - factors.beta1) * d + factors.beta2 * (d * d - 2.0 * beta / 3.0))
    qinv_e3 = np.linalg.solve(factors.Q, E3)
    coeff = spec.L.conj().T @ qinv_e3
    return spec.L @ (expo * coeff)


def _pair_roots(d, beta, roots, tol=1e-8):
    """Index pairing e_{m(j)} = beta/3 + d_k d_l, asserted per sample."""
    pairing = []
    for j in range(3):
        k, l = {0: (1, 2), 1: (0, 2), 2: (0, 1)}[j]
        target = beta / 3.0 + d[k] * d[l]
        m = int(np.argmin([abs(r - target) for r in roots]))
        if abs(roots[m] - target) > tol * max(1.0, abs(target)):
            raise ValueError(
                f"root pairing failed: beta/3 + d_k d_l = {target} not among {roots}"
            )
        pairing.append(m)
    if sorted(pairing) != [0, 1, 2]:
        raise ValueError(f"root pairing {pairing} is not a bijection")
    return pairing


def lift_coefficients(profile, spec, lam, y):
    """Amplitudes h_j(y) and phases G_j(y) of the amplitude/phase lift."""
    lam = complex(lam)
    lm3 = profile.psi / lam**3
    w, _, _, _ = metric.evaluate(profile, y)
    d = np.asarray(spec.d)
    if abs(lm3.imag) >= REAL_PSI_TOL:
        num = d * w - lm3.real
        den = d**3 - lm3.real
        h2 = num / den
        G = np.array(g_quadrature(profile, spec, lam, y))
    else:
        params = profile.elliptic
        v = elliptic.wp(complex(y) - params.omega_prime, params).real
        pairing = _pair_roots(d, profile.beta, (params.e1, params.e2, params.e3))
        roots = (params.e1, params.e2, params.e3)
        h2 = np.array([(roots[m] - v) / (profile.beta + 3.0 * roots[m]) for m in pairing])
        G = np.zeros(3)
    if h2.min() < -1e-10:
        raise SingularIntegrandError(
            f"negative squared amplitude {h2.min()} at lambda={lam}, y={y}"
        )
    return LiftCoefficients(d=tuple(d), h=np.sqrt(np.clip(h2, 0.0, None)), G=G,
                            l_hat=spec.L)


def lift_amplitude_phase(profile, spec, z, lam):
    """Amplitude/phase lift; branch picked by Im(lambda^-3 psi) vs 1e-10."""
    z = complex(z)
    co = lift_coefficients(profile, spec, lam, z.imag)
    d = np.asarray(co.d)
    return co.l_hat @ (co.h * np.exp(1j * (d * z.real + co.G)))


def g_quadrature(profile, spec, lam, y):
    """G_j(y) = int_0^y d_j Im(lambda^-3 psi) / (d_j w - Re(lambda^-3 psi))."""
    lam = complex(lam)
    lm3 = profile.psi / lam**3
    if abs(lm3.imag) < REAL_PSI_TOL:
        raise SingularIntegrandError(
            f"lambda^-3 psi = {lm3} is real; G_j vanishes identically at full "
            "periods, use g_closed_2omega"
        )
    out = []
    omega = profile.elliptic.omega
    for d in spec.d:
        if abs(d) < 1e-12:
            raise SingularIntegrandError(
                f"zero eigenvalue at lambda={lam}: amplitude/phase split degenerates"
            )

        def f(s, d=d):
            w, _, _, _ = metric.evaluate(profile, s)
            return complex(d * lm3.imag / (d * w - lm3.real), 0.0)

        out.append(iwasawa._segmented_quad(f, float(y), omega).real)
    return tuple(out)


def g_closed_2omega(profile, lam):
    """(G_1, G_2, G_3)(2 omega) via the shifted-root elliptic integrals."""
    lam = complex(lam)
    lm3 = profile.psi / lam**3
    if abs(lm3.imag) < REAL_PSI_TOL:
        return (0.0, 0.0, 0.0)
    dmat = spectral.build_D(profile, lam)
    spec = spectral.eigen(dmat, profile.beta, profile.psi)
    e_t, _ = iwasawa._shifted_roots(profile, lm3.imag)
    pairing = _pair_roots(spec.d, profile.beta, e_t)
    params = profile.elliptic
    ints = {m: elliptic.inv_wp_period_integral(params, e_t[m]) for m in set(pairing)}
    return tuple(-2.0 * lm3.imag * ints[pairing[j]] for j in range(3))


def monodromy_vanishing(profile, lam):
    """Residuals G_j(2w) + Re beta1(2w) d_j + Im beta2(2w)(-d_j^2 + 2b/3)."""
    lam = complex(lam)
    dmat = spectral.build_D(profile, lam)
    spec = spectral.eigen(dmat, profile.beta, profile.psi)
    two_w = 2.0 * profile.elliptic.omega
    g = g_quadrature(profile, spec, lam, two_w)
    b1, b2 = iwasawa.beta_integrals(profile, lam, two_w)
    beta = profile.beta
    return tuple(
        g[j] + b1.real * spec.d[j] + b2.imag * (-spec.d[j] ** 2 + 2.0 * beta / 3.0)
        for j in range(3)
    )


def monodromy_running_residuals(profile, lam, y):
    """|G_j(y) + Re beta1(y) d_j + Im beta2(y)(-d_j^2+2b/3) - arctan(...)/3|.

    The right-hand side is arctan(w'(y) / (2 Im(lambda^-3 psi))) / 3 for
    every j.
    """
    lam = complex(lam)
    lm3 = profile.psi / lam**3
    dmat = spectral.build_D(profile, lam)
    spec = spectral.eigen(dmat, profile.beta, profile.psi)
    g = g_quadrature(profile, spec, lam, y)
    b1, b2 = iwasawa.beta_integrals(profile, lam, y)
    w, _, up, _ = metric.evaluate(profile, y)
    rhs = math.atan(w * up / (2.0 * lm3.imag)) / 3.0
    beta = profile.beta
    return tuple(
        abs(g[j] + b1.real * spec.d[j]
            + b2.imag * (-spec.d[j] ** 2 + 2.0 * beta / 3.0) - rhs)
        for j in range(3)
    )


@dataclass(frozen=True, eq=False)
class CliffordClosing:
    delta: complex
    c: complex
    monodromy: np.ndarray
    off_diagonal: float
    c_cubed_error: float


def clifford_closing(lam0, l1, l2, l3, k):
    """Closing translation delta for the Clifford torus at lambda_0.

    Integers must satisfy l1 + l2 + l3 + 1 + k = 0 with k in {0, 1, 2};
    the resulting monodromy exp(delta lam0^-1 A + conj(delta) lam0 tau(A))
    is verified to be a scalar c I with c^3 = 1.
    """
    for name, v in (("l1", l1), ("l2", l2), ("l3", l3), ("k", k)):
        if int(v) != v:
            raise ValueError(f"{name} must be an integer, got {v}")
    if k not in (0, 1, 2):
        raise ValueError(f"k must be 0, 1 or 2, got {k}")
    if l1 + l2 + l3 + 1 + k != 0:
        raise ValueError(
            f"closing constraint violated: l1+l2+l3+1+k = {l1 + l2 + l3 + 1 + k} != 0"
        )
    lam0 = complex(lam0)
    delta1 = math.pi * complex((2 * l1 - l2 - l3) / 3.0, (l3 - l2) / math.sqrt(3.0))
    delta = lam0 * delta1
    n = delta / lam0 * CLIFFORD_A + (delta.conjugate() * lam0) * TAU_CLIFFORD_A
    mono = expm(n)
    c = np.trace(mono) / 3.0
    off = float(np.max(np.abs(mono - c * np.eye(3))))
    c3_err = abs(c**3 - 1.0)
    if off > 1e-10 or c3_err > 1e-10:
        raise RuntimeError(
            f"monodromy failed to close: off-diagonal {off}, |c^3-1| = {c3_err}"
        )
    return CliffordClosing(delta=delta, c=complex(c), monodromy=mono,
                           off_diagonal=off, c_cubed_error=c3_err)


def normalize_vacuum(a, b):
    """Rotation angle and rescale mapping a vacuum to the Clifford potential.

    Writing a = i r e^{i theta}, b = i r e^{i beta'} (|a| = |b| is the
    vacuum condition), the diagonal conjugation diag(e^{i d}, e^{-i d}, 1)
    with d = (beta' - theta)/3 followed by division by r e^{i(2theta+beta')/3}
    yields the Clifford matrix.  Returns (delta_rot, scale, residual).
    """
    a = complex(a)
    b = complex(b)
    if a == 0:
        raise ValueError("vacuum requires a != 0")
    if abs(abs(a) - abs(b)) > 1e-10 * max(abs(a), 1.0):
        raise ValueError(f"not a vacuum: |a| = {abs(a)} != |b| = {abs(b)}")
    r = abs(a)
    theta = cmath.phase(a / 1j)
    beta_p = cmath.phase(b / 1j)
    delta_rot = (beta_p - theta) / 3.0
    scale = r * cmath.exp(1j * (2.0 * theta + beta_p) / 3.0)
    mat = np.array([[0, 0, a], [b, 0, 0], [0, a, 0]], dtype=complex)
    conj = np.diag([cmath.exp(1j * delta_rot), cmath.exp(-1j * delta_rot), 1.0])
    mapped = conj @ mat @ np.conj(conj) / scale
    residual = float(np.max(np.abs(mapped - CLIFFORD_A)))
    return delta_rot, scale, residual


def flat_frame_lift(profile, z, lam):
    """Lift for the flat stratum: F = exp(z lam^-1 D_-1 + zbar lam D_1) e3.

    Valid because u is constant there, so the lambda^-1 and lambda^+1 blocks
    of the potential commute (the vacuum condition |a| = |b|).
    """
    lam = complex(lam)
    z = complex(z)
    w = profile.beta / 3.0
    rw = math.sqrt(w)
    psi = profile.psi
    d_m1 = np.array(
        [[0, 0, 1j * rw], [-1j * psi / w, 0, 0], [0, 1j * rw, 0]], dtype=complex
    )
    d_p1 = np.array(
        [[0, -1j * psi.conjugate() / w, 0], [0, 0, 1j * rw], [1j * rw, 0, 0]],
        dtype=complex,
    )
    return expm(z / lam * d_m1 + z.conjugate() * lam * d_p1) @ E3


def psi_zero_lift(profile, z):
    """Lift for the psi = 0 stratum: the round-sphere (RP^2) immersion.

    F = (sech(s b y) cos(s b x), sech(s b y) sin(s b x), tanh(s b y)) with
    s b = sqrt(beta) reproduces w = beta / (2 cosh^2(sqrt(beta) y)).
    """
    z = complex(z)
    sb = math.sqrt(profile.beta)
    x, y = sb * z.real, sb * z.imag
    sech = 1.0 / math.cosh(y)
    return np.array([sech * math.cos(x), sech * math.sin(x), math.tanh(y)],
                    dtype=complex)


def _richardson(coarse, fine):
    return (4.0 * fine - coarse) / 3.0


def hopf_and_metric_check(lift, profile, lam, xs, ys, h1=1e-4, h2=1e-3):
    """Finite-difference surface diagnostics over a grid.

    lift is a callable z -> F (unit vector in C^3).  Reports maxima of:
    unit-norm defect, horizontality, conformality/metric recovery against
    the profile, and the Hopf-coefficient recovery against -i lambda^-3 psi.
    The -i is the fixed gauge phase between the frame convention used here
    (whose Maurer-Cartan form carries i factors on the off-diagonal) and
    the geometric frame (e^{-u/2}F_z, e^{-u/2}F_zbar, F); it multiplies the
    recovered cubic coefficient but leaves |psi| and e^u untouched.
    """
    lam = complex(lam)
    expected_psi = -1j * profile.psi / lam**3
    res = {
        "unit_norm": 0.0, "horizontality": 0.0, "conformality_cross": 0.0,
        "metric_recovery": 0.0, "hopf_recovery": 0.0,
    }

    def dz_dzbar(z, h):
        fx = (lift(z + h) - lift(z - h)) / (2.0 * h)
        fy = (lift(z + 1j * h) - lift(z - 1j * h)) / (2.0 * h)
        return 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)

    for x in xs:
        for y in ys:
            z = complex(x, y)
            f = lift(z)
            res["unit_norm"] = max(res["unit_norm"], abs(np.linalg.norm(f) - 1.0))
            dzc, dbc = dz_dzbar(z, h1)
            dzf, dbf = dz_dzbar(z, 0.5 * h1)
            fz = _richardson(dzc, dzf)
            fzb = _richardson(dbc, dbf)
            fbar = np.conj(f)
            res["horizontality"] = max(res["horizontality"],
                                       abs(fz @ fbar), abs(fzb @ fbar))
            w = metric.evaluate(profile, y).w
            res["metric_recovery"] = max(
                res["metric_recovery"],
                abs(fz @ np.conj(fz) - w), abs(fzb @ np.conj(fzb) - w),
            )
            res["conformality_cross"] = max(res["conformality_cross"],
                                            abs(fz @ np.conj(fzb)))
            def fzz_at(h):
                fxx = (lift(z + h) - 2.0 * f + lift(z - h)) / h**2
                fyy = (lift(z + 1j * h) - 2.0 * f + lift(z - 1j * h)) / h**2
                fxy = (lift(z + h * (1 + 1j)) - lift(z + h * (1 - 1j))
                       - lift(z + h * (-1 + 1j)) + lift(z - h * (1 + 1j))) / (4.0 * h**2)
                return 0.25 * (fxx - fyy - 2j * fxy)

            fzz = _richardson(fzz_at(h2), fzz_at(0.5 * h2))
            res["hopf_recovery"] = max(res["hopf_recovery"],
                                       abs(fzz @ np.conj(fzb) - expected_psi))
    return res
