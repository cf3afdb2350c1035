"""Explicit loop-group factorization along the equivariant direction.

For admissible lambda the conjugation Q D Q^{-1} = Omega is solved in closed
form by Q = Q0 Qtilde with Qtilde = lambda^3 / kappa * Qcheck, and the
remaining abelian factor is exp(beta1 D + beta2 L0) with beta1, beta2 given
by one-dimensional integrals in y.  The extended frame is then

    F(z, lambda) = exp(z D - beta1 D - beta2 L0) Q^{-1},

unitary on |lambda| = 1 and equal to I at z = 0.

Branch convention for kappa = (lambda^6 psib - psi - lambda^3 w')^{2/3}
(lambda^6 psib - psi)^{1/3}: principal powers at y = 0 (where both bases
coincide and the product collapses to the base itself), continued in y.
On |lambda| = 1 the ratio of the moving base to its y = 0 value is
1 + real * i / (2 Im(lambda^-3 psi)), a point on the vertical line Re = 1,
so the principal logarithm of the ratio *is* the continuous continuation.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import elliptic, metric
from ._cubic import three_real_roots_descending
from .errors import BranchPointError, RootCollisionError, SingularIntegrandError

# |Im(lambda^-3 psi)| below this counts as the real-cubic-differential locus.
REAL_PSI_TOL = 1e-10

_QUAD_OPTS = dict(epsabs=1e-12, epsrel=1e-12, limit=200)


@dataclass(frozen=True, eq=False)
class IwasawaFactors:
    y: float
    lam: complex
    Q0: np.ndarray          # diagonal factor, real entries
    Qtilde: np.ndarray      # det 1, equals I at y = 0
    kappa: complex
    beta1: complex
    beta2: complex
    check_entries: dict     # the seven scalars p, q, s, t, v1, v2, c

    @property
    def Q(self):
        return self.Q0 @ self.Qtilde


def _lam_powers(psi, lam):
    lp3 = lam**3 * psi.conjugate()   # lambda^3 conj(psi)
    lm3 = psi / lam**3               # lambda^-3 psi
    return lp3, lm3


def q_factor(profile, y, lam):
    """Q part of the factorization at (y, lambda); beta1 = beta2 = 0 here."""
    lam = complex(lam)
    psi = profile.psi
    a1 = profile.a1
    w, _, up, _ = metric.evaluate(profile, y)
    lp3, lm3 = _lam_powers(psi, lam)
    c0 = lp3 - lm3
    wprime = w * up
    cc = c0 - wprime

    m0 = lam**3 * c0                 # lambda^6 psib - psi
    base1 = lam**3 * cc
    scale = max(1.0, abs(psi))
    if abs(m0) < 1e-10 * scale:
        raise BranchPointError(
            f"lambda^6 conj(psi) - psi vanishes at lambda={lam}"
        )
    if abs(base1) < 1e-10 * scale:
        raise BranchPointError(
            f"kappa base lambda^6 conj(psi) - psi - lambda^3 w' vanishes "
            f"at lambda={lam}, y={y}"
        )
    kappa = m0 * cmath.exp((2.0 / 3.0) * cmath.log(base1 / m0))

    pc = -a1 * up / 2.0 + lp3 * a1 / w - lm3
    qc = -(a1 * up / 2.0 - lp3 * (a1 - w) / w) / lam**2
    sc = -(lam**2 / a1) * (a1 * up * w / 2.0 + lm3 * (a1 - w))
    tc = (-a1 * up * w / 2.0 + lp3 * w - lm3 * a1) / a1
    v1 = 2.0 * math.sqrt(a1) * (a1 - w) / lam
    v2 = -2.0 * lam * w * (a1 - w) / math.sqrt(a1)

    qcheck = np.array(
        [[pc, qc, v1], [sc, tc, v2], [0.0, 0.0, cc]], dtype=complex
    )
    qtilde = (lam**3 / kappa) * qcheck
    q0 = np.diag([math.sqrt(w / a1), math.sqrt(a1 / w), 1.0]).astype(complex)
    return IwasawaFactors(
        y=float(y), lam=lam, Q0=q0, Qtilde=qtilde, kappa=kappa,
        beta1=0.0j, beta2=0.0j,
        check_entries={"p": pc, "q": qc, "s": sc, "t": tc,
                       "v1": v1, "v2": v2, "c": cc},
    )


def omega_matrix(profile, y, lam):
    """The conjugated Maurer-Cartan coefficient Omega(y, lambda)."""
    lam = complex(lam)
    psi = profile.psi
    w, _, up, _ = metric.evaluate(profile, y)
    rw = math.sqrt(w)
    li = 1.0 / lam
    return np.array(
        [
            [-0.5j * up, -1j * lam * psi.conjugate() / w, 1j * li * rw],
            [-1j * li * psi / w, 0.5j * up, 1j * lam * rw],
            [1j * lam * rw, 1j * li * rw, 0.0],
        ],
        dtype=complex,
    )


def _assert_admissible(profile, lam):
    lm3 = profile.psi / complex(lam) ** 3
    if abs(lm3.imag) < REAL_PSI_TOL:
        raise SingularIntegrandError(
            f"lambda^-3 psi = {lm3} is real at lambda={lam}: the beta "
            "integrand denominator vanishes where u' = 0; use the closed "
            "full-period values instead"
        )
    return lm3


def _segmented_quad(f, y, omega):
    """Complex integral of f over [0, y], split at multiples of omega."""
    if y == 0.0:
        return 0.0 + 0.0j
    lo, hi = (0.0, y) if y > 0 else (y, 0.0)
    pts = [lo, hi]
    if math.isfinite(omega) and omega > 0:
        k = math.floor(lo / omega) + 1
        while k * omega < hi:
            if lo < k * omega < hi:
                pts.append(k * omega)
            k += 1
    pts = sorted(set(pts))
    total = 0.0 + 0.0j
    for a, b in zip(pts[:-1], pts[1:]):
        re, _ = integrate.quad(lambda s: f(s).real, a, b, **_QUAD_OPTS)
        im, _ = integrate.quad(lambda s: f(s).imag, a, b, **_QUAD_OPTS)
        total += complex(re, im)
    return total if y > 0 else -total


def beta_integrals(profile, lam, y):
    """(beta1(y, lambda), beta2(y, lambda)) by adaptive quadrature."""
    lam = complex(lam)
    _assert_admissible(profile, lam)
    psi = profile.psi
    lp3, lm3 = _lam_powers(psi, lam)
    c0 = lp3 - lm3

    def f1(s):
        w, _, up, _ = metric.evaluate(profile, s)
        return (2j * lp3 - 1j * w * up) / (c0 - w * up)

    def f2(s):
        w, _, up, _ = metric.evaluate(profile, s)
        return 2.0 * w / (c0 - w * up)

    omega = profile.elliptic.omega
    return (_segmented_quad(f1, float(y), omega),
            _segmented_quad(f2, float(y), omega))


def beta_split_integrals(profile, lam, y):
    """(Re beta1, Im beta1, Re beta2, Im beta2) from the split displays.

    Independent reformulation of beta_integrals through real integrands;
    used as a cross-check oracle.
    """
    lam = complex(lam)
    lm3 = _assert_admissible(profile, lam)
    re3, im3 = lm3.real, lm3.imag

    def parts(s):
        w, _, up, _ = metric.evaluate(profile, s)
        wp = w * up
        return w, wp, wp * wp + 4.0 * im3 * im3

    def quad_of(g, yy):
        return _segmented_quad(lambda s: complex(g(s), 0.0), yy,
                               profile.elliptic.omega).real

    y = float(y)
    i_flat = quad_of(lambda s: 1.0 / parts(s)[2], y)
    i_wp = quad_of(lambda s: parts(s)[1] / parts(s)[2], y)
    i_w = quad_of(lambda s: parts(s)[0] / parts(s)[2], y)
    i_wwp = quad_of(lambda s: parts(s)[0] * parts(s)[1] / parts(s)[2], y)
    re_b1 = -4.0 * im3 * re3 * i_flat
    im_b1 = y - 2.0 * re3 * i_wp
    re_b2 = -2.0 * i_wwp
    im_b2 = 4.0 * im3 * i_w
    return re_b1, im_b1, re_b2, im_b2


def beta_closed_2omega(profile, lam):
    """(beta1(2 omega), beta2(2 omega)) from the elliptic closed forms.

    For real lambda^-3 psi the values are exactly (2 omega i, 0).
    """
    lam = complex(lam)
    params = profile.elliptic
    lm3 = profile.psi / lam**3
    re3, im3 = lm3.real, lm3.imag
    if abs(im3) < REAL_PSI_TOL:
        return 2j * params.omega, 0.0 + 0.0j

    e_t, h2 = _shifted_roots(profile, im3)
    ints = [elliptic.inv_wp_period_integral(params, v) for v in e_t]
    beta = profile.beta
    s1 = sum(ints[j] / h2[j] for j in range(3))
    s2 = sum((beta / 3.0 - e_t[j]) / (2.0 * h2[j]) * ints[j] for j in range(3))
    beta1 = 2j * params.omega - 4.0 * im3 * re3 * s1
    beta2 = 4j * im3 * s2
    return beta1, beta2


def _shifted_roots(profile, im3):
    """Descending roots of 4v^3 - g2 v - g3tilde and the partial-fraction
    weights H_j^2 = prod_{k != j} (e_j - e_k)."""
    params = profile.elliptic
    g3t = params.g3 - 16.0 * im3 * im3
    e_t = three_real_roots_descending(-params.g2 / 4.0, -g3t / 4.0)
    if min(e_t[0] - e_t[1], e_t[1] - e_t[2]) < 1e-10:
        raise RootCollisionError(
            f"shifted cubic roots {e_t} collide; partial fractions degenerate"
        )
    h2 = []
    for j in range(3):
        k, l = {0: (1, 2), 1: (0, 2), 2: (0, 1)}[j]
        h2.append((e_t[j] - e_t[k]) * (e_t[j] - e_t[l]))
    return e_t, h2


def _commuting_exp(spectral, beta, c1, c2):
    """exp(c1 D + c2 L0) through the joint eigenbasis."""
    d = np.asarray(spectral.d)
    expo = np.exp(c1 * 1j * d + c2 * (-d * d + 2.0 * beta / 3.0))
    return (spectral.L * expo) @ spectral.L.conj().T


def extended_frame(profile, spectral, factors, z, lam):
    """F(z, lambda) = exp(zD - beta1 D - beta2 L0) Q^{-1} at y = Im z."""
    z = complex(z)
    if abs(z.imag - factors.y) > 1e-12 * max(1.0, abs(factors.y)):
        raise ValueError(
            f"factors were built at y={factors.y}, frame requested at Im z={z.imag}"
        )
    e = _commuting_exp(spectral, profile.beta, z - factors.beta1, -factors.beta2)
    return e @ np.linalg.inv(factors.Q)


def plus_factor(profile, spectral, factors):
    """U_+(y, lambda) = Q exp(beta1 D + beta2 L0); exp(zD) = F U_+."""
    e = _commuting_exp(spectral, profile.beta, factors.beta1, factors.beta2)
    return factors.Q @ e


def factors_at(profile, lam, y):
    """Q factor plus the beta integrals bundled at (y, lambda)."""
    base = q_factor(profile, y, lam)
    b1, b2 = beta_integrals(profile, lam, y)
    return IwasawaFactors(
        y=base.y, lam=base.lam, Q0=base.Q0, Qtilde=base.Qtilde,
        kappa=base.kappa, beta1=b1, beta2=b2,
        check_entries=base.check_entries,
    )
