"""Weierstrass elliptic data for real invariants with rectangular lattices.

Conventions used throughout the package:

* invariants come from a surface pair (beta, |psi|^2) via
  g2 = 4 beta^2 / 3,  g3 = 16 |psi|^2 - 8 beta^3 / 27;
* for the generic case (discriminant > 0) the cubic 4v^3 - g2 v - g3 has
  three distinct real roots e1 > e2 > e3, the half-period omega is real
  positive and omega' purely imaginary with positive imaginary part,
  wp(omega) = e1, wp(omega + omega') = e2, wp(omega') = e3;
* |psi| = 0 collapses e1 = e2 and turns wp into a hyperbolic function
  (real period infinite); beta^3 = 27 |psi|^2 collapses e2 = e3 and turns
  wp into a trigonometric function (imaginary period infinite).  Both are
  dispatched to closed forms instead of the series kernels.
"""

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import backend
from ._cubic import three_real_roots_descending
from .errors import PoleProximityError

# Distance to the period lattice below which evaluation is refused; keeps
# |wp| under ~1e12, inside double-precision headroom.
POLE_THRESHOLD = 1e-6

_QUAD_OPTS = dict(epsabs=1e-13, epsrel=1e-12, limit=200)


class DegenerateKind(enum.Enum):
    GENERIC = "generic"
    PSI_ZERO = "psi-zero"
    FLAT = "flat"


@dataclass(frozen=True, eq=False)
class EllipticParams:
    g2: float
    g3: float
    delta: float
    e1: float
    e2: float
    e3: float
    omega: float            # real half-period (inf for PSI_ZERO)
    omega_prime: complex    # purely imaginary half-period (i*inf for FLAT)
    eta: float              # zeta(omega)  (nan when omega is infinite)
    eta_prime: complex      # zeta(omega') (nan when omega' is infinite)
    degenerate_kind: DegenerateKind
    series: np.ndarray      # Laurent coefficients c_2..c_{K+1} of wp about 0

    @property
    def beta(self):
        """Surface constant the invariants were built from (= sqrt(3 g2)/2)."""
        return 0.5 * math.sqrt(3.0 * self.g2)


def invariants_from_surface(beta, psi_abs2):
    """EllipticParams for the metric ODE with first integral beta, |psi|^2.

    Rejects beta^3 < 27 |psi|^2 (no admissible metric) and non-finite input.
    """
    if not (math.isfinite(beta) and math.isfinite(psi_abs2)):
        raise ValueError("beta and |psi|^2 must be finite")
    if psi_abs2 < 0.0:
        raise ValueError("|psi|^2 must be >= 0")
    if beta <= 0.0:
        raise ValueError(f"beta must be positive, got {beta}")
    gap = beta**3 - 27.0 * psi_abs2
    scale = max(1.0, beta**3)
    if gap < -1e-12 * scale:
        raise ValueError(
            f"beta^3 = {beta**3} < 27|psi|^2 = {27 * psi_abs2}: no admissible metric"
        )

    g2 = 4.0 * beta * beta / 3.0
    g3 = 16.0 * psi_abs2 - 8.0 * beta**3 / 27.0
    delta = 256.0 * psi_abs2 * gap
    series = np.asarray(backend.series_coefficients(g2, g3), dtype=float)

    if psi_abs2 == 0.0:
        sb = math.sqrt(beta)
        return EllipticParams(
            g2=g2, g3=g3, delta=0.0,
            e1=beta / 3.0, e2=beta / 3.0, e3=-2.0 * beta / 3.0,
            omega=math.inf,
            omega_prime=complex(0.0, 0.5 * math.pi / sb),
            eta=math.nan,
            eta_prime=complex(0.0, -math.pi * sb / 6.0),
            degenerate_kind=DegenerateKind.PSI_ZERO,
            series=series,
        )
    if gap <= 1e-12 * scale:
        sb = math.sqrt(beta)
        return EllipticParams(
            g2=g2, g3=g3, delta=0.0,
            e1=2.0 * beta / 3.0, e2=-beta / 3.0, e3=-beta / 3.0,
            omega=0.5 * math.pi / sb,
            omega_prime=complex(0.0, math.inf),
            eta=math.pi * sb / 6.0,
            eta_prime=complex(math.nan, math.nan),
            degenerate_kind=DegenerateKind.FLAT,
            series=series,
        )

    e1, e2, e3 = three_real_roots_descending(-g2 / 4.0, -g3 / 4.0)
    omega = _half_period(e1 - e2, e1 - e3)
    omega_p = _half_period(e1 - e3, e2 - e3)
    two_w, two_wp = 2.0 * omega, 2.0 * omega_p
    eta = _eta_by_duplication(0.5 * omega, g2, series, two_w, two_wp)
    eta_prime = _eta_by_duplication(0.5j * omega_p, g2, series, two_w, two_wp)
    return EllipticParams(
        g2=g2, g3=g3, delta=delta,
        e1=e1, e2=e2, e3=e3,
        omega=omega,
        omega_prime=complex(0.0, omega_p),
        eta=eta.real,
        eta_prime=eta_prime,
        degenerate_kind=DegenerateKind.GENERIC,
        series=series,
    )


def _half_period(d_near, d_far):
    """Integral of dt/sqrt(4t^3-g2 t-g3) past the end root, desingularized.

    Substituting t = e_end +- s^2 removes the inverse-square-root endpoint
    singularity and leaves 1/sqrt((s^2+d_near)(s^2+d_far)) over [0, inf).
    """
    def f(s):
        s2 = s * s
        return 1.0 / math.sqrt((s2 + d_near) * (s2 + d_far))

    val, _ = integrate.quad(f, 0.0, math.inf, **_QUAD_OPTS)
    return val


def _eta_by_duplication(zh, g2, series, two_w, two_wp):
    # zeta at a half-period, bootstrapped from the quarter point so no
    # lattice reduction (which would need eta itself) is involved.
    zh = complex(zh)
    zt = backend.zeta(zh, g2, series, two_w, two_wp, 0.0, 0.0)
    p, pp = backend.wp_pair(zh, g2, series, two_w, two_wp)
    return 2.0 * zt + (6.0 * p * p - 0.5 * g2) / (2.0 * pp)


def _beta_of(p):
    if p.degenerate_kind is DegenerateKind.PSI_ZERO:
        return 3.0 * p.e1
    if p.degenerate_kind is DegenerateKind.FLAT:
        return 1.5 * p.e1
    return p.beta


def lattice_distance(z, p):
    """Distance from z to the period lattice (rank <= 2 for degenerate kinds)."""
    z = complex(z)
    x, y = z.real, z.imag
    two_w = 2.0 * p.omega
    two_wp = 2.0 * p.omega_prime.imag
    if math.isfinite(two_w) and two_w > 0.0:
        x -= round(x / two_w) * two_w
    if math.isfinite(two_wp) and two_wp > 0.0:
        y -= round(y / two_wp) * two_wp
    return math.hypot(x, y)


def _guard_pole(z, p):
    d = lattice_distance(z, p)
    if d < POLE_THRESHOLD:
        raise PoleProximityError(
            f"z={z} lies {d:.3e} from a lattice point (threshold {POLE_THRESHOLD})"
        )


def wp_with_prime(z, p):
    """(wp(z), wp'(z)); the degenerate kinds use their closed forms."""
    z = complex(z)
    _guard_pole(z, p)
    kind = p.degenerate_kind
    if kind is DegenerateKind.GENERIC:
        return backend.wp_pair(z, p.g2, p.series, 2.0 * p.omega, 2.0 * p.omega_prime.imag)
    beta = _beta_of(p)
    sb = math.sqrt(beta)
    if kind is DegenerateKind.PSI_ZERO:
        s = cmath.sinh(sb * z)
        ch = cmath.cosh(sb * z)
        return beta / 3.0 + beta / (s * s), -2.0 * beta * sb * ch / (s * s * s)
    s = cmath.sin(sb * z)
    cs = cmath.cos(sb * z)
    return -beta / 3.0 + beta / (s * s), -2.0 * beta * sb * cs / (s * s * s)


def wp(z, p):
    return wp_with_prime(z, p)[0]


def wp_prime(z, p):
    return wp_with_prime(z, p)[1]


def zeta_fn(z, p):
    z = complex(z)
    _guard_pole(z, p)
    kind = p.degenerate_kind
    if kind is DegenerateKind.GENERIC:
        return backend.zeta(z, p.g2, p.series, 2.0 * p.omega,
                            2.0 * p.omega_prime.imag, p.eta, p.eta_prime.imag)
    beta = _beta_of(p)
    sb = math.sqrt(beta)
    if kind is DegenerateKind.PSI_ZERO:
        return -(beta / 3.0) * z + sb / cmath.tanh(sb * z)
    return (beta / 3.0) * z + sb / cmath.tan(sb * z)


def sigma_fn(z, p):
    z = complex(z)
    kind = p.degenerate_kind
    if kind is DegenerateKind.GENERIC:
        return backend.sigma(z, p.g2, p.series, 2.0 * p.omega,
                             2.0 * p.omega_prime.imag, p.eta, p.eta_prime.imag)
    beta = _beta_of(p)
    sb = math.sqrt(beta)
    if kind is DegenerateKind.PSI_ZERO:
        return cmath.sinh(sb * z) / sb * cmath.exp(-(beta / 6.0) * z * z)
    return cmath.sin(sb * z) / sb * cmath.exp((beta / 6.0) * z * z)


def invert_wp(v, p, tol=1e-11):
    """alpha in the fundamental period parallelogram with wp(alpha) = v.

    Exact root values return the matching half-period; v in [e3, e2] uses
    1-D Newton along omega' + [0, omega] (wp is real there); any other real
    v falls to 2-D Newton seeded on a 32x32 grid, with the converged
    solution of smallest |Im alpha|, then smallest |Re alpha|, returned.
    """
    if p.degenerate_kind is not DegenerateKind.GENERIC:
        raise ValueError("invert_wp needs a generic (non-degenerate) lattice")
    v = float(v)
    scale = max(1.0, abs(v))
    root_tol = 1e-12 * max(1.0, abs(p.e1), abs(p.e3))
    if abs(v - p.e1) < root_tol:
        return complex(p.omega)
    if abs(v - p.e2) < root_tol:
        return p.omega + p.omega_prime
    if abs(v - p.e3) < root_tol:
        return p.omega_prime

    if p.e3 < v < p.e2:
        alpha = _invert_on_segment(v, p)
    else:
        alpha = _invert_newton_2d(v, p)
    if alpha is None or abs(wp(alpha, p) - v) > tol * scale:
        raise ValueError(f"could not invert wp at v={v}")
    return alpha


def _invert_on_segment(v, p):
    # wp(omega' + t) increases from e3 to e2 as t goes 0 -> omega.
    ts = np.linspace(0.0, p.omega, 65)[1:-1]
    vals = np.array([wp(p.omega_prime + t, p).real for t in ts])
    t = float(ts[np.argmin(np.abs(vals - v))])
    lo, hi = 0.0, p.omega
    for _ in range(80):
        pv, pd = wp_with_prime(p.omega_prime + t, p)
        f = pv.real - v
        if f > 0.0:
            hi = min(hi, t)
        else:
            lo = max(lo, t)
        step = f / pd.real
        t_new = t - step
        if not (lo < t_new < hi):
            t_new = 0.5 * (lo + hi)
        if abs(t_new - t) < 1e-16 * p.omega:
            t = t_new
            break
        t = t_new
    return p.omega_prime + t


def _invert_newton_2d(v, p):
    two_w = 2.0 * p.omega
    two_wp = 2.0 * p.omega_prime.imag
    xs = (np.arange(32) + 0.5) / 32.0 * two_w
    ys = (np.arange(32) + 0.5) / 32.0 * two_wp
    seeds = []
    for x in xs:
        for y in ys:
            z = complex(x, y)
            try:
                seeds.append((abs(wp(z, p) - v), z))
            except PoleProximityError:
                continue
    seeds.sort(key=lambda t: t[0])
    sols = []
    for _, z in seeds[:48]:
        a = z
        ok = False
        for _ in range(60):
            try:
                pv, pd = wp_with_prime(a, p)
            except PoleProximityError:
                break
            f = pv - v
            if abs(f) < 1e-13 * max(1.0, abs(v)):
                ok = True
                break
            if pd == 0:
                break
            a = a - f / pd
        if not ok:
            continue
        x = a.real - math.floor(a.real / two_w) * two_w
        y = a.imag - math.floor(a.imag / two_wp) * two_wp
        a = complex(x, y)
        if all(abs(a - s) > 1e-7 for s in sols):
            sols.append(a)
    if not sols:
        return None
    sols.sort(key=lambda s: (round(abs(s.imag), 9), round(abs(s.real), 9)))
    return sols[0]


def inv_wp_period_integral(p, v):
    """Closed form of the full-period integral of 1/(wp(y - omega') - v).

    Equals [4 omega zeta(alpha) - 4 alpha eta] / wp'(alpha) with
    wp(alpha) = v, alpha from invert_wp; requires v distinct from the
    lattice roots.  The value is real for real v outside [e3, e2] gaps.
    """
    alpha = invert_wp(v, p)
    num = 4.0 * p.omega * zeta_fn(alpha, p) - 4.0 * alpha * p.eta
    return num / wp_prime(alpha, p)
