"""Pure-Python scalar kernels for the Weierstrass functions.

``mlsurf._wp_cy`` is the compiled twin with identical signatures and
semantics; ``mlsurf.backend`` picks whichever is importable.

Strategy for each kernel: reduce the argument into the centered cell of the
rectangular period lattice, halve it until it sits well inside the
convergence disk of the series about 0, evaluate the series, then walk back
out with the duplication formulas.  Callers are responsible for rejecting
arguments too close to a lattice point; the kernels assume valid input.
"""

import cmath
import math

# Fraction of the shortest lattice vector at which the series is evaluated.
DESCENT_FRACTION = 0.35
# Number of Laurent coefficients c_k (k = 2 .. N_COEF+1) carried.
N_COEF = 24


def series_coefficients(g2, g3, n=N_COEF):
    """Coefficients c_k of wp(z) = z^-2 + sum c_k z^(2k-2), k = 2..n+1."""
    c = [0.0] * (n + 2)  # c[k] valid for k = 2 .. n+1
    c[2] = g2 / 20.0
    c[3] = g3 / 28.0
    for k in range(4, n + 2):
        acc = 0.0
        for m in range(2, k - 1):
            acc += c[m] * c[k - m]
        c[k] = 3.0 * acc / ((2 * k + 1) * (k - 3))
    return c[2:]


def _reduce(z, two_w, two_wp):
    """Translate z by lattice vectors into the centered cell; return (z, m, n)."""
    m = 0
    n = 0
    x = z.real
    y = z.imag
    if math.isfinite(two_w) and two_w > 0.0:
        m = round(x / two_w)
        x -= m * two_w
    if math.isfinite(two_wp) and two_wp > 0.0:
        n = round(y / two_wp)
        y -= n * two_wp
    return complex(x, y), m, n


def _descents(az, two_w, two_wp):
    rmin = two_w if two_w < two_wp else two_wp
    rho = DESCENT_FRACTION * rmin
    if az <= rho:
        return 0
    return int(math.ceil(math.log2(az / rho)))


def _series_p_pp(t, c):
    t2 = t * t
    p = 0.0j
    pp = 0.0j
    # Horner from the high end; exponents 2k-2 and 2k-3, k descending.
    for k in range(len(c) + 1, 1, -1):
        ck = c[k - 2]
        p = p * t2 + ck
        pp = pp * t2 + (2 * k - 2) * ck
    p = p * t2 + 1.0 / t2
    pp = pp * t - 2.0 / (t2 * t)
    return p, pp


def _dup_p_pp(p, pp, g2):
    ppp = 6.0 * p * p - 0.5 * g2
    half = ppp / (2.0 * pp)
    p2 = half * half - 2.0 * p
    pp2 = ppp * (12.0 * p * pp * pp - ppp * ppp) / (4.0 * pp * pp * pp) - pp
    return p2, pp2


def wp_pair(z, g2, c, two_w, two_wp):
    """(wp(z), wp'(z)) for the lattice with real/imaginary half-periods."""
    zr, _, _ = _reduce(z, two_w, two_wp)
    n = _descents(abs(zr), two_w, two_wp)
    t = zr / (2.0**n)
    p, pp = _series_p_pp(t, c)
    for _ in range(n):
        p, pp = _dup_p_pp(p, pp, g2)
    return p, pp


def zeta(z, g2, c, two_w, two_wp, eta, etap_im):
    """Weierstrass zeta; eta = zeta(omega), etap_im = Im zeta(omega')."""
    zr, m, n = _reduce(z, two_w, two_wp)
    shift = 2.0 * m * eta + 2.0j * n * etap_im
    nd = _descents(abs(zr), two_w, two_wp)
    t = zr / (2.0**nd)
    t2 = t * t
    zt = 0.0j
    for k in range(len(c) + 1, 1, -1):
        zt = zt * t2 + c[k - 2] / (2 * k - 1)
    zt = -zt * t2 * t + 1.0 / t
    p, pp = _series_p_pp(t, c)
    for _ in range(nd):
        ppp = 6.0 * p * p - 0.5 * g2
        zt = 2.0 * zt + ppp / (2.0 * pp)
        p, pp = _dup_p_pp(p, pp, g2)
    return zt + shift


def sigma(z, g2, c, two_w, two_wp, eta, etap_im):
    """Weierstrass sigma, reduced via the quasi-periodicity factors."""
    zr, m, n = _reduce(z, two_w, two_wp)
    nd = _descents(abs(zr), two_w, two_wp)
    t = zr / (2.0**nd)
    t2 = t * t
    ls = 0.0j
    for k in range(len(c) + 1, 1, -1):
        ls = ls * t2 + c[k - 2] / ((2 * k) * (2 * k - 1))
    s = t * cmath.exp(-ls * t2 * t2)
    p, pp = _series_p_pp(t, c)
    for _ in range(nd):
        s = -(s**4) * pp
        p, pp = _dup_p_pp(p, pp, g2)
    if m == 0 and n == 0:
        return s
    omega = 0.5 * two_w
    omega_p = 0.5j * two_wp
    etap = 1.0j * etap_im
    sign = -1.0 if (m + n + m * n) % 2 else 1.0
    return sign * s * cmath.exp((zr + m * omega + n * omega_p) * (2.0 * m * eta + 2.0 * n * etap))
