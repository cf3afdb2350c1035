# cython: language_level=3
"""Compiled scalar kernels for the Weierstrass functions.

Twin of mlsurf._wp_py (same signatures, same reduce/descend/duplicate
algorithm); see that module for the algorithm notes.
"""

import cmath

from libc.math cimport ceil, isfinite, log2, round as c_round

DESCENT_FRACTION = 0.35
N_COEF = 24

cdef double _DESC_FRAC = 0.35


def series_coefficients(double g2, double g3, int n=24):
    c = [0.0] * (n + 2)
    c[2] = g2 / 20.0
    c[3] = g3 / 28.0
    cdef int k, m
    cdef double acc
    for k in range(4, n + 2):
        acc = 0.0
        for m in range(2, k - 1):
            acc += c[m] * c[k - m]
        c[k] = 3.0 * acc / ((2 * k + 1) * (k - 3))
    return c[2:]


cdef inline double complex _reduce_c(double complex z, double two_w, double two_wp,
                                     long* mm, long* nn):
    cdef double x = z.real
    cdef double y = z.imag
    cdef long m = 0, n = 0
    if isfinite(two_w) and two_w > 0.0:
        m = <long>c_round(x / two_w)
        x -= m * two_w
    if isfinite(two_wp) and two_wp > 0.0:
        n = <long>c_round(y / two_wp)
        y -= n * two_wp
    mm[0] = m
    nn[0] = n
    return x + 1j * y


cdef inline int _descents_c(double az, double two_w, double two_wp):
    cdef double rmin = two_w if two_w < two_wp else two_wp
    cdef double rho = _DESC_FRAC * rmin
    if az <= rho:
        return 0
    return <int>ceil(log2(az / rho))


cdef inline void _series_p_pp_c(double complex t, double[::1] c,
                                double complex* pout, double complex* ppout):
    cdef double complex t2 = t * t
    cdef double complex p = 0
    cdef double complex pp = 0
    cdef int k
    cdef double ck
    cdef int kmax = c.shape[0] + 1
    for k in range(kmax, 1, -1):
        ck = c[k - 2]
        p = p * t2 + ck
        pp = pp * t2 + (2 * k - 2) * ck
    pout[0] = p * t2 + 1.0 / t2
    ppout[0] = pp * t - 2.0 / (t2 * t)


cdef inline void _dup_p_pp_c(double complex* p, double complex* pp, double g2):
    cdef double complex ppp = 6.0 * p[0] * p[0] - 0.5 * g2
    cdef double complex half = ppp / (2.0 * pp[0])
    cdef double complex p2 = half * half - 2.0 * p[0]
    cdef double complex pp2 = ppp * (12.0 * p[0] * pp[0] * pp[0] - ppp * ppp) / (4.0 * pp[0] * pp[0] * pp[0]) - pp[0]
    p[0] = p2
    pp[0] = pp2


def wp_pair(double complex z, double g2, double[::1] c, double two_w, double two_wp):
    cdef long m, n
    cdef double complex zr = _reduce_c(z, two_w, two_wp, &m, &n)
    cdef int nd = _descents_c(abs(zr), two_w, two_wp)
    cdef double complex t = zr / (2.0 ** nd)
    cdef double complex p, pp
    _series_p_pp_c(t, c, &p, &pp)
    cdef int i
    for i in range(nd):
        _dup_p_pp_c(&p, &pp, g2)
    return p, pp


def zeta(double complex z, double g2, double[::1] c, double two_w, double two_wp,
         double eta, double etap_im):
    cdef long m, n
    cdef double complex zr = _reduce_c(z, two_w, two_wp, &m, &n)
    cdef double complex shift = 2.0 * m * eta + 2.0j * n * etap_im
    cdef int nd = _descents_c(abs(zr), two_w, two_wp)
    cdef double complex t = zr / (2.0 ** nd)
    cdef double complex t2 = t * t
    cdef double complex zt = 0
    cdef int k
    cdef int kmax = c.shape[0] + 1
    for k in range(kmax, 1, -1):
        zt = zt * t2 + c[k - 2] / (2 * k - 1)
    zt = -zt * t2 * t + 1.0 / t
    cdef double complex p, pp, ppp
    _series_p_pp_c(t, c, &p, &pp)
    cdef int i
    for i in range(nd):
        ppp = 6.0 * p * p - 0.5 * g2
        zt = 2.0 * zt + ppp / (2.0 * pp)
        _dup_p_pp_c(&p, &pp, g2)
    return zt + shift


def sigma(double complex z, double g2, double[::1] c, double two_w, double two_wp,
          double eta, double etap_im):
    cdef long m, n
    cdef double complex zr = _reduce_c(z, two_w, two_wp, &m, &n)
    cdef int nd = _descents_c(abs(zr), two_w, two_wp)
    cdef double complex t = zr / (2.0 ** nd)
    cdef double complex t2 = t * t
    cdef double complex ls = 0
    cdef int k
    cdef int kmax = c.shape[0] + 1
    for k in range(kmax, 1, -1):
        ls = ls * t2 + c[k - 2] / ((2 * k) * (2 * k - 1))
    cdef double complex s = t * cmath.exp(-ls * t2 * t2)
    cdef double complex p, pp
    _series_p_pp_c(t, c, &p, &pp)
    cdef int i
    for i in range(nd):
        s = -(s * s * s * s) * pp
        _dup_p_pp_c(&p, &pp, g2)
    if m == 0 and n == 0:
        return s
    cdef double complex omega = 0.5 * two_w
    cdef double complex omega_p = 0.5j * two_wp
    cdef double complex etap = 1.0j * etap_im
    cdef double sign = -1.0 if (m + n + m * n) % 2 else 1.0
    return sign * s * cmath.exp((zr + m * omega + n * omega_p) * (2.0 * m * eta + 2.0 * n * etap))
