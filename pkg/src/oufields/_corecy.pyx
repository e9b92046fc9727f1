# cython: boundscheck=False, wraparound=False, cdivision=True
"""Scalar evaluation core, compiled edition.

Twin of ``oufields._corepy``; the two modules expose the same functions with
the same floating-point operation order so results agree bit for bit.  See
the pure-Python module for the documented conventions.
"""

from libc.math cimport exp, expm1, fabs, log, pow, sqrt

import numpy as np

BACKEND = "compiled"

AX_WIENER = 0
AX_BRIDGE = 1
AX_SCALED = 2
AX_OU = 3

DEF _AX_WIENER = 0
DEF _AX_BRIDGE = 1
DEF _AX_SCALED = 2
DEF _AX_OU = 3


cdef inline double _powdiff(double x, double y, double eps) noexcept nogil:
    cdef double ratio_log = log(x / y)
    cdef double u = eps * ratio_log
    if fabs(u) < 1e-8:
        return pow(y, eps) * ratio_log * (1.0 + 0.5 * u + u * u / 6.0)
    return pow(y, eps) * expm1(u) / eps


cdef inline double _axis_wiener(double x1, double x2) noexcept nogil:
    return x1 if x1 < x2 else x2


cdef inline double _axis_bridge(double x1, double x2) noexcept nogil:
    cdef double tmp
    if x2 < x1:
        tmp = x1
        x1 = x2
        x2 = tmp
    return x1 - x1 * x2


cdef inline double _axis_scaled(double S, double alpha, double x1, double x2) noexcept nogil:
    cdef double tmp
    if x2 < x1:
        tmp = x1
        x1 = x2
        x2 = tmp
    if x2 == S:
        return 0.0
    if alpha == 0.5:
        return sqrt((S - x1) * (S - x2)) * log(S / (S - x1))
    return (
        pow(S - x1, alpha)
        * pow(S - x2, alpha)
        * _powdiff(S, S - x1, 1.0 - 2.0 * alpha)
    )


cdef inline double _axis_ou(double rate, double x1, double x2) noexcept nogil:
    return exp(-rate * fabs(x1 - x2))


cdef inline double _axis(int code, double p0, double p1, double x1, double x2) noexcept nogil:
    if code == _AX_WIENER:
        return _axis_wiener(x1, x2)
    elif code == _AX_BRIDGE:
        return _axis_bridge(x1, x2)
    elif code == _AX_SCALED:
        return _axis_scaled(p0, p1, x1, x2)
    else:
        return _axis_ou(p0, x1, x2)


cdef inline double _eval_bivariate(double s1, double t1, double s2, double t2) noexcept nogil:
    cdef double tmp
    if s2 < s1:
        tmp = s1
        s1 = s2
        s2 = tmp
    if t2 < t1:
        tmp = t1
        t1 = t2
        t2 = tmp
    return s1 * t1 - ((s1 * s2) * t1) * t2


def powdiff(double x, double y, double eps):
    """(x**eps - y**eps) / eps for x, y > 0, stable as eps -> 0."""
    return _powdiff(x, y, eps)


def axis_wiener(double x1, double x2):
    """min(x1, x2) on [0, inf)."""
    return _axis_wiener(x1, x2)


def axis_bridge(double x1, double x2):
    """min(x1, x2) - x1*x2 on [0, 1]."""
    return _axis_bridge(x1, x2)


def axis_scaled(double S, double alpha, double x1, double x2):
    """Scaled-bridge axis kernel; exactly 0.0 on the horizon."""
    return _axis_scaled(S, alpha, x1, x2)


def axis_ou(double rate, double x1, double x2):
    """exp(-rate*|x1 - x2|) on the real line."""
    return _axis_ou(rate, x1, x2)


def scaled_f(double S, double alpha, double s):
    """Domain map of the scaled-bridge transform; caller keeps 0 <= s < S."""
    if alpha == 0.5:
        return S * log(S / (S - s))
    return pow(S, 2.0 * alpha) * _powdiff(S, S - s, 1.0 - 2.0 * alpha)


def scaled_g(double S, double alpha, double s):
    """Variance scale of the scaled-bridge transform; caller keeps 0 <= s < S."""
    if alpha == 0.5:
        return (S - s) * log(S / (S - s))
    return pow(S - s, 2.0 * alpha) * _powdiff(S, S - s, 1.0 - 2.0 * alpha)


def eval_ou_field(double alpha, double beta, double sigma,
                  double s1, double t1, double s2, double t2):
    """Stationary Ornstein-Uhlenbeck field covariance on the plane."""
    cdef double scale = sigma * sigma / (4.0 * alpha * beta)
    cdef double arg = -(alpha * fabs(s1 - s2)) - beta * fabs(t1 - t2)
    return scale * exp(arg)


def eval_bivariate(double s1, double t1, double s2, double t2):
    """min*min - product covariance on the unit square (not of product type)."""
    return _eval_bivariate(s1, t1, s2, t2)


def axis_matrix(int code, double p0, double p1, points):
    """Symmetric axis Gram matrix; each pair evaluated once and mirrored."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[::1] x = pts
    cdef Py_ssize_t n = x.shape[0]
    out = np.empty((n, n))
    cdef double[:, ::1] m = out
    cdef Py_ssize_t i, k
    cdef double v
    with nogil:
        for i in range(n):
            for k in range(i, n):
                v = _axis(code, p0, p1, x[i], x[k])
                m[i, k] = v
                m[k, i] = v
    return out


def dense_separable(int s_code, double sp0, double sp1,
                    int t_code, double tp0, double tp1,
                    double scale, s_points, t_points):
    """Full grid covariance of a separable kernel, evaluated entry by entry.

    Row-major flat index p = i*nt + j over the (s_i, t_j) grid; entry (p, q)
    is (scale * k_s(s_i, s_k)) * k_t(t_j, t_l).
    """
    s_arr = np.ascontiguousarray(s_points, dtype=np.float64)
    t_arr = np.ascontiguousarray(t_points, dtype=np.float64)
    cdef const double[::1] s = s_arr
    cdef const double[::1] t = t_arr
    cdef Py_ssize_t ns = s.shape[0], nt = t.shape[0]
    cdef Py_ssize_t n = ns * nt
    out = np.empty((n, n))
    cdef double[:, ::1] m = out
    cdef Py_ssize_t p, q, i, j, k, l
    cdef double si, tj, v
    with nogil:
        for p in range(n):
            i = p // nt
            j = p - i * nt
            si = s[i]
            tj = t[j]
            for q in range(p, n):
                k = q // nt
                l = q - k * nt
                v = (scale * _axis(s_code, sp0, sp1, si, s[k])) * _axis(t_code, tp0, tp1, tj, t[l])
                m[p, q] = v
                m[q, p] = v
    return out


def dense_bivariate(s_points, t_points):
    """Full grid covariance of the bivariate bridge, entry by entry."""
    s_arr = np.ascontiguousarray(s_points, dtype=np.float64)
    t_arr = np.ascontiguousarray(t_points, dtype=np.float64)
    cdef const double[::1] s = s_arr
    cdef const double[::1] t = t_arr
    cdef Py_ssize_t ns = s.shape[0], nt = t.shape[0]
    cdef Py_ssize_t n = ns * nt
    out = np.empty((n, n))
    cdef double[:, ::1] m = out
    cdef Py_ssize_t p, q, i, j, k, l
    cdef double si, tj, v
    with nogil:
        for p in range(n):
            i = p // nt
            j = p - i * nt
            si = s[i]
            tj = t[j]
            for q in range(p, n):
                k = q // nt
                l = q - k * nt
                v = _eval_bivariate(si, tj, s[k], t[l])
                m[p, q] = v
                m[q, p] = v
    return out
