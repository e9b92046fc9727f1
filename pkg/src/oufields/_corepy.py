"""Scalar evaluation core, pure-Python edition.

This module is the fallback twin of the compiled extension
``oufields._corecy``.  Both backends keep the exact same floating-point
operation order so that results agree bit for bit; any change here must be
mirrored in the ``.pyx`` file.

Conventions baked into every kernel:

* coordinate pairs are sorted before evaluation, which turns symmetry into
  an exact floating-point identity;
* bridge-type kernels return exactly ``0.0`` on their zero sets instead of
  evaluating a limiting formula;
* callers are responsible for domain validation.
"""

import math

import numpy as np

BACKEND = "python"

AX_WIENER = 0
AX_BRIDGE = 1
AX_SCALED = 2
AX_OU = 3


def powdiff(x, y, eps):
    """(x**eps - y**eps) / eps for x, y > 0, stable as eps -> 0.

    Evaluated as y**eps * expm1(eps*log(x/y)) / eps, switching to a
    three-term series once |eps*log(x/y)| < 1e-8 (the series also covers
    eps == 0 without dividing by it).
    """
    ratio_log = math.log(x / y)
    u = eps * ratio_log
    if abs(u) < 1e-8:
        return math.pow(y, eps) * ratio_log * (1.0 + 0.5 * u + u * u / 6.0)
    return math.pow(y, eps) * math.expm1(u) / eps


def axis_wiener(x1, x2):
    """min(x1, x2) on [0, inf)."""
    return x1 if x1 < x2 else x2


def axis_bridge(x1, x2):
    """min(x1, x2) - x1*x2 on [0, 1]."""
    if x2 < x1:
        x1, x2 = x2, x1
    return x1 - x1 * x2


def axis_scaled(S, alpha, x1, x2):
    """Scaled-bridge axis kernel with horizon S and exponent alpha on [0, S].

    Exactly 0.0 whenever either argument sits on the horizon.
    """
    if x2 < x1:
        x1, x2 = x2, x1
    if x2 == S:
        return 0.0
    if alpha == 0.5:
        return math.sqrt((S - x1) * (S - x2)) * math.log(S / (S - x1))
    return (
        math.pow(S - x1, alpha)
        * math.pow(S - x2, alpha)
        * powdiff(S, S - x1, 1.0 - 2.0 * alpha)
    )


def axis_ou(rate, x1, x2):
    """exp(-rate*|x1 - x2|) on the real line."""
    return math.exp(-rate * abs(x1 - x2))


def scaled_f(S, alpha, s):
    """Domain map of the scaled-bridge transform; caller keeps 0 <= s < S."""
    if alpha == 0.5:
        return S * math.log(S / (S - s))
    return math.pow(S, 2.0 * alpha) * powdiff(S, S - s, 1.0 - 2.0 * alpha)


def scaled_g(S, alpha, s):
    """Variance scale of the scaled-bridge transform; caller keeps 0 <= s < S."""
    if alpha == 0.5:
        return (S - s) * math.log(S / (S - s))
    return math.pow(S - s, 2.0 * alpha) * powdiff(S, S - s, 1.0 - 2.0 * alpha)


def eval_ou_field(alpha, beta, sigma, s1, t1, s2, t2):
    """Stationary Ornstein-Uhlenbeck field covariance on the plane."""
    scale = sigma * sigma / (4.0 * alpha * beta)
    arg = -(alpha * abs(s1 - s2)) - beta * abs(t1 - t2)
    return scale * math.exp(arg)


def eval_bivariate(s1, t1, s2, t2):
    """min*min - product covariance on the unit square (not of product type)."""
    if s2 < s1:
        s1, s2 = s2, s1
    if t2 < t1:
        t1, t2 = t2, t1
    return s1 * t1 - ((s1 * s2) * t1) * t2


def _axis_callable(code, p0, p1):
    if code == AX_WIENER:
        return axis_wiener
    if code == AX_BRIDGE:
        return axis_bridge
    if code == AX_SCALED:
        return lambda a, b: axis_scaled(p0, p1, a, b)
    if code == AX_OU:
        return lambda a, b: axis_ou(p0, a, b)
    raise ValueError("unknown axis code %r" % (code,))


def axis_matrix(code, p0, p1, points):
    """Symmetric axis Gram matrix; each pair evaluated once and mirrored."""
    pts = [float(v) for v in points]
    fn = _axis_callable(code, p0, p1)
    n = len(pts)
    out = np.empty((n, n))
    for i in range(n):
        xi = pts[i]
        for k in range(i, n):
            v = fn(xi, pts[k])
            out[i, k] = v
            out[k, i] = v
    return out


def dense_separable(s_code, sp0, sp1, t_code, tp0, tp1, scale, s_points, t_points):
    """Full grid covariance of a separable kernel, evaluated entry by entry.

    Row-major flat index p = i*nt + j over the (s_i, t_j) grid; entry (p, q)
    is (scale * k_s(s_i, s_k)) * k_t(t_j, t_l).
    """
    s = [float(v) for v in s_points]
    t = [float(v) for v in t_points]
    fs = _axis_callable(s_code, sp0, sp1)
    ft = _axis_callable(t_code, tp0, tp1)
    ns, nt = len(s), len(t)
    n = ns * nt
    out = np.empty((n, n))
    for p in range(n):
        i, j = divmod(p, nt)
        si = s[i]
        tj = t[j]
        for q in range(p, n):
            k, l = divmod(q, nt)
            v = (scale * fs(si, s[k])) * ft(tj, t[l])
            out[p, q] = v
            out[q, p] = v
    return out


def dense_bivariate(s_points, t_points):
    """Full grid covariance of the bivariate bridge, entry by entry."""
    s = [float(v) for v in s_points]
    t = [float(v) for v in t_points]
    ns, nt = len(s), len(t)
    n = ns * nt
    out = np.empty((n, n))
    for p in range(n):
        i, j = divmod(p, nt)
        si = s[i]
        tj = t[j]
        for q in range(p, n):
            k, l = divmod(q, nt)
            v = eval_bivariate(si, tj, s[k], t[l])
            out[p, q] = v
            out[q, p] = v
    return out
