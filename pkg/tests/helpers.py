"""Shared test helpers: catalog listings and extended-precision oracles."""

import mpmath

import oufields as of


def separable_catalog():
    """Name, kernel pairs for every product-type catalog member."""
    return [
        ("wiener", of.wiener_field()),
        ("ou", of.ou_field(of.OUParams(0.5, 0.5, 1.0))),
        ("tied-down", of.tied_down_bridge_field()),
        ("scaled(1,1,0.3,2)", of.scaled_bridge_field(1.0, 1.0, 0.3, 2.0)),
        ("scaled(2,3,0.5,1)", of.scaled_bridge_field(2.0, 3.0, 0.5, 1.0)),
        ("kiefer", of.kiefer_field()),
        ("fg-uniform", of.fg_bridge_field(of.uniform_cdf(), of.uniform_cdf())),
        ("fg-exponential", of.fg_bridge_field(of.exponential_cdf(1.0), of.exponential_cdf(1.0))),
    ]


def interior_grid_for(kernel, n_s, n_t):
    """A strictly interior grid inside the kernel's declared domain."""
    import numpy as np

    def axis_points(domain, n):
        hi = domain.hi
        if not np.isfinite(hi):
            hi = 2.0
        lo = max(domain.lo, 0.0)
        return lo + (np.arange(1, n + 1) / (n + 1)) * (hi - lo)

    return of.GridSpec(
        axis_points(kernel.s_domain, n_s), axis_points(kernel.t_domain, n_t)
    )


def scaled_axis_oracle(S, alpha, s1, s2, dps=50):
    """Scaled-bridge axis covariance from the closed form at `dps` digits.

    The float arguments convert to mpf exactly, so this prices the same
    parameter values the implementation sees.
    """
    with mpmath.workdps(dps):
        S_, a_ = mpmath.mpf(S), mpmath.mpf(alpha)
        x, y = mpmath.mpf(s1), mpmath.mpf(s2)
        m = min(x, y)
        if m == S_ or max(x, y) == S_:
            return 0.0
        if a_ == mpmath.mpf(0.5):
            val = mpmath.sqrt((S_ - x) * (S_ - y)) * mpmath.log(S_ / (S_ - m))
        else:
            val = (
                (S_ - x) ** a_
                * (S_ - y) ** a_
                / (1 - 2 * a_)
                * (S_ ** (1 - 2 * a_) - (S_ - m) ** (1 - 2 * a_))
            )
        return float(val)


def scaled_f_oracle(S, alpha, s, dps=50):
    with mpmath.workdps(dps):
        S_, a_, x = mpmath.mpf(S), mpmath.mpf(alpha), mpmath.mpf(s)
        if a_ == mpmath.mpf(0.5):
            return float(S_ * mpmath.log(S_ / (S_ - x)))
        return float(S_ ** (2 * a_) / (1 - 2 * a_) * (S_ ** (1 - 2 * a_) - (S_ - x) ** (1 - 2 * a_)))


def scaled_g_oracle(S, alpha, s, dps=50):
    with mpmath.workdps(dps):
        S_, a_, x = mpmath.mpf(S), mpmath.mpf(alpha), mpmath.mpf(s)
        if a_ == mpmath.mpf(0.5):
            return float((S_ - x) * mpmath.log(S_ / (S_ - x)))
        return float((S_ - x) ** (2 * a_) / (1 - 2 * a_) * (S_ ** (1 - 2 * a_) - (S_ - x) ** (1 - 2 * a_)))
