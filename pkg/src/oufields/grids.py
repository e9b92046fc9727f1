"""Rectangular evaluation grids."""

import numpy as np


class GridSpec:
    """Product grid {s_i} x {t_j}, both coordinate lists strictly increasing.

    Flat indexing of grid points is row-major in (i, j): p = i*n_t + j.
    ``include_boundary`` records that the grid intentionally carries points on
    a field's zero set; samplers emit exact zeros there either way (a point
    with zero marginal variance is almost surely zero).
    """

    def __init__(self, s_points, t_points, include_boundary=False):
        s = np.ascontiguousarray(s_points, dtype=np.float64)
        t = np.ascontiguousarray(t_points, dtype=np.float64)
        for label, arr in (("s", s), ("t", t)):
            if arr.ndim != 1 or arr.size == 0:
                raise ValueError(f"{label}_points must be a non-empty 1-D sequence")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{label}_points must be finite")
            if arr.size > 1 and not np.all(np.diff(arr) > 0):
                raise ValueError(f"{label}_points must be strictly increasing")
        s.setflags(write=False)
        t.setflags(write=False)
        self.s_points = s
        self.t_points = t
        self.include_boundary = bool(include_boundary)

    @property
    def n_s(self):
        return self.s_points.size

    @property
    def n_t(self):
        return self.t_points.size

    @property
    def size(self):
        return self.n_s * self.n_t

    def flat_index(self, i, j):
        return i * self.n_t + j

    def point(self, p):
        """(s, t) coordinates of flat grid index p."""
        i, j = divmod(int(p), self.n_t)
        return float(self.s_points[i]), float(self.t_points[j])

    def same_as(self, other):
        return (
            isinstance(other, GridSpec)
            and np.array_equal(self.s_points, other.s_points)
            and np.array_equal(self.t_points, other.t_points)
        )

    def shifted(self, ds, dt):
        return GridSpec(self.s_points + ds, self.t_points + dt, self.include_boundary)

    def __repr__(self):
        return f"GridSpec(n_s={self.n_s}, n_t={self.n_t}, include_boundary={self.include_boundary})"


def interior_linspace(n, length, margin=1e-3):
    """n evenly spaced points on [margin*length, (1-margin)*length]."""
    if n < 1:
        raise ValueError("need at least one grid point")
    if not 0 < margin < 0.5:
        raise ValueError("margin must lie in (0, 0.5)")
    lo = margin * length
    hi = (1.0 - margin) * length
    if n == 1:
        return np.array([0.5 * (lo + hi)])
    return np.linspace(lo, hi, n)


def fraction_grid(n, length=1.0):
    """n interior points k/(n+1)*length, k = 1..n; safely away from borders."""
    return np.arange(1, n + 1) / (n + 1) * length
