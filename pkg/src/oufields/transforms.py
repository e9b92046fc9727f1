"""Space-domain transform machinery.

Each catalog field U is rebuilt from a stationary Ornstein-Uhlenbeck field X
with parameters (1/2, 1/2, 1) as

    U(s, t) = sqrt(g(s) * g~(t)) * X(ln f(s), ln f~(t))

on an open rectangle, pinned to zero on the closed border.  An
:class:`AxisTransform` carries one (g, f) pair; an :class:`OURepresentation`
composes two of them.  ``identity_check`` verifies numerically that the
induced covariance reproduces the target kernel, and
``separability_falsifier`` quantifies why no such representation exists for
the bivariate bridge.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import core
from .grids import GridSpec
from .kernels import CdfSpec, DomainError, Kernel2D, OUParams, covariance_matrix
from .reporting import VerificationReport


@dataclass(frozen=True)
class AxisTransform:
    """A (g, f) pair on the open interval (0, length).

    g is the pointwise variance scale (positive inside, 0 in the limit at
    both ends for bridge-type transforms); f is the strictly increasing
    domain map with f -> 0 at the left end.  ``limit_at_length`` is the
    closed form of lim f at the right end where known (may be inf).  The
    represented field takes the exact value ``boundary_value`` (always 0) at
    the closed endpoints.
    """

    length: float
    g: object
    f: object
    limit_at_length: float
    name: str
    boundary_value: float = 0.0

    def contains_interior(self, x):
        return 0.0 < x < self.length

    def require_interior(self, x, label="argument"):
        if not self.contains_interior(x):
            raise DomainError(
                f"{self.name}: {label} {x!r} must lie strictly inside (0, {self.length:g})"
            )


@dataclass(frozen=True)
class OURepresentation:
    """Two axis transforms plus the OU parameters they modulate.

    All catalog representations use ou = (1/2, 1/2, 1); the induced
    covariance accepts general parameters for completeness.
    """

    s_transform: AxisTransform
    t_transform: AxisTransform
    name: str = "representation"
    ou: OUParams = field(default_factory=lambda: OUParams(0.5, 0.5, 1.0))


def _validate_axis_transform(tr, n_probe=64):
    """Cheap construction-time sanity checks of the transform invariants.

    Probes beyond which f saturates to +inf in double precision (possible on
    infinite domains once the underlying CDF rounds to 1) are dropped; the
    checks run on the usable probe prefix.
    """
    if math.isinf(tr.length):
        u = (np.arange(1, n_probe + 1) - 0.5) / n_probe
        probes = u / (1.0 - u)
    else:
        probes = (np.arange(1, n_probe + 1) - 0.5) / n_probe * tr.length
    f_vals = [tr.f(float(x)) for x in probes]
    usable = len(f_vals)
    while usable and not math.isfinite(f_vals[usable - 1]):
        usable -= 1
    if usable < 8:
        raise ValueError(f"{tr.name}: domain map f is unusable on the probe grid")
    probes, f_vals = probes[:usable], f_vals[:usable]
    for a, b in zip(f_vals, f_vals[1:]):
        if not b > a:
            raise ValueError(f"{tr.name}: domain map f is not strictly increasing")
    near_zero = 1e-9 * min(tr.length, 1.0)
    if not abs(tr.f(near_zero)) < 1e-6:
        raise ValueError(f"{tr.name}: domain map f does not vanish at the left endpoint")
    for x, fv in zip(probes, f_vals):
        if not fv > 0:
            raise ValueError(f"{tr.name}: f({x!r}) = {fv!r} is not positive")
        gv = tr.g(float(x))
        if not gv > 0:
            raise ValueError(f"{tr.name}: g({x!r}) = {gv!r} is not positive inside the domain")
    return tr


def _bridge_axis_transform():
    return _validate_axis_transform(
        AxisTransform(
            length=1.0,
            g=lambda s: s * (1.0 - s),
            f=lambda s: s / (1.0 - s),
            limit_at_length=math.inf,
            name="bridge-axis",
        )
    )


def transform_tied_down():
    """Representation of the tied-down Wiener bridge: g = s(1-s), f = s/(1-s) on both axes."""
    return OURepresentation(
        s_transform=_bridge_axis_transform(),
        t_transform=_bridge_axis_transform(),
        name="tied-down",
    )


def transform_scaled(S, alpha):
    """Axis transform of a scaled Wiener bridge with horizon S and exponent alpha.

    For alpha != 1/2 both g and f involve (S^(1-2a) - (S-s)^(1-2a))/(1-2a),
    evaluated in the cancellation-free form shared with the axis kernel; the
    alpha == 1/2 branch is logarithmic.  lim f at S is S/(1-2a) for a < 1/2
    and +inf otherwise.
    """
    if not S > 0:
        raise DomainError("horizon S must be positive")
    if not alpha > 0:
        raise DomainError("exponent alpha must be positive")
    S, alpha = float(S), float(alpha)
    limit = S / (1.0 - 2.0 * alpha) if alpha < 0.5 else math.inf
    return _validate_axis_transform(
        AxisTransform(
            length=S,
            g=lambda s: core.scaled_g(S, alpha, s),
            f=lambda s: core.scaled_f(S, alpha, s),
            limit_at_length=limit,
            name=f"scaled-axis(S={S:g}, alpha={alpha:g})",
        )
    )


def transform_kiefer():
    """Representation of the Kiefer process: bridge transform in s, identity in t."""
    identity = _validate_axis_transform(
        AxisTransform(
            length=math.inf,
            g=lambda t: t,
            f=lambda t: t,
            limit_at_length=math.inf,
            name="identity-axis",
        )
    )
    return OURepresentation(
        s_transform=_bridge_axis_transform(),
        t_transform=identity,
        name="kiefer",
    )


def _cdf_axis_transform(cdf: CdfSpec):
    def g(s):
        u = cdf(s)
        return u * (1.0 - u)

    def f(s):
        u = cdf(s)
        denom = 1.0 - u
        # saturation: F rounds to 1 in double precision, f is off scale
        if denom <= 0.0:
            return math.inf
        return u / denom

    return _validate_axis_transform(
        AxisTransform(
            length=cdf.horizon,
            g=g,
            f=f,
            limit_at_length=math.inf,
            name=f"cdf-axis({cdf.name})",
        )
    )


def transform_fg(F: CdfSpec, G: CdfSpec):
    """Representation of the (F,G)-Wiener bridge: g = F(1-F), f = F/(1-F) per axis."""
    return OURepresentation(
        s_transform=_cdf_axis_transform(F),
        t_transform=_cdf_axis_transform(G),
        name=f"fg({F.name}, {G.name})",
    )


def scaled_representation(S, T, alpha, beta):
    """Representation of the tied-down scaled bridge on [0,S] x [0,T]."""
    return OURepresentation(
        s_transform=transform_scaled(S, alpha),
        t_transform=transform_scaled(T, beta),
        name=f"scaled(S={float(S):g}, T={float(T):g}, alpha={float(alpha):g}, beta={float(beta):g})",
    )


def induced_covariance(rep: OURepresentation, s1, t1, s2, t2):
    """Covariance induced by the representation at two strictly interior points.

    sqrt(g(s1)g(s2) * g~(t1)g~(t2)) * exp(-a|ln f(s2) - ln f(s1)|
    - b|ln f~(t2) - ln f~(t1)|), times the OU stationary variance (1 for all
    catalog representations).
    """
    s1, t1, s2, t2 = (float(v) for v in (s1, t1, s2, t2))
    st, tt = rep.s_transform, rep.t_transform
    for v in (s1, s2):
        st.require_interior(v, "s argument")
    for v in (t1, t2):
        tt.require_interior(v, "t argument")
    gs = st.g(s1) * st.g(s2)
    gt = tt.g(t1) * tt.g(t2)
    dls = abs(math.log(st.f(s2)) - math.log(st.f(s1)))
    dlt = abs(math.log(tt.f(t2)) - math.log(tt.f(t1)))
    arg = -(rep.ou.alpha * dls) - rep.ou.beta * dlt
    return rep.ou.stationary_variance * (math.sqrt(gs * gt) * math.exp(arg))


def reduced_wiener_form(rep: OURepresentation, s, t):
    """(scale, u, v) with U(s, t) = scale * W(u, v) pathwise.

    scale = sqrt(g(s)g~(t) / (f(s)f~(t))), u = f(s), v = f~(t); defined only
    strictly inside the open rectangle.
    """
    s, t = float(s), float(t)
    rep.s_transform.require_interior(s, "s argument")
    rep.t_transform.require_interior(t, "t argument")
    u = rep.s_transform.f(s)
    v = rep.t_transform.f(t)
    scale = math.sqrt((rep.s_transform.g(s) * rep.t_transform.g(t)) / (u * v))
    return scale, u, v


def _induced_matrix(rep, grid):
    """Induced covariance on all grid point pairs, vectorized.

    Matches the scalar `induced_covariance` up to floating-point noise well
    below the identity tolerances.
    """
    st, tt = rep.s_transform, rep.t_transform
    gs = np.array([st.g(float(x)) for x in grid.s_points])
    gt = np.array([tt.g(float(x)) for x in grid.t_points])
    lfs = np.array([math.log(st.f(float(x))) for x in grid.s_points])
    lft = np.array([math.log(tt.f(float(x))) for x in grid.t_points])
    gp = np.multiply.outer(gs, gt).ravel()
    ls = np.repeat(lfs, grid.n_t)
    lt = np.tile(lft, grid.n_s)
    expo = -(rep.ou.alpha * np.abs(ls[:, None] - ls[None, :])) - rep.ou.beta * np.abs(
        lt[:, None] - lt[None, :]
    )
    return rep.ou.stationary_variance * (np.sqrt(gp[:, None] * gp[None, :]) * np.exp(expo))


def identity_check(rep: OURepresentation, target: Kernel2D, grid: GridSpec, tol=1e-10):
    """Max-abs difference between induced and target covariance on all grid pairs.

    Domain violations do not raise; they come back as a failed report with
    the offending message in the metadata.
    """
    name = f"identity/{rep.name}"
    try:
        for x in grid.s_points:
            rep.s_transform.require_interior(float(x), "grid s point")
        for x in grid.t_points:
            rep.t_transform.require_interior(float(x), "grid t point")
        induced = _induced_matrix(rep, grid)
        target_m = covariance_matrix(target, grid)
    except (DomainError, ValueError) as exc:
        return VerificationReport(
            check_name=name,
            passed=False,
            max_residual=math.inf,
            n_entries_tested=0,
            n_entries_outside_band=0,
            tolerance=tol,
            metadata={"error": str(exc), "target": target.name},
        )
    diff = np.abs(induced - target_m)
    q = int(np.argmax(diff))
    p1, p2 = divmod(q, grid.size)
    max_resid = float(diff.flat[q])
    finite = bool(np.all(np.isfinite(diff)))
    return VerificationReport(
        check_name=name,
        passed=finite and max_resid <= tol,
        max_residual=max_resid,
        residual_location={"point1": grid.point(p1), "point2": grid.point(p2)},
        n_entries_tested=diff.size,
        n_entries_outside_band=int(np.count_nonzero(diff > tol)),
        tolerance=tol,
        metadata={"target": target.name, "grid": f"{grid.n_s}x{grid.n_t}"},
    )


RANK_ONE_REL_TOL = 1e-8


def rank_one_defect(matrix):
    """(second singular value, verdict) rank-1 test of a residual matrix."""
    m = np.asarray(matrix, dtype=np.float64)
    sv = np.linalg.svd(m, compute_uv=False)
    largest = float(sv[0])
    second = float(sv[1]) if sv.size > 1 else 0.0
    verdict = "not separable" if second > RANK_ONE_REL_TOL * largest else "separable"
    return second, verdict, largest


def separability_falsifier(grid_s, grid_t):
    """Rank test of the residual factor 1 - s*t that a product-form
    representation of the bivariate bridge would force to be rank one.

    Returns (second singular value, verdict, largest singular value); the
    verdict is "not separable" when the second singular value exceeds
    1e-8 times the largest.
    """
    out = []
    for label, pts in (("s", grid_s), ("t", grid_t)):
        arr = np.asarray(pts, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError(f"falsifier {label} grid needs at least two points")
        if not np.all(np.diff(arr) > 0):
            raise ValueError(f"falsifier {label} grid must be strictly increasing (no repeats)")
        if arr[0] < 0.5 or arr[-1] > 1.0:
            raise ValueError(f"falsifier {label} grid points must lie in [0.5, 1]")
        out.append(arr)
    s, t = out
    residual = 1.0 - np.outer(s, t)
    return rank_one_defect(residual)


def bivariate_slice_candidates(s2):
    """The two G candidates a product form would force on the bivariate bridge.

    Slicing the residual 1 - s2*t2 at t2 = 1/2 and t2 = 1 (with the other
    coordinates fixed at 1/2) yields G proportional to 1 - s2/2 and to
    1 - s2 respectively; both candidates are normalized to 1 at s2 = 1/2.
    They cannot agree, which is the pointwise contradiction behind the rank
    test.
    """
    if not 0.5 <= s2 <= 1.0:
        raise ValueError("slice candidates are defined for s2 in [0.5, 1]")
    from_half = (1.0 - s2 / 2.0) / (1.0 - 0.25)
    from_one = (1.0 - s2) / 0.5
    return from_half, from_one
