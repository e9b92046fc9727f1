"""Covariance kernels of the planar Gaussian field catalog.

Every kernel is exposed two ways: as a plain evaluation function
(``eval_wiener``, ``eval_tied_down_bridge``, ...) and as a :class:`Kernel2D`
object that can assemble full grid covariance matrices.  All catalog kernels
except the bivariate bridge are of product type: a scale times an s-axis
kernel times a t-axis kernel, which is what the fast Kronecker sampling path
exploits.

Evaluation goes through the selected backend (compiled extension or the pure
Python twin); coordinate pairs are canonically ordered there, so symmetry
k(p, q) == k(q, p) holds exactly in floating point, and bridge-type kernels
return exact zeros on their zero sets.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._backend import core
from .grids import GridSpec


class DomainError(ValueError):
    """An argument lies outside the kernel's declared domain."""


def _require(condition, message):
    if not condition:
        raise DomainError(message)


@dataclass(frozen=True)
class OUParams:
    """Parameters of a stationary Ornstein-Uhlenbeck field.

    alpha and beta are the inverse length scales of the two axes, sigma the
    noise amplitude; the stationary variance is sigma^2 / (4*alpha*beta).
    """

    alpha: float
    beta: float
    sigma: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "sigma"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"OUParams.{name} must be a positive real, got {value!r}")

    @property
    def stationary_variance(self):
        return self.sigma * self.sigma / (4.0 * self.alpha * self.beta)


class CdfSpec:
    """A cumulative distribution function handle F with F(0)=0 and sup F = 1.

    ``horizon`` is the infimum of {s : F(s) = 1} (may be inf).  Monotonicity
    and range are spot-checked on 64 deterministic probe pairs at
    construction; they are not proven.  ``density`` is optional metadata.
    """

    _N_PROBES = 64

    def __init__(self, cdf, horizon=math.inf, density=None, name="cdf", validate=True):
        if not (horizon > 0):
            raise DomainError("CdfSpec horizon must be positive")
        self.cdf = cdf
        self.horizon = float(horizon)
        self.density = density
        self.name = name
        if validate:
            self._spot_check()

    def __call__(self, s):
        return float(self.cdf(float(s)))

    def _probe_points(self, rng):
        u = rng.uniform(1e-6, 1.0 - 1e-6, size=self._N_PROBES)
        if math.isinf(self.horizon):
            return u / (1.0 - u)
        return u * self.horizon

    def _spot_check(self):
        if self(0.0) != 0.0:
            raise DomainError(f"CDF {self.name!r} must satisfy F(0) = 0")
        rng = np.random.default_rng(0x0F5EED)
        probes = np.sort(self._probe_points(rng))
        values = [self(p) for p in probes]
        for p, v in zip(probes, values):
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"CDF {self.name!r} leaves [0, 1] at s={p!r}: F={v!r}")
            # the strict F < 1 check is only decidable for finite horizons;
            # infinite-horizon CDFs saturate to 1.0 in double precision
            if math.isfinite(self.horizon) and p < self.horizon and v >= 1.0:
                raise DomainError(
                    f"CDF {self.name!r} reaches 1 at s={p!r} before its horizon {self.horizon!r}"
                )
        for a, b in zip(values, values[1:]):
            if b < a:
                raise DomainError(f"CDF {self.name!r} is not nondecreasing")

    def __repr__(self):
        return f"CdfSpec({self.name!r}, horizon={self.horizon!r})"


def uniform_cdf():
    """Uniform CDF on [0, 1]: F(s) = s, horizon 1."""
    return CdfSpec(lambda s: s, horizon=1.0, density=lambda s: 1.0, name="uniform")


def exponential_cdf(rate=1.0):
    """Exponential CDF F(s) = 1 - exp(-rate*s); infinite horizon."""
    if not rate > 0:
        raise DomainError("exponential rate must be positive")
    return CdfSpec(
        lambda s: -math.expm1(-rate * s),
        horizon=math.inf,
        density=lambda s: rate * math.exp(-rate * s),
        name=f"exponential(rate={rate:g})",
    )


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    hi_open: bool = False

    def contains(self, x):
        if not math.isfinite(x):
            return False
        if x < self.lo:
            return False
        return x < self.hi if self.hi_open else x <= self.hi

    def __str__(self):
        right = ")" if self.hi_open or math.isinf(self.hi) else "]"
        return f"[{self.lo:g}, {self.hi:g}{right}"


# --- axis kernels (the one-dimensional factors of separable kernels) ---


class AxisKernel:
    """A symmetric positive-semidefinite kernel on one coordinate axis."""

    name = "axis"
    domain = Interval(-math.inf, math.inf)

    def evaluate(self, x1, x2):
        x1, x2 = float(x1), float(x2)
        for x in (x1, x2):
            _require(self.domain.contains(x), f"{self.name} axis argument {x!r} outside {self.domain}")
        return self._raw(x1, x2)

    def _raw(self, x1, x2):
        raise NotImplementedError

    def _core_spec(self, points):
        """(code, p0, p1, points) consumed by the backend matrix builders."""
        raise NotImplementedError

    def matrix(self, points):
        pts = np.ascontiguousarray(points, dtype=np.float64)
        for x in pts:
            _require(self.domain.contains(float(x)), f"{self.name} axis point {x!r} outside {self.domain}")
        code, p0, p1, eff = self._core_spec(pts)
        return core.axis_matrix(code, p0, p1, eff)


class WienerAxis(AxisKernel):
    name = "wiener"
    domain = Interval(0.0, math.inf)

    def _raw(self, x1, x2):
        return core.axis_wiener(x1, x2)

    def _core_spec(self, points):
        return core.AX_WIENER, 0.0, 0.0, points


class BridgeAxis(AxisKernel):
    name = "bridge"
    domain = Interval(0.0, 1.0)

    def _raw(self, x1, x2):
        return core.axis_bridge(x1, x2)

    def _core_spec(self, points):
        return core.AX_BRIDGE, 0.0, 0.0, points


class ScaledBridgeAxis(AxisKernel):
    """Scaled-bridge axis kernel with horizon S and drift exponent alpha."""

    def __init__(self, S, alpha):
        _require(S > 0, "scaled-bridge horizon S must be positive")
        _require(alpha > 0, "scaled-bridge exponent alpha must be positive")
        self.S = float(S)
        self.alpha = float(alpha)
        self.name = f"scaled(S={self.S:g}, alpha={self.alpha:g})"
        self.domain = Interval(0.0, self.S)

    def _raw(self, x1, x2):
        return core.axis_scaled(self.S, self.alpha, x1, x2)

    def _core_spec(self, points):
        return core.AX_SCALED, self.S, self.alpha, points


class OUAxis(AxisKernel):
    """exp(-rate*|dx|) axis kernel on the whole real line."""

    def __init__(self, rate):
        _require(rate > 0, "OU axis rate must be positive")
        self.rate = float(rate)
        self.name = f"ou(rate={self.rate:g})"

    def _raw(self, x1, x2):
        return core.axis_ou(self.rate, x1, x2)

    def _core_spec(self, points):
        return core.AX_OU, self.rate, 0.0, points


class CdfBridgeAxis(AxisKernel):
    """F(min) - F*F axis kernel on [0, horizon) for a CDF F.

    Since F is nondecreasing, this equals the plain bridge kernel evaluated
    at the transformed coordinates F(x)."""

    def __init__(self, cdf: CdfSpec):
        self.cdf = cdf
        self.name = f"cdf-bridge({cdf.name})"
        self.domain = Interval(0.0, cdf.horizon, hi_open=True)

    def _raw(self, x1, x2):
        return core.axis_bridge(self.cdf(x1), self.cdf(x2))

    def _core_spec(self, points):
        eff = np.array([self.cdf(x) for x in points])
        return core.AX_BRIDGE, 0.0, 0.0, eff


# --- planar kernels ---


class Kernel2D:
    """A planar covariance function k((s1,t1), (s2,t2))."""

    name = "kernel"
    s_domain = Interval(-math.inf, math.inf)
    t_domain = Interval(-math.inf, math.inf)

    def evaluate(self, s1, t1, s2, t2):
        s1, t1, s2, t2 = (float(v) for v in (s1, t1, s2, t2))
        for s in (s1, s2):
            _require(self.s_domain.contains(s), f"{self.name}: s argument {s!r} outside {self.s_domain}")
        for t in (t1, t2):
            _require(self.t_domain.contains(t), f"{self.name}: t argument {t!r} outside {self.t_domain}")
        return self._raw(s1, t1, s2, t2)

    def _raw(self, s1, t1, s2, t2):
        raise NotImplementedError

    def params(self):
        """Flat parameter description used in CSV/JSON metadata."""
        return {}

    @property
    def separable(self):
        return isinstance(self, SeparableKernel)


class SeparableKernel(Kernel2D):
    """scale * k_s(s1, s2) * k_t(t1, t2) for two axis kernels."""

    def __init__(self, s_axis, t_axis, scale=1.0, name=None):
        _require(scale > 0, "separable kernel scale must be positive")
        self.s_axis = s_axis
        self.t_axis = t_axis
        self.scale = float(scale)
        self.name = name or f"separable({s_axis.name} x {t_axis.name})"
        self.s_domain = s_axis.domain
        self.t_domain = t_axis.domain

    def _raw(self, s1, t1, s2, t2):
        return (self.scale * self.s_axis._raw(s1, s2)) * self.t_axis._raw(t1, t2)


class BivariateBridgeKernel(Kernel2D):
    """min*min - product covariance on the unit square; not of product type."""

    name = "bivariate"
    s_domain = Interval(0.0, 1.0)
    t_domain = Interval(0.0, 1.0)

    def _raw(self, s1, t1, s2, t2):
        return core.eval_bivariate(s1, t1, s2, t2)


# --- catalog constructors ---


def wiener_field():
    """Standard Wiener field (Brownian sheet): min(s)*min(t) on the quarter plane."""
    return SeparableKernel(WienerAxis(), WienerAxis(), name="wiener")


def ou_field(params: OUParams):
    """Stationary Ornstein-Uhlenbeck field with the given parameters."""
    k = SeparableKernel(
        OUAxis(params.alpha),
        OUAxis(params.beta),
        scale=params.stationary_variance,
        name="ou",
    )
    k.ou_params = params
    return k


def bivariate_bridge_field():
    """Bivariate Wiener bridge on the unit square (pinned at axes and (1,1))."""
    return BivariateBridgeKernel()


def tied_down_bridge_field():
    """Tied-down Wiener bridge: zero on the whole border of the unit square."""
    return SeparableKernel(BridgeAxis(), BridgeAxis(), name="tied-down")


def scaled_bridge_field(S, T, alpha, beta):
    """Tied-down scaled Wiener bridge on [0,S] x [0,T] with exponents (alpha, beta)."""
    return SeparableKernel(
        ScaledBridgeAxis(S, alpha),
        ScaledBridgeAxis(T, beta),
        name=f"scaled(S={float(S):g}, T={float(T):g}, alpha={float(alpha):g}, beta={float(beta):g})",
    )


def kiefer_field():
    """Kiefer process: bridge-like in s on [0,1], Wiener-like in t on [0,inf)."""
    return SeparableKernel(BridgeAxis(), WienerAxis(), name="kiefer")


def fg_bridge_field(F: CdfSpec, G: CdfSpec):
    """(F,G)-Wiener bridge with covariance (F(min)-F*F)(G(min)-G*G)."""
    return SeparableKernel(
        CdfBridgeAxis(F), CdfBridgeAxis(G), name=f"fg({F.name}, {G.name})"
    )


# --- plain evaluation functions ---


def eval_wiener(s1, t1, s2, t2):
    """min(s1,s2) * min(t1,t2); all arguments must be >= 0."""
    s1, t1, s2, t2 = (float(v) for v in (s1, t1, s2, t2))
    for v in (s1, t1, s2, t2):
        _require(math.isfinite(v) and v >= 0, f"Wiener field arguments must be >= 0, got {v!r}")
    return core.axis_wiener(s1, s2) * core.axis_wiener(t1, t2)


def eval_ou(params: OUParams, s1, t1, s2, t2):
    """sigma^2/(4*alpha*beta) * exp(-alpha*|s1-s2| - beta*|t1-t2|)."""
    s1, t1, s2, t2 = (float(v) for v in (s1, t1, s2, t2))
    for v in (s1, t1, s2, t2):
        _require(math.isfinite(v), f"OU field arguments must be finite, got {v!r}")
    return core.eval_ou_field(params.alpha, params.beta, params.sigma, s1, t1, s2, t2)


def eval_bivariate_bridge(s1, t1, s2, t2):
    """(s1^s2)(t1^t2) - s1*s2*t1*t2 on the unit square."""
    return bivariate_bridge_field().evaluate(s1, t1, s2, t2)


def eval_tied_down_bridge(s1, t1, s2, t2):
    """(s1^s2 - s1*s2)(t1^t2 - t1*t2) on the unit square."""
    s1, t1, s2, t2 = (float(v) for v in (s1, t1, s2, t2))
    for v in (s1, t1, s2, t2):
        _require(0.0 <= v <= 1.0, f"tied-down bridge arguments must lie in [0, 1], got {v!r}")
    return core.axis_bridge(s1, s2) * core.axis_bridge(t1, t2)


def eval_scaled_bridge_axis(S, alpha, s1, s2):
    """Scaled-bridge axis kernel at (s1, s2); exactly 0 when either hits S."""
    _require(S > 0, "horizon S must be positive")
    _require(alpha > 0, "exponent alpha must be positive")
    S, alpha, s1, s2 = float(S), float(alpha), float(s1), float(s2)
    for v in (s1, s2):
        _require(0.0 <= v <= S, f"scaled-bridge axis arguments must lie in [0, {S:g}], got {v!r}")
    return core.axis_scaled(S, alpha, s1, s2)


def eval_kiefer(s1, s2, t1, t2):
    """(s1^s2 - s1*s2) * (t1^t2) with s in [0,1] and t >= 0.

    Note the argument order: both s coordinates first, then both t's.
    """
    s1, s2, t1, t2 = (float(v) for v in (s1, s2, t1, t2))
    for v in (s1, s2):
        _require(0.0 <= v <= 1.0, f"Kiefer s arguments must lie in [0, 1], got {v!r}")
    for v in (t1, t2):
        _require(math.isfinite(v) and v >= 0, f"Kiefer t arguments must be >= 0, got {v!r}")
    return core.axis_bridge(s1, s2) * core.axis_wiener(t1, t2)


def eval_fg_bridge(F: CdfSpec, G: CdfSpec, s1, t1, s2, t2):
    """(F(s1^s2) - F(s1)F(s2)) * (G(t1^t2) - G(t1)G(t2)); arguments below the horizons."""
    s1, t1, s2, t2 = (float(v) for v in (s1, t1, s2, t2))
    for v in (s1, s2):
        _require(0.0 <= v < F.horizon, f"s argument {v!r} must lie in [0, {F.horizon:g})")
    for v in (t1, t2):
        _require(0.0 <= v < G.horizon, f"t argument {v!r} must lie in [0, {G.horizon:g})")
    return core.axis_bridge(F(s1), F(s2)) * core.axis_bridge(G(t1), G(t2))


# --- grid covariance assembly ---


def covariance_matrix(kernel: Kernel2D, grid: GridSpec):
    """Dense (n_s*n_t)^2 covariance matrix of `kernel` on `grid`.

    Entry ((i,j), (k,l)) equals kernel(s_i, t_j, s_k, t_l) with flat indices
    row-major in (i, j).  Each point pair is evaluated once and mirrored, so
    the result is exactly symmetric.
    """
    for x in grid.s_points:
        _require(kernel.s_domain.contains(float(x)), f"{kernel.name}: grid s point {x!r} outside {kernel.s_domain}")
    for x in grid.t_points:
        _require(kernel.t_domain.contains(float(x)), f"{kernel.name}: grid t point {x!r} outside {kernel.t_domain}")
    if isinstance(kernel, SeparableKernel):
        sc, sp0, sp1, spts = kernel.s_axis._core_spec(grid.s_points)
        tc, tp0, tp1, tpts = kernel.t_axis._core_spec(grid.t_points)
        return core.dense_separable(sc, sp0, sp1, tc, tp0, tp1, kernel.scale, spts, tpts)
    if isinstance(kernel, BivariateBridgeKernel):
        return core.dense_bivariate(grid.s_points, grid.t_points)
    # generic slow path for kernels outside the catalog
    n = grid.size
    out = np.empty((n, n))
    for p in range(n):
        sp, tp = grid.point(p)
        for q in range(p, n):
            sq, tq = grid.point(q)
            v = kernel._raw(sp, tp, sq, tq)
            out[p, q] = v
            out[q, p] = v
    return out
