"""Exact Gaussian sampling on rectangular grids.

Two execution paths produce the same distributions: a dense factorization of
the full grid covariance, and a Kronecker path for separable kernels that
factors the two axis matrices and forms sqrt(scale) * L_s Z L_t' per
replicate (O(n_s^3 + n_t^3) instead of O((n_s n_t)^3) factorization work).

Randomness contract: replicate k of a run seeded with `seed` draws its
normals from a dedicated counter-based stream, Philox-4x64 keyed by
(seed, k), consumed in row-major point order through numpy's ziggurat
standard_normal.  Replicates are therefore pure functions of (seed, k):
reruns, replicate subsets and any thread count reproduce identical bits.

Grid points with exactly zero marginal variance (bridge zero sets, the s=0
or t=0 axes of a Wiener field) bypass the factorization and are emitted as
exact zeros.
"""

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from .grids import GridSpec
from .kernels import (
    AxisKernel,
    DomainError,
    Kernel2D,
    OUParams,
    covariance_matrix,
    wiener_field,
)
from .transforms import OURepresentation, reduced_wiener_form

GENERATOR_ID = f"philox4x64(key=(seed,replicate))/ziggurat-normal/numpy-{np.__version__}"

# f values beyond this make the image grid of a representation useless in
# double precision; the caller is told to keep a larger margin instead.
IMAGE_COORD_MAX = 1e12

# |2*alpha*s| beyond this overflows exp() when mapping an OU grid onto the
# Wiener quarter-plane.
OU_LOG_COORD_MAX = 700.0

JITTER_START_REL = 1e-12
JITTER_MAX_REL = 1e-8


@dataclass
class FieldSample:
    """One field realization on a grid; values indexed (s index, t index)."""

    grid: GridSpec
    values: np.ndarray
    seed: int
    replicate_index: int

    def flat(self):
        return self.values.reshape(-1)


class FactorizationError(RuntimeError):
    """Covariance not numerically PSD within the jitter budget."""

    def __init__(self, message, minor_index):
        super().__init__(message)
        self.minor_index = minor_index


def replicate_rng(seed, replicate_index):
    """The dedicated random stream of one replicate."""
    return np.random.Generator(np.random.Philox(key=[int(seed), int(replicate_index)]))


def factorize(cov):
    """Lower-triangular L with L L' = cov + jitter*I, plus the jitter used.

    The jitter schedule starts at 0, then 1e-12 * trace/n escalating tenfold
    up to 1e-8 * trace/n; bridge kernels are positive definite on interior
    grids but ill-conditioned near boundaries.
    """
    a = np.ascontiguousarray(cov, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("covariance must be a square matrix")
    n = a.shape[0]
    if n == 0:
        return np.empty((0, 0)), 0.0
    mean_diag = float(np.trace(a)) / n
    jitters = [0.0] + [JITTER_START_REL * mean_diag * 10.0**k for k in range(5)]
    info = 0
    for jitter in jitters:
        attempt = a if jitter == 0.0 else a + jitter * np.eye(n)
        c, info = lapack.dpotrf(attempt, lower=1, clean=1)
        if info == 0:
            return c, jitter
    raise FactorizationError(
        f"matrix is not PSD: leading minor of order {info} not positive "
        f"definite even with jitter {jitters[-1]:g}",
        minor_index=int(info),
    )


def _run_replicates(build_one, n_replicates, threads):
    """Evaluate build_one(k) for k = 0..n-1, optionally across threads.

    Each replicate owns its stream, so the result is independent of the
    chunking; outputs are merged in index order.
    """
    indices = range(int(n_replicates))
    if threads is None or threads <= 1 or n_replicates <= 1:
        return [build_one(k) for k in indices]
    chunks = np.array_split(np.asarray(indices, dtype=np.int64), min(threads * 8, n_replicates))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(lambda chunk: [build_one(int(k)) for k in chunk], chunks)
        out = []
        for part in parts:
            out.extend(part)
    return out


def _masked_factor(cov):
    """Factor the submatrix of positive-variance points.

    Returns (active indices, L); points with exactly zero variance are
    pinned to zero by the samplers.
    """
    diag = np.diag(cov)
    active = np.flatnonzero(diag > 0.0)
    if active.size == 0:
        return active, np.empty((0, 0))
    L, _ = factorize(cov[np.ix_(active, active)])
    return active, L


def sample_dense(kernel: Kernel2D, grid: GridSpec, seed, n_replicates, threads=1):
    """Replicates of `kernel` on `grid` via dense Cholesky of the full covariance."""
    cov = covariance_matrix(kernel, grid)
    active, L = _masked_factor(cov)
    n = grid.size

    def one(k):
        z = replicate_rng(seed, k).standard_normal(active.size)
        flat = np.zeros(n)
        if active.size:
            flat[active] = L @ z
        return FieldSample(grid, flat.reshape(grid.n_s, grid.n_t), int(seed), k)

    return _run_replicates(one, n_replicates, threads)


def sample_kronecker(s_axis: AxisKernel, t_axis: AxisKernel, scale, grid: GridSpec,
                     seed, n_replicates, threads=1):
    """Replicates of the separable kernel scale * k_s * k_t via axis factors.

    Each replicate is sqrt(scale) * L_s Z L_t' with Z an (n_s, n_t) standard
    normal matrix; distributionally identical to the dense path (but a
    different function of the stream, so pathwise different numbers).
    """
    if not scale > 0:
        raise DomainError("separable kernel scale must be positive")
    ks = s_axis.matrix(grid.s_points)
    kt = t_axis.matrix(grid.t_points)
    act_s, ls = _masked_factor(ks)
    act_t, lt = _masked_factor(kt)
    root_scale = math.sqrt(scale)
    lt_t = lt.T

    def one(k):
        z = replicate_rng(seed, k).standard_normal((act_s.size, act_t.size))
        vals = np.zeros((grid.n_s, grid.n_t))
        if act_s.size and act_t.size:
            vals[np.ix_(act_s, act_t)] = root_scale * (ls @ z @ lt_t)
        return FieldSample(grid, vals, int(seed), k)

    return _run_replicates(one, n_replicates, threads)


def sample_ou_via_wiener(params: OUParams, grid: GridSpec, seed, n_replicates, threads=1):
    """Stationary OU field replicates built from a Wiener field.

    Draws W on the image grid (exp(2*alpha*s), exp(2*beta*t)) with the dense
    path and applies sigma/(2 sqrt(alpha beta)) * exp(-alpha s - beta t)
    pointwise; linear in W, so doubling sigma exactly doubles every value.
    """
    two_as = 2.0 * params.alpha * grid.s_points
    two_bt = 2.0 * params.beta * grid.t_points
    worst = max(np.max(np.abs(two_as)), np.max(np.abs(two_bt)))
    if worst > OU_LOG_COORD_MAX:
        raise DomainError(
            f"|2*alpha*s| or |2*beta*t| reaches {worst:g} > {OU_LOG_COORD_MAX:g}; "
            "the Wiener image grid would overflow"
        )
    image = GridSpec(np.exp(two_as), np.exp(two_bt))
    prefactor = (params.sigma / (2.0 * math.sqrt(params.alpha * params.beta))) * np.outer(
        np.exp(-params.alpha * grid.s_points), np.exp(-params.beta * grid.t_points)
    )
    raw = sample_dense(wiener_field(), image, seed, n_replicates, threads)
    return [
        FieldSample(grid, prefactor * w.values, w.seed, w.replicate_index) for w in raw
    ]


def sample_bridge_via_wiener(rep: OURepresentation, grid: GridSpec, seed, n_replicates,
                             threads=1):
    """Replicates of a represented bridge field through its Wiener reduction.

    Draws W on the image grid {(f(s_i), f~(t_j))} and applies the
    reduced-form multipliers pointwise.  Serves as an independent second
    sampler for cross-validation against the Kronecker path.
    """
    for x in grid.s_points:
        rep.s_transform.require_interior(float(x), "grid s point")
    for x in grid.t_points:
        rep.t_transform.require_interior(float(x), "grid t point")
    u = np.array([rep.s_transform.f(float(x)) for x in grid.s_points])
    v = np.array([rep.t_transform.f(float(x)) for x in grid.t_points])
    top = max(float(np.max(u)), float(np.max(v)))
    if not np.all(np.isfinite(u)) or not np.all(np.isfinite(v)) or top > IMAGE_COORD_MAX:
        raise DomainError(
            f"image coordinate f reaches {top:g} > {IMAGE_COORD_MAX:g} near the horizon; "
            "increase the grid margin"
        )
    mult = np.empty((grid.n_s, grid.n_t))
    for i, s in enumerate(grid.s_points):
        for j, t in enumerate(grid.t_points):
            mult[i, j] = reduced_wiener_form(rep, float(s), float(t))[0]
    image = GridSpec(u, v)
    raw = sample_dense(wiener_field(), image, seed, n_replicates, threads)
    return [
        FieldSample(grid, mult * w.values, w.seed, w.replicate_index) for w in raw
    ]


def write_samples_csv(target, samples, kernel_name, params=None, seed=None):
    """Plain-text CSV: '#' metadata header, then s, t and one column per replicate.

    Rows are row-major in (s index, t index); numbers use the shortest
    round-trip decimal representation, so reloading reproduces exact bits.
    """
    close = False
    if isinstance(target, (str, bytes)):
        fh = open(target, "w", encoding="ascii", newline="\n")
        close = True
    else:
        fh = target
    try:
        fh.write(f"# kernel: {kernel_name}\n")
        for key, value in (params or {}).items():
            fh.write(f"# param {key}: {value}\n")
        if seed is None and samples:
            seed = samples[0].seed
        fh.write(f"# seed: {seed}\n")
        fh.write(f"# replicates: {len(samples)}\n")
        fh.write(f"# generator: {GENERATOR_ID}\n")
        header = ["s", "t"] + [f"rep{s.replicate_index}" for s in samples]
        fh.write(",".join(header) + "\n")
        if not samples:
            return
        grid = samples[0].grid
        flats = [s.values for s in samples]
        for i, sv in enumerate(grid.s_points):
            for j, tv in enumerate(grid.t_points):
                row = [repr(float(sv)), repr(float(tv))]
                row.extend(repr(float(f[i, j])) for f in flats)
                fh.write(",".join(row) + "\n")
    finally:
        if close:
            fh.close()


def samples_csv_text(samples, kernel_name, params=None, seed=None):
    buf = io.StringIO()
    write_samples_csv(buf, samples, kernel_name, params=params, seed=seed)
    return buf.getvalue()
