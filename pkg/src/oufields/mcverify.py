"""Statistical verification of sampled fields against their target kernels.

The covariance gate compares an empirical covariance entrywise against the
analytic target under the Gaussian fourth-moment standard error
SE = sqrt((c_xx*c_yy + c_xy^2)/n), with the target (not the estimate)
supplying the c values so the bands are deterministic under the null.  Mean
entries are banded by sigmas*sqrt(c_xx/n).  A check passes when at least 95%
of all banded entries (covariance entries pooled with mean entries) fall
inside their bands; pooling keeps the false-failure rate of the aggregate
far below the per-entry 3-sigma rate even on small grids.
"""

import numpy as np

from .grids import GridSpec
from .kernels import Kernel2D, OUParams, covariance_matrix, ou_field
from .reporting import VerificationReport
from .sampling import GENERATOR_ID, FieldSample

ENTRY_PASS_FRACTION = 0.95


class EmpiricalCovariance:
    """Sample mean and unbiased sample covariance of replicated field values."""

    def __init__(self, grid: GridSpec, mean, cov, n):
        if n < 2:
            raise ValueError("need at least two replicates")
        self.grid = grid
        self.mean = np.asarray(mean, dtype=np.float64)
        self.cov = np.asarray(cov, dtype=np.float64)
        self.n = int(n)


def empirical_covariance(samples):
    """Unbiased (n-1 divisor) covariance about the sample mean.

    The upper triangle is accumulated and mirrored, so the result is exactly
    symmetric.
    """
    if len(samples) < 2:
        raise ValueError("need at least two replicates")
    grid = samples[0].grid
    for s in samples[1:]:
        if not grid.same_as(s.grid):
            raise ValueError("replicates must share one grid")
    x = np.stack([s.flat() for s in samples])
    n = x.shape[0]
    mean = x.mean(axis=0)
    d = x - mean
    cov = d.T @ d / (n - 1)
    cov = np.triu(cov) + np.triu(cov, 1).T
    return EmpiricalCovariance(grid, mean, cov, n)


def _gate_bands(target_matrix, n, confidence_sigmas):
    diag = np.diag(target_matrix)
    se = np.sqrt((np.outer(diag, diag) + target_matrix**2) / n)
    mean_band = confidence_sigmas * np.sqrt(np.maximum(diag, 0.0) / n)
    return confidence_sigmas * se, mean_band


def covariance_gate(emp: EmpiricalCovariance, target: Kernel2D, confidence_sigmas=3.0,
                    check_name=None, metadata=None):
    """Entrywise band check of an empirical covariance against a target kernel."""
    return covariance_gate_matrix(
        emp, covariance_matrix(target, emp.grid), confidence_sigmas,
        check_name=check_name or f"montecarlo/{target.name}", metadata=metadata,
    )


def covariance_gate_matrix(emp: EmpiricalCovariance, target_matrix, confidence_sigmas=3.0,
                           check_name=None, metadata=None):
    """Band check against an explicit target matrix (bands come from the target)."""
    target_matrix = np.asarray(target_matrix, dtype=np.float64)
    cov_band, mean_band = _gate_bands(target_matrix, emp.n, confidence_sigmas)
    resid = np.abs(emp.cov - target_matrix)
    cov_viol = int(np.count_nonzero(resid > cov_band))
    mean_viol = int(np.count_nonzero(np.abs(emp.mean) > mean_band))
    n_entries = resid.size + emp.mean.size
    n_outside = cov_viol + mean_viol
    q = int(np.argmax(resid))
    p1, p2 = divmod(q, emp.grid.size)
    meta = {"generator": GENERATOR_ID, "n_replicates": emp.n,
            "n_cov_entries_outside": cov_viol, "n_mean_entries_outside": mean_viol}
    meta.update(metadata or {})
    return VerificationReport(
        check_name=check_name or "montecarlo/gate",
        passed=n_outside <= (1.0 - ENTRY_PASS_FRACTION) * n_entries,
        max_residual=float(resid.flat[q]),
        residual_location={"point1": emp.grid.point(p1), "point2": emp.grid.point(p2)},
        n_entries_tested=n_entries,
        n_entries_outside_band=n_outside,
        tolerance={"confidence_sigmas": confidence_sigmas,
                   "entry_pass_fraction": ENTRY_PASS_FRACTION},
        metadata=meta,
    )


def ou_stationarity_gate(samples_base, samples_shifted, params: OUParams,
                         confidence_sigmas=3.0, check_name=None):
    """Both batches must reproduce the same analytic OU covariance.

    The two grids must differ by one common shift, and the batches must come
    from different seeds; the single target is evaluated on the base grid
    (the kernel is shift invariant).
    """
    if not samples_base or not samples_shifted:
        raise ValueError("both batches need replicates")
    if samples_base[0].seed == samples_shifted[0].seed:
        raise ValueError("stationarity gate requires independent seeds for the two batches")
    grid_a = samples_base[0].grid
    grid_b = samples_shifted[0].grid
    if grid_a.n_s != grid_b.n_s or grid_a.n_t != grid_b.n_t:
        raise ValueError("grids are not shift congruent: distinct shapes")
    ds = grid_b.s_points - grid_a.s_points
    dt = grid_b.t_points - grid_a.t_points
    if np.ptp(ds) > 1e-9 or np.ptp(dt) > 1e-9:
        raise ValueError("grids are not shift congruent: non-constant offsets")
    kernel = ou_field(params)
    target = covariance_matrix(kernel, grid_a)
    emp_a = empirical_covariance(samples_base)
    emp_b = empirical_covariance(samples_shifted)
    # one analytic target for both batches (the kernel is shift invariant)
    gate_a = covariance_gate_matrix(emp_a, target, confidence_sigmas,
                                    check_name="stationarity/base")
    gate_b = covariance_gate_matrix(emp_b, target, confidence_sigmas,
                                    check_name="stationarity/shifted")
    worst = gate_a if gate_a.max_residual >= gate_b.max_residual else gate_b
    return VerificationReport(
        check_name=check_name or "montecarlo/ou-stationarity",
        passed=gate_a.passed and gate_b.passed,
        max_residual=worst.max_residual,
        residual_location=worst.residual_location,
        n_entries_tested=gate_a.n_entries_tested + gate_b.n_entries_tested,
        n_entries_outside_band=gate_a.n_entries_outside_band + gate_b.n_entries_outside_band,
        tolerance={"confidence_sigmas": confidence_sigmas,
                   "entry_pass_fraction": ENTRY_PASS_FRACTION},
        metadata={
            "generator": GENERATOR_ID,
            "shift": [float(ds[0]), float(dt[0])],
            "seeds": [samples_base[0].seed, samples_shifted[0].seed],
            "n_replicates": emp_a.n,
        },
    )
