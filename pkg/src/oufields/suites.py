"""Catalog-wide verification suites behind `oufields verify`.

identity   - deterministic: every representation reproduces its target kernel
             to 1e-10 on a 15x15 interior grid.
montecarlo - statistical: sampled second moments match the target kernels
             (covariance gates plus the OU stationarity gate).
falsify    - the bivariate bridge admits no product-form representation:
             rank test on reference grids, rank-1 soundness controls, and
             the two incompatible slice candidates.
"""

import math

import numpy as np

from .grids import GridSpec, fraction_grid
from .kernels import (
    OUParams,
    exponential_cdf,
    fg_bridge_field,
    kiefer_field,
    ou_field,
    scaled_bridge_field,
    tied_down_bridge_field,
    uniform_cdf,
)
from .mcverify import covariance_gate, empirical_covariance, ou_stationarity_gate
from .reporting import VerificationReport
from .sampling import sample_bridge_via_wiener, sample_ou_via_wiener
from .transforms import (
    bivariate_slice_candidates,
    identity_check,
    rank_one_defect,
    scaled_representation,
    separability_falsifier,
    transform_fg,
    transform_kiefer,
    transform_tied_down,
)

IDENTITY_GRID_N = 15
IDENTITY_TOL = 1e-10
SCALED_EXPONENTS = (0.3, 0.5, 1.0, 2.0)
SCALED_HORIZONS = ((1.0, 1.0), (2.0, 3.0))
KIEFER_T_EXTENT = 5.0
MC_GRID_N = 6
MC_SHIFT = (1.7, -0.4)


def _interior_grid(n, s_len, t_len):
    return GridSpec(fraction_grid(n, s_len), fraction_grid(n, t_len))


def _exponential_quantile_grid(n, rate=1.0):
    u = fraction_grid(n)
    return -np.log(1.0 - u) / rate


def identity_catalog():
    """(representation, target kernel, grid) triples of the identity suite."""
    n = IDENTITY_GRID_N
    entries = [
        (transform_tied_down(), tied_down_bridge_field(), _interior_grid(n, 1.0, 1.0)),
        (transform_kiefer(), kiefer_field(),
         GridSpec(fraction_grid(n), fraction_grid(n, KIEFER_T_EXTENT))),
        (transform_fg(uniform_cdf(), uniform_cdf()),
         fg_bridge_field(uniform_cdf(), uniform_cdf()),
         _interior_grid(n, 1.0, 1.0)),
        (transform_fg(exponential_cdf(1.0), exponential_cdf(1.0)),
         fg_bridge_field(exponential_cdf(1.0), exponential_cdf(1.0)),
         GridSpec(_exponential_quantile_grid(n), _exponential_quantile_grid(n))),
    ]
    for S, T in SCALED_HORIZONS:
        for alpha in SCALED_EXPONENTS:
            for beta in SCALED_EXPONENTS:
                entries.append(
                    (
                        scaled_representation(S, T, alpha, beta),
                        scaled_bridge_field(S, T, alpha, beta),
                        _interior_grid(n, S, T),
                    )
                )
    return entries


def identity_suite(tol=IDENTITY_TOL):
    return [identity_check(rep, target, grid, tol=tol)
            for rep, target, grid in identity_catalog()]


def montecarlo_suite(seed=42, n_replicates=100_000, threads=1, confidence_sigmas=3.0):
    """The covariance gates of the full representable catalog plus stationarity."""
    reports = []
    ou_params = OUParams(0.5, 0.5, 1.0)
    ou_grid = GridSpec(np.linspace(0.0, 2.0, MC_GRID_N), np.linspace(0.0, 2.0, MC_GRID_N))

    ou_samples = sample_ou_via_wiener(ou_params, ou_grid, seed, n_replicates, threads)
    reports.append(
        covariance_gate(empirical_covariance(ou_samples), ou_field(ou_params),
                        confidence_sigmas, check_name="montecarlo/ou",
                        metadata={"seed": seed, "sampler": "ou-via-wiener"})
    )

    bridge_cases = [
        ("montecarlo/tied-down", transform_tied_down(), tied_down_bridge_field(),
         _interior_grid(MC_GRID_N, 1.0, 1.0), seed + 1),
        ("montecarlo/scaled(0.5,0.5)", scaled_representation(1.0, 1.0, 0.5, 0.5),
         scaled_bridge_field(1.0, 1.0, 0.5, 0.5), _interior_grid(MC_GRID_N, 1.0, 1.0), seed + 2),
        ("montecarlo/kiefer", transform_kiefer(), kiefer_field(),
         GridSpec(fraction_grid(MC_GRID_N), fraction_grid(MC_GRID_N, KIEFER_T_EXTENT)), seed + 3),
        ("montecarlo/fg-exponential", transform_fg(exponential_cdf(1.0), exponential_cdf(1.0)),
         fg_bridge_field(exponential_cdf(1.0), exponential_cdf(1.0)),
         GridSpec(_exponential_quantile_grid(MC_GRID_N), _exponential_quantile_grid(MC_GRID_N)),
         seed + 4),
    ]
    for name, rep, target, grid, case_seed in bridge_cases:
        samples = sample_bridge_via_wiener(rep, grid, case_seed, n_replicates, threads)
        reports.append(
            covariance_gate(empirical_covariance(samples), target, confidence_sigmas,
                            check_name=name,
                            metadata={"seed": case_seed, "sampler": "bridge-via-wiener"})
        )

    base = sample_ou_via_wiener(ou_params, ou_grid, seed + 5, n_replicates, threads)
    shifted = sample_ou_via_wiener(ou_params, ou_grid.shifted(*MC_SHIFT), seed + 6,
                                   n_replicates, threads)
    reports.append(ou_stationarity_gate(base, shifted, ou_params, confidence_sigmas))
    return reports


def falsify_suite(control_trials=100, control_seed=20_240_805):
    """Rank-based non-separability evidence plus soundness controls."""
    reports = []

    second, verdict, largest = separability_falsifier([0.5, 1.0], [0.5, 1.0])
    reports.append(VerificationReport(
        check_name="falsify/reference-grid",
        passed=verdict == "not separable",
        max_residual=second,
        n_entries_tested=1,
        n_entries_outside_band=0 if verdict == "not separable" else 1,
        tolerance={"second_singular_value": "> 1e-8 * largest"},
        metadata={"grid": "{0.5, 1}^2", "second_singular_value": second,
                  "largest_singular_value": largest, "verdict": verdict},
    ))

    pts = np.linspace(0.5, 0.99, 8)
    second8, verdict8, largest8 = separability_falsifier(pts, pts)
    reports.append(VerificationReport(
        check_name="falsify/8x8-grid",
        passed=verdict8 == "not separable",
        max_residual=second8,
        n_entries_tested=1,
        n_entries_outside_band=0 if verdict8 == "not separable" else 1,
        tolerance={"second_singular_value": "> 1e-8 * largest"},
        metadata={"grid": "8x8 uniform on [0.5, 0.99]",
                  "second_singular_value": second8, "verdict": verdict8},
    ))

    rng = np.random.default_rng(control_seed)
    false_alarms = 0
    worst_ratio = 0.0
    for _ in range(control_trials):
        m = rng.integers(2, 9)
        n = rng.integers(2, 9)
        u = rng.uniform(0.1, 2.0, size=m)
        v = rng.uniform(0.1, 2.0, size=n)
        second_c, verdict_c, largest_c = rank_one_defect(np.outer(u, v))
        worst_ratio = max(worst_ratio, second_c / largest_c)
        if verdict_c != "separable":
            false_alarms += 1
    reports.append(VerificationReport(
        check_name="falsify/rank-one-controls",
        passed=false_alarms == 0,
        max_residual=worst_ratio,
        n_entries_tested=control_trials,
        n_entries_outside_band=false_alarms,
        tolerance={"second_singular_value": "<= 1e-8 * largest"},
        metadata={"seed": control_seed},
    ))

    cand_half, cand_one = bivariate_slice_candidates(0.9)
    gap = abs(cand_half - cand_one) / max(abs(cand_half), abs(cand_one))
    reports.append(VerificationReport(
        check_name="falsify/slice-contradiction",
        passed=gap > 0.1,
        max_residual=gap,
        n_entries_tested=1,
        n_entries_outside_band=0 if gap > 0.1 else 1,
        tolerance={"relative_disagreement": "> 0.1"},
        metadata={"s2": 0.9, "candidate_from_t2_half": cand_half,
                  "candidate_from_t2_one": cand_one},
    ))
    return reports


SUITES = ("identity", "montecarlo", "falsify", "all")


def run_suite(name, seed=42, n_replicates=100_000, threads=1, tol=IDENTITY_TOL):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose one of {', '.join(SUITES)}")
    reports = []
    if name in ("identity", "all"):
        reports.extend(identity_suite(tol=tol))
    if name in ("montecarlo", "all"):
        reports.extend(montecarlo_suite(seed=seed, n_replicates=n_replicates, threads=threads))
    if name in ("falsify", "all"):
        reports.extend(falsify_suite())
    return reports
