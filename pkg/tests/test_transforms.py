import math

import numpy as np
import pytest

import oufields as of
from oufields.kernels import DomainError
from helpers import scaled_f_oracle, scaled_g_oracle


def interior_points(n, length=1.0):
    return np.arange(1, n + 1) / (n + 1) * length


# --- transform construction -------------------------------------------------


def test_tied_down_transform_values():
    rep = of.transform_tied_down()
    f, g = rep.s_transform.f, rep.s_transform.g
    assert f(0.5) == 1.0 and g(0.5) == 0.25
    assert f(0.25) == pytest.approx(1.0 / 3.0, rel=1e-15)
    assert f(0.75) == 3.0
    assert of.induced_covariance(rep, 0.5, 0.5, 0.5, 0.5) == pytest.approx(0.0625, rel=1e-14)


def test_scaled_transform_recovers_bridge_forms():
    tr = of.transform_scaled(1.0, 1.0)
    for s in np.linspace(0.01, 0.99, 50):
        assert tr.f(s) == pytest.approx(s / (1.0 - s), abs=1e-14, rel=1e-14)
        assert tr.g(s) == pytest.approx(s * (1.0 - s), abs=1e-14, rel=1e-14)


def test_scaled_transform_limits():
    assert of.transform_scaled(1.0, 0.3).limit_at_length == 2.5
    assert of.transform_scaled(1.0, 0.5).limit_at_length == math.inf
    assert of.transform_scaled(2.0, 2.0).limit_at_length == math.inf
    tr = of.transform_scaled(2.0, 0.5)
    assert tr.f(1.0) == pytest.approx(2.0 * math.log(2.0), rel=1e-15)


@pytest.mark.parametrize("S,alpha", [(1.0, 0.3), (2.0, 0.5), (3.0, 1.0), (2.0, 2.0)])
def test_scaled_transform_matches_oracle(S, alpha):
    tr = of.transform_scaled(S, alpha)
    for s in [0.05 * S, 0.4 * S, 0.77 * S, 0.99 * S]:
        assert tr.f(s) == pytest.approx(scaled_f_oracle(S, alpha, s), rel=1e-12)
        assert tr.g(s) == pytest.approx(scaled_g_oracle(S, alpha, s), rel=1e-12)


def test_kiefer_transform():
    rep = of.transform_kiefer()
    assert rep.t_transform.f(3.7) == 3.7  # identity axis
    assert of.induced_covariance(rep, 0.25, 2.0, 0.5, 3.0) == pytest.approx(0.25, rel=1e-14)
    assert of.induced_covariance(rep, 1e-12, 2.0, 0.5, 3.0) == pytest.approx(0.0, abs=1e-6)


def test_fg_transform():
    E = of.exponential_cdf(1.0)
    rep = of.transform_fg(E, E)
    for s in [0.1, 0.7, 2.0]:
        assert rep.s_transform.f(s) == pytest.approx(math.expm1(s), rel=1e-14)
    U = of.uniform_cdf()
    rep_u = of.transform_fg(U, U)
    tied = of.transform_tied_down()
    for s in interior_points(17):
        assert rep_u.s_transform.f(s) == tied.s_transform.f(s)
        assert rep_u.s_transform.g(s) == tied.s_transform.g(s)
    assert of.induced_covariance(
        rep, math.log(2), math.log(2), math.log(4), math.log(4)
    ) == pytest.approx(0.015625, rel=1e-14)


def test_transform_monotonicity_on_512_points():
    cases = [
        of.transform_tied_down().s_transform,
        of.transform_kiefer().t_transform,
        of.transform_scaled(1.0, 0.3),
        of.transform_scaled(2.0, 0.5),
        of.transform_scaled(3.0, 2.0),
        of.transform_fg(of.exponential_cdf(0.7), of.exponential_cdf(1.3)).s_transform,
    ]
    for tr in cases:
        length = tr.length if math.isfinite(tr.length) else 8.0
        values = [tr.f(s) for s in np.linspace(length / 1000.0, length * 0.999, 512)
                  if s < tr.length]
        diffs = np.diff(values)
        assert np.all(diffs > 0), tr.name


def test_invalid_transforms_rejected():
    with pytest.raises(DomainError):
        of.transform_scaled(-1.0, 1.0)
    with pytest.raises(DomainError):
        of.transform_scaled(1.0, 0.0)


# --- boundary limits (meaningful form of the invariant) ----------------------


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.45])
def test_boundary_limit_monotone_convergence_below_half(alpha):
    tr = of.transform_scaled(1.0, alpha)
    limit = tr.limit_at_length
    gaps = [abs(tr.f(1.0 - 10.0**-k) - limit) for k in range(2, 8)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    # deviation follows the local power law eps^(1-2a) * S^(2a) / (1-2a)
    eps = 1e-6
    predicted = eps ** (1.0 - 2.0 * alpha) / (1.0 - 2.0 * alpha)
    assert gaps[4] == pytest.approx(predicted, rel=1e-6)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_boundary_divergence_at_and_above_half(alpha):
    tr = of.transform_scaled(1.0, alpha)
    assert tr.limit_at_length == math.inf
    near, nearer = tr.f(1.0 - 1e-3), tr.f(1.0 - 1e-6)
    assert nearer > 10.0 * near or alpha == 0.5  # power-law growth
    assert nearer > near  # divergence, monotone
    if alpha > 0.5:
        assert nearer > 1e3


# --- induced covariance and the reduced Wiener form --------------------------


def test_induced_covariance_examples():
    rep = of.transform_tied_down()
    assert of.induced_covariance(rep, 0.25, 0.5, 0.5, 0.75) == pytest.approx(
        0.015625, rel=1e-14
    )
    with pytest.raises(DomainError):
        of.induced_covariance(rep, 0.0, 0.5, 0.5, 0.75)
    with pytest.raises(DomainError):
        of.induced_covariance(rep, 0.2, 0.5, 1.0, 0.75)


def test_induced_covariance_coincident_points():
    reps = [
        of.transform_tied_down(),
        of.scaled_representation(2.0, 3.0, 0.3, 2.0),
        of.transform_kiefer(),
    ]
    for rep in reps:
        s, t = 0.4 * min(rep.s_transform.length, 2.0), 0.6 * min(rep.t_transform.length, 2.0)
        want = rep.ou.stationary_variance * rep.s_transform.g(s) * rep.t_transform.g(t)
        assert of.induced_covariance(rep, s, t, s, t) == pytest.approx(want, rel=1e-14)


def test_reduced_wiener_form_examples():
    rep = of.transform_tied_down()
    assert of.reduced_wiener_form(rep, 0.5, 0.5) == (0.25, 1.0, 1.0)
    scaled = of.scaled_representation(1.0, 1.0, 1.0, 1.0)
    rng = np.random.default_rng(5)
    for _ in range(50):
        s, t = rng.uniform(0.02, 0.98, 2)
        a = of.reduced_wiener_form(rep, s, t)
        b = of.reduced_wiener_form(scaled, s, t)
        assert a == pytest.approx(b, rel=1e-13)
    with pytest.raises(DomainError):
        of.reduced_wiener_form(rep, 0.0, 0.5)


def test_reduced_form_variance_identity_1000_trials():
    """scale^2 * W(u,v)-variance equals the induced variance at the same point."""
    rng = np.random.default_rng(9)
    reps = [of.transform_tied_down(), of.scaled_representation(2.0, 3.0, 0.5, 0.3)]
    for rep in reps:
        ls = min(rep.s_transform.length, 4.0)
        lt = min(rep.t_transform.length, 4.0)
        for _ in range(500):
            s = rng.uniform(0.01, 0.99) * ls
            t = rng.uniform(0.01, 0.99) * lt
            scale, u, v = of.reduced_wiener_form(rep, s, t)
            lhs = scale * scale * of.eval_wiener(u, v, u, v)
            rhs = of.induced_covariance(rep, s, t, s, t)
            assert lhs == pytest.approx(rhs, rel=1e-13)


def test_reduction_consistency_on_grid_pairs():
    """Pairwise: induced covariance equals scale(p)*scale(q)*W-kernel of the images."""
    cases = [
        (of.transform_tied_down(), 1.0, 1.0),
        (of.scaled_representation(2.0, 3.0, 0.3, 2.0), 2.0, 3.0),
        (of.transform_kiefer(), 1.0, 5.0),
        (of.transform_fg(of.exponential_cdf(1.0), of.exponential_cdf(1.0)), 3.0, 3.0),
    ]
    for rep, s_len, t_len in cases:
        s_pts = interior_points(10, s_len)
        t_pts = interior_points(10, t_len)
        points = [(s, t) for s in s_pts for t in t_pts]
        reduced = [of.reduced_wiener_form(rep, s, t) for s, t in points]
        for (p, (cp, up, vp)) in zip(points, reduced):
            for (q, (cq, uq, vq)) in zip(points, reduced):
                lhs = cp * cq * of.eval_wiener(up, vp, uq, vq)
                rhs = of.induced_covariance(rep, p[0], p[1], q[0], q[1])
                assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


# --- identity checks ---------------------------------------------------------


def test_identity_check_tied_down_20x20_tight():
    grid = of.GridSpec(interior_points(20), interior_points(20))
    report = of.identity_check(of.transform_tied_down(), of.tied_down_bridge_field(),
                               grid, tol=1e-12)
    assert report.passed and report.max_residual <= 1e-12
    assert report.n_entries_tested == 400**2


def test_identity_check_scaled_mixed_horizons():
    grid = of.GridSpec(interior_points(15, 2.0), interior_points(15, 3.0))
    report = of.identity_check(
        of.scaled_representation(2.0, 3.0, 0.3, 2.0),
        of.scaled_bridge_field(2.0, 3.0, 0.3, 2.0),
        grid,
        tol=1e-10,
    )
    assert report.passed, report.max_residual


def test_identity_check_rejects_bivariate_target():
    grid = of.GridSpec(interior_points(8), interior_points(8))
    report = of.identity_check(of.transform_tied_down(), of.bivariate_bridge_field(), grid)
    assert not report.passed
    assert report.max_residual > 0.01


def test_identity_check_domain_violation_reported_not_raised():
    grid = of.GridSpec([0.0, 0.5], [0.25, 0.5])  # 0.0 is not interior
    report = of.identity_check(of.transform_tied_down(), of.tied_down_bridge_field(), grid)
    assert not report.passed
    assert "error" in report.metadata


# --- separability falsifier ---------------------------------------------------


def test_falsifier_reference_grid():
    second, verdict, largest = of.separability_falsifier([0.5, 1.0], [0.5, 1.0])
    assert verdict == "not separable"
    assert abs(second - 0.25) <= 1e-12
    assert abs(largest - 1.0) <= 1e-12


def test_falsifier_8x8_grid():
    pts = np.linspace(0.5, 0.99, 8)
    second, verdict, largest = of.separability_falsifier(pts, pts)
    assert verdict == "not separable"
    assert second > 1e-4 * largest  # 1 - s*t has rank exactly 2


def test_falsifier_rejects_degenerate_grids():
    with pytest.raises(ValueError):
        of.separability_falsifier([0.5, 0.5], [0.5, 1.0])
    with pytest.raises(ValueError):
        of.separability_falsifier([0.6], [0.5, 1.0])
    with pytest.raises(ValueError):
        of.separability_falsifier([0.2, 0.6], [0.5, 1.0])


def test_rank_one_controls_never_falsified():
    rng = np.random.default_rng(17)
    for _ in range(100):
        u = rng.uniform(0.1, 2.0, rng.integers(2, 9))
        v = rng.uniform(0.1, 2.0, rng.integers(2, 9))
        second, verdict, largest = of.rank_one_defect(np.outer(u, v))
        assert verdict == "separable"
        assert second <= 1e-12 * max(largest, 1.0)


def test_slice_candidates_disagree():
    c_half, c_one = of.bivariate_slice_candidates(0.9)
    assert c_half == pytest.approx(0.55 / 0.75, rel=1e-15)
    assert c_one == pytest.approx(0.2, rel=1e-12)
    gap = abs(c_half - c_one) / max(c_half, c_one)
    assert gap > 0.1
