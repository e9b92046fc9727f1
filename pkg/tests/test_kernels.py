import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oufields as of
from oufields.kernels import DomainError
from helpers import interior_grid_for, scaled_axis_oracle, separable_catalog

HALF = of.OUParams(0.5, 0.5, 1.0)


# --- pointwise values -------------------------------------------------------


def test_wiener_values():
    assert of.eval_wiener(1, 2, 3, 1) == 1.0
    assert of.eval_wiener(0, 5, 7, 9) == 0.0
    assert of.eval_wiener(2, 2, 2, 2) == 4.0


def test_ou_values():
    assert of.eval_ou(HALF, 0, 0, 0, 0) == 1.0
    v = of.eval_ou(HALF, 0, 0, math.log(9), 0)
    assert v == pytest.approx(1.0 / 3.0, rel=1e-14)
    # stationarity, exact for representable shifts
    base = of.eval_ou(HALF, 0.25, 1.5, 2.0, 0.75)
    assert of.eval_ou(HALF, 0.25 + 0.5, 1.5 - 0.25, 2.0 + 0.5, 0.75 - 0.25) == base


def test_bivariate_values():
    assert of.eval_bivariate_bridge(0.5, 0.5, 0.5, 0.5) == 0.1875
    for s, t in [(0.3, 0.8), (1.0, 1.0), (0.0, 0.5)]:
        assert of.eval_bivariate_bridge(1.0, 1.0, s, t) == 0.0
    assert of.eval_bivariate_bridge(0.0, 0.7, 0.4, 0.9) == 0.0
    assert of.eval_bivariate_bridge(0.6, 0.0, 0.4, 0.9) == 0.0


def test_tied_down_values():
    assert of.eval_tied_down_bridge(0.25, 0.5, 0.5, 0.75) == 0.015625
    assert of.eval_tied_down_bridge(0.5, 0.5, 0.5, 0.5) == 0.0625
    for args in [(0.0, 0.3, 0.6, 0.9), (1.0, 0.3, 0.6, 0.9), (0.3, 1.0, 0.6, 0.9),
                 (0.3, 0.4, 0.6, 0.0)]:
        assert of.eval_tied_down_bridge(*args) == 0.0


def test_scaled_axis_values():
    # alpha=1, S=1 reduces to the plain bridge factor s1*(1-s2)
    assert of.eval_scaled_bridge_axis(1.0, 1.0, 0.25, 0.5) == pytest.approx(0.125, abs=1e-15)
    for s in [0.0, 0.3, 0.99, 1.0]:
        assert of.eval_scaled_bridge_axis(1.0, 0.5, s, 1.0) == 0.0
    # extended-precision oracle of the closed form
    got = of.eval_scaled_bridge_axis(2.0, 0.3, 0.5, 0.5)
    want = scaled_axis_oracle(2.0, 0.3, 0.5, 0.5)
    assert got == pytest.approx(want, abs=1e-10)


@pytest.mark.parametrize("S,alpha", [(1.0, 0.3), (1.0, 2.0), (2.0, 0.5), (3.0, 1.0),
                                     (2.0, 0.49999), (2.0, 0.50001)])
def test_scaled_axis_matches_oracle(S, alpha):
    pts = [0.1 * S, 0.37 * S, 0.5 * S, 0.93 * S]
    for x in pts:
        for y in pts:
            got = of.eval_scaled_bridge_axis(S, alpha, x, y)
            assert got == pytest.approx(scaled_axis_oracle(S, alpha, x, y), rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("delta", [1e-7, 1e-9, 1e-12, -1e-7, -1e-9, -1e-12])
def test_scaled_axis_stable_near_half(delta):
    """The two branches meet smoothly: no cancellation blow-up around alpha = 1/2."""
    alpha = 0.5 + delta
    got = of.eval_scaled_bridge_axis(2.0, alpha, 0.6, 1.4)
    want = scaled_axis_oracle(2.0, alpha, 0.6, 1.4)
    assert got == pytest.approx(want, rel=1e-12)
    at_half = of.eval_scaled_bridge_axis(2.0, 0.5, 0.6, 1.4)
    assert got == pytest.approx(at_half, rel=1e-5)


def test_kiefer_values():
    assert of.eval_kiefer(0.25, 0.5, 2, 3) == 0.25
    assert of.eval_kiefer(1.0, 0.5, 2, 3) == 0.0
    assert of.eval_kiefer(0.25, 0.5, 0, 3) == 0.0


def test_fg_values():
    F = of.exponential_cdf(1.0)
    v = of.eval_fg_bridge(F, F, math.log(2), math.log(2), math.log(4), math.log(4))
    assert v == pytest.approx(0.015625, rel=1e-14)
    assert of.eval_fg_bridge(F, F, 0.0, 0.5, 1.0, 2.0) == 0.0
    U = of.uniform_cdf()
    rng = np.random.default_rng(1)
    for _ in range(50):
        s1, t1, s2, t2 = rng.uniform(0.0, 0.999, size=4)
        assert of.eval_fg_bridge(U, U, s1, t1, s2, t2) == of.eval_tied_down_bridge(s1, t1, s2, t2)


# --- domains ----------------------------------------------------------------


def test_domain_errors():
    with pytest.raises(DomainError):
        of.eval_wiener(-0.1, 0, 0, 0)
    with pytest.raises(DomainError):
        of.eval_bivariate_bridge(1.2, 0.5, 0.5, 0.5)
    with pytest.raises(DomainError):
        of.eval_tied_down_bridge(-0.2, 0.5, 0.5, 0.5)
    with pytest.raises(DomainError):
        of.eval_scaled_bridge_axis(1.0, 1.0, 0.5, 1.5)
    with pytest.raises(DomainError):
        of.eval_scaled_bridge_axis(-1.0, 1.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        of.eval_kiefer(0.5, 0.5, -1.0, 2.0)
    F = of.uniform_cdf()
    with pytest.raises(DomainError):
        of.eval_fg_bridge(F, F, 1.0, 0.5, 0.5, 0.5)  # at the horizon


def test_ou_params_validation():
    with pytest.raises(DomainError):
        of.OUParams(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        of.OUParams(1.0, -2.0, 1.0)
    with pytest.raises(DomainError):
        of.OUParams(1.0, 1.0, 0.0)
    assert of.OUParams(2.0, 4.0, 4.0).stationary_variance == 0.5


def test_cdf_spec_validation():
    with pytest.raises(DomainError):
        of.CdfSpec(lambda s: 0.5 + 0.0 * s, horizon=1.0, name="offset")  # F(0) != 0
    with pytest.raises(DomainError):
        of.CdfSpec(lambda s: math.sin(4.0 * s), horizon=1.0, name="wavy")  # not monotone
    with pytest.raises(DomainError):
        of.CdfSpec(lambda s: 2.0 * s, horizon=1.0, name="steep")  # leaves [0, 1]
    with pytest.raises(DomainError):
        of.CdfSpec(lambda s: min(s / 0.25, 1.0), horizon=1.0, name="early")  # hits 1 early
    custom = of.CdfSpec(lambda s: s * s, horizon=1.0, name="square")
    assert custom(0.5) == 0.25


# --- invariants -------------------------------------------------------------


def test_symmetry_exact_on_random_pairs():
    rng = np.random.default_rng(7)
    for name, kernel in separable_catalog() + [("bivariate", of.bivariate_bridge_field())]:
        grid = interior_grid_for(kernel, 4, 4)
        lo_s, hi_s = grid.s_points[0], grid.s_points[-1]
        lo_t, hi_t = grid.t_points[0], grid.t_points[-1]
        for _ in range(1000):
            s1, s2 = rng.uniform(lo_s, hi_s, 2)
            t1, t2 = rng.uniform(lo_t, hi_t, 2)
            assert kernel.evaluate(s1, t1, s2, t2) == kernel.evaluate(s2, t2, s1, t1), name


@settings(max_examples=200, deadline=None)
@given(
    s1=st.floats(0.0, 1.0), t1=st.floats(0.0, 1.0),
    s2=st.floats(0.0, 1.0), t2=st.floats(0.0, 1.0),
)
def test_tied_down_symmetry_and_range(s1, t1, s2, t2):
    a = of.eval_tied_down_bridge(s1, t1, s2, t2)
    b = of.eval_tied_down_bridge(s2, t2, s1, t1)
    assert a == b
    assert 0.0 <= a <= 0.0625 + 1e-15


def test_psd_on_random_interior_grids():
    rng = np.random.default_rng(11)
    for name, kernel in separable_catalog() + [("bivariate", of.bivariate_bridge_field())]:
        for _ in range(3):
            n_s, n_t = rng.integers(2, 7), rng.integers(2, 7)
            base = interior_grid_for(kernel, n_s, n_t)
            grid = of.GridSpec(
                np.sort(rng.uniform(base.s_points[0], base.s_points[-1], n_s)),
                np.sort(rng.uniform(base.t_points[0], base.t_points[-1], n_t)),
            )
            cov = of.covariance_matrix(kernel, grid)
            w = np.linalg.eigvalsh(cov)
            assert w.min() >= -1e-10 * max(cov.diagonal().max(), 1e-300), name


def test_specialization_chain():
    pts = np.linspace(0.0, 1.0, 50)
    for x in pts:
        for y in pts[::7]:
            scaled = of.eval_scaled_bridge_axis(1.0, 1.0, x, y)
            bridge = min(x, y) - min(x, y) * max(x, y)
            assert scaled == pytest.approx(bridge, abs=1e-15)


def test_boundary_zeros_exact():
    assert of.eval_tied_down_bridge(0.0, 0.5, 0.3, 0.7) == 0.0
    assert of.eval_tied_down_bridge(0.3, 0.5, 1.0, 0.7) == 0.0
    assert of.eval_scaled_bridge_axis(2.0, 0.7, 1.3, 2.0) == 0.0
    assert of.eval_kiefer(0.3, 1.0, 1.0, 2.0) == 0.0
    assert of.eval_bivariate_bridge(0.0, 0.5, 0.5, 0.5) == 0.0


# --- covariance matrices ----------------------------------------------------


def test_covariance_matrix_single_point():
    grid = of.GridSpec([0.5], [0.5])
    m = of.covariance_matrix(of.tied_down_bridge_field(), grid)
    assert m.shape == (1, 1) and m[0, 0] == 0.0625


def test_covariance_matrix_zero_row_for_wiener_origin():
    grid = of.GridSpec([0.0, 0.5, 1.0], [0.25, 0.75])
    m = of.covariance_matrix(of.wiener_field(), grid)
    assert np.all(m[:2, :] == 0.0) and np.all(m[:, :2] == 0.0)  # s=0 rows/cols
    assert m[2, 2] > 0


def test_covariance_matrix_exact_symmetry_and_indexing():
    rng = np.random.default_rng(3)
    for name, kernel in separable_catalog() + [("bivariate", of.bivariate_bridge_field())]:
        grid = interior_grid_for(kernel, 4, 3)
        m = of.covariance_matrix(kernel, grid)
        assert np.array_equal(m, m.T), name
        for _ in range(10):
            p, q = rng.integers(0, grid.size, 2)
            sp, tp = grid.point(p)
            sq, tq = grid.point(q)
            assert m[p, q] == kernel.evaluate(sp, tp, sq, tq), name


def test_covariance_matrix_matches_kronecker_of_axis_matrices():
    for name, kernel in separable_catalog():
        grid = interior_grid_for(kernel, 5, 5)
        dense = of.covariance_matrix(kernel, grid)
        ks = kernel.s_axis.matrix(grid.s_points)
        kt = kernel.t_axis.matrix(grid.t_points)
        assert np.abs(np.kron(kernel.scale * ks, kt) - dense).max() <= 1e-12, name


def test_covariance_matrix_domain_violation_propagates():
    grid = of.GridSpec([0.5, 1.5], [0.5])
    with pytest.raises(DomainError):
        of.covariance_matrix(of.tied_down_bridge_field(), grid)
