"""Grid construction and the two bandwidth selectors."""

import math

import numpy as np
import pytest

from dimest import (
    DEFAULT_DELTA,
    DEFAULT_GRID_SIZE,
    DegenerateGeometryError,
    ball,
    derive_rng,
    local_dim_estimate,
    make_grid,
    sample,
    select_bandwidth_curvature,
    select_bandwidth_slope_max,
    squared_distances,
)
from dimest.kernel import log_kernel_sum_from_sq

_LOG2 = math.log(2.0)


def ball_cloud(n=400, d=3, seed=5):
    cloud = sample(ball(d), n, derive_rng(seed, 0))
    return cloud, np.zeros(d)


# ---------------------------------------------------------------------------
# grid construction


def test_make_grid_span_and_spacing():
    cloud, x = ball_cloud()
    grid = make_grid(cloud, x)
    sq = squared_distances(x, cloud)
    q01, q99 = np.quantile(sq, [0.01, 0.99])
    assert grid.shape == (DEFAULT_GRID_SIZE,)
    assert math.isclose(grid[0], q01 / 4.0, rel_tol=1e-12)
    assert math.isclose(grid[-1], 4.0 * q99, rel_tol=1e-12)
    steps = np.diff(np.log(grid))
    assert np.allclose(steps, steps[0], rtol=0, atol=1e-9)


def test_make_grid_respects_count():
    cloud, x = ball_cloud(n=50)
    assert make_grid(cloud, x, count=8).size == 8
    assert make_grid(cloud, x, count=200).size == 200
    with pytest.raises(ValueError):
        make_grid(cloud, x, count=7)


def test_make_grid_with_coincident_mass():
    # half the samples sit exactly on x: q01 of the squared distances is 0
    # and the smallest positive distance must take its place
    pts = np.vstack([np.zeros((50, 2)), np.full((50, 2), 1.0)])
    x = np.zeros(2)
    grid = make_grid(pts, x)
    assert np.all(grid > 0)
    assert math.isclose(grid[0], 2.0 / 4.0, rel_tol=1e-12)  # |.|^2 = 2 for (1,1)


def test_make_grid_all_coincident_raises():
    with pytest.raises(DegenerateGeometryError):
        make_grid(np.zeros((10, 2)), np.zeros(2))


# ---------------------------------------------------------------------------
# scan mechanics


def test_selected_dhat_matches_local_estimator_bitwise():
    cloud, x = ball_cloud()
    grid = make_grid(cloud, x)
    for scan in (
        select_bandwidth_curvature(x, cloud, grid),
        select_bandwidth_slope_max(x, cloud, grid),
    ):
        est = local_dim_estimate(x, cloud, scan.t_star)
        assert scan.d_hat == est.d_hat


def test_chosen_index_is_first_argmax():
    cloud, x = ball_cloud()
    grid = make_grid(cloud, x)
    scan_c = select_bandwidth_curvature(x, cloud, grid)
    assert scan_c.chosen_index == int(np.argmax(scan_c.rho))
    scan_s = select_bandwidth_slope_max(x, cloud, grid)
    assert scan_s.chosen_index == int(np.argmax(scan_s.slope))
    # duplicated bandwidths produce an exact tie; the smaller index wins
    t_best = scan_c.t_star
    tied = np.array([t_best, t_best, 4.0 * t_best])
    scan_tied = select_bandwidth_curvature(x, cloud, tied)
    assert scan_tied.rho[0] == scan_tied.rho[1]
    if scan_tied.rho[0] >= scan_tied.rho[2]:
        assert scan_tied.chosen_index == 0


def test_rho_identity_and_delta():
    cloud, x = ball_cloud(n=120)
    grid = make_grid(cloud, x, count=16)
    delta = 0.05
    scan = select_bandwidth_curvature(x, cloud, grid, delta=delta)
    assert scan.delta == delta
    assert np.array_equal(scan.rho, scan.G1 / (np.abs(scan.G2) + delta))
    default = select_bandwidth_slope_max(x, cloud, grid)
    assert default.delta == DEFAULT_DELTA


def test_slope_and_G_columns_match_kernel_sums():
    cloud, x = ball_cloud(n=80)
    grid = make_grid(cloud, x, count=12)
    scan = select_bandwidth_slope_max(x, cloud, grid)
    sq = squared_distances(x, cloud)
    for j in (0, 5, 11):
        t = float(grid[j])
        g_t = log_kernel_sum_from_sq(sq, t)
        g_2t = log_kernel_sum_from_sq(sq, 2.0 * t)
        assert scan.G[j] == g_t
        assert scan.slope[j] == (g_2t - g_t) / _LOG2
    assert np.array_equal(scan.S, np.exp(scan.G))


def test_scan_record_shapes_and_labels():
    cloud, x = ball_cloud(n=60)
    grid = make_grid(cloud, x, count=10)
    scan = select_bandwidth_curvature(x, cloud, grid)
    for arr in (scan.grid, scan.S, scan.G, scan.G1, scan.G2, scan.rho, scan.slope):
        assert arr.shape == (10,)
    assert scan.method == "gaussian_curvature"
    assert scan.t_star == float(scan.grid[scan.chosen_index])
    assert scan.d_hat >= 0.0
    assert select_bandwidth_slope_max(x, cloud, grid).method == "gaussian_slope_max"


def test_grid_and_delta_validation():
    cloud, x = ball_cloud(n=30)
    with pytest.raises(ValueError):
        select_bandwidth_curvature(x, cloud, [])
    with pytest.raises(ValueError):
        select_bandwidth_curvature(x, cloud, [0.1, 0.0, 0.2])
    with pytest.raises(ValueError):
        select_bandwidth_curvature(x, cloud, [[0.1, 0.2]])
    grid = [0.05, 0.1, 0.2]  # plain lists are fine
    select_bandwidth_curvature(x, cloud, grid)
    with pytest.raises(ValueError):
        select_bandwidth_curvature(x, cloud, grid, delta=0.0)
    with pytest.raises(ValueError):
        select_bandwidth_curvature(x, cloud, grid, delta=-1e-3)


# ---------------------------------------------------------------------------
# behavior


def test_both_selectors_recover_ball_dimension():
    cloud, x = ball_cloud(n=4000, d=3, seed=9)
    grid = make_grid(cloud, x)
    for select in (select_bandwidth_curvature, select_bandwidth_slope_max):
        scan = select(x, cloud, grid)
        assert abs(scan.d_hat - 3.0) <= 0.5, scan.method


def test_two_point_cloud_scans():
    pts = np.array([[0.0, 0.0], [1.0, 0.0]])
    x = np.zeros(2)
    grid = make_grid(pts, x)
    scan = select_bandwidth_curvature(x, pts, grid)
    assert math.isfinite(scan.d_hat)
    assert scan.d_hat >= 0.0
