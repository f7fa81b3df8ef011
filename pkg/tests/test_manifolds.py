"""Samplers, their geometry, regularity profiles, noise, and cloud I/O."""

import math

import numpy as np
import pytest
import scipy.integrate

from dimest import (
    MANIFOLD_KINDS,
    ManifoldSpec,
    NoiseSpec,
    RejectionBudgetError,
    add_noise,
    ball,
    circle,
    derive_rng,
    load_cloud_csv,
    regularity_of,
    sample,
    save_cloud_csv,
    sphere,
    spherical_cap,
    swiss_roll,
    torus,
)
from dimest.manifolds import _ROLL_U, _ROLL_V, cap_fraction

ALL_SPECS = (
    ball(3),
    sphere(2, radius=1.7),
    spherical_cap(2, radius=10.0, cap_angle=0.3),
    circle(radius=2.0),
    swiss_roll(),
    torus(radius=2.0, r_minor=0.5),
)


# ---------------------------------------------------------------------------
# spec validation


def test_spec_rejects_bad_shapes():
    with pytest.raises(ValueError):
        ManifoldSpec(kind="klein_bottle", d=2)
    with pytest.raises(ValueError):
        ManifoldSpec(kind="ball", d=0)
    with pytest.raises(ValueError):
        ManifoldSpec(kind="ball", d=2, radius=-1.0)
    with pytest.raises(ValueError):
        ManifoldSpec(kind="torus", d=2, radius=1.0, r_minor=1.0)
    with pytest.raises(ValueError):
        ManifoldSpec(kind="torus", d=3)
    with pytest.raises(ValueError):
        ManifoldSpec(kind="spherical_cap", d=2, cap_angle=0.0)
    with pytest.raises(ValueError):
        ManifoldSpec(kind="spherical_cap", d=2, cap_angle=4.0)
    with pytest.raises(ValueError):
        ManifoldSpec(kind="circle", d=2)
    with pytest.raises(ValueError):
        ManifoldSpec(kind="swiss_roll", d=3)


def test_factories_cover_all_kinds():
    assert {s.kind for s in ALL_SPECS} == set(MANIFOLD_KINDS)


def test_ambient_dimensions():
    want = {"ball": 3, "sphere": 3, "spherical_cap": 3, "circle": 2,
            "swiss_roll": 3, "torus": 3}
    for spec in ALL_SPECS:
        assert spec.ambient_dim == want[spec.kind]
        cloud = sample(spec, 40, 0)
        assert cloud.N == spec.ambient_dim
        assert cloud.n == 40


def test_sample_rejects_nonpositive_n():
    with pytest.raises(ValueError):
        sample(ball(2), 0, 0)


# ---------------------------------------------------------------------------
# points land on the manifold


def test_sphere_points_have_exact_radius():
    spec = sphere(2, radius=1.7)
    pts = sample(spec, 500, 1).points
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.7, atol=1e-12, rtol=0)


def test_cap_points_stay_inside_cap():
    spec = spherical_cap(2, radius=10.0, cap_angle=0.3)
    pts = sample(spec, 500, 2).points
    assert np.allclose(np.linalg.norm(pts, axis=1), 10.0, atol=1e-11, rtol=0)
    assert np.all(pts[:, -1] >= 10.0 * math.cos(0.3) - 1e-9)


def test_ball_points_fill_the_interior():
    pts = sample(ball(3, radius=2.0), 2000, 3).points
    norms = np.linalg.norm(pts, axis=1)
    assert np.all(norms <= 2.0 + 1e-12)
    # uniform volume measure: the inner half-radius ball holds ~1/8 of points
    inner = np.mean(norms <= 1.0)
    assert 0.08 <= inner <= 0.18


def test_circle_points():
    pts = sample(circle(radius=2.0), 300, 4).points
    assert pts.shape == (300, 2)
    assert np.allclose(np.hypot(pts[:, 0], pts[:, 1]), 2.0, atol=1e-12, rtol=0)


def test_torus_points_satisfy_tube_identity():
    R, r = 2.0, 0.5
    pts = sample(torus(R, r), 800, 5).points
    ring = np.hypot(pts[:, 0], pts[:, 1])
    tube = (ring - R) ** 2 + pts[:, 2] ** 2
    assert np.allclose(tube, r * r, atol=1e-10, rtol=0)


def test_swiss_roll_points_lie_on_the_spiral():
    pts = sample(swiss_roll(), 800, 6).points
    u = np.hypot(pts[:, 0], pts[:, 2])
    assert np.all(u >= _ROLL_U[0] - 1e-9)
    assert np.all(u <= _ROLL_U[1] + 1e-9)
    assert np.allclose(pts[:, 0], u * np.cos(u), atol=1e-9, rtol=0)
    assert np.allclose(pts[:, 2], u * np.sin(u), atol=1e-9, rtol=0)
    assert np.all((pts[:, 1] >= _ROLL_V[0]) & (pts[:, 1] <= _ROLL_V[1]))


def test_reference_points_lie_on_their_manifolds():
    assert np.array_equal(ball(3).reference_point, np.zeros(3))
    assert np.array_equal(sphere(2, radius=1.7).reference_point,
                          np.array([0.0, 0.0, 1.7]))
    cap = spherical_cap(2, radius=10.0, cap_angle=0.3)
    assert np.array_equal(cap.reference_point, np.array([0.0, 0.0, 10.0]))
    assert np.array_equal(circle(2.0).reference_point, np.array([2.0, 0.0]))
    tor = torus(2.0, 0.5).reference_point
    assert np.allclose(tor, [2.5, 0.0, 0.0], atol=0, rtol=0)
    roll = swiss_roll().reference_point
    u = 3.0 * math.pi
    assert np.allclose(roll, [u * math.cos(u), 10.5, u * math.sin(u)], atol=1e-12)
    assert math.isclose(roll[0], -3.0 * math.pi, rel_tol=1e-15)
    assert roll[1] == 10.5
    assert abs(roll[2]) < 1e-12


# ---------------------------------------------------------------------------
# cap area fraction


def test_cap_fraction_closed_forms():
    for theta in (0.1, 0.3, 1.0, 2.0, math.pi):
        assert math.isclose(cap_fraction(1, theta), theta / math.pi, rel_tol=1e-12)
        assert math.isclose(cap_fraction(2, theta), (1 - math.cos(theta)) / 2,
                            rel_tol=1e-12)
        assert math.isclose(cap_fraction(3, theta),
                            (theta - math.sin(theta) * math.cos(theta)) / math.pi,
                            rel_tol=1e-11)


def test_cap_fraction_quadrature_oracle():
    for d in (2, 3, 5, 8):
        num, _ = scipy.integrate.quad(lambda p: math.sin(p) ** (d - 1), 0.0, 0.7)
        den, _ = scipy.integrate.quad(lambda p: math.sin(p) ** (d - 1), 0.0, math.pi)
        assert math.isclose(cap_fraction(d, 0.7), num / den, rel_tol=1e-10)


def test_tiny_cap_refused_before_any_draw():
    spec = spherical_cap(3, cap_angle=0.1)
    assert cap_fraction(3, 0.1) < 1e-3
    rng = derive_rng(77)
    with pytest.raises(RejectionBudgetError):
        sample(spec, 5, rng)
    # the refusal must consume no randomness
    assert rng.random() == derive_rng(77).random()


# ---------------------------------------------------------------------------
# determinism and noise


def test_samplers_are_deterministic_in_the_seed():
    for spec in ALL_SPECS:
        a = sample(spec, 64, 7).points
        b = sample(spec, 64, 7).points
        c = sample(spec, 64, 8).points
        assert np.array_equal(a, b), spec.kind
        assert not np.array_equal(a, c), spec.kind


def test_derive_rng_streams():
    assert derive_rng(1, 2, 3).random() == derive_rng(1, 2, 3).random()
    assert derive_rng(1, 2, 3).random() != derive_rng(1, 2, 4).random()
    assert derive_rng(1).random() != derive_rng(2).random()


def test_generator_seed_matches_derive_rng():
    a = sample(ball(2), 10, derive_rng(11, 0)).points
    b = sample(ball(2), 10, derive_rng(11, 0)).points
    assert np.array_equal(a, b)


def test_add_noise_zero_sigma_is_identity():
    cloud = sample(sphere(2), 50, 9)
    noisy = add_noise(cloud, NoiseSpec(sigma=0.0, ambient_dim=3, seed=1))
    assert noisy is not cloud
    assert np.array_equal(noisy.points, cloud.points)


def test_add_noise_seeded_and_shaped():
    cloud = sample(sphere(2), 50, 9)
    spec = NoiseSpec(sigma=0.15, ambient_dim=3, seed=21)
    a = add_noise(cloud, spec).points
    b = add_noise(cloud, spec).points
    assert np.array_equal(a, b)
    assert not np.array_equal(a, cloud.points)
    shift = np.linalg.norm(a - cloud.points, axis=1)
    assert np.all(shift > 0)
    assert np.mean(shift) < 1.0  # sigma 0.15 in 3 ambient dims
    with pytest.raises(ValueError):
        add_noise(cloud, NoiseSpec(sigma=0.1, ambient_dim=2, seed=1))
    with pytest.raises(ValueError):
        NoiseSpec(sigma=-0.1, ambient_dim=3, seed=1)


def test_cloud_csv_round_trip_is_exact(tmp_path):
    cloud = sample(torus(), 30, 13)
    path = tmp_path / "cloud.csv"
    save_cloud_csv(cloud, path)
    back = load_cloud_csv(path)
    assert np.array_equal(back.points, cloud.points)
    header = path.read_text().splitlines()[0]
    assert header == "x0,x1,x2"


# ---------------------------------------------------------------------------
# regularity profiles


def test_ball_regularity():
    reg = regularity_of(ball(3, radius=2.0))
    volume = 4.0 / 3.0 * math.pi * 8.0
    assert reg.L == 0.0 and reg.M == 0.0 and reg.kappa == 0.0
    assert reg.r == 2.0 and reg.boundary_dist == 2.0
    assert math.isclose(reg.p_x, 1.0 / volume, rel_tol=1e-12)
    assert reg.d == 3


def test_sphere_circle_regularity():
    reg = regularity_of(sphere(2, radius=1.5))
    assert math.isclose(reg.L, 1 / 1.5, rel_tol=1e-12)
    assert math.isclose(reg.M, 1 / 1.5**2, rel_tol=1e-12)
    assert reg.r == 0.75
    assert math.isclose(reg.p_x, 1.0 / (4.0 * math.pi * 1.5**2), rel_tol=1e-12)
    assert reg.boundary_dist == math.inf
    creg = regularity_of(circle(radius=2.0))
    assert creg.d == 1
    assert math.isclose(creg.p_x, 1.0 / (4.0 * math.pi), rel_tol=1e-12)
    assert creg.L == 0.5 and creg.M == 0.25 and creg.r == 1.0


def test_cap_regularity_profiles():
    spec = spherical_cap(2, radius=10.0, cap_angle=0.3)
    generic = regularity_of(spec)
    area = 4.0 * math.pi * 100.0 * cap_fraction(2, 0.3)
    assert math.isclose(generic.p_x, 1.0 / area, rel_tol=1e-12)
    assert generic.L == 0.1 and generic.M == 0.01
    chord = 20.0 * math.sin(0.15)
    assert math.isclose(generic.boundary_dist, chord, rel_tol=1e-12)
    reference = regularity_of(spec, profile="reference_cap")
    assert reference.L == 0.05 and reference.M == 0.005
    assert reference.p_x == generic.p_x
    assert reference.boundary_dist == generic.boundary_dist


def test_regularity_refusals():
    with pytest.raises(ValueError):
        regularity_of(ball(3), profile="reference_cap")
    with pytest.raises(ValueError):
        regularity_of(ball(3), profile="strict")
    with pytest.raises(ValueError):
        regularity_of(torus())
    with pytest.raises(ValueError):
        regularity_of(swiss_roll())


def test_spec_regularity_property_matches_function():
    spec = sphere(2, radius=1.5)
    assert spec.regularity == regularity_of(spec)
