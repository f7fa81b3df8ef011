"""Seeded samplers for synthetic manifolds, their regularity, and noise.

Kinds: ball, sphere, spherical_cap, circle, swiss_roll, torus. Samplers
are deterministic functions of (spec, n, seed) built on the counter-based
Philox generator, so per-trial streams can be derived from a master seed
without any coupling to scheduling.

Regularity parameters are available in closed form for the ball, circle,
sphere, and spherical cap. The swiss roll and torus are comparison-only
manifolds (estimator benchmarks, never bound computations).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .bounds import RegularityParams
from .errors import RejectionBudgetError
from .kernel import PointCloud

__all__ = [
    "ManifoldSpec",
    "NoiseSpec",
    "MANIFOLD_KINDS",
    "ball",
    "sphere",
    "spherical_cap",
    "circle",
    "swiss_roll",
    "torus",
    "sample",
    "cap_fraction",
    "regularity_of",
    "add_noise",
    "derive_rng",
    "save_cloud_csv",
    "load_cloud_csv",
]

MANIFOLD_KINDS = ("ball", "sphere", "spherical_cap", "circle", "swiss_roll", "torus")

# swiss roll parameter ranges (conventional; density along u is non-uniform)
_ROLL_U = (1.5 * math.pi, 4.5 * math.pi)
_ROLL_V = (0.0, 21.0)

_MIN_ACCEPT = 1e-3  # rejection samplers refuse below this acceptance probability
_BATCH = 4096


@dataclass(frozen=True)
class ManifoldSpec:
    """One synthetic manifold with its shape parameters.

    ``radius`` is the main radius R; ``r_minor`` only matters for the
    torus and ``cap_angle`` (radians, measured from the pole) only for
    the spherical cap. Prefer the factory functions over direct
    construction.
    """

    kind: str
    d: int
    radius: float = 1.0
    r_minor: float = 0.5
    cap_angle: float = 0.3

    def __post_init__(self):
        if self.kind not in MANIFOLD_KINDS:
            raise ValueError(f"unknown manifold kind {self.kind!r}")
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"intrinsic dimension must be a positive integer, got {self.d}")
        if not self.radius > 0:
            raise ValueError(f"radius must be > 0, got {self.radius}")
        if self.kind == "torus":
            if not 0 < self.r_minor < self.radius:
                raise ValueError(
                    f"torus needs 0 < r_minor < radius, got r_minor={self.r_minor}, radius={self.radius}"
                )
            if self.d != 2:
                raise ValueError("torus is 2-dimensional")
        if self.kind == "spherical_cap" and not 0 < self.cap_angle <= math.pi:
            raise ValueError(f"cap_angle must lie in (0, pi], got {self.cap_angle}")
        if self.kind == "circle" and self.d != 1:
            raise ValueError("circle is 1-dimensional")
        if self.kind == "swiss_roll" and self.d != 2:
            raise ValueError("swiss roll is 2-dimensional")

    @property
    def ambient_dim(self) -> int:
        if self.kind == "ball":
            return self.d
        if self.kind in ("sphere", "spherical_cap"):
            return self.d + 1
        if self.kind == "circle":
            return 2
        return 3  # swiss_roll, torus

    @property
    def reference_point(self) -> np.ndarray:
        """Canonical evaluation point: ball center, cap/sphere pole,
        torus outer equator point, roll mid-sheet point."""
        N = self.ambient_dim
        x0 = np.zeros(N)
        if self.kind in ("sphere", "spherical_cap"):
            x0[N - 1] = self.radius
        elif self.kind == "circle":
            x0[0] = self.radius
        elif self.kind == "torus":
            x0[0] = self.radius + self.r_minor
        elif self.kind == "swiss_roll":
            u = 3.0 * math.pi
            x0[:] = (u * math.cos(u), 0.5 * (_ROLL_V[0] + _ROLL_V[1]), u * math.sin(u))
        return x0

    @property
    def regularity(self) -> RegularityParams:
        return regularity_of(self)


def ball(d: int, radius: float = 1.0) -> ManifoldSpec:
    return ManifoldSpec(kind="ball", d=d, radius=radius)


def sphere(d: int, radius: float = 1.0) -> ManifoldSpec:
    return ManifoldSpec(kind="sphere", d=d, radius=radius)


def spherical_cap(d: int, radius: float = 1.0, cap_angle: float = 0.3) -> ManifoldSpec:
    return ManifoldSpec(kind="spherical_cap", d=d, radius=radius, cap_angle=cap_angle)


def circle(radius: float = 1.0) -> ManifoldSpec:
    return ManifoldSpec(kind="circle", d=1, radius=radius)


def swiss_roll() -> ManifoldSpec:
    return ManifoldSpec(kind="swiss_roll", d=2)


def torus(radius: float = 2.0, r_minor: float = 0.5) -> ManifoldSpec:
    return ManifoldSpec(kind="torus", d=2, radius=radius, r_minor=r_minor)


@dataclass(frozen=True)
class NoiseSpec:
    """Ambient Gaussian noise N(0, sigma^2 I_N) with its own seed."""

    sigma: float
    ambient_dim: int
    seed: int

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")


def derive_rng(master_seed: int, *key: int) -> np.random.Generator:
    """Philox stream keyed by (master_seed, *key).

    Distinct keys give statistically independent streams; the same key
    reproduces the same stream on any machine or thread schedule.
    """
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def _rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))


def _unit_rows(g: np.ndarray) -> np.ndarray:
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _sin_power_integral(power: int, upper: float) -> float:
    """integral of sin^power(phi) d phi over [0, upper], Gauss-Legendre."""
    nodes, weights = np.polynomial.legendre.leggauss(64)
    phi = 0.5 * upper * (nodes + 1.0)
    return float(0.5 * upper * np.sum(weights * np.sin(phi) ** power))


def cap_fraction(d: int, cap_angle: float) -> float:
    """Fraction of the d-sphere's area lying within cap_angle of the pole."""
    return _sin_power_integral(d - 1, cap_angle) / _sin_power_integral(d - 1, math.pi)


def sample(spec: ManifoldSpec, n: int, seed) -> PointCloud:
    """Draw n i.i.d. samples from the manifold's uniform surface measure.

    (The swiss roll uses the conventional roll map, whose induced density
    is non-uniform; it exists for estimator comparisons only.)

    ``seed`` may be an int, a SeedSequence, or a Generator from
    :func:`derive_rng`.

    Raises
    ------
    RejectionBudgetError
        If a rejection sampler's acceptance probability is below 1e-3
        (tiny spherical caps).
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"need n >= 1 samples, got {n}")
    rng = _rng_from(seed)
    R = spec.radius
    if spec.kind == "ball":
        dirs = _unit_rows(rng.standard_normal((n, spec.d)))
        radii = R * rng.random((n, 1)) ** (1.0 / spec.d)
        return PointCloud(dirs * radii)
    if spec.kind == "sphere":
        return PointCloud(R * _unit_rows(rng.standard_normal((n, spec.d + 1))))
    if spec.kind == "spherical_cap":
        accept = cap_fraction(spec.d, spec.cap_angle)
        if accept < _MIN_ACCEPT:
            raise RejectionBudgetError(
                f"cap acceptance probability {accept:.3g} < {_MIN_ACCEPT:g}; "
                "cap too small for rejection sampling"
            )
        cos_cap = math.cos(spec.cap_angle)
        rows = []
        have = 0
        while have < n:
            cand = R * _unit_rows(rng.standard_normal((_BATCH, spec.d + 1)))
            keep = cand[cand[:, -1] >= R * cos_cap]
            rows.append(keep)
            have += keep.shape[0]
        return PointCloud(np.concatenate(rows)[:n])
    if spec.kind == "circle":
        phi = 2.0 * math.pi * rng.random(n)
        return PointCloud(np.column_stack((R * np.cos(phi), R * np.sin(phi))))
    if spec.kind == "swiss_roll":
        u = _ROLL_U[0] + (_ROLL_U[1] - _ROLL_U[0]) * rng.random(n)
        v = _ROLL_V[0] + (_ROLL_V[1] - _ROLL_V[0]) * rng.random(n)
        return PointCloud(np.column_stack((u * np.cos(u), v, u * np.sin(u))))
    # torus: theta (tube angle) by rejection against the radius weight,
    # phi uniform; acceptance probability >= R/(R + r_minor) > 1/2
    r = spec.r_minor
    thetas = []
    have = 0
    while have < n:
        cand = 2.0 * math.pi * rng.random(_BATCH)
        u = rng.random(_BATCH)
        keep = cand[u <= (R + r * np.cos(cand)) / (R + r)]
        thetas.append(keep)
        have += keep.shape[0]
    theta = np.concatenate(thetas)[:n]
    phi = 2.0 * math.pi * rng.random(n)
    ring = R + r * np.cos(theta)
    return PointCloud(np.column_stack((ring * np.cos(phi), ring * np.sin(phi), r * np.sin(theta))))


def regularity_of(spec: ManifoldSpec, profile: str = "generic") -> RegularityParams:
    """Closed-form RegularityParams at the manifold's reference point.

    ``profile="generic"`` uses the second-fundamental-form values
    (L, M, r) = (1/R, 1/R^2, R/2) for curved kinds and L = M = 0 for the
    ball. ``profile="reference_cap"`` substitutes the fixed cap constants
    L = 0.05, M = 0.005 (calibrated for R = 10) on a spherical_cap spec.

    Densities are uniform, so kappa = 0 and p_x = 1/volume.

    Raises
    ------
    ValueError
        For swiss_roll/torus (no closed-form parameters; comparison-only)
        or an unknown profile.
    """
    if profile not in ("generic", "reference_cap"):
        raise ValueError(f"unknown regularity profile {profile!r}")
    if profile == "reference_cap" and spec.kind != "spherical_cap":
        raise ValueError("profile 'reference_cap' applies only to spherical_cap specs")
    R = spec.radius
    d = spec.d
    if spec.kind == "ball":
        volume = math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0) * R ** d
        return RegularityParams(
            L=0.0, M=0.0, r=R, kappa=0.0, p_x=1.0 / volume, d=d, boundary_dist=R
        )
    if spec.kind == "circle":
        return RegularityParams(
            L=1.0 / R, M=1.0 / R ** 2, r=R / 2.0, kappa=0.0,
            p_x=1.0 / (2.0 * math.pi * R), d=1,
        )
    if spec.kind == "sphere":
        area = 2.0 * math.pi ** ((d + 1) / 2.0) / math.gamma((d + 1) / 2.0) * R ** d
        return RegularityParams(
            L=1.0 / R, M=1.0 / R ** 2, r=R / 2.0, kappa=0.0, p_x=1.0 / area, d=d,
        )
    if spec.kind == "spherical_cap":
        area = 2.0 * math.pi ** ((d + 1) / 2.0) / math.gamma((d + 1) / 2.0) * R ** d
        area *= cap_fraction(d, spec.cap_angle)
        L, M = (0.05, 0.005) if profile == "reference_cap" else (1.0 / R, 1.0 / R ** 2)
        # chord from the pole to the cap rim bounds the ambient radius
        # within which the chart never leaves the cap
        chord = 2.0 * R * math.sin(spec.cap_angle / 2.0)
        return RegularityParams(
            L=L, M=M, r=R / 2.0, kappa=0.0, p_x=1.0 / area, d=d, boundary_dist=chord
        )
    raise ValueError(
        f"{spec.kind} has no closed-form regularity parameters (comparison-only manifold)"
    )


def add_noise(cloud: PointCloud, noise: NoiseSpec) -> PointCloud:
    """Add i.i.d. ambient Gaussian noise; sigma = 0 returns the cloud unchanged."""
    if noise.ambient_dim != cloud.N:
        raise ValueError(
            f"noise ambient_dim {noise.ambient_dim} != cloud ambient dimension {cloud.N}"
        )
    if noise.sigma == 0.0:
        return PointCloud(cloud.points)
    rng = _rng_from(noise.seed)
    return PointCloud(cloud.points + noise.sigma * rng.standard_normal(cloud.points.shape))


def save_cloud_csv(cloud: PointCloud, path) -> None:
    """Write a cloud as CSV: header x0..x{N-1}, 17 significant digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x{j}" for j in range(cloud.N)])
        for row in cloud.points:
            writer.writerow([f"{v:.17g}" for v in row])


def load_cloud_csv(path) -> PointCloud:
    """Read a cloud written by :func:`save_cloud_csv` (or any headered CSV)."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2, dtype=np.float64)
    return PointCloud(data)
