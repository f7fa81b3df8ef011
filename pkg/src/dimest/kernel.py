"""Gaussian kernel sums and their log-bandwidth derivatives.

Conventions
-----------
 - The kernel is K_t(x, y) = exp(-||x - y||^2 / t) with t > 0 the *squared*
   bandwidth scale, so K_a * K_b = K_{ab/(a+b)} pointwise.
 - A point cloud is an (n, N) array: n samples, ambient dimension N.
 - S(x, t) = (1/n) * sum_i K_t(x, X_i) is the normalized kernel sum.
   All routines work on log S internally; sums of exponentials are
   max-shifted so S far below the smallest positive double still has a
   finite, accurate logarithm.
 - G(log t) = log S(x, exp(log t)). Its first two derivatives in log t
   have closed forms in the softmax weights w_i over u_i = ||x - X_i||^2 / t:

       G'  = <u>_w
       G'' = <u^2 - u>_w - <u>_w^2

   These drive the curvature-ratio bandwidth selector.

Squared distances are computed once per (x, cloud) pair and reused across
bandwidths; the ``*_from_sq`` variants take the precomputed vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PointCloud",
    "KernelEval",
    "as_points",
    "gaussian_kernel",
    "squared_distances",
    "log_kernel_sum",
    "log_kernel_sum_from_sq",
    "g_derivatives",
    "g_derivatives_from_sq",
]


@dataclass(frozen=True)
class PointCloud:
    """Immutable (n, N) sample array with light validation.

    Parameters
    ----------
    points : array_like
        Two dimensional, finite, at least one row and one column.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise ValueError(f"point cloud must be 2-d, got shape {pts.shape}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError(f"point cloud must be non-empty, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point cloud contains non-finite values")
        pts = pts.copy()
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        """Number of samples."""
        return self.points.shape[0]

    @property
    def N(self) -> int:
        """Ambient dimension."""
        return self.points.shape[1]


@dataclass(frozen=True)
class KernelEval:
    """Normalized kernel sum at one bandwidth.

    ``S = exp(log_S)``; ``log_S`` is the primary value and stays finite
    even when ``S`` underflows to zero.
    """

    t: float
    log_S: float
    S: float


def as_points(cloud) -> np.ndarray:
    """Coerce a PointCloud or array_like to a validated (n, N) float array."""
    if isinstance(cloud, PointCloud):
        return cloud.points
    return PointCloud(np.asarray(cloud)).points


def _as_point(x, N: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.shape[0] != N:
        raise ValueError(f"evaluation point has dimension {x.shape[0]}, cloud has {N}")
    if not np.all(np.isfinite(x)):
        raise ValueError("evaluation point contains non-finite values")
    return x


def _check_t(t: float) -> float:
    t = float(t)
    if not (t > 0) or not math.isfinite(t):
        raise ValueError(f"bandwidth t must be positive and finite, got {t}")
    return t


def gaussian_kernel(x, y, t: float) -> float:
    """Evaluate K_t(x, y) = exp(-||x - y||^2 / t).

    Returns 1.0 exactly iff x == y. Underflows to 0.0 for distant pairs;
    use :func:`log_kernel_sum` when the logarithm is what matters.
    """
    t = _check_t(t)
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if x.shape != y.shape:
        raise ValueError(f"point shapes differ: {x.shape} vs {y.shape}")
    d2 = float(np.dot(x - y, x - y))
    return math.exp(-d2 / t)


def squared_distances(x, cloud) -> np.ndarray:
    """Squared Euclidean distances from ``x`` to every cloud sample.

    This is the quantity every bandwidth shares; compute it once and pass
    the result to the ``*_from_sq`` routines when scanning a grid.
    """
    pts = as_points(cloud)
    x = _as_point(x, pts.shape[1])
    diff = pts - x
    # einsum keeps one pass and avoids the catastrophic cancellation of
    # the expanded  ||a||^2 + ||b||^2 - 2ab  form near coincident points.
    return np.einsum("ij,ij->i", diff, diff)


def _log_mean_exp(neg_u: np.ndarray) -> float:
    """log((1/n) * sum exp(neg_u)) with a max shift."""
    m = float(np.max(neg_u))
    return m + math.log(float(np.sum(np.exp(neg_u - m)))) - math.log(neg_u.shape[0])


def log_kernel_sum_from_sq(sq: np.ndarray, t: float) -> float:
    """log S given precomputed squared distances."""
    t = _check_t(t)
    return _log_mean_exp(-np.asarray(sq, dtype=np.float64) / t)


def log_kernel_sum(x, cloud, t: float) -> KernelEval:
    """Normalized kernel sum S(x, t) = (1/n) sum_i K_t(x, X_i), in log space.

    Parameters
    ----------
    x : array_like
        Evaluation point, length equal to the cloud's ambient dimension.
    cloud : PointCloud or array_like
        Sample array, shape (n, N).
    t : float
        Bandwidth, > 0.

    Returns
    -------
    KernelEval
        ``log_S`` is exact to working precision even when every kernel
        term underflows; ``S = exp(log_S)`` may be 0.0 in that case.
    """
    sq = squared_distances(x, cloud)
    log_S = log_kernel_sum_from_sq(sq, t)
    return KernelEval(t=float(t), log_S=log_S, S=math.exp(log_S))


def g_derivatives_from_sq(sq: np.ndarray, log_t: float) -> tuple[float, float, float]:
    """(G, G', G'') in log-bandwidth given precomputed squared distances."""
    log_t = float(log_t)
    sq = np.asarray(sq, dtype=np.float64)
    u = sq * math.exp(-log_t)
    m = float(np.min(u))
    w = np.exp(m - u)  # softmax weights before normalization
    Z = float(np.sum(w))
    G = -m + math.log(Z) - math.log(u.shape[0])
    w /= Z
    g1 = float(np.dot(w, u))
    g2 = float(np.dot(w, u * u - u)) - g1 * g1
    return G, g1, g2


def g_derivatives(x, cloud, log_t: float) -> tuple[float, float, float]:
    """G(log t) = log S(x, e^{log t}) and its first two log-t derivatives.

    The derivatives are exact expressions, not finite differences:
    with softmax weights w_i proportional to exp(-u_i), u_i = ||x-X_i||^2/t,

        G'  = sum_i w_i u_i
        G'' = sum_i w_i (u_i^2 - u_i) - (sum_i w_i u_i)^2

    Weights are formed in log space, so a cloud whose nearest sample sits
    at u = 1e4 still yields finite values.

    Returns
    -------
    (G, G1, G2) : tuple of float
    """
    sq = squared_distances(x, cloud)
    return g_derivatives_from_sq(sq, log_t)
