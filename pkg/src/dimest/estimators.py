"""Intrinsic dimension point estimators.

Four estimators share the DimEstimate record:

 - ``gaussian_local``: doubling slope of the kernel sum at a point,
   d_hat = 2 * (log S(x, 2t) - log S(x, t)) / log 2.
 - ``gaussian_global``: same idea on the full double sum over the cloud
   (diagonal included), slope taken between two bandwidths.
 - ``correlation_integral``: fraction of ordered pairs within radius r
   (diagonal included, so C(r) >= 1/n always).
 - ``knn_ratio``: d_hat = log 2 / log(r_k / r_{ceil(k/2)}) from neighbor
   radii at a point.

Pairwise passes run in fixed-size row blocks so n = 1e5 clouds fit in
memory; block order is fixed, which keeps results bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError
from .kernel import as_points, _as_point, _check_t, log_kernel_sum_from_sq, squared_distances

__all__ = [
    "DimEstimate",
    "local_dim_estimate",
    "global_dim_estimate",
    "correlation_integral",
    "knn_dim_estimate",
    "default_knn_k",
]

_LOG2 = math.log(2.0)
_BLOCK = 256  # rows per pairwise block


@dataclass(frozen=True)
class DimEstimate:
    """A dimension estimate together with its method and scale.

    ``t_or_k`` holds the bandwidth (gaussian_local), the bandwidth pair
    (gaussian_global), the radius (correlation_integral), or the neighbor
    count (knn_ratio).
    """

    d_hat: float
    method: str
    t_or_k: float | int | tuple[float, float]


def local_dim_estimate(x, cloud, t: float) -> DimEstimate:
    """Doubling-slope estimate at ``x``: 2 log2(S(x, 2t) / S(x, t)).

    Always >= 0: S is nondecreasing in t. The tiny negative values floating
    point can produce when the two sums agree to all bits are clamped.
    """
    t = _check_t(t)
    sq = squared_distances(x, cloud)
    g_t = log_kernel_sum_from_sq(sq, t)
    g_2t = log_kernel_sum_from_sq(sq, 2.0 * t)
    d_hat = 2.0 * (g_2t - g_t) / _LOG2
    return DimEstimate(d_hat=max(0.0, d_hat), method="gaussian_local", t_or_k=t)


def _log_double_sum(pts: np.ndarray, t: float) -> float:
    """log of (1/n^2) sum_{i,j} K_t(X_i, X_j), diagonal included.

    The diagonal contributes n terms equal to 1, so the maximum exponent
    is always 0 and the block accumulator never sees an empty shift.
    """
    n = pts.shape[0]
    sq_norms = np.einsum("ij,ij->i", pts, pts)
    block_lse = []
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        block = pts[start:stop]
        d2 = sq_norms[start:stop, None] + sq_norms[None, :] - 2.0 * (block @ pts.T)
        np.maximum(d2, 0.0, out=d2)
        e = -d2 / t
        m = float(np.max(e))
        block_lse.append(m + math.log(float(np.sum(np.exp(e - m)))))
    arr = np.asarray(block_lse)
    m = float(np.max(arr))
    return m + math.log(float(np.sum(np.exp(arr - m)))) - 2.0 * math.log(n)


def global_dim_estimate(cloud, t1: float, t2: float) -> DimEstimate:
    """Two-bandwidth slope of the global kernel double sum.

    d_hat = 2 * (log S(t2) - log S(t1)) / (log t2 - log t1), t1 < t2.
    """
    t1 = _check_t(t1)
    t2 = _check_t(t2)
    if not t1 < t2:
        raise ValueError(f"need t1 < t2, got t1={t1}, t2={t2}")
    pts = as_points(cloud)
    s1 = _log_double_sum(pts, t1)
    s2 = _log_double_sum(pts, t2)
    d_hat = 2.0 * (s2 - s1) / (math.log(t2) - math.log(t1))
    return DimEstimate(d_hat=max(0.0, d_hat), method="gaussian_global", t_or_k=(t1, t2))


def correlation_integral(cloud, r: float) -> float:
    """C(r) = (1/n^2) * #{(i, j) : ||X_i - X_j|| <= r}, diagonal included.

    A step function of r; C(r) >= 1/n for every r >= 0 because the n
    self-pairs always count.
    """
    r = float(r)
    if r < 0 or not math.isfinite(r):
        raise ValueError(f"radius must be finite and >= 0, got {r}")
    pts = as_points(cloud)
    n = pts.shape[0]
    r2 = r * r
    sq_norms = np.einsum("ij,ij->i", pts, pts)
    count = 0
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        block = pts[start:stop]
        d2 = sq_norms[start:stop, None] + sq_norms[None, :] - 2.0 * (block @ pts.T)
        np.maximum(d2, 0.0, out=d2)
        count += int(np.count_nonzero(d2 <= r2))
    return count / (n * n)


def default_knn_k(n: int) -> int:
    """Default neighbor count: ceil(2 ln n), clipped to [4, n-1].

    Grows without bound but with k/n -> 0, the regime the ratio estimator
    needs. For n = 1e4 this gives k = 19.
    """
    n = int(n)
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    return min(max(4, math.ceil(2.0 * math.log(n))), n - 1)


def knn_dim_estimate(x, cloud, k: int, x_index: int | None = None) -> DimEstimate:
    """Neighbor-radius ratio estimate d_hat = log 2 / log(r_k / r_{ceil(k/2)}).

    Parameters
    ----------
    x : array_like
        Query point.
    cloud : PointCloud or array_like
    k : int
        Neighbor count, 2 <= k <= number of usable samples.
    x_index : int, optional
        Index of ``x`` within the cloud. Only that index is excluded from
        the neighbor list; other samples at distance zero still count.
        Leave None when ``x`` is not a cloud member.

    Raises
    ------
    DegenerateGeometryError
        If r_k == r_{ceil(k/2)} (zero denominator) or the half radius is 0.
    """
    pts = as_points(cloud)
    x = _as_point(x, pts.shape[1])
    n = pts.shape[0]
    k = int(k)
    sq = squared_distances(x, pts)
    if x_index is not None:
        x_index = int(x_index)
        if not 0 <= x_index < n:
            raise ValueError(f"x_index {x_index} out of range for n={n}")
        sq = np.delete(sq, x_index)
    avail = sq.shape[0]
    if not 2 <= k <= avail:
        raise ValueError(f"k must be in [2, {avail}], got {k}")
    # stable sort = ties broken by sample index
    order = np.argsort(sq, kind="stable")
    k_half = math.ceil(k / 2)
    r_k = math.sqrt(float(sq[order[k - 1]]))
    r_half = math.sqrt(float(sq[order[k_half - 1]]))
    if r_k == r_half:
        raise DegenerateGeometryError(
            f"neighbor radii r_{k} and r_{k_half} coincide ({r_k:.6g}); ratio carries no scale"
        )
    if r_half == 0.0:
        raise DegenerateGeometryError(
            f"r_{k_half} is zero: {k_half} samples coincide with the query point"
        )
    d_hat = _LOG2 / math.log(r_k / r_half)
    return DimEstimate(d_hat=d_hat, method="knn_ratio", t_or_k=k)
