"""All four estimators against the same clouds.

Local doubling slope (with selected bandwidth), global double-sum slope,
two-radius correlation dimension, and the kNN radius ratio, on one clean
cloud per manifold. None of them is tuned here; the point is the shape of
the disagreement, not a benchmark (demos/../dimest bench does that with
trials and noise).
"""

import math

import numpy as np

from dimest import (
    ball,
    correlation_integral,
    default_knn_k,
    derive_rng,
    global_dim_estimate,
    knn_dim_estimate,
    make_grid,
    sample,
    select_bandwidth_curvature,
    sphere,
    swiss_roll,
    torus,
)
from dimest.kernel import squared_distances

N = 8_000
SEED = 7


def corr_dim(cloud, r1, r2):
    c1, c2 = correlation_integral(cloud, r1), correlation_integral(cloud, r2)
    return math.log(c2 / c1) / math.log(r2 / r1)


def main():
    cases = [
        ("ball d=3", ball(3), 3, np.zeros(3)),
        ("sphere d=4", sphere(4, radius=1.5), 4, None),
        ("torus d=2", torus(radius=2.0, r_minor=0.5), 2, None),
        ("swiss roll d=2", swiss_roll(), 2, None),
    ]
    print(f"{'manifold':>15} {'true':>5} {'local':>7} {'global':>7} {'corr':>7} {'knn':>7}")
    for label, spec, d_true, x in cases:
        cloud = sample(spec, N, derive_rng(SEED, spec.ambient_dim))
        idx = None
        if x is None:
            idx = 0
            x = cloud.points[0]

        scan = select_bandwidth_curvature(x, cloud, make_grid(cloud, x))

        # reuse the selected scale for the global and correlation baselines
        t_star = scan.t_star
        glob = global_dim_estimate(cloud, t_star, 2.0 * t_star)
        sq = squared_distances(x, cloud)
        r_med = math.sqrt(float(np.median(sq)))
        corr = corr_dim(cloud, r_med / 2.0, r_med)

        knn = knn_dim_estimate(x, cloud, default_knn_k(N), x_index=idx)

        print(f"{label:>15} {d_true:>5} {scan.d_hat:7.2f} {glob.d_hat:7.2f} "
              f"{corr:7.2f} {knn.d_hat:7.2f}")


if __name__ == "__main__":
    main()
