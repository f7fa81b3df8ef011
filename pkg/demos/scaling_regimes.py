"""Walk the kernel-sum scaling curve for balls of growing dimension.

For a d-dimensional cloud the normalized kernel sum S(x, t) behaves like
t^{d/2} over a window of bandwidths: below it the sum is dominated by the
nearest sample (noise floor), above it S saturates toward 1. The doubling
slope 2 * (log2 S(2t) - log2 S(t)) therefore traces 0 -> d -> 0 as t
sweeps, and the flat middle is where the dimension can be read off.

Run:  python3 demos/scaling_regimes.py
"""

import numpy as np

from dimest import ball, derive_rng, make_grid, sample, select_bandwidth_curvature
from dimest.kernel import log_kernel_sum_from_sq, squared_distances

N = 20_000
SEED = 101


def main():
    for d in (2, 3, 5):
        cloud = sample(ball(d), N, derive_rng(SEED, d))
        x = np.zeros(d)
        sq = squared_distances(x, cloud)
        grid = make_grid(cloud, x, 24)
        scan = select_bandwidth_curvature(x, cloud, grid)

        print(f"\nuniform ball, d = {d}, n = {N}")
        print(f"{'t':>12} {'log S':>10} {'2*slope':>9} {'rho':>9}")
        for j, t in enumerate(grid):
            g = log_kernel_sum_from_sq(sq, float(t))
            mark = "  <- chosen" if j == scan.chosen_index else ""
            print(f"{t:12.4e} {g:10.4f} {2 * scan.slope[j]:9.3f} {scan.rho[j]:9.3f}{mark}")
        print(f"curvature pick: t* = {scan.t_star:.4e}, d_hat = {scan.d_hat:.3f} (true {d})")


if __name__ == "__main__":
    main()
