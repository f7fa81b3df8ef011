"""Sample every built-in manifold and sanity-check its geometry.

Writes one CSV per manifold (same format the CLI's sample subcommand and
load_cloud_csv use) and prints the invariant each cloud should satisfy:
radii for spheres and balls, the tube identity for the torus, the spiral
radius for the roll. A quick way to eyeball what the estimators are fed.

Run:  python3 demos/manifold_gallery.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from dimest import (
    ball,
    circle,
    derive_rng,
    sample,
    save_cloud_csv,
    sphere,
    spherical_cap,
    swiss_roll,
    torus,
)

N = 2_000
SEED = 4


def main(outdir="demos/out"):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    specs = [
        ball(3),
        sphere(2, radius=1.5),
        spherical_cap(2, radius=10.0, cap_angle=0.3),
        circle(radius=2.0),
        swiss_roll(),
        torus(radius=2.0, r_minor=0.5),
    ]
    for spec in specs:
        cloud = sample(spec, N, derive_rng(SEED, 0))
        pts = cloud.points
        path = outdir / f"{spec.kind}.csv"
        save_cloud_csv(cloud, path)

        norms = np.linalg.norm(pts, axis=1)
        if spec.kind == "ball":
            note = f"max |x| = {norms.max():.4f} (<= {spec.radius})"
        elif spec.kind in ("sphere", "spherical_cap", "circle"):
            note = f"|x| spread = {norms.max() - norms.min():.2e} (on radius {spec.radius})"
        elif spec.kind == "torus":
            ring = np.hypot(pts[:, 0], pts[:, 1]) - spec.radius
            tube = np.hypot(ring, pts[:, 2])
            note = f"tube radius spread = {tube.max() - tube.min():.2e} (r_minor {spec.r_minor})"
        else:
            u = np.hypot(pts[:, 0], pts[:, 2])  # spiral radius vs angle
            note = f"u range = [{u.min():.2f}, {u.max():.2f}], height in [0, 21]"
        print(f"{spec.kind:<14} d = {spec.d}, ambient = {spec.ambient_dim}, "
              f"n = {N} -> {path}")
        print(f"{'':14} {note}")


if __name__ == "__main__":
    main(*sys.argv[1:2])
