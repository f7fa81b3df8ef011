"""What the finite-sample theory actually promises, in numbers.

Three acts on the unit ball in R^3:

 1. the bandwidth threshold t0 and which of its five ceilings binds;
 2. the concentration tails as n grows at fixed eps: vacuous (= 1) until
    n * P_t is large, then collapsing exponentially;
 3. the anti-concentration side, which refuses structurally invalid
    (eps, c, d) combinations by naming the violated condition, and the
    critical resolution eps* ~ 1 / sqrt(n * P_t) where it applies.

The striking part is act 2: at t <= t0 and desk-scale n, every bound is
1. The guarantees are real but kick in at astronomical sample sizes, and
the calculators report that honestly rather than extrapolating.
"""

from dimest import (
    BoundConfig,
    ValidityError,
    anticoncentration_bound,
    ball,
    compute_t0,
    concentration_bound,
    derived_eta,
    eps_star,
    ideal_kernel_mass,
    regularity_of,
)

GAMMA = 0.26
C = 0.5
EPS = 1.0


def main():
    reg = regularity_of(ball(3))
    eta = derived_eta(C, EPS)
    rep = compute_t0(reg, GAMMA, eta)

    print(f"ball d=3, gamma = {GAMMA}, c = {C}, eps = {EPS} (eta = {eta:.4f})")
    print(f"\nt0 = {rep.t0:.4e}, binding constraint: {rep.binding}")
    for name, ceiling in rep.terms.items():
        mark = "  <- binds" if name == rep.binding else ""
        print(f"  {name:<18} {ceiling:12.4e}{mark}")

    t = 0.95 * rep.t0
    print(f"\nworking bandwidth t = 0.95 * t0 = {t:.4e}, "
          f"P_t = {ideal_kernel_mass(reg.d, reg.p_x, t):.4e}")

    print(f"\n{'n':>6} {'upper tail':>11} {'lower tail':>11} {'eps*':>10}")
    for k in range(3, 25, 3):
        n = 10**k
        cfg = BoundConfig(eps=EPS, c=C, gamma=GAMMA, n=n, t=t)
        up, lo = concentration_bound(reg, cfg)
        try:
            es = f"{eps_star(reg, t, n, C, 0.1):10.3e}"
        except ValidityError:
            es = f"{'n/a':>10}"  # linearized regime unreachable at this n
        print(f"  1e{k:02d} {up:11.3e} {lo:11.3e} {es}")

    print("\nanti-concentration ceiling at n = 1e12:")
    for eps in (1.0, 3.0, 6.0, 10.0):
        cfg = BoundConfig(eps=eps, c=C, gamma=GAMMA, n=10**12, t=t)
        try:
            val = anticoncentration_bound(reg, cfg)
            print(f"  eps = {eps:4.1f}: P(|d_hat - d| <= eps) <= {val:.3e}")
        except ValidityError as exc:
            print(f"  eps = {eps:4.1f}: refused ({exc})")


if __name__ == "__main__":
    main()
