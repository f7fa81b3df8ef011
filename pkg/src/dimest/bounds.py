"""Finite-sample concentration and anti-concentration bound calculators.

The doubling-slope estimator d_hat(x, t) concentrates around the intrinsic
dimension d only below an explicit bandwidth threshold t0, and only as well
as the idealized kernel mass

    P_t = 2^{d/2} p(x) pi^{d/2} t^{d/2}

allows. This module evaluates, for a point of known local regularity:

 - two-sided envelopes on the kernel moment E[K_t(x, X)]  (moment_envelope)
 - the threshold t0 with its five competing constraint terms  (compute_t0)
 - exponential tail bounds on P(d_hat - d >= eps) and
   P(d_hat - d <= -eps) for t <= t0                      (concentration_bound)
 - a normal-approximation ceiling on P(|d_hat - d| <= eps), the
   anti-concentration bound, with its small-eps linearization and the
   critical resolution eps* it implies                   (anticoncentration_bound,
                                                          eps_star)

Every routine is a closed-form evaluation; nothing here samples. All
formulas treat eta = c(2^{eps/2}-1)/(1+2^{eps/2}) as the derived envelope
tolerance of a BoundConfig.

Regularity of a point is described by (L, M, r): within radius r the
manifold deviates from its tangent chart by at most L*||z||^2 and chart
volume is distorted by at most a factor (1 +- M*||z||^2); kappa bounds the
density's Lipschitz constant and p_x its value at the point.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import ThresholdError, ValidityError, VacuousBoundWarning

__all__ = [
    "RegularityParams",
    "BoundConfig",
    "T0Report",
    "BoundReport",
    "BERRY_ESSEEN_C",
    "regularized_gamma_Q",
    "std_normal_cdf",
    "ideal_kernel_mass",
    "moment_envelope",
    "compute_t0",
    "t0_condition_margins",
    "concentration_bound",
    "anticoncentration_bound",
    "anticoncentration_linearized",
    "eps_star",
    "bound_report",
]

_LOG2 = math.log(2.0)
_INF = float("inf")

# Berry-Esseen constant used by the anti-concentration bound.
BERRY_ESSEEN_C = 0.4748

# Order fixes which term is reported as binding when several tie.
T0_TERM_NAMES = (
    "volume_distortion",
    "curvature",
    "tail_decay",
    "density_variation",
    "gaussian_tail",
)


@dataclass(frozen=True)
class RegularityParams:
    """Local regularity description of a point on (or near) a manifold.

    Attributes
    ----------
    L : float
        Curvature bound, units 1/length. 0 for flat charts.
    M : float
        Volume-distortion bound, units 1/length^2. 0 for flat charts.
    r : float
        Radius within which the (L, M) chart control holds. May be inf.
    kappa : float
        Lipschitz constant of the sampling density.
    p_x : float
        Density value at the point, > 0.
    d : int
        Intrinsic dimension, >= 1.
    boundary_dist : float
        Distance to the domain boundary; +inf when boundaryless.
    """

    L: float
    M: float
    r: float
    kappa: float
    p_x: float
    d: int
    boundary_dist: float = _INF

    def __post_init__(self):
        if self.L < 0 or self.M < 0 or self.kappa < 0:
            raise ValueError("L, M, kappa must be >= 0")
        if not self.r > 0:
            raise ValueError(f"regularity radius r must be > 0, got {self.r}")
        if not self.p_x > 0:
            raise ValueError(f"density p_x must be > 0, got {self.p_x}")
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"intrinsic dimension d must be a positive integer, got {self.d}")
        if not self.boundary_dist > 0:
            raise ValueError(f"boundary_dist must be > 0, got {self.boundary_dist}")


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.25 < gamma < 0.5:
        raise ValueError(f"gamma must lie strictly in (1/4, 1/2), got {gamma}")
    return gamma


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not 0.0 < eta < 0.5:
        raise ValueError(f"eta must lie strictly in (0, 1/2), got {eta}")
    return eta


def derived_eta(c: float, eps: float) -> float:
    """eta = c (2^{eps/2} - 1) / (1 + 2^{eps/2})."""
    return c * (2.0 ** (eps / 2.0) - 1.0) / (1.0 + 2.0 ** (eps / 2.0))


@dataclass(frozen=True)
class BoundConfig:
    """Parameters a bound evaluation needs besides the point's regularity.

    The envelope tolerance eta is derived, not stored: configs whose
    derived eta falls outside (0, 1/2) are rejected at construction.
    """

    eps: float
    c: float
    gamma: float
    n: int
    t: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"eps must be > 0, got {self.eps}")
        if not 0.0 < self.c < 1.0:
            raise ValueError(f"c must lie in (0, 1), got {self.c}")
        _check_gamma(self.gamma)
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"n must be a nonnegative integer, got {self.n}")
        if not self.t > 0 or not math.isfinite(self.t):
            raise ValueError(f"t must be positive and finite, got {self.t}")
        eta = derived_eta(self.c, self.eps)
        if not 0.0 < eta < 0.5:
            raise ValueError(
                f"derived eta = {eta:.6g} outside (0, 1/2); shrink c or eps"
            )

    @property
    def eta(self) -> float:
        return derived_eta(self.c, self.eps)


@dataclass(frozen=True)
class T0Report:
    """Threshold bandwidth with the five constraint terms that compete for it.

    ``terms`` maps each named constraint to its own bandwidth ceiling
    (+inf when the constraint is vacuous); ``binding`` names the minimum.
    ``s_star`` and ``s_T`` expose the tail-decay bisection internals,
    s_T = +inf when the tail constraint never binds.
    """

    t0: float
    terms: dict[str, float]
    binding: str
    s_star: float
    s_T: float


@dataclass(frozen=True)
class BoundReport:
    """Everything the bound calculators can say about one configuration.

    ``remainder_scale`` is the sqrt(P_t/n) scale of the normal-approximation
    remainder left out of anti_conc; it is reported, never added.
    ``vacuous`` flags P_t >= 1 (the idealized mass exceeds the kernel-sum
    range, so the tails say nothing).
    """

    P_t: float
    upper_tail: float
    lower_tail: float
    anti_conc: float
    remainder_scale: float
    eps_star: float
    vacuous: bool


# ---------------------------------------------------------------------------
# special functions


def regularized_gamma_Q(a: float, z: float) -> float:
    """Upper regularized incomplete gamma Q(a, z) = Gamma(a, z)/Gamma(a).

    Series for the lower function when z < a + 1, Lentz continued fraction
    for the upper function otherwise; both iterated to machine tolerance,
    absolute error below 1e-10 over the tested domain.
    """
    a = float(a)
    z = float(z)
    if not a > 0:
        raise ValueError(f"shape parameter a must be > 0, got {a}")
    if z < 0:
        raise ValueError(f"argument z must be >= 0, got {z}")
    if z == 0.0:
        return 1.0
    log_prefix = a * math.log(z) - z - math.lgamma(a)
    if z < a + 1.0:
        # lower series: P(a,z) = z^a e^-z / Gamma(a) * sum_k z^k / (a)_{k+1} * Gamma...
        ap = a
        term = 1.0 / a
        total = term
        for _ in range(1000):
            ap += 1.0
            term *= z / ap
            total += term
            if abs(term) < abs(total) * 1e-17:
                break
        return 1.0 - total * math.exp(log_prefix)
    # modified Lentz for the continued fraction of Q(a,z)
    tiny = 1e-300
    b = z + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, 1000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-17:
            break
    return math.exp(log_prefix) * h


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x}")
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def ideal_kernel_mass(d: int, p_x: float, t: float) -> float:
    """P_t = 2^{d/2} p_x pi^{d/2} t^{d/2}, the idealized expected kernel sum."""
    return 2.0 ** (d / 2.0) * p_x * math.pi ** (d / 2.0) * t ** (d / 2.0)


# ---------------------------------------------------------------------------
# moment envelope


def moment_envelope(reg: RegularityParams, t: float, gamma: float) -> tuple[float, float]:
    """Two-sided envelope on the kernel moment E[K_t(x, X)].

    With r0 = t^gamma and alpha(t) = Q(d/2, r0^2/t):

        lower = (1 - 2 kappa r0 / p_x)(1 - M r0^2)(1 - alpha(t))
                * exp(-L^2 r0^4 / t) * p_x pi^{d/2} t^{d/2}
        upper = (1 + 2 kappa r0 / p_x)(1 + M r0^2) * p_x pi^{d/2} t^{d/2}
                + exp(-r0^2 / t)

    The lower value may be negative for coarse t (vacuous but returned as
    computed).

    Raises
    ------
    ValueError
        If r0 exceeds the regularity radius or the boundary distance;
        the message names which.
    """
    gamma = _check_gamma(gamma)
    t = float(t)
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    r0 = t ** gamma
    if r0 > reg.r:
        raise ValueError(
            f"r0 = t^gamma = {r0:.6g} exceeds regularity radius r = {reg.r:.6g}"
        )
    if r0 > reg.boundary_dist:
        raise ValueError(
            f"r0 = t^gamma = {r0:.6g} exceeds boundary distance {reg.boundary_dist:.6g}"
        )
    lead = reg.p_x * math.pi ** (reg.d / 2.0) * t ** (reg.d / 2.0)
    alpha = regularized_gamma_Q(reg.d / 2.0, r0 * r0 / t)
    lower = (
        (1.0 - 2.0 * reg.kappa * r0 / reg.p_x)
        * (1.0 - reg.M * r0 * r0)
        * (1.0 - alpha)
        * math.exp(-reg.L * reg.L * r0 ** 4 / t)
        * lead
    )
    upper = (
        (1.0 + 2.0 * reg.kappa * r0 / reg.p_x) * (1.0 + reg.M * r0 * r0) * lead
        + math.exp(-r0 * r0 / t)
    )
    return lower, upper


# ---------------------------------------------------------------------------
# threshold t0


def _tail_A(reg: RegularityParams, eta: float) -> float:
    """A = -log((eta/10) p_x pi^{d/2} 2^{-d/2}), assembled in log space."""
    return -(
        math.log(eta / 10.0)
        + math.log(reg.p_x)
        + (reg.d / 2.0) * (math.log(math.pi) - _LOG2)
    )


def _tail_decay_term(reg: RegularityParams, gamma: float, eta: float) -> tuple[float, float, float]:
    """(t_T, s_star, s_T) for the tail-decay constraint.

    f(s) = A s + B s log(1/s) is concave with maximizer s* = exp(A/B - 1)
    and maximum f(s*) = B s* (exact identity, safe when s* overflows);
    s_T is the first s where f reaches 1/2, found by bisection to 1e-14.
    """
    A = _tail_A(reg, eta)
    B = reg.d / (2.0 * (1.0 - 2.0 * gamma))
    ratio = A / B - 1.0
    s_star = math.exp(ratio) if ratio < 700.0 else _INF
    f_max = B * s_star  # = f(s_star)
    if not f_max >= 0.5:
        return _INF, s_star, _INF

    def f(s: float) -> float:
        return A * s + B * s * math.log(1.0 / s)

    hi = min(1e-30, s_star)
    while f(hi) < 0.5 and hi < s_star:
        hi = min(hi * 2.0, s_star)
    lo = hi / 2.0
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.5:
            lo = mid
        else:
            hi = mid
    s_T = hi
    return s_T ** (1.0 / (1.0 - 2.0 * gamma)), s_star, s_T


def _gauss_beta(d: int, eta: float) -> float:
    return math.sqrt(2.0) * (math.sqrt(d) + math.sqrt(2.0 * math.log(10.0 / eta)))


def compute_t0(reg: RegularityParams, gamma: float, eta: float) -> T0Report:
    """Threshold bandwidth t0 below which the tail bounds are valid.

    Five constraints each impose a bandwidth ceiling; t0 is their minimum:

        volume_distortion   (eta / 10 M)^{1/(2 gamma)}
        curvature           (-log(1 - eta/10) / 2 L^2)^{1/(4 gamma - 1)}
        tail_decay          s_T^{1/(1 - 2 gamma)}
        density_variation   (p_x eta / 20 kappa)^{1/gamma}
        gaussian_tail       beta^{-1/(1/2 - gamma)},
                            beta = sqrt(2)(sqrt(d) + sqrt(2 log(10/eta)))

    Constraints with L = 0, M = 0, or kappa = 0 are vacuous and report
    +inf. Ties in the minimum resolve to the first name in the order
    above.
    """
    gamma = _check_gamma(gamma)
    eta = _check_eta(eta)
    terms: dict[str, float] = {}
    terms["volume_distortion"] = (
        (eta / (10.0 * reg.M)) ** (1.0 / (2.0 * gamma)) if reg.M > 0 else _INF
    )
    terms["curvature"] = (
        (-math.log1p(-eta / 10.0) / (2.0 * reg.L * reg.L)) ** (1.0 / (4.0 * gamma - 1.0))
        if reg.L > 0
        else _INF
    )
    t_T, s_star, s_T = _tail_decay_term(reg, gamma, eta)
    terms["tail_decay"] = t_T
    terms["density_variation"] = (
        (reg.p_x * eta / (20.0 * reg.kappa)) ** (1.0 / gamma) if reg.kappa > 0 else _INF
    )
    terms["gaussian_tail"] = _gauss_beta(reg.d, eta) ** (-1.0 / (0.5 - gamma))
    t0 = min(terms.values())
    binding = next(name for name in T0_TERM_NAMES if terms[name] == t0)
    return T0Report(t0=t0, terms=terms, binding=binding, s_star=s_star, s_T=s_T)


def t0_condition_margins(
    reg: RegularityParams, gamma: float, eta: float, t: float
) -> dict[str, float]:
    """Slack of each sufficient condition at bandwidth t.

    Each entry is (allowed - required); the condition holds iff the margin
    is >= 0. At t = t0 the binding term's margin is 0 up to float noise,
    and turns negative as soon as t crosses its ceiling. Conditions in the
    same order and naming as the T0Report terms:

        volume_distortion    eta/10 - M t^{2 gamma}
        curvature            -log(1 - eta/10) - 2 L^2 t^{4 gamma - 1}
        tail_decay           1/2 - f(t^{1 - 2 gamma})
        density_variation    eta/10 - 2 kappa t^gamma / p_x
        gaussian_tail        t^{gamma - 1/2} - beta
    """
    gamma = _check_gamma(gamma)
    eta = _check_eta(eta)
    t = float(t)
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    A = _tail_A(reg, eta)
    B = reg.d / (2.0 * (1.0 - 2.0 * gamma))
    s = t ** (1.0 - 2.0 * gamma)
    f_s = A * s + B * s * math.log(1.0 / s)
    return {
        "volume_distortion": eta / 10.0 - reg.M * t ** (2.0 * gamma),
        "curvature": -math.log1p(-eta / 10.0) - 2.0 * reg.L * reg.L * t ** (4.0 * gamma - 1.0),
        "tail_decay": 0.5 - f_s,
        "density_variation": eta / 10.0 - 2.0 * reg.kappa * t ** gamma / reg.p_x,
        "gaussian_tail": t ** (gamma - 0.5) - _gauss_beta(reg.d, eta),
    }


# ---------------------------------------------------------------------------
# concentration


def concentration_bound(
    reg: RegularityParams, cfg: BoundConfig, enforce_threshold: bool = True
) -> tuple[float, float]:
    """Exponential tail bounds on the doubling-slope estimator at t <= t0.

    Returns (upper_tail, lower_tail):

        upper_tail >= P(d_hat - d >= eps)
        lower_tail >= P(d_hat - d <= -eps)

    valid whenever cfg.t is at or below the threshold computed from the
    derived eta. Both equal 1 when n = 0.

    ``enforce_threshold=False`` evaluates the formula even above t0, where
    it no longer bounds anything; that mode exists for display and for
    harness runs that explicitly override the threshold.

    Raises
    ------
    ThresholdError
        If cfg.t exceeds t0 (and the threshold is enforced); carries both
        values.

    Warns
    -----
    VacuousBoundWarning
        If P_t >= 1: the idealized mass exceeds the kernel-sum range and
        the bound, while valid, says nothing.
    """
    eta = cfg.eta
    if enforce_threshold:
        rep = compute_t0(reg, cfg.gamma, eta)
        if cfg.t > rep.t0:
            raise ThresholdError(cfg.t, rep.t0)
    P_t = ideal_kernel_mass(reg.d, reg.p_x, cfg.t)
    if P_t >= 1.0:
        warnings.warn(
            f"P_t = {P_t:.6g} >= 1: concentration bound is vacuous at this bandwidth",
            VacuousBoundWarning,
            stacklevel=2,
        )
    eps, c, n, d = cfg.eps, cfg.c, cfg.n, reg.d
    c_plus = (1.0 - c) * (2.0 ** (eps / 2.0) - 1.0)
    c_minus = (1.0 - c) * (1.0 - 2.0 ** (-eps / 2.0))
    m_plus = 1.0 + 2.0 ** ((d + eps) / 2.0)
    m_minus = 1.0 + 2.0 ** ((d - eps) / 2.0)
    upper = math.exp(
        -n * c_plus * c_plus * P_t / (2.0 ** (4.0 + eps) + (2.0 / 3.0) * m_plus * c_plus)
    )
    lower = math.exp(
        -n * c_minus * c_minus * P_t / (2.0 ** (4.0 - eps) + (2.0 / 3.0) * m_minus * c_minus)
    )
    return upper, lower


# ---------------------------------------------------------------------------
# anti-concentration


def _gamma_pm(d: int, eps: float) -> tuple[float, float]:
    two_thirds = (2.0 / 3.0) ** (d / 2.0)
    g_plus = 1.0 - 2.0 ** (1.0 - eps / 2.0) * two_thirds + 2.0 ** (-d / 2.0 - eps)
    g_minus = 1.0 - 2.0 ** (1.0 + eps / 2.0) * two_thirds + 2.0 ** (-d / 2.0 + eps)
    return g_plus, g_minus


def _delta_pm(d: int, eps: float) -> tuple[float, float]:
    two_thirds = (2.0 / 3.0) ** (d / 2.0)
    five = 5.0 ** (-d / 2.0)
    three = 3.0 ** (-d / 2.0)
    d_plus = (
        two_thirds
        + 3.0 * 2.0 ** (d / 2.0 - eps / 2.0) * five
        + 3.0 * 2.0 ** (-eps - d)
        + 2.0 ** (-1.5 * eps - d / 2.0) * three
    )
    d_minus = (
        two_thirds
        + 3.0 * 2.0 ** (d / 2.0 + eps / 2.0) * five
        + 3.0 * 2.0 ** (eps - d)
        + 2.0 ** (1.5 * eps - d / 2.0) * three
    )
    return d_plus, d_minus


def anticoncentration_bound(
    reg: RegularityParams, cfg: BoundConfig, enforce_threshold: bool = True
) -> float:
    """Ceiling on P(|d_hat - d| <= eps): how resolvable d is at all.

    Normal-approximation bound

        Phi(arg+) + Phi(arg-) + BE - 1

    clipped to [0, 1], where the Phi arguments scale with sqrt(P_t n) and
    BE is the Berry-Esseen correction with C = 0.4748. The O(sqrt(P_t/n))
    normal-approximation remainder is not added; its scale is surfaced
    through BoundReport.remainder_scale. ``enforce_threshold`` as in
    :func:`concentration_bound`.

    Raises
    ------
    ValidityError
        Naming the violated structural condition (Gamma_plus <= 0,
        Gamma_minus <= 0, eta above its cap, or eta*_pm >= 1).
    ThresholdError
        If cfg.t exceeds t0 for the derived eta.
    """
    d = reg.d
    eps, c = cfg.eps, cfg.c
    eta = cfg.eta
    two_thirds = (2.0 / 3.0) ** (d / 2.0)
    g_plus, g_minus = _gamma_pm(d, eps)
    if g_plus <= 0.0:
        raise ValidityError("Gamma_plus <= 0")
    plus_sum = 1.0 + 2.0 ** (1.0 - eps / 2.0) * two_thirds + 2.0 ** (-d / 2.0 - eps)
    if eta >= g_plus / plus_sum:
        raise ValidityError(
            "eta >= Gamma_plus / (1 + 2^{1-eps/2}(2/3)^{d/2} + 2^{-d/2-eps})"
        )
    if g_minus <= 0.0:
        raise ValidityError("Gamma_minus <= 0")
    minus_sum = 1.0 + 2.0 ** (1.0 + eps / 2.0) * two_thirds + 2.0 ** (-d / 2.0 + eps)
    eta_star_plus = eta * plus_sum / g_plus
    eta_star_minus = eta * minus_sum / g_minus
    if eta_star_plus >= 1.0:
        raise ValidityError("eta*_plus >= 1")
    if eta_star_minus >= 1.0:
        raise ValidityError("eta*_minus >= 1")
    if enforce_threshold:
        rep = compute_t0(reg, cfg.gamma, eta)
        if cfg.t > rep.t0:
            raise ThresholdError(cfg.t, rep.t0)
    if cfg.n == 0:
        return 1.0
    P_t = ideal_kernel_mass(d, reg.p_x, cfg.t)
    root = math.sqrt(P_t * cfg.n)
    arg_plus = (
        (2.0 ** (eps / 2.0) - 1.0)
        * (1.0 + c)
        * root
        / (2.0 ** (eps / 2.0) * math.sqrt(g_plus * (1.0 - eta_star_plus)))
    )
    arg_minus = (
        (1.0 - 2.0 ** (-eps / 2.0))
        * (1.0 + c)
        * root
        / (2.0 ** (-eps / 2.0) * math.sqrt(g_minus * (1.0 - eta_star_minus)))
    )
    d_plus, d_minus = _delta_pm(d, eps)
    berry_esseen = (
        BERRY_ESSEEN_C
        * (1.0 + eta)
        * 2.0 ** (d / 2.0)
        / root
        * (
            d_plus / ((1.0 - eta_star_plus) ** 1.5 * g_plus ** 1.5)
            + d_minus / ((1.0 - eta_star_minus) ** 1.5 * g_minus ** 1.5)
        )
    )
    val = std_normal_cdf(arg_plus) + std_normal_cdf(arg_minus) + berry_esseen - 1.0
    return min(1.0, max(0.0, val))


def _gamma0(d: int) -> float:
    return 1.0 - 2.0 * (2.0 / 3.0) ** (d / 2.0) + 2.0 ** (-d / 2.0)


def _eta0_star(d: int, eta: float) -> float:
    g0 = _gamma0(d)
    return eta * (1.0 + 2.0 * (2.0 / 3.0) ** (d / 2.0) + 2.0 ** (-d / 2.0)) / g0


def anticoncentration_linearized(reg: RegularityParams, cfg: BoundConfig) -> float:
    """Small-eps linear form of the anti-concentration bound.

        (log 2 / sqrt(2 pi Gamma_0 (1 - eta_0*))) (1 + c) sqrt(P_t n) eps

    with Gamma_0 = 1 - 2(2/3)^{d/2} + 2^{-d/2} and eta_0* the eps -> 0
    limit of eta*_pm evaluated at the config's derived eta.
    """
    g0 = _gamma0(reg.d)
    if g0 <= 0.0:
        raise ValidityError("Gamma_0 <= 0")
    e0s = _eta0_star(reg.d, cfg.eta)
    if e0s >= 1.0:
        raise ValidityError("eta_0* >= 1")
    P_t = ideal_kernel_mass(reg.d, reg.p_x, cfg.t)
    return (
        _LOG2
        / math.sqrt(2.0 * math.pi * g0 * (1.0 - e0s))
        * (1.0 + cfg.c)
        * math.sqrt(P_t * cfg.n)
        * cfg.eps
    )


def eps_star(
    reg: RegularityParams, t: float, n: int, c: float, target_prob: float
) -> float:
    """Critical resolution: the eps where the linearized ceiling hits target_prob.

        eps* = target_prob sqrt(2 pi Gamma_0 (1 - eta_0*))
               / ((1 + c) sqrt(P_t n) log 2)

    eta depends on eps, so eta_0* is evaluated by two fixed-point updates
    starting from the small-eps limit eta = c (log 2 / 4) eps_0 with
    eps_0 = 1/sqrt(P_t n); eta enters only through 1 - eta_0*, a
    second-order effect.

    Raises
    ------
    ValidityError
        If Gamma_0 <= 0 or eta_0* >= 1 (resolution target unreachable in
        the linearized regime).
    """
    if not 0.0 < target_prob < 1.0:
        raise ValueError(f"target_prob must lie in (0, 1), got {target_prob}")
    if not 0.0 < c < 1.0:
        raise ValueError(f"c must lie in (0, 1), got {c}")
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    t = float(t)
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    d = reg.d
    g0 = _gamma0(d)
    if g0 <= 0.0:
        raise ValidityError("Gamma_0 <= 0")
    root = math.sqrt(ideal_kernel_mass(d, reg.p_x, t) * n)
    eta = c * (_LOG2 / 4.0) * (1.0 / root)
    eps = math.nan
    for _ in range(2):
        e0s = _eta0_star(d, eta)
        if e0s >= 1.0:
            raise ValidityError("eta_0* >= 1")
        eps = target_prob * math.sqrt(2.0 * math.pi * g0 * (1.0 - e0s)) / (
            (1.0 + c) * root * _LOG2
        )
        eta = derived_eta(c, eps)
    return eps


def bound_report(
    reg: RegularityParams,
    cfg: BoundConfig,
    target_prob: float = 0.1,
    enforce_threshold: bool = True,
) -> BoundReport:
    """Assemble the full picture for one (regularity, config) pair."""
    P_t = ideal_kernel_mass(reg.d, reg.p_x, cfg.t)
    upper, lower = concentration_bound(reg, cfg, enforce_threshold=enforce_threshold)
    anti = anticoncentration_bound(reg, cfg, enforce_threshold=enforce_threshold)
    remainder = math.sqrt(P_t / cfg.n) if cfg.n > 0 else _INF
    return BoundReport(
        P_t=P_t,
        upper_tail=upper,
        lower_tail=lower,
        anti_conc=anti,
        remainder_scale=remainder,
        eps_star=eps_star(reg, cfg.t, max(cfg.n, 1), cfg.c, target_prob),
        vacuous=P_t >= 1.0,
    )
