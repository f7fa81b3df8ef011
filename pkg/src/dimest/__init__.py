"""Gaussian-kernel intrinsic dimension estimation with finite-sample bounds.

The estimators read dimension off the bandwidth scaling of a Gaussian
kernel sum; the bounds module prices how many samples that reading costs
at a given resolution, and the bandwidth module picks the scale to read
at. Manifold samplers and a seeded experiment harness round it out.
"""

__version__ = "0.1.0"

from .bandwidth import (
    DEFAULT_DELTA,
    DEFAULT_GRID_SIZE,
    BandwidthScan,
    make_grid,
    select_bandwidth_curvature,
    select_bandwidth_slope_max,
)
from .bench import (
    EXPERIMENTS,
    ExperimentConfig,
    default_config,
    run_anticoncentration,
    run_bandwidth_compare,
    run_concentration,
    run_experiment,
)
from .bounds import (
    T0_TERM_NAMES,
    BoundConfig,
    BoundReport,
    RegularityParams,
    T0Report,
    anticoncentration_bound,
    anticoncentration_linearized,
    bound_report,
    compute_t0,
    concentration_bound,
    derived_eta,
    eps_star,
    ideal_kernel_mass,
    moment_envelope,
    regularized_gamma_Q,
    t0_condition_margins,
)
from .errors import (
    DegenerateGeometryError,
    RejectionBudgetError,
    ThresholdError,
    ValidityError,
    VacuousBoundWarning,
)
from .estimators import (
    DimEstimate,
    correlation_integral,
    default_knn_k,
    global_dim_estimate,
    knn_dim_estimate,
    local_dim_estimate,
)
from .kernel import (
    KernelEval,
    PointCloud,
    g_derivatives,
    gaussian_kernel,
    log_kernel_sum,
    squared_distances,
)
from .manifolds import (
    MANIFOLD_KINDS,
    ManifoldSpec,
    NoiseSpec,
    add_noise,
    ball,
    cap_fraction,
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

__all__ = [
    "__version__",
    # kernel
    "PointCloud", "KernelEval", "gaussian_kernel", "log_kernel_sum",
    "squared_distances", "g_derivatives",
    # estimators
    "DimEstimate", "local_dim_estimate", "global_dim_estimate",
    "correlation_integral", "knn_dim_estimate", "default_knn_k",
    # bounds
    "RegularityParams", "BoundConfig", "T0Report", "BoundReport",
    "T0_TERM_NAMES", "derived_eta", "ideal_kernel_mass",
    "moment_envelope", "compute_t0", "t0_condition_margins",
    "concentration_bound", "anticoncentration_bound",
    "anticoncentration_linearized", "eps_star",
    "bound_report", "regularized_gamma_Q",
    # bandwidth
    "BandwidthScan", "make_grid", "select_bandwidth_curvature",
    "select_bandwidth_slope_max", "DEFAULT_DELTA", "DEFAULT_GRID_SIZE",
    # manifolds
    "MANIFOLD_KINDS", "ManifoldSpec", "NoiseSpec", "ball", "sphere", "spherical_cap",
    "circle", "swiss_roll", "torus", "sample", "add_noise",
    "regularity_of", "cap_fraction", "derive_rng",
    "save_cloud_csv", "load_cloud_csv",
    # bench
    "ExperimentConfig", "default_config", "run_experiment",
    "run_concentration", "run_anticoncentration", "run_bandwidth_compare",
    "EXPERIMENTS",
    # errors
    "DegenerateGeometryError", "RejectionBudgetError", "ThresholdError",
    "ValidityError", "VacuousBoundWarning",
]
