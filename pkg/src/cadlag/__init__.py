"""Skorokhod J1 and M1 distances, moduli of continuity and tightness diagnostics for càdlàg paths."""

from .diagnostics import (
    PathEnsemble,
    compactness_report,
    continuity_times,
    convergence_report,
    fdd_compare,
    tightness_report,
)
from .estimators import ModulusFeatures, SkorokhodDistance
from .metrics import (
    DistanceReport,
    GroundMetric,
    ground_metric,
    halfline_distance,
    j1_distance,
    j1_oracle,
    m1_distance,
    m1_oracle,
    uniform_distance,
    weak_product_j1,
)
from .moduli import endpoint_oscillations, modulus_ladder, omega, omega_double_prime, omega_prime, w_osc
from .paths import (
    CadlagPath,
    CompletedGraph,
    TimeChange,
    apply_time_change,
    completed_graph,
    load_path,
    log_slope_norm,
    restrict,
    save_path,
    stack_paths,
    sup_deviation,
)
from .processes import ProcessSpec, donsker_path, example_family, family_limit, poisson_path

__version__ = "0.1.0"
