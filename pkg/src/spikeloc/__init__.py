"""spikeloc: dominant-spike support recovery from noisy band-limited Fourier data.

The estimated support is the super-level set of the Gaussian-smoothed
truncated inverse Fourier transform; in the admissible noise regime it
provably contains every dominant spike and stays within a closed-form
radius of the true support.
"""

from .acquisition import (
    NoiseSpec,
    PeriodicSignal,
    RealSignal,
    Shots,
    UniformDisk,
    WorstCaseBoost,
    WorstCaseSuppress,
    add_noise,
    hoeffding_radius,
    real_grid,
    sample_periodic,
    sample_real,
    shots_budget,
    shots_periodic,
)
from .estimator import SpikeLocalizer, as_signal
from .geometry import (
    IntervalSet,
    PointSet,
    contains,
    dist_point_to_points,
    max_dev_points_to_set,
    max_dev_set_to_points,
    wrap_point,
    wrapped_distance,
)
from .harness import (
    VerificationReport,
    describe_measure,
    qpe_scenario,
    random_problem,
    save_report,
    sweep,
    verify_once,
    write_sweep_csv,
)
from .kernels import (
    KernelParams,
    gaussian,
    gaussian_hat,
    periodic_gaussian,
    periodic_gaussian_fourier,
    periodic_gaussian_theta,
    phi_p_zero,
)
from .localizer import (
    IndicatorTrace,
    extract_support,
    indicator_periodic,
    indicator_periodic_complex,
    indicator_real,
    indicator_real_complex,
    localize_periodic,
    localize_real,
)
from .measures import (
    InstanceSpec,
    Spike,
    SpikeCluster,
    SpikeMeasure,
    UniformBox,
    ValidationResult,
    fourier_periodic,
    fourier_real,
    random_instance,
    smoothed_density,
    validate,
)
from .params import (
    PERIODIC,
    REAL_LINE,
    DerivedParams,
    ProblemParams,
    derive,
    derive_periodic,
    derive_real,
)

__version__ = "0.1.0"

__all__ = [
    "DerivedParams",
    "IndicatorTrace",
    "InstanceSpec",
    "IntervalSet",
    "KernelParams",
    "NoiseSpec",
    "PERIODIC",
    "PeriodicSignal",
    "PointSet",
    "ProblemParams",
    "REAL_LINE",
    "RealSignal",
    "Shots",
    "Spike",
    "SpikeCluster",
    "SpikeLocalizer",
    "SpikeMeasure",
    "UniformBox",
    "UniformDisk",
    "ValidationResult",
    "VerificationReport",
    "WorstCaseBoost",
    "WorstCaseSuppress",
    "add_noise",
    "as_signal",
    "contains",
    "derive",
    "derive_periodic",
    "derive_real",
    "describe_measure",
    "dist_point_to_points",
    "extract_support",
    "fourier_periodic",
    "fourier_real",
    "gaussian",
    "gaussian_hat",
    "hoeffding_radius",
    "indicator_periodic",
    "indicator_periodic_complex",
    "indicator_real",
    "indicator_real_complex",
    "localize_periodic",
    "localize_real",
    "max_dev_points_to_set",
    "max_dev_set_to_points",
    "periodic_gaussian",
    "periodic_gaussian_fourier",
    "periodic_gaussian_theta",
    "phi_p_zero",
    "qpe_scenario",
    "random_instance",
    "random_problem",
    "real_grid",
    "sample_periodic",
    "sample_real",
    "save_report",
    "shots_budget",
    "shots_periodic",
    "smoothed_density",
    "sweep",
    "validate",
    "verify_once",
    "wrap_point",
    "wrapped_distance",
    "write_sweep_csv",
]
