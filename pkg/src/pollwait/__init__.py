"""Waiting-time analysis for cyclic polling systems.

Closed-form mean waiting-time estimators for a single server attending
queues in cyclic order with switch-over times, renewal arrivals and
exhaustive or gated service, plus a discrete-event simulator and a grid
runner to validate them.
"""

from .approx import (
    InterpolationConstants,
    Method,
    WaitingTimeResult,
    constants_exhaustive,
    constants_gated,
    heavy_traffic_delay,
    interpolation_constants,
    mean_wait,
    mean_wait_ht_only,
    mean_wait_interpolation,
    mean_wait_large_s,
    mean_wait_lt_only,
    mean_wait_pcl_based,
    pcl_residual,
    pcl_rhs,
)
from .errors import (
    DegenerateLoad,
    InvalidMoment,
    LoadOutOfRange,
    NumericalBudget,
    PollingModelError,
    SpecFileError,
    UnnormalizedLoads,
    ZeroLoad,
    ZeroTotalSwitchover,
)
from .fitting import (
    DistKind,
    FittedDistribution,
    density_at_zero,
    density_at_zero_two_moment_approx,
    fit_two_moments,
    realized_moments,
    sample,
    sample_array,
)
from .model import (
    DensityMode,
    DerivedMoments,
    Discipline,
    QueueSpec,
    SystemSpec,
    derive_moments,
    exact_density_mode,
    scale_to_load,
)
from .sim import SimConfig, SimEstimate, SimEvent, simulate
from .testbed import (
    ErrorRecord,
    ErrorReport,
    TestBedCase,
    detect_exact_cases,
    is_exact_case,
    materialize_case,
    poisson_bed,
    run_comparison,
    sampled_bed,
    standard_bed,
    three_queue_demo_spec,
)

__version__ = "0.1.0"

__all__ = [
    "Discipline",
    "DensityMode",
    "QueueSpec",
    "SystemSpec",
    "DerivedMoments",
    "derive_moments",
    "scale_to_load",
    "exact_density_mode",
    "DistKind",
    "FittedDistribution",
    "fit_two_moments",
    "realized_moments",
    "density_at_zero",
    "density_at_zero_two_moment_approx",
    "sample",
    "sample_array",
    "Method",
    "InterpolationConstants",
    "WaitingTimeResult",
    "constants_exhaustive",
    "constants_gated",
    "interpolation_constants",
    "heavy_traffic_delay",
    "mean_wait",
    "mean_wait_interpolation",
    "mean_wait_lt_only",
    "mean_wait_ht_only",
    "mean_wait_large_s",
    "mean_wait_pcl_based",
    "pcl_rhs",
    "pcl_residual",
    "SimConfig",
    "SimEstimate",
    "SimEvent",
    "simulate",
    "TestBedCase",
    "ErrorRecord",
    "ErrorReport",
    "standard_bed",
    "poisson_bed",
    "sampled_bed",
    "materialize_case",
    "is_exact_case",
    "detect_exact_cases",
    "run_comparison",
    "three_queue_demo_spec",
    "PollingModelError",
    "InvalidMoment",
    "LoadOutOfRange",
    "UnnormalizedLoads",
    "ZeroTotalSwitchover",
    "ZeroLoad",
    "DegenerateLoad",
    "NumericalBudget",
    "SpecFileError",
    "__version__",
]
