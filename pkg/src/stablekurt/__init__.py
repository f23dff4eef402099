"""Sample kurtosis as a tail-index diagnostic for symmetric stable data."""

__version__ = "0.1.0"

from .distributions import (
    SeedSpec,
    StableParams,
    StudentTParams,
    sample_gaussian,
    sample_student_t,
    sample_symmetric_stable,
)
from .errors import (
    DegenerateSampleError,
    IngestionError,
    InsufficientDataError,
    NumericDomainError,
    ParameterError,
    StableKurtError,
)
from .experiments import ExperimentConfig, ExperimentReport, run_experiment
from .moments import (
    GrowthCurve,
    SampleStats,
    compute_stats,
    excess_kurtosis,
    growth_curve,
    kurtosis_ratio,
    skewness,
)
from .tail_inference import (
    AlphaEstimate,
    BootstrapResult,
    LinearityReport,
    SlopeFit,
    alpha_from_kurtosis,
    alpha_from_sample,
    bootstrap_alpha_test,
    fit_growth_slope,
    kogon_williams,
    linearity_diagnostic,
    slope_vs_alpha_regression,
)
