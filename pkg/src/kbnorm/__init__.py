"""Multivariate normality testing through independence testing of sums and differences."""

from .distributions import (
    NON_NORMAL_LAWS,
    NORMAL_FAMILIES,
    DistributionSpec,
    SeedScheme,
    parse_spec,
    random_mean_and_cov_factor,
    sample,
)
from .errors import (
    DatasetParseError,
    DegenerateNullError,
    DegenerateSampleError,
    InsufficientDataError,
    InvalidParameterError,
    KBNormError,
    ShapeError,
    SingularCovarianceError,
)
from .experiment import ExperimentConfig, PowerReport, run_experiment
from .hsic import gamma_null_params, hsic_b, hsic_independence_test, permutation_independence_test
from .hz import hz_bandwidth, hz_normality_test, hz_null, hz_statistic, mahalanobis_cache
from .kb import NullMode, SplitPair, kb_normality_score, kb_normality_test, kb_split, sums_and_differences
from .kernels import KernelSpec, center_gram, gaussian_kernel, gram_matrix, median_heuristic
from .outcome import PermutationNull, TestOutcome
from .special import (
    GammaParams,
    LogNormalParams,
    gamma_quantile,
    lognormal_sf,
    reg_lower_incomplete_gamma,
    std_normal_cdf,
)

__version__ = "0.1.0"
