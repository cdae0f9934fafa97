"""Goodness-of-fit testing with kernel Stein discrepancies.

The package provides exact quadratic-time KSD estimators with a wild
bootstrap, their Nystrom-accelerated counterparts, Stein kernels for
Euclidean and spherical data, seeded samplers, spectrum diagnostics, and a
command-line experiment harness (``ksdgof``).
"""

from .bootstrap import (
    PhaseTimings,
    TestConfig,
    TestResult,
    draw_rademacher,
    empirical_quantile,
    gof_test,
    nystrom_bootstrap_stat,
    replicate_signs,
    wild_bootstrap_stat,
)
from .diagnostics import (
    SpectrumSummary,
    centered_gram,
    effective_dimension,
    projection_oracle,
    spectrum_summary,
    stein_identity_check,
    suggest_m,
)
from .estimators import (
    KsdEstimate,
    NystromSketch,
    build_sketch,
    gram_full,
    ksd_nystrom,
    ksd_u_statistic,
    ksd_v_statistic,
    pinv_psd,
    sample_landmarks,
)
from .kernels import (
    BaseKernelSpec,
    DirectionalSteinKernel,
    LangevinSteinKernel,
    ScoreModel,
    build_stein_kernel,
    directional_stein_eval,
    langevin_stein_eval,
    log_jacobian,
    log_jacobian_grad,
    median_heuristic,
    sphere_jacobian,
    sphere_to_cartesian,
    verify_kernel_gradients,
)
from .samplers import (
    RngStream,
    VmfSpec,
    cartesian_to_sphere,
    read_points_csv,
    sample_gaussian,
    sample_uniform_sphere,
    sample_vmf,
    score_gaussian,
    score_uniform_sphere,
)

__version__ = "0.1.0"

__all__ = [
    "BaseKernelSpec",
    "DirectionalSteinKernel",
    "KsdEstimate",
    "LangevinSteinKernel",
    "NystromSketch",
    "PhaseTimings",
    "RngStream",
    "ScoreModel",
    "SpectrumSummary",
    "TestConfig",
    "TestResult",
    "VmfSpec",
    "build_sketch",
    "build_stein_kernel",
    "cartesian_to_sphere",
    "centered_gram",
    "directional_stein_eval",
    "draw_rademacher",
    "effective_dimension",
    "empirical_quantile",
    "gof_test",
    "gram_full",
    "ksd_nystrom",
    "ksd_u_statistic",
    "ksd_v_statistic",
    "langevin_stein_eval",
    "log_jacobian",
    "log_jacobian_grad",
    "median_heuristic",
    "nystrom_bootstrap_stat",
    "pinv_psd",
    "projection_oracle",
    "read_points_csv",
    "replicate_signs",
    "sample_gaussian",
    "sample_landmarks",
    "sample_uniform_sphere",
    "sample_vmf",
    "score_gaussian",
    "score_uniform_sphere",
    "spectrum_summary",
    "sphere_jacobian",
    "sphere_to_cartesian",
    "stein_identity_check",
    "suggest_m",
    "verify_kernel_gradients",
    "wild_bootstrap_stat",
]
