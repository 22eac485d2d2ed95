"""Metric projections and their directional derivatives in discretized
mixed-norm spaces, verified against brute-force oracles."""

from .space import (
    BochnerElement,
    BochnerSpaceSpec,
    DualElement,
    InnerNormSpec,
    MeasureSpace,
    SpaceMismatchError,
    SupportSet,
    add,
    indicator,
    norm_lp,
    norm_lq,
    norm_x,
    pairing,
    restrict,
    restrict_complement,
    scale,
    simple_embed,
    zeros,
)
from .duality import (
    RestrictionIdentitiesReport,
    j_p,
    j_p_decompose,
    j_p_simple,
    j_p_simple_sum,
    j_x,
    restriction_identities_check,
)
from .smoothness import (
    RichardsonEstimate,
    default_step_schedule,
    psi_numeric,
    psi_p,
    psi_x,
    psi_x_numeric,
)
from .projections import (
    BallSpec,
    CylinderSpec,
    HilbertConsistencyReport,
    RegionClass,
    classify,
    inverse_image_member,
    project_ball,
    project_cylinder,
    project_hilbert_consistency,
    project_subspace,
)
from .derivatives import (
    NOT_COVERED,
    HomogeneityReport,
    UniformityReport,
    d_project_ball,
    d_project_cylinder,
    d_project_subspace,
    frechet_uniformity_check,
    homogeneity_check,
    safe_fd_schedule,
)
from .oracle import (
    FDDerivative,
    OracleConfig,
    OracleConvergenceError,
    OracleSolution,
    audit_improvement,
    fd_derivative,
    oracle_project,
    sample_feasible_batch,
)
from .suites import (
    DEFAULT_SEED,
    SUITE_NAMES,
    CheckResult,
    VerificationReport,
    run_suite,
)

__version__ = "0.1.0"
