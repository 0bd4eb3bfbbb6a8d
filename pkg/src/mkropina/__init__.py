"""Flag curvature of homogeneous Finsler spaces with generalized m-Kropina metrics.

The toolkit works at a single tangent space identified with the reductive
complement m of an isotropy subalgebra h in a finite-dimensional real Lie
algebra g, all given by structure constants.  It evaluates the norm
F = alpha^(m+1)/beta^m, its fundamental and Cartan tensors, curvature
through several interchangeable backends, flag curvature through four
routes, and the natural-reductivity criteria — each closed form certified
by an independent finite-difference oracle.
"""

from .curvature import (
    BACKEND_KINDS,
    CurvatureBackend,
    b_minus,
    b_plus,
    backend_curvature_vector,
    biinv_curvature,
    curvature_inner_products,
    natred_curvature,
    puttmann_scalar,
)
from .errors import (
    DegenerateFlagError,
    DimensionError,
    DomainError,
    MKropinaError,
    PreconditionError,
    ScenarioError,
)
from .flags import (
    Flag,
    FlagCurvatureReport,
    flag_curvature_biinv,
    flag_curvature_from_components,
    flag_curvature_general,
    flag_curvature_natred,
    flag_curvature_thm31,
    orthonormalize_flag,
)
from .lie_algebra import (
    CheckResult,
    InnerProductPair,
    LieAlgebraData,
    ReductiveDecomposition,
    build_inner_product_pair,
    check_ad_invariance,
    check_bi_invariance,
    check_jacobi,
    from_sparse,
    metric_endomorphism,
    preset,
)
from .metric import (
    ConvexityReport,
    FlagAdmissibility,
    HessianReport,
    MKropinaMetric,
    check_flag_admissible,
    check_hessian_pd,
    check_strong_convexity,
    phi_eval,
)
from .reductivity import (
    ReductivityReport,
    SampleSpec,
    check_latifi_natred,
    check_parallel_condition,
    check_riemannian_natred,
    latifi_residual,
    natural_reductivity_report,
    riemannian_natred_residuals,
)
from .report import emit_check, emit_report, emit_verify, rows_from_json
from .scenario import (
    METHODS,
    ReportRow,
    Scenario,
    Tolerances,
    VerifyReport,
    load_scenario,
    load_scenario_file,
    run_command,
    run_curvature,
    run_scan,
    run_verify,
)
from .tensors import (
    TensorEvalContext,
    cartan,
    cartan_bracket_closed,
    g_closed,
    g_fd_oracle,
    g_orthonormal,
    g_orthonormal_asymmetry,
    orthonormal_identity_residuals,
)

__version__ = "0.1.0"
