"""periodlab: configurable-precision lab for period objects of level-1 cusp forms.

Builds period polynomials, Eichler integrals, second-order (mock) period
functions and their completions, regularized cusp integrals and
Whittaker-seed functions, and certifies the identities relating them via
quantitative residual reports.
"""

from .kernel import (
    BadPath,
    DEFAULT_CTX,
    DomainError,
    KernelError,
    NonConvergent,
    PrecisionContext,
    RayPath,
    StepTooLarge,
    TailTooLarge,
    laplace_fd,
    quad_polyline,
    quad_ray,
    xi_fd,
)
from .reports import RelationReport, reports_to_csv, reports_to_json, residual_scale
from .special import (
    WhittakerArgs,
    bold_gamma,
    cal_M,
    psi_seed,
    upper_incomplete_gamma,
    whittaker_M,
    whittaker_M_integral,
    whittaker_derivative_identity_check,
)
from .qforms import (
    QSeries,
    UnsupportedWeight,
    bol,
    conjugate_form,
    cusp_form,
    delta,
    eisenstein,
    evaluate,
    read_qexp,
    weakly_holomorphic_m10,
    write_qexp,
)
from .lfun import LValue, OutOfRegion, l_completed, l_dirichlet, lambda_completed
from .eichler import (
    GroupElement,
    IDENTITY,
    NotInW,
    PeriodPolynomial,
    PolynomialC,
    RankDeficient,
    S,
    T,
    U,
    UTILDE,
    eichler_integral,
    es_decompose,
    period_polynomial,
    period_polynomial_quadrature,
    slash,
    w_membership,
)
from .mockcore import (
    ExtrapolationUnstable,
    F_f2,
    MockPeriodEvaluation,
    hat_function,
    hat_r_f2,
    noncritical_lvalue,
    r_f2,
    tilde_r_f2,
    verify_mock_es,
    verify_superm,
    verify_w_k2,
)
from .regint import (
    CUSP_IOO,
    CUSP_ZERO,
    ExponentialQExpansion,
    NotRegularizable,
    RegKernel,
    StarredPeriods,
    reg_integral_cusp_to_cusp,
    reg_integral_to_icusp,
    starred_periods,
    verify_per_star,
)
from .poincare import (
    CosetTruncation,
    phi_seed,
    truncated_poincare,
    verify_bol_xi_avatar,
    verify_laplace_eigenvalue,
    verify_termwise_dipoincare,
    verify_termwise_xi,
)

__version__ = "0.1.0"
