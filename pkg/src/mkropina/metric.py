"""The generalized m-Kropina norm F = alpha^(m+1) / beta^m and its validity checks.

alpha(y) = sqrt(<y, y>) is the Riemannian norm of the invariant inner product
on the tangent space m, beta(y) = <X, y> is the linear form of the defining
vector X, and the profile is phi(s) = s^-m with s = beta/alpha.  The norm is
conic: it is only evaluated on the half-space beta(y) > 0, where s^-m is
single-valued for every real exponent m outside {0, -1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, MKropinaError

#: beta(y) below this multiple of alpha(y) triggers a conditioning warning:
#: the fundamental tensor scales like beta^-(2m+2) near the cone boundary.
CONDITIONING_RATIO = 1e-6


@dataclass(frozen=True)
class MKropinaMetric:
    """Exponent m, defining vector X, and the inner product they live on.

    ``m_indices`` names the tangent subspace when the ambient basis also
    spans an isotropy part; evaluation vectors must be supported there.
    """

    m_exp: float
    x_vec: np.ndarray
    gram: np.ndarray
    m_indices: tuple[int, ...] = ()
    relax_norm_bound: bool = False
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        m = float(self.m_exp)
        if abs(m) < 1e-12 or abs(m + 1.0) < 1e-12:
            raise MKropinaError("exponent m must lie outside {0, -1}")
        x = np.array(self.x_vec, dtype=float)
        gram = np.array(self.gram, dtype=float)
        n = len(x)
        if gram.shape != (n, n):
            raise DimensionError("gram shape does not match x_vec length")
        m_indices = tuple(self.m_indices) or tuple(range(n))
        support = np.zeros(n)
        support[list(m_indices)] = 1.0
        if np.max(np.abs(x * (1.0 - support))) > 1e-12:
            raise MKropinaError("x_vec must be supported on the tangent part m")
        xx = float(x @ gram @ x)
        if xx <= 0.0:
            raise MKropinaError("defining vector X must be nonzero")
        warnings = tuple(self.warnings)
        if math.sqrt(xx) >= 1.0:
            if not self.relax_norm_bound:
                raise MKropinaError(
                    f"norm bound violated: sqrt(<X,X>) = {math.sqrt(xx):.6g} >= 1"
                )
            warnings += (f"norm bound relaxed: sqrt(<X,X>) = {math.sqrt(xx):.6g}",)
        x.flags.writeable = False
        gram.flags.writeable = False
        object.__setattr__(self, "m_exp", m)
        object.__setattr__(self, "x_vec", x)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "m_indices", m_indices)
        object.__setattr__(self, "warnings", warnings)

    @property
    def dim(self) -> int:
        return len(self.x_vec)

    @property
    def b_norm(self) -> float:
        """sqrt(<X, X>), the alpha-norm of the linear form beta."""
        return math.sqrt(float(self.x_vec @ self.gram @ self.x_vec))

    def ip(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(np.asarray(u) @ self.gram @ np.asarray(v))

    def alpha_beta(self, y: np.ndarray) -> tuple[float, float]:
        """(alpha(y), beta(y)) = (sqrt(<y,y>), <X,y>)."""
        y = np.asarray(y, dtype=float)
        if y.shape != (self.dim,):
            raise DimensionError(f"vector length must be {self.dim}")
        return math.sqrt(max(self.ip(y, y), 0.0)), self.ip(self.x_vec, y)

    def norm(self, y: np.ndarray) -> float:
        """F(y) = alpha^(m+1) / beta^m; requires beta(y) > 0."""
        alpha, beta = self.alpha_beta(y)
        if beta <= 0.0:
            raise DomainError(f"beta(y) = {beta:.6g} <= 0: outside the conic domain")
        return alpha ** (self.m_exp + 1.0) / beta**self.m_exp

    def norm_squared(self, y: np.ndarray) -> float:
        """F(y)^2 = <y,y>^(m+1) / <X,y>^(2m), the quantity the Hessian acts on."""
        y = np.asarray(y, dtype=float)
        beta = self.ip(self.x_vec, y)
        if beta <= 0.0:
            raise DomainError(f"beta(y) = {beta:.6g} <= 0: outside the conic domain")
        return self.ip(y, y) ** (self.m_exp + 1.0) / beta ** (2.0 * self.m_exp)


def phi_eval(m_exp: float, s: float) -> tuple[float, float, float]:
    """Profile phi(s) = s^-m with its first two derivatives at s > 0."""
    if s <= 0.0:
        raise DomainError(f"profile argument s = {s:.6g} must be positive")
    m = float(m_exp)
    return (
        s**-m,
        -m * s ** (-m - 1.0),
        m * (m + 1.0) * s ** (-m - 2.0),
    )


@dataclass(frozen=True)
class ConvexityReport:
    """Grid scan of the strong-convexity inequalities for phi(s) = s^-m."""

    valid: bool
    first_failure: tuple[float, float] | None
    max_failing_s: float | None
    min_passing_s: float | None
    nodes_checked: int
    nodes_failed: int
    form_agreement: float

    def __bool__(self) -> bool:
        return self.valid


def check_strong_convexity(
    m_exp: float,
    b0: float,
    *,
    s_count: int = 100,
    b_count: int = 100,
    b_fixed: float | None = None,
) -> ConvexityReport:
    """Scan phi > 0 and phi - s phi' + (b^2 - s^2) phi'' > 0 over 0 < s <= b <= b0.

    For phi = s^-m the second inequality reduces to
    (m+1) s^-(m+2) (s^2 + m (b^2 - s^2)) > 0, which is what decides validity;
    the three-term form is evaluated alongside and the worst disagreement
    between the two is reported as ``form_agreement``.
    """
    if not (0.0 < b0 < 1.0):
        raise DomainError("b0 must lie in (0, 1)")
    m = float(m_exp)
    b_values = [b_fixed] if b_fixed is not None else [
        b0 * (j + 1) / b_count for j in range(b_count)
    ]
    first_failure = None
    max_failing_s = None
    min_passing_s = None
    checked = failed = 0
    agreement = 0.0
    for b in b_values:
        for i in range(s_count):
            s = b * (i + 1) / s_count
            checked += 1
            reduced = (m + 1.0) * s ** (-m - 2.0) * (s * s + m * (b * b - s * s))
            phi, dphi, ddphi = phi_eval(m, s)
            generic = phi - s * dphi + (b * b - s * s) * ddphi
            agreement = max(
                agreement, abs(generic - reduced) / (1.0 + abs(reduced))
            )
            ok = phi > 0.0 and reduced > 0.0
            if ok:
                if min_passing_s is None or s < min_passing_s:
                    min_passing_s = s
            else:
                failed += 1
                if first_failure is None:
                    first_failure = (s, b)
                if max_failing_s is None or s > max_failing_s:
                    max_failing_s = s
    return ConvexityReport(
        valid=failed == 0,
        first_failure=first_failure,
        max_failing_s=max_failing_s,
        min_passing_s=min_passing_s,
        nodes_checked=checked,
        nodes_failed=failed,
        form_agreement=agreement,
    )


@dataclass(frozen=True)
class HessianReport:
    positive_definite: bool
    eigenvalues: tuple[float, ...]
    warnings: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.positive_definite


def check_hessian_pd(met: MKropinaMetric, y: np.ndarray) -> HessianReport:
    """Eigenvalue test of the fundamental tensor g_Y on the tangent basis."""
    from .tensors import TensorEvalContext

    ctx = TensorEvalContext.create(met, y)
    idx = list(met.m_indices)
    block = ctx.g_mat[np.ix_(idx, idx)]
    eigs = np.linalg.eigvalsh(block)
    warnings = []
    alpha, beta = met.alpha_beta(y)
    if beta <= CONDITIONING_RATIO * max(alpha, 1e-300):
        warnings.append(
            f"beta(y) = {beta:.3e} is within {CONDITIONING_RATIO:g} of the cone "
            "boundary; eigenvalues are ill-conditioned"
        )
    return HessianReport(
        positive_definite=bool(eigs.min() > 0.0),
        eigenvalues=tuple(float(e) for e in eigs),
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class FlagAdmissibility:
    """Whether (Y, U) is a legal flag for curvature evaluation."""

    admissible: bool
    beta: float
    independent: bool
    norm_bound_ok: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.admissible


def check_flag_admissible(
    met: MKropinaMetric, y: np.ndarray, u: np.ndarray
) -> FlagAdmissibility:
    """Flag pole in the cone, edges independent, defining vector inside the ball."""
    y = np.asarray(y, dtype=float)
    u = np.asarray(u, dtype=float)
    _, beta = met.alpha_beta(y)
    yy = float(y @ y)
    uu = float(u @ u)
    yu = float(y @ u)
    independent = yy * uu - yu * yu > 1e-12 * max(yy * uu, 1e-300)
    norm_ok = met.b_norm < 1.0
    reasons = []
    if beta <= 0.0:
        reasons.append("flag pole outside the conic domain (beta <= 0)")
    if not independent:
        reasons.append("flag vectors are linearly dependent")
    if not norm_ok:
        reasons.append("defining vector violates sqrt(<X,X>) < 1")
    return FlagAdmissibility(
        admissible=not reasons,
        beta=beta,
        independent=independent,
        norm_bound_ok=norm_ok,
        reasons=tuple(reasons),
    )
