"""Flag curvature K(P, Y) of the m-Kropina norm, computed four ways.

1. ``general``: the defining ratio
       K = g_Y(U, R(U,Y)Y) / [g_Y(Y,Y) g_Y(U,U) - g_Y(Y,U)^2]
   with g from the closed form (or the finite-difference oracle for an
   independent pipeline) and R from any curvature backend.
2. ``thm31``: the closed flag-curvature formula for invariant metrics,
   driven by the two curvature inner products <X,R(U,Y)Y> and <U,R(U,Y)Y>.
3. ``natred``: the same reduction with R expanded through the
   naturally-reductive double brackets.
4. ``biinv``: the bi-invariant special case [Y,[U,Y]].

Routes 2-4 assume {U, Y} orthonormal for the invariant product; raw input
flags are orthonormalized first and the report says so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import reductivity
from .curvature import (
    CurvatureBackend,
    backend_curvature_vector,
    curvature_inner_products,
)
from .errors import DegenerateFlagError, DomainError, PreconditionError
from .lie_algebra import InnerProductPair, check_bi_invariance
from .metric import FlagAdmissibility, MKropinaMetric, check_flag_admissible
from .tensors import TensorEvalContext, g_closed, g_fd_oracle

DENOMINATOR_GUARD = 1e-14
ORTHONORMAL_TOL = 1e-10


@dataclass(frozen=True)
class Flag:
    """A tangent 2-plane span{Y, U} with distinguished pole Y."""

    y: np.ndarray
    u: np.ndarray
    orthonormal: bool = False

    def __post_init__(self):
        y = np.array(self.y, dtype=float)
        u = np.array(self.u, dtype=float)
        y.flags.writeable = False
        u.flags.writeable = False
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "u", u)


def orthonormalize_flag(gram: np.ndarray, y: np.ndarray, u: np.ndarray) -> Flag:
    """Gram-Schmidt for the inner product ``gram``: unit pole, orthogonal edge."""
    gram = np.asarray(gram, dtype=float)
    y = np.asarray(y, dtype=float)
    u = np.asarray(u, dtype=float)
    yy = float(y @ gram @ y)
    if yy <= 0.0:
        raise DegenerateFlagError("flag pole has nonpositive norm")
    y_unit = y / math.sqrt(yy)
    u_perp = u - float(u @ gram @ y_unit) * y_unit
    norm_sq = float(u_perp @ gram @ u_perp)
    if norm_sq <= 1e-20 * max(float(u @ gram @ u), 1e-300):
        raise DegenerateFlagError("flag vectors are linearly dependent")
    return Flag(y=y_unit, u=u_perp / math.sqrt(norm_sq), orthonormal=True)


def _is_orthonormal(gram: np.ndarray, flag: Flag) -> bool:
    yy = float(flag.y @ gram @ flag.y)
    uu = float(flag.u @ gram @ flag.u)
    uy = float(flag.u @ gram @ flag.y)
    return (
        abs(yy - 1.0) <= ORTHONORMAL_TOL
        and abs(uu - 1.0) <= ORTHONORMAL_TOL
        and abs(uy) <= ORTHONORMAL_TOL
    )


@dataclass(frozen=True)
class FlagCurvatureReport:
    """One method's flag-curvature value with its diagnostics."""

    method: str
    k: float
    numerator: float
    denominator: float
    flag: Flag
    admissibility: FlagAdmissibility
    warnings: tuple[str, ...] = ()


def _require_admissible(met: MKropinaMetric, flag: Flag) -> FlagAdmissibility:
    adm = check_flag_admissible(met, flag.y, flag.u)
    if not adm.admissible:
        raise DomainError("inadmissible flag: " + "; ".join(adm.reasons))
    return adm


def flag_curvature_from_components(
    m_exp: float,
    b_xy: float,
    b_xu: float,
    u_dot_r: float,
    x_dot_r: float,
    bracket_form: bool = False,
) -> tuple[float, float, float]:
    """(K, numerator, denominator) of the closed flag-curvature reduction.

    For ``bracket_form`` the inner products are the raw double brackets
    <., [Y,[U,Y]...]> and the denominator carries the extra factor 4 from
    R(U,Y)Y = 1/4 [Y,[U,Y]].  Callers may pass m_exp = 0 to recover the
    Riemannian sectional-curvature limit of the formula.
    """
    m = float(m_exp)
    numerator = b_xy ** (2.0 * m) * (
        (m + 1.0) * b_xy * b_xy * u_dot_r
        + m * (2.0 * m + 1.0) * b_xu * x_dot_r
    )
    denominator = (m + 1.0) * (m * b_xu * b_xu + b_xy * b_xy)
    if bracket_form:
        denominator *= 4.0
    if abs(denominator) < DENOMINATOR_GUARD:
        raise DegenerateFlagError("flag-curvature denominator vanished")
    return numerator / denominator, numerator, denominator


def flag_curvature_general(
    met: MKropinaMetric,
    pair: InnerProductPair,
    backend: CurvatureBackend,
    flag: Flag,
    g_eval: str = "closed",
) -> FlagCurvatureReport:
    """K from the defining ratio; invariant under Y -> aY (a>0), U -> U + cY.

    ``g_eval`` selects the fundamental-tensor route: "closed" uses the
    closed form, "fd" drives every g value through the finite-difference
    oracle so the whole pipeline is independent of the closed form.
    """
    adm = _require_admissible(met, flag)
    r_vec = backend_curvature_vector(backend, pair, flag.u, flag.y)
    if g_eval == "closed":
        ctx = TensorEvalContext.create(met, flag.y)
        g_ur = g_closed(ctx, flag.u, r_vec)
        g_yy = g_closed(ctx, flag.y, flag.y)
        g_uu = g_closed(ctx, flag.u, flag.u)
        g_uy = g_closed(ctx, flag.u, flag.y)
    elif g_eval == "fd":
        g_ur = g_fd_oracle(met, flag.y, flag.u, r_vec)
        g_yy = g_fd_oracle(met, flag.y, flag.y, flag.y)
        g_uu = g_fd_oracle(met, flag.y, flag.u, flag.u)
        g_uy = g_fd_oracle(met, flag.y, flag.u, flag.y)
    else:
        raise PreconditionError(f"g_eval must be 'closed' or 'fd', got {g_eval!r}")
    denominator = g_yy * g_uu - g_uy * g_uy
    if abs(denominator) < DENOMINATOR_GUARD:
        raise DegenerateFlagError(
            "fundamental-tensor Gram determinant vanished: degenerate flag"
        )
    return FlagCurvatureReport(
        method="general",
        k=g_ur / denominator,
        numerator=g_ur,
        denominator=denominator,
        flag=flag,
        admissibility=adm,
    )


def _orthonormal_input(
    met: MKropinaMetric, pair: InnerProductPair, flag: Flag
) -> tuple[Flag, tuple[str, ...]]:
    if _is_orthonormal(pair.gram, flag):
        if flag.orthonormal:
            return flag, ()
        return Flag(flag.y, flag.u, orthonormal=True), ()
    normalized = orthonormalize_flag(pair.gram, flag.y, flag.u)
    return normalized, ("input flag was orthonormalized before evaluation",)


def flag_curvature_thm31(
    met: MKropinaMetric,
    pair: InnerProductPair,
    flag: Flag,
    sigma: int = -1,
) -> FlagCurvatureReport:
    """Closed flag-curvature formula for invariant metrics (method key "thm31").

    Attaches a warning when the parallel condition <X, [m,m]_m> = 0 fails:
    the reduction assumes the defining field is parallel, and no agreement
    with the general route is promised outside that hypothesis.
    """
    flag, notes = _orthonormal_input(met, pair, flag)
    adm = _require_admissible(met, flag)
    warnings = notes
    parallel = reductivity.check_parallel_condition(met, pair.alg, pair.dec)
    if not parallel.passed:
        warnings += (
            f"parallel condition fails (residual {parallel.residual:.3e}); "
            "formula hypotheses are not met",
        )
    x_dot_r, u_dot_r = curvature_inner_products(
        pair, met.x_vec, flag.u, flag.y, sigma=sigma
    )
    b_xy = met.ip(met.x_vec, flag.y)
    b_xu = met.ip(met.x_vec, flag.u)
    k, num, den = flag_curvature_from_components(
        met.m_exp, b_xy, b_xu, u_dot_r, x_dot_r
    )
    return FlagCurvatureReport(
        method="thm31",
        k=k,
        numerator=num,
        denominator=den,
        flag=flag,
        admissibility=adm,
        warnings=warnings,
    )


def flag_curvature_natred(
    met: MKropinaMetric, pair: InnerProductPair, flag: Flag
) -> FlagCurvatureReport:
    """Flag curvature through the naturally-reductive double brackets.

    Warns (but still evaluates) when the invariant metric is not naturally
    reductive or the parallel condition fails.
    """
    flag, notes = _orthonormal_input(met, pair, flag)
    adm = _require_admissible(met, flag)
    warnings = notes
    riem = reductivity.check_riemannian_natred(pair.alg, pair.dec, pair.gram)
    if not riem.passed:
        warnings += (
            f"metric is not naturally reductive (residual {riem.residual:.3e})",
        )
    parallel = reductivity.check_parallel_condition(met, pair.alg, pair.dec)
    if not parallel.passed:
        warnings += (
            f"parallel condition fails (residual {parallel.residual:.3e})",
        )
    alg, dec = pair.alg, pair.dec
    inner = alg.bracket(flag.u, flag.y)
    double_m = dec.project(alg.bracket(flag.y, dec.project(inner, "m")), "m")
    double_h = alg.bracket(flag.y, dec.project(inner, "h"))
    u_dot = met.ip(flag.u, double_m) + met.ip(flag.u, double_h)
    x_dot = met.ip(met.x_vec, double_m) + met.ip(met.x_vec, double_h)
    b_xy = met.ip(met.x_vec, flag.y)
    b_xu = met.ip(met.x_vec, flag.u)
    k, num, den = flag_curvature_from_components(
        met.m_exp, b_xy, b_xu, u_dot, x_dot, bracket_form=True
    )
    return FlagCurvatureReport(
        method="natred",
        k=k,
        numerator=num,
        denominator=den,
        flag=flag,
        admissibility=adm,
        warnings=warnings,
    )


def flag_curvature_biinv(
    met: MKropinaMetric, pair: InnerProductPair, flag: Flag
) -> FlagCurvatureReport:
    """Flag curvature for the bi-invariant case with trivial isotropy."""
    flag, notes = _orthonormal_input(met, pair, flag)
    adm = _require_admissible(met, flag)
    warnings = notes
    if pair.dec.h_indices:
        warnings += ("isotropy part is nontrivial; bi-invariant formula assumes H = {e}",)
    bi = check_bi_invariance(pair.alg, pair.gram)
    if not bi.passed:
        warnings += (
            f"invariant metric is not bi-invariant (residual {bi.residual:.3e})",
        )
    alg = pair.alg
    double = alg.bracket(flag.y, alg.bracket(flag.u, flag.y))
    b_xy = met.ip(met.x_vec, flag.y)
    b_xu = met.ip(met.x_vec, flag.u)
    k, num, den = flag_curvature_from_components(
        met.m_exp,
        b_xy,
        b_xu,
        met.ip(flag.u, double),
        met.ip(met.x_vec, double),
        bracket_form=True,
    )
    return FlagCurvatureReport(
        method="biinv",
        k=k,
        numerator=num,
        denominator=den,
        flag=flag,
        admissibility=adm,
        warnings=warnings,
    )
