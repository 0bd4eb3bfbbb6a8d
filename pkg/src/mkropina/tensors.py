"""Fundamental tensor g_Y and Cartan tensor C_Y of the m-Kropina norm.

g_Y(u, v) is the Hessian bilinear form (1/2) d^2/ds dt F^2(Y + s u + t v) at
s = t = 0.  For F = alpha^(m+1)/beta^m it has the closed five-term form

    g_Y(u, v) = A^(m-1) / B^(2m+2) * [ 2m(m+1) B^2 <u,Y><Y,v>
                - 2m(m+1) A B <Y,u><X,v> - 2m(m+1) A B <X,u><Y,v>
                + (m+1) A B^2 <u,v> + m(2m+1) A^2 <X,u><X,v> ],

with A = <Y,Y> and B = <X,Y>.  A finite-difference oracle built directly on
F^2 certifies the closed form; the Cartan tensor is obtained by
differentiating the closed form in the base direction, so the two routes
stay independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError
from .lie_algebra import LieAlgebraData, ReductiveDecomposition
from .metric import MKropinaMetric

#: Base step for finite differences, scaled by max(1, alpha(Y)).  Chosen on
#: the Richardson-extrapolated stencils so rounding (~eps/h^2) and truncation
#: are both far below the 1e-6 oracle tolerance; 1e-4 would already be
#: rounding-dominated for the mixed second difference.
FD_BASE_STEP = 1e-3

ORTHONORMAL_TOL = 1e-10


@dataclass(frozen=True)
class TensorEvalContext:
    """Metric, base direction Y, and cached contractions for g_Y evaluations."""

    met: MKropinaMetric
    y: np.ndarray
    yy: float
    xy: float
    gy: np.ndarray
    gx: np.ndarray
    g_mat: np.ndarray

    @classmethod
    def create(cls, met: MKropinaMetric, y: np.ndarray) -> "TensorEvalContext":
        y = np.array(y, dtype=float)
        gy = met.gram @ y
        gx = met.gram @ met.x_vec
        yy = float(y @ gy)
        xy = float(met.x_vec @ gy)
        if xy <= 0.0:
            raise DomainError(
                f"beta(Y) = {xy:.6g} <= 0: fundamental tensor undefined here"
            )
        m = met.m_exp
        pref = yy ** (m - 1.0) / xy ** (2.0 * m + 2.0)
        cross = np.outer(gy, gx)
        g_mat = pref * (
            2.0 * m * (m + 1.0) * xy * xy * np.outer(gy, gy)
            - 2.0 * m * (m + 1.0) * yy * xy * (cross + cross.T)
            + (m + 1.0) * yy * xy * xy * met.gram
            + m * (2.0 * m + 1.0) * yy * yy * np.outer(gx, gx)
        )
        y.flags.writeable = False
        g_mat.flags.writeable = False
        return cls(met=met, y=y, yy=yy, xy=xy, gy=gy, gx=gx, g_mat=g_mat)


def g_closed(ctx: TensorEvalContext, u: np.ndarray, v: np.ndarray) -> float:
    """Closed-form g_Y(u, v); symmetric and bilinear in (u, v)."""
    return float(np.asarray(u) @ ctx.g_mat @ np.asarray(v))


def _orthonormal_form_raw(ctx: TensorEvalContext, u: np.ndarray, v: np.ndarray) -> float:
    met = ctx.met
    m = met.m_exp
    B = ctx.xy
    xu = float(np.asarray(u) @ ctx.gx)
    xv = float(np.asarray(v) @ ctx.gx)
    yv = float(np.asarray(v) @ ctx.gy)
    uv = met.ip(u, v)
    return (
        (m + 1.0) * B * B * uv
        - 2.0 * m * (m + 1.0) * B * xu * yv
        + m * (2.0 * m + 1.0) * xu * xv
    ) / B ** (2.0 * m + 2.0)


def g_orthonormal(ctx: TensorEvalContext, u: np.ndarray, v: np.ndarray) -> float:
    """Reduced three-term form of g_Y valid on orthonormal-slot data.

    Requires <Y,Y> = 1.  The reduced form drops the <u,Y>-carrying terms of
    the closed form, so as written it is not symmetric in (u, v); the value
    returned is the symmetrization, and ``g_orthonormal_asymmetry`` exposes
    the raw discrepancy.  It agrees with ``g_closed`` when both slots are
    g-orthogonal to Y, and on the pole pair (Y, Y); it is a diagnostic form,
    and downstream computation always uses ``g_closed``.
    """
    if abs(ctx.yy - 1.0) > ORTHONORMAL_TOL:
        raise PreconditionError(
            f"<Y,Y> = {ctx.yy:.12g} but the reduced form requires a unit pole"
        )
    return 0.5 * (_orthonormal_form_raw(ctx, u, v) + _orthonormal_form_raw(ctx, v, u))


def g_orthonormal_asymmetry(
    ctx: TensorEvalContext, u: np.ndarray, v: np.ndarray
) -> float:
    """|raw(u,v) - raw(v,u)| of the reduced form; zero iff the slots commute."""
    if abs(ctx.yy - 1.0) > ORTHONORMAL_TOL:
        raise PreconditionError(
            f"<Y,Y> = {ctx.yy:.12g} but the reduced form requires a unit pole"
        )
    return abs(
        _orthonormal_form_raw(ctx, u, v) - _orthonormal_form_raw(ctx, v, u)
    )


def _cone_safe_step(
    met: MKropinaMetric, y: np.ndarray, directions: list[np.ndarray], step: float
) -> float:
    """Halve step until every stencil point Y + sum(+-h d) keeps beta > 0."""
    beta_y = met.ip(met.x_vec, y)
    beta_dirs = sum(abs(met.ip(met.x_vec, d)) for d in directions)
    h = step
    for _ in range(80):
        if beta_y - h * beta_dirs > 0.25 * beta_y:
            return h
        h *= 0.5
    raise DomainError("cannot keep finite-difference stencil inside the cone")


def _default_step(met: MKropinaMetric, y: np.ndarray) -> float:
    alpha, _ = met.alpha_beta(y)
    return FD_BASE_STEP * max(1.0, alpha)


def g_fd_oracle(
    met: MKropinaMetric,
    y: np.ndarray,
    u: np.ndarray,
    v: np.ndarray,
    step: float | None = None,
) -> float:
    """Mixed central difference of (1/2) F^2(Y + s u + t v), Richardson refined.

    Independent of the closed form: only F^2 evaluations enter.  One
    Richardson level on the second-order stencil gives O(step^4) accuracy.
    """
    y = np.asarray(y, dtype=float)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    h = _cone_safe_step(met, y, [u, v], step or _default_step(met, y))

    def mixed(hh: float) -> float:
        return (
            met.norm_squared(y + hh * u + hh * v)
            - met.norm_squared(y + hh * u - hh * v)
            - met.norm_squared(y - hh * u + hh * v)
            + met.norm_squared(y - hh * u - hh * v)
        ) / (8.0 * hh * hh)

    d1 = mixed(h)
    d2 = mixed(0.5 * h)
    return (4.0 * d2 - d1) / 3.0


def cartan(
    met: MKropinaMetric,
    y: np.ndarray,
    z: np.ndarray,
    u: np.ndarray,
    v: np.ndarray,
    step: float | None = None,
    levels: int = 2,
) -> float:
    """Cartan tensor C_Y(z, u, v) = (1/2) d/dt g_(Y+tv)(z, u) at t = 0.

    Differentiates the closed-form g numerically (central differences with
    ``levels`` Richardson refinements) instead of hand-expanding a
    third-order closed form.  Totally symmetric in (z, u, v), and
    C_Y(Y, ., .) = 0 by homogeneity.
    """
    y = np.asarray(y, dtype=float)
    v = np.asarray(v, dtype=float)
    h = _cone_safe_step(met, y, [v], step or _default_step(met, y))

    def deriv(hh: float) -> float:
        ctx_p = TensorEvalContext.create(met, y + hh * v)
        ctx_m = TensorEvalContext.create(met, y - hh * v)
        return (g_closed(ctx_p, z, u) - g_closed(ctx_m, z, u)) / (4.0 * hh)

    estimates = [deriv(h / 2.0**k) for k in range(levels + 1)]
    for level in range(1, levels + 1):
        factor = 4.0**level
        estimates = [
            (factor * estimates[i + 1] - estimates[i]) / (factor - 1.0)
            for i in range(len(estimates) - 1)
        ]
    return estimates[0]


def cartan_bracket_closed(
    met: MKropinaMetric,
    alg: LieAlgebraData,
    dec: ReductiveDecomposition,
    z: np.ndarray,
    y: np.ndarray,
    u: np.ndarray,
    v: np.ndarray,
    precondition_tol: float = 1e-9,
) -> float:
    """Closed form of 2 C_Y([z, y]_m, u, v) under the parallel condition.

    Valid when W = [z, y]_m satisfies <X, W> = 0 (the defining field is
    parallel) and <W, Y> = 0 (automatic under natural reductivity); both are
    enforced and a violation raises rather than returning a wrong value.
    """
    y = np.asarray(y, dtype=float)
    w = dec.project(alg.bracket(np.asarray(z, dtype=float), y), "m")
    A = met.ip(y, y)
    B = met.ip(met.x_vec, y)
    if B <= 0.0:
        raise DomainError(f"beta(Y) = {B:.6g} <= 0")
    scale = max(1.0, float(np.linalg.norm(w)))
    xw = met.ip(met.x_vec, w)
    wy = met.ip(w, y)
    if abs(xw) > precondition_tol * scale:
        raise PreconditionError(
            f"<X,[z,y]_m> = {xw:.3e}: parallel condition fails for this bracket"
        )
    if abs(wy) > precondition_tol * scale:
        raise PreconditionError(
            f"<[z,y]_m,Y> = {wy:.3e}: bracket is not g-orthogonal to the pole"
        )
    m = met.m_exp
    wu = met.ip(w, u)
    wv = met.ip(w, v)
    xu = met.ip(met.x_vec, u)
    xv = met.ip(met.x_vec, v)
    yu = met.ip(y, u)
    yv = met.ip(y, v)
    pref = 2.0 * m * (m + 1.0) * A ** (m - 1.0) / B ** (2.0 * m + 2.0)
    return pref * (
        wv * (B * B * yu - B * xu * A) + wu * (B * B * yv - B * xv * A)
    )


@dataclass(frozen=True)
class IdentityResiduals:
    """Scaled residuals of the orthonormal-flag identities for g_Y.

    For an orthonormal pair {U, Y}:
        g_Y(Y,Y) = B^-2m,
        g_Y(U,Y) = -m <X,U> B^-(2m+1),
        g_Y(U,U) = [(m+1) B^2 + m(2m+1) <X,U>^2] B^-(2m+2),
    and their Gram determinant
        g_YY g_UU - g_UY^2 = (m+1) [m <X,U>^2 + B^2] B^-(4m+2).

    Each residual is |computed - expected| / (1 + |expected|); the identities
    blow up like B^-(4m+2) near the cone, so raw differences carry an
    irreducible rounding floor proportional to that scale.
    """

    res_yy: float
    res_uy: float
    res_uu: float
    res_det: float
    det_value: float

    @property
    def max_residual(self) -> float:
        return max(self.res_yy, self.res_uy, self.res_uu, self.res_det)


def _scaled(computed: float, expected: float) -> float:
    return abs(computed - expected) / (1.0 + abs(expected))


def orthonormal_identity_residuals(
    ctx: TensorEvalContext, u: np.ndarray
) -> IdentityResiduals:
    """Check the closed-form g against the four orthonormal-flag identities."""
    met = ctx.met
    u = np.asarray(u, dtype=float)
    uu = met.ip(u, u)
    uy = float(u @ ctx.gy)
    if (
        abs(ctx.yy - 1.0) > ORTHONORMAL_TOL
        or abs(uu - 1.0) > ORTHONORMAL_TOL
        or abs(uy) > ORTHONORMAL_TOL
    ):
        raise PreconditionError("identities require an orthonormal pair {U, Y}")
    m = met.m_exp
    B = ctx.xy
    xu = float(u @ ctx.gx)
    g_yy = g_closed(ctx, ctx.y, ctx.y)
    g_uy = g_closed(ctx, u, ctx.y)
    g_uu = g_closed(ctx, u, u)
    det = g_yy * g_uu - g_uy * g_uy
    det_expected = (m + 1.0) * (m * xu * xu + B * B) / B ** (4.0 * m + 2.0)
    return IdentityResiduals(
        res_yy=_scaled(g_yy, B ** (-2.0 * m)),
        res_uy=_scaled(g_uy, -m * xu / B ** (2.0 * m + 1.0)),
        res_uu=_scaled(
            g_uu,
            ((m + 1.0) * B * B + m * (2.0 * m + 1.0) * xu * xu)
            / B ** (2.0 * m + 2.0),
        ),
        res_det=_scaled(det, det_expected),
        det_value=det,
    )
